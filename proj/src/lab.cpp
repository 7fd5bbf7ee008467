#include "scrip/lab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "scrip/errors.hpp"
#include "scrip/experiments.hpp"
#include "scrip/parallel.hpp"
#include "scrip/plot.hpp"

namespace scrip {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids = {
      "sim",  "entropy", "chain", "bestresponse", "equilibrium", "ratio",
      "altruists", "fig1", "fig2", "fig3", "fig4", "fig5"};
  return ids;
}

void ExperimentConfig::validate() const {
  const auto& ids = experiment_ids();
  if (std::find(ids.begin(), ids.end(), experiment) == ids.end())
    throw DomainError("config.experiment: unknown experiment '" + experiment + "'");
  if (n < 2) throw DomainError("config.n: must be >= 2");
  if (!(m >= 0.0)) throw DomainError("config.m: must be >= 0");
  if (!(gamma >= 0.0)) throw DomainError("config.gamma: must be >= 0");
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("config.beta: must lie in (0,1]");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("config.alpha: must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("config.delta: must lie in (0,1)");
  if (rounds < 0) throw DomainError("config.rounds: must be >= 0");
  if (stride < 0) throw DomainError("config.stride: must be >= 0");
  if (out.empty()) throw DomainError("config.out: must not be empty");
  if (!(scale > 0.0)) throw DomainError("config.scale: must be > 0");
  if (budget < 1) throw DomainError("config.budget: must be >= 1");
  if (threads < 0) throw DomainError("config.threads: must be >= 0");
  if (n2 < 0) throw DomainError("config.n2: must be >= 0");
  for (double d : deltas)
    if (!(d > 0.0 && d < 1.0)) throw DomainError("config.deltas: entries must lie in (0,1)");
  if (!(mGridMax > 0.0)) throw DomainError("config.mGridMax: must be > 0");
  if (!(mGridStep > 0.0)) throw DomainError("config.mGridStep: must be > 0");
  if (gammaMax < 0) throw DomainError("config.gammaMax: must be >= 0");
}

std::string ExperimentConfig::to_json_text() const {
  ordered_json j;
  j["experiment"] = experiment;
  j["n"] = n;
  j["m"] = m;
  j["gamma"] = gamma;
  j["beta"] = beta;
  j["alpha"] = alpha;
  j["delta"] = delta;
  j["rounds"] = rounds;
  j["seeds"] = seeds;
  j["stride"] = stride;
  j["out"] = out;
  j["plot"] = plot;
  j["scale"] = scale;
  j["budget"] = budget;
  j["threads"] = threads;
  j["n2"] = n2;
  j["deltas"] = deltas;
  j["mGridMax"] = mGridMax;
  j["mGridStep"] = mGridStep;
  j["gammaMax"] = gammaMax;
  return j.dump(2) + "\n";
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DomainError("config: top level must be a JSON object");
  ExperimentConfig c;
  auto get = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    try {
      field = j.at(key).get<std::decay_t<decltype(field)>>();
    } catch (const nlohmann::json::exception&) {
      throw DomainError(std::string("config.") + key + ": wrong type");
    }
    j.erase(key);
  };
  get("experiment", c.experiment);
  get("n", c.n);
  get("m", c.m);
  get("gamma", c.gamma);
  get("beta", c.beta);
  get("alpha", c.alpha);
  get("delta", c.delta);
  get("rounds", c.rounds);
  get("seeds", c.seeds);
  get("stride", c.stride);
  get("out", c.out);
  get("plot", c.plot);
  get("scale", c.scale);
  get("budget", c.budget);
  get("threads", c.threads);
  get("n2", c.n2);
  get("deltas", c.deltas);
  get("mGridMax", c.mGridMax);
  get("mGridStep", c.mGridStep);
  get("gammaMax", c.gammaMax);
  if (!j.empty())
    throw DomainError("config: unknown key '" + j.begin().key() + "'");
  return c;
}

std::uint64_t ExperimentConfig::hash() const {
  std::string text = to_json_text();
  return fnv1a64(text.data(), text.size());
}

ExperimentConfig preset(const std::string& experiment) {
  ExperimentConfig c;
  c.experiment = experiment;
  if (experiment == "sim") {
    c.rounds = 4000;
    c.seeds = {1};
  } else if (experiment == "entropy") {
    c.gamma = 5.0;
    c.m = 2.0;
  } else if (experiment == "chain") {
    c.n = 4;
    c.m = 1.0;
    c.gamma = 2.0;
    c.beta = 0.5;
  } else if (experiment == "bestresponse") {
    c.m = 3.0;
    c.delta = 0.9;
    c.gammaMax = 25;
  } else if (experiment == "equilibrium") {
    c.m = 3.0;
    c.delta = 0.9;
  } else if (experiment == "ratio") {
    c.m = 2.0;
    c.delta = 0.95;
  } else if (experiment == "altruists") {
    c.n = 20;
    c.m = 1.0;
    c.alpha = 0.5;
    c.beta = 0.5;
    c.delta = 0.5;
    c.rounds = 2000;
    c.seeds.resize(20);
    for (std::size_t i = 0; i < c.seeds.size(); ++i) c.seeds[i] = i + 1;
  } else if (experiment == "fig1") {
    c.n = 1000;
    c.m = 2.0;
    c.gamma = 5.0;
    c.beta = 1.0;
    c.rounds = 4000;
    c.stride = 100;
    c.seeds.resize(10);
    for (std::size_t i = 0; i < c.seeds.size(); ++i) c.seeds[i] = i + 1;
  } else if (experiment == "fig2") {
    c.m = 2.0;
    c.gamma = 5.0;
    c.beta = 1.0;
    c.rounds = 1'000'000;
    c.seeds = {1};
    c.budget = 200'000'000'000;
  } else if (experiment == "fig3") {
    c.m = 2.0;
    c.gamma = 5.0;
    c.beta = 1.0;
    c.seeds.resize(10);
    for (std::size_t i = 0; i < c.seeds.size(); ++i) c.seeds[i] = i + 1;
    c.budget = 200'000'000'000;
  } else if (experiment == "fig4") {
    c.m = 3.0;
    c.delta = 0.9;
    c.beta = 1.0;
    c.gammaMax = 25;
  } else if (experiment == "fig5") {
    c.beta = 1.0;
    c.deltas = {0.95, 0.97, 0.99, 0.999};
  }
  return c;
}

// ---------------------------------------------------------------------------
// CSV writing
// ---------------------------------------------------------------------------

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}

  Csv& row(const std::vector<double>& values) {
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) line += ',';
      line += format_number(values[i]);
    }
    rows_.push_back(std::move(line));
    return *this;
  }

  std::string text() const {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) {
      if (i) out += ',';
      out += header_[i];
    }
    out += '\n';
    for (const std::string& r : rows_) {
      out += r;
      out += '\n';
    }
    return out;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::string> rows_;
};

struct Emitter {
  fs::path dir;
  std::vector<std::string> files;

  void write(const std::string& name, const std::string& content) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw DomainError("cannot open output file " + (dir / name).string());
    f << content;
    files.push_back(name);
  }
};

std::int64_t money_of(const ExperimentConfig& c, int n) {
  double raw = c.m * n;
  std::int64_t money = std::llround(raw);
  if (std::abs(raw - static_cast<double>(money)) > 1e-9)
    throw DomainError("config.m: m*n must be an integer amount of money");
  return money;
}

GameParams game_of(const ExperimentConfig& c) {
  return GameParams(c.n, c.delta, c.alpha, c.beta, money_of(c, c.n));
}

std::vector<std::uint64_t> resolved_seeds(const ExperimentConfig& c) {
  if (!c.seeds.empty()) return c.seeds;
  return {1};
}

double padded_sq_distance(const MoneyDistribution& emp, const MoneyDistribution& target) {
  double sq = 0.0;
  int hi = std::max(emp.support(), target.support());
  for (int j = 0; j <= hi; ++j) {
    double a = j <= emp.support() ? emp(j) : 0.0;
    double b = j <= target.support() ? target(j) : 0.0;
    sq += (a - b) * (a - b);
  }
  return sq;
}

std::vector<int> scaled_sizes(double scale) {
  std::vector<int> sizes;
  for (int n : {1000, 5000, 25000})
    if (n <= static_cast<double>(5000) * scale) sizes.push_back(n);
  if (sizes.empty()) sizes.push_back(1000);
  return sizes;
}

// --- experiment bodies -----------------------------------------------------

void run_sim(const ExperimentConfig& c, Emitter& em) {
  if (c.gamma < 1.0) throw DomainError("config.gamma: sim needs gamma >= 1");
  GameParams params = game_of(c);
  const int support = static_cast<int>(std::ceil(c.gamma));
  MoneyDistribution target = max_entropy_distribution(support, params.mean());
  auto seeds = resolved_seeds(c);

  Csv snapshots({"seed", "round", "sq_distance"});
  Csv finals({"seed", "final_round", "final_sq_distance"});
  std::vector<Trajectory> trajectories(seeds.size());
  parallel::for_index(static_cast<std::int64_t>(seeds.size()), [&](std::int64_t i) {
    RunOptions opts;
    opts.stride = c.stride;
    opts.budget = c.budget;
    trajectories[static_cast<std::size_t>(i)] =
        run_simulation(params, uniform_population(c.n, c.gamma), c.rounds,
                       seeds[static_cast<std::size_t>(i)], opts);
  });
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const Trajectory& tr = trajectories[i];
    for (const TrajectorySnapshot& snap : tr.snapshots)
      snapshots.row({static_cast<double>(seeds[i]), static_cast<double>(snap.round),
                     padded_sq_distance(snap.distribution, target)});
    finals.row({static_cast<double>(seeds[i]), static_cast<double>(tr.finalState.round),
                padded_sq_distance(empirical_distribution(tr.finalState, support), target)});
  }
  em.write("snapshots.csv", snapshots.text());
  em.write("final.csv", finals.text());
}

void run_entropy(const ExperimentConfig& c, Emitter& em) {
  const int support = std::max(1, static_cast<int>(std::llround(c.gamma)));
  MoneyDistribution d = max_entropy_distribution(support, c.m);
  Csv dist({"balance", "probability"});
  for (int j = 0; j <= support; ++j) dist.row({static_cast<double>(j), d(j)});
  Csv summary({"support", "m", "entropy", "weight"});
  double weight = (c.m > 0.0 && c.m < support) ? max_entropy_weight(support, c.m) : 0.0;
  summary.row({static_cast<double>(support), c.m, entropy(d), weight});
  em.write("distribution.csv", dist.text());
  em.write("summary.csv", summary.text());
  if (c.plot) {
    emit_plot((em.dir / "distribution.csv").string(), "points",
              (em.dir / "distribution.svg").string());
    em.files.push_back("distribution.svg");
  }
}

void run_chain(const ExperimentConfig& c, Emitter& em) {
  const int k = static_cast<int>(std::llround(c.gamma));
  if (k < 1) throw DomainError("config.gamma: chain needs an integer threshold >= 1");
  std::int64_t money = money_of(c, c.n);
  ChainStateSpace space = enumerate_states(k, c.n, money);

  double maxAsym = -1.0;
  bool rationalExact = false;
  const std::int64_t den = 1 << 20;
  double scaled = c.beta * den;
  if (space.size() <= 20'000 && std::abs(scaled - std::llround(scaled)) == 0.0) {
    auto rows = transition_matrix_rational(space, Rational(std::llround(scaled), den));
    maxAsym = verify_symmetry(rows).to_double();
    rationalExact = true;
  }
  SparseMatrix matrix = transition_matrix(space, c.beta);
  double asymDouble = verify_symmetry(matrix);
  if (!rationalExact) maxAsym = asymDouble;
  StationaryResult st = stationary_distribution(matrix);
  double uniformDev = 0.0;
  for (double p : st.pi)
    uniformDev = std::max(uniformDev, std::abs(p - 1.0 / static_cast<double>(space.size())));

  Csv stationary({"state", "pi"});
  for (std::size_t i = 0; i < st.pi.size(); ++i)
    stationary.row({static_cast<double>(i), st.pi[i]});
  Csv summary({"states", "rational_exact", "max_asymmetry", "stationary_residual",
               "max_uniform_deviation", "iterations"});
  summary.row({static_cast<double>(space.size()), rationalExact ? 1.0 : 0.0, maxAsym,
               st.residual, uniformDev, static_cast<double>(st.iterations)});
  em.write("stationary.csv", stationary.text());
  em.write("summary.csv", summary.text());
}

void append_curve_rows(Csv& csv, const BrCurve& curve) {
  for (const BrCurvePoint& p : curve.points)
    csv.row({static_cast<double>(p.gamma), p.response.lo(), p.response.hi(),
             p.response.capSaturated ? 1.0 : 0.0});
}

void run_bestresponse(const ExperimentConfig& c, Emitter& em, const char* csvName) {
  GameParams params = game_of(c);
  const int cap = c.gammaMax > 0 ? c.gammaMax : 25;
  BrCurve curve = compute_br_curve(params, cap);
  Csv csv({"gamma", "br_lo", "br_hi", "cap_saturated"});
  append_curve_rows(csv, curve);
  em.write(csvName, csv.text());
  if (c.plot) {
    std::string svg = std::string(csvName);
    svg = svg.substr(0, svg.size() - 4) + ".svg";
    emit_plot((em.dir / csvName).string(), "step", (em.dir / svg).string());
    em.files.push_back(svg);
  }
}

void run_equilibrium(const ExperimentConfig& c, Emitter& em) {
  GameParams params = game_of(c);
  EquilibriumReport report = analyze_equilibria(params, c.gammaMax);
  Csv csv({"gamma_star", "crossing", "efficiency", "verified", "selected"});
  for (std::size_t i = 0; i < report.fixedPoints.size(); ++i) {
    const FixedPoint& fp = report.fixedPoints[i];
    csv.row({fp.gamma, fp.crossing ? 1.0 : 0.0, fp.efficiency, fp.verified ? 1.0 : 0.0,
             i == report.selected ? 1.0 : 0.0});
  }
  em.write("equilibria.csv", csv.text());
}

void run_ratio(const ExperimentConfig& c, Emitter& em) {
  const int n2 = c.n2 > 0 ? c.n2 : 2 * c.n;
  RatioInvarianceResult res = ratio_invariance_check(
      c.n, money_of(c, c.n), n2, money_of(c, n2), c.delta, c.alpha, c.beta);
  Csv curves({"gamma", "br1_lo", "br1_hi", "br2_lo", "br2_hi", "equal"});
  for (int g = 0; g <= res.first.gammaMax(); ++g)
    curves.row({static_cast<double>(g), res.first.at(g).lo(), res.first.at(g).hi(),
                res.second.at(g).lo(), res.second.at(g).hi(),
                res.first.at(g) == res.second.at(g) ? 1.0 : 0.0});
  Csv summary({"n1", "money1", "n2", "money2", "equal", "selected1", "selected2"});
  summary.row({static_cast<double>(c.n), static_cast<double>(money_of(c, c.n)),
               static_cast<double>(n2), static_cast<double>(money_of(c, n2)),
               res.equal ? 1.0 : 0.0, res.selectedFirst, res.selectedSecond});
  em.write("ratio_check.csv", curves.text());
  em.write("summary.csv", summary.text());
}

void run_altruists(const ExperimentConfig& c, Emitter& em) {
  const double bound = altruist_threshold_bound(c.alpha, c.beta, c.delta);
  const int needed = altruist_threshold(c.alpha, c.beta, c.delta);
  if (c.n <= needed)
    throw DomainError("config.n: altruists preset needs n > altruist threshold (" +
                      std::to_string(needed) + ")");
  GameParams params = game_of(c);
  auto seeds = resolved_seeds(c);
  Csv rows({"probe_threshold", "mean_u_never", "mean_u_probe", "mean_diff", "stderr_diff",
            "dominated"});
  for (int k : {1, 2, 5}) {
    PairedUtility r = altruist_dominance(params, needed, k, c.rounds, seeds);
    rows.row({static_cast<double>(k), r.meanBase, r.meanOther, r.meanDiff, r.stderrDiff,
              r.meanDiff <= 2.0 * r.stderrDiff ? 1.0 : 0.0});
  }
  Csv summary({"alpha", "beta", "delta", "bound", "altruists"});
  summary.row({c.alpha, c.beta, c.delta, bound, static_cast<double>(needed)});
  em.write("dominance.csv", rows.text());
  em.write("summary.csv", summary.text());
}

void run_fig1(const ExperimentConfig& c, Emitter& em) {
  GameParams params = game_of(c);
  const int k = static_cast<int>(std::llround(c.gamma));
  const std::int64_t stride = c.stride > 0 ? c.stride : std::max<std::int64_t>(1, c.n / 10);
  auto seeds = resolved_seeds(c);
  ConvergenceSeries series = convergence_series(params, k, c.rounds, stride, seeds);
  Csv csv({"round", "mean_sq_distance", "stderr"});
  for (std::size_t i = 0; i < series.rounds.size(); ++i)
    csv.row({static_cast<double>(series.rounds[i]), series.meanSq[i], series.stderrSq[i]});
  em.write("fig1.csv", csv.text());
  if (c.plot) {
    emit_plot((em.dir / "fig1.csv").string(), "line", (em.dir / "fig1.svg").string());
    em.files.push_back("fig1.svg");
  }
}

void run_fig2(const ExperimentConfig& c, Emitter& em) {
  const int k = static_cast<int>(std::llround(c.gamma));
  auto seeds = resolved_seeds(c);
  Csv csv({"n", "max_sq_distance", "rounds"});
  for (int n : scaled_sizes(c.scale)) {
    if (c.rounds * n > c.budget)
      throw BudgetError("fig2: rounds*n exceeds budget at n = " + std::to_string(n));
    GameParams params(n, c.delta, c.alpha, c.beta, std::llround(c.m * n));
    MaxDistanceResult r = max_distance_run(params, k, c.rounds, seeds[0]);
    csv.row({static_cast<double>(n), r.maxSq, static_cast<double>(r.rounds)});
  }
  em.write("fig2.csv", csv.text());
  if (c.plot) {
    emit_plot((em.dir / "fig2.csv").string(), "points", (em.dir / "fig2.svg").string());
    em.files.push_back("fig2.svg");
  }
}

void run_fig3(const ExperimentConfig& c, Emitter& em) {
  const int k = static_cast<int>(std::llround(c.gamma));
  auto seeds = resolved_seeds(c);
  Csv csv({"n", "mean_rounds", "stderr_rounds", "reference_3n"});
  for (int n : scaled_sizes(c.scale)) {
    const std::int64_t maxRounds = 20LL * n;
    if (maxRounds * n > c.budget)
      throw BudgetError("fig3: rounds*n exceeds budget at n = " + std::to_string(n));
    GameParams params(n, c.delta, c.alpha, c.beta, std::llround(c.m * n));
    CrossingResult r = rounds_to_distance(params, k, 0.001, maxRounds, seeds);
    csv.row({static_cast<double>(n), r.meanRounds, r.stderrRounds, 3.0 * n});
  }
  em.write("fig3.csv", csv.text());
  if (c.plot) {
    emit_plot((em.dir / "fig3.csv").string(), "series2", (em.dir / "fig3.svg").string());
    em.files.push_back("fig3.svg");
  }
}

void run_fig5(const ExperimentConfig& c, Emitter& em) {
  std::vector<double> deltas = c.deltas;
  if (deltas.empty()) deltas = {0.95, 0.97, 0.99, 0.999};
  std::vector<double> grid;
  for (double m = c.mGridStep; m <= c.mGridMax + 1e-12; m += c.mGridStep) grid.push_back(m);

  Csv fig({"delta", "m_star", "efficiency", "degenerate"});
  for (std::size_t di = 0; di < deltas.size(); ++di) {
    GameParams base(c.n, deltas[di], c.alpha, c.beta, 1);
    RatioTable table = optimal_ratio(base, grid);
    Csv tbl({"m", "gamma_star", "efficiency", "has_equilibrium"});
    double bestEff = 0.0;
    for (const RatioRow& row : table.rows) {
      tbl.row({row.m, row.gammaStar, row.efficiency, row.hasEquilibrium ? 1.0 : 0.0});
      if (row.m == table.mStar) bestEff = row.efficiency;
    }
    char name[48];
    std::snprintf(name, sizeof name, "ratio_delta_%02zu.csv", di);
    em.write(name, tbl.text());
    fig.row({deltas[di], table.mStar, bestEff, table.degenerate ? 1.0 : 0.0});
  }
  em.write("fig5.csv", fig.text());
  if (c.plot) {
    emit_plot((em.dir / "fig5.csv").string(), "points", (em.dir / "fig5.svg").string());
    em.files.push_back("fig5.svg");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

ArtifactSet run_experiment(const ExperimentConfig& raw) {
  raw.validate();
  ExperimentConfig c = raw;  // resolve defaults so the written config is complete
  c.seeds = resolved_seeds(raw);
  if (c.stride == 0) c.stride = std::max<std::int64_t>(1, c.n / 10);
  if (c.threads > 0) parallel::set_threads(c.threads);

  const auto start = std::chrono::steady_clock::now();
  Emitter em{fs::path(c.out), {}};
  fs::create_directories(em.dir);

  if (c.experiment == "sim") run_sim(c, em);
  else if (c.experiment == "entropy") run_entropy(c, em);
  else if (c.experiment == "chain") run_chain(c, em);
  else if (c.experiment == "bestresponse") run_bestresponse(c, em, "br_curve.csv");
  else if (c.experiment == "equilibrium") run_equilibrium(c, em);
  else if (c.experiment == "ratio") run_ratio(c, em);
  else if (c.experiment == "altruists") run_altruists(c, em);
  else if (c.experiment == "fig1") run_fig1(c, em);
  else if (c.experiment == "fig2") run_fig2(c, em);
  else if (c.experiment == "fig3") run_fig3(c, em);
  else if (c.experiment == "fig4") run_bestresponse(c, em, "fig4.csv");
  else if (c.experiment == "fig5") run_fig5(c, em);
  else throw DomainError("config.experiment: unknown experiment '" + c.experiment + "'");

  em.write("resolved_config.json", c.to_json_text());
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  ordered_json manifest;
  char hashHex[20];
  std::snprintf(hashHex, sizeof hashHex, "%016llx",
                static_cast<unsigned long long>(c.hash()));
  manifest["configHash"] = hashHex;
  manifest["config"] = ordered_json::parse(c.to_json_text());
  manifest["seeds"] = c.seeds;
  manifest["wallTimeSec"] = wall;
  manifest["outputs"] = ordered_json::array();
  for (const std::string& f : em.files) {
    fs::path p = em.dir / f;
    char sumHex[20];
    std::snprintf(sumHex, sizeof sumHex, "%016llx",
                  static_cast<unsigned long long>(fnv1a64_file(p.string())));
    manifest["outputs"].push_back(
        {{"file", f}, {"bytes", fs::file_size(p)}, {"fnv1a64", sumHex}});
  }
  std::ofstream mf(em.dir / "manifest.json", std::ios::binary);
  mf << manifest.dump(2) << "\n";

  ArtifactSet set;
  set.outDir = em.dir.string();
  set.files = em.files;
  set.manifestPath = (em.dir / "manifest.json").string();
  return set;
}

bool verify_manifest(const std::string& manifestPath) {
  std::ifstream f(manifestPath, std::ios::binary);
  if (!f) return false;
  std::stringstream buf;
  buf << f.rdbuf();
  ordered_json manifest;
  try {
    manifest = ordered_json::parse(buf.str());
  } catch (const nlohmann::json::exception&) {
    return false;
  }
  fs::path dir = fs::path(manifestPath).parent_path();
  for (const auto& entry : manifest.at("outputs")) {
    fs::path p = dir / entry.at("file").get<std::string>();
    if (!fs::exists(p)) return false;
    if (fs::file_size(p) != entry.at("bytes").get<std::uintmax_t>()) return false;
    char sumHex[20];
    std::snprintf(sumHex, sizeof sumHex, "%016llx",
                  static_cast<unsigned long long>(fnv1a64_file(p.string())));
    if (entry.at("fnv1a64").get<std::string>() != sumHex) return false;
  }
  return true;
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const unsigned char* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DomainError("fnv1a64_file: cannot open " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[8192];
  while (f.read(buf, sizeof buf) || f.gcount() > 0) {
    std::streamsize got = f.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

}  // namespace scrip
