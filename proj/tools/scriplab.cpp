// Command-line front end: scriplab <experiment> [options]
//
// Exit codes: 0 success, 1 invalid configuration, 2 budget exceeded,
// 3 internal invariant violation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "scrip/errors.hpp"
#include "scrip/lab.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw scrip::DomainError("cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      seeds.push_back(std::stoull(item));
    } catch (const std::exception&) {
      throw scrip::DomainError("--seeds: not an integer: '" + item + "'");
    }
  }
  if (seeds.empty()) throw scrip::DomainError("--seeds: empty list");
  return seeds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scriplab: scrip-system simulation and equilibrium toolkit"};
  app.get_formatter()->column_width(28);

  std::string experiment;
  app.add_option("experiment", experiment, "One of: sim entropy chain bestresponse equilibrium ratio altruists fig1 fig2 fig3 fig4 fig5")
      ->required();

  std::string configPath, seedsText, outDir;
  int n = 0, n2 = 0, k = -1, threads = -1, gammaMaxFlag = -1;
  double m = -1.0, gamma = -1.0, beta = -1.0, alpha = -1.0, delta = -1.0, scale = -1.0;
  long long rounds = -1, stride = -1, budget = -1;
  bool plot = false;

  app.add_option("--config", configPath, "JSON config file; flags override its keys");
  app.add_option("--n", n, "agent count");
  app.add_option("--m", m, "average dollars per agent (money = m*n)");
  app.add_option("--k", k, "integer threshold (sets gamma)");
  app.add_option("--gamma", gamma, "real threshold strategy");
  app.add_option("--beta", beta, "ability probability");
  app.add_option("--alpha", alpha, "cost of serving");
  app.add_option("--delta", delta, "discount factor per time unit");
  app.add_option("--rounds", rounds, "simulated rounds");
  app.add_option("--seeds", seedsText, "comma-separated seed list");
  app.add_option("--stride", stride, "snapshot stride in rounds");
  app.add_option("--out", outDir, "output directory");
  app.add_flag("--plot", plot, "also render SVG plots");
  app.add_option("--scale", scale, "size scale for the larger presets");
  app.add_option("--budget", budget, "round-agent event budget");
  app.add_option("--threads", threads, "worker threads (0 = default)");
  app.add_option("--n2", n2, "second game size for the ratio preset");
  app.add_option("--gamma-max", gammaMaxFlag, "curve length for the response presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    scrip::ExperimentConfig config = scrip::preset(experiment);
    if (!configPath.empty()) {
      scrip::ExperimentConfig fromFile =
          scrip::ExperimentConfig::from_json_text(read_file(configPath));
      fromFile.experiment = experiment;
      config = fromFile;
    }
    if (n > 0) config.n = n;
    if (m >= 0.0) config.m = m;
    if (k >= 0) config.gamma = k;
    if (gamma >= 0.0) config.gamma = gamma;
    if (beta >= 0.0) config.beta = beta;
    if (alpha >= 0.0) config.alpha = alpha;
    if (delta >= 0.0) config.delta = delta;
    if (rounds >= 0) config.rounds = rounds;
    if (!seedsText.empty()) config.seeds = parse_seed_list(seedsText);
    if (stride >= 0) config.stride = stride;
    if (!outDir.empty()) config.out = outDir;
    if (plot) config.plot = true;
    if (scale > 0.0) config.scale = scale;
    if (budget > 0) config.budget = budget;
    if (threads >= 0) config.threads = threads;
    if (n2 > 0) config.n2 = n2;
    if (gammaMaxFlag >= 0) config.gammaMax = gammaMaxFlag;

    scrip::ArtifactSet artifacts = scrip::run_experiment(config);
    for (const std::string& f : artifacts.files)
      std::cout << artifacts.outDir << "/" << f << "\n";
    std::cout << artifacts.manifestPath << "\n";
    return 0;
  } catch (const scrip::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const scrip::BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const scrip::InvariantError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
