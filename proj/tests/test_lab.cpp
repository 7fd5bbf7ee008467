#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "scrip/errors.hpp"
#include "scrip/lab.hpp"
#include "scrip/plot.hpp"

using namespace scrip;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "scriplab_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config round-trips through JSON byte for byte") {
  ExperimentConfig c = preset("fig1");
  c.seeds = {3, 1, 4};
  c.m = 2.25;
  c.delta = 0.123456789012345;
  std::string text = c.to_json_text();
  ExperimentConfig back = ExperimentConfig::from_json_text(text);
  CHECK(back.to_json_text() == text);
  CHECK(back.hash() == c.hash());
}

TEST_CASE("config parsing rejects junk") {
  CHECK_THROWS_AS(ExperimentConfig::from_json_text("{"), DomainError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text("[1,2]"), DomainError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"nn": 3})"), DomainError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"n": "many"})"), DomainError);

  ExperimentConfig c = preset("sim");
  c.n = 1;
  CHECK_THROWS_WITH_AS(c.validate(), "config.n: must be >= 2", DomainError);
  c = preset("sim");
  c.experiment = "figX";
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = preset("sim");
  c.beta = 0.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("every experiment id has a preset") {
  for (const std::string& id : experiment_ids()) {
    ExperimentConfig c = preset(id);
    CHECK(c.experiment == id);
    CHECK_NOTHROW(c.validate());
  }
}

TEST_CASE("rerunning a preset reproduces the CSVs byte for byte") {
  ExperimentConfig c = preset("fig1");
  c.rounds = 400;
  c.seeds = {1, 2, 3};
  c.out = fresh_dir("repro_a").string();
  ArtifactSet first = run_experiment(c);
  c.out = fresh_dir("repro_b").string();
  ArtifactSet second = run_experiment(c);
  REQUIRE(first.files == second.files);
  for (const std::string& f : first.files) {
    if (f == "resolved_config.json") continue;  // contains the out dir
    CHECK(slurp(fs::path(first.outDir) / f) == slurp(fs::path(second.outDir) / f));
  }
}

TEST_CASE("manifests validate and catch tampering") {
  ExperimentConfig c = preset("entropy");
  c.out = fresh_dir("manifest").string();
  ArtifactSet art = run_experiment(c);
  CHECK(verify_manifest(art.manifestPath));

  fs::path victim = fs::path(art.outDir) / "distribution.csv";
  std::string text = slurp(victim);
  text[text.size() / 2] = text[text.size() / 2] == '1' ? '2' : '1';
  std::ofstream(victim, std::ios::binary) << text;
  CHECK(!verify_manifest(art.manifestPath));
}

TEST_CASE("plots render and tolerate empty datasets") {
  fs::path dir = fresh_dir("plots");
  {
    std::ofstream csv(dir / "curve.csv");
    csv << "gamma,br_lo,br_hi\n0,0,0\n1,0,0\n2,3,3\n3,4,4\n";
  }
  emit_plot((dir / "curve.csv").string(), "step", (dir / "curve.svg").string());
  std::string svg = slurp(dir / "curve.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);

  {
    std::ofstream csv(dir / "empty.csv");
    csv << "x,y\n";
  }
  CHECK_NOTHROW(
      emit_plot((dir / "empty.csv").string(), "line", (dir / "empty.svg").string()));
  CHECK(slurp(dir / "empty.svg").find("<svg") != std::string::npos);

  CHECK_THROWS_AS(
      emit_plot((dir / "curve.csv").string(), "sparkle", (dir / "x.svg").string()),
      DomainError);
  CHECK_THROWS_AS(emit_plot((dir / "missing.csv").string(), "line", (dir / "x.svg").string()),
                  DomainError);
}

TEST_CASE("csv numbers carry 12 significant digits") {
  ExperimentConfig c = preset("entropy");
  c.out = fresh_dir("digits").string();
  run_experiment(c);
  std::string csv = slurp(fs::path(c.out) / "distribution.csv");
  CHECK(csv.find("0.246782379234") != std::string::npos);
  CHECK(csv.find('\r') == std::string::npos);  // LF endings only
}

TEST_CASE("fnv1a64 is the reference function") {
  // reference vector: fnv1a64("a") = af63dc4c8601ec8c
  CHECK(fnv1a64("a", 1) == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("", 0) == 0xcbf29ce484222325ULL);
}
