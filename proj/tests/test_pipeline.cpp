#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "scv/errors.hpp"
#include "scv/pipeline.hpp"

using namespace scv;

TEST_CASE("config validation") {
  PipelineConfig cfg;
  CHECK_NOTHROW(cfg.validate());

  PipelineConfig bad = cfg;
  bad.eps = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.r0 = 0.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.mc_samples = 10;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  // seed is mandatory when parsing
  nlohmann::ordered_json j = cfg.to_json();
  j.erase("seed");
  CHECK_THROWS_AS(PipelineConfig::from_json(j), ConfigError);
}

TEST_CASE("config json round trip is bit-exact") {
  PipelineConfig cfg;
  cfg.eps = 0.123456789012345678;
  cfg.c1 = 0.9999999999999999;
  cfg.seed = 987654321;
  const PipelineConfig back = PipelineConfig::from_json(cfg.to_json());
  CHECK(back.eps == cfg.eps);
  CHECK(back.c1 == cfg.c1);
  CHECK(back.c2 == cfg.c2);
  CHECK(back.r0 == cfg.r0);
  CHECK(back.seed == cfg.seed);
  CHECK(back.depth == cfg.depth);
}

TEST_CASE("schedule serialization round trip") {
  const BumpProfile profile = build_base_bump();
  const ParamSchedule s = solve_parameters(0.37, 0.8, 1.9, profile);
  const ParamSchedule back = schedule_from_json(schedule_to_json(s));
  CHECK(back.gamma == s.gamma);
  CHECK(back.delta == s.delta);
  CHECK(back.a0 == s.a0);
  CHECK(back.p0 == s.p0);
  CHECK(back.big_a == s.big_a);
  CHECK(back.big_b == s.big_b);
  CHECK(back.all_ok());
}

TEST_CASE("construct pipeline emits profile files") {
  namespace fs = std::filesystem;
  const std::string dir = (fs::temp_directory_path() / "scv_pipe_test").string();
  fs::remove_all(dir);
  PipelineConfig cfg;
  cfg.depth = 6;
  write_construct_f(cfg, dir);
  REQUIRE(fs::exists(fs::path(dir) / "f.json"));
  REQUIRE(fs::exists(fs::path(dir) / "f.csv"));

  std::ifstream in(fs::path(dir) / "f.json");
  nlohmann::ordered_json j;
  in >> j;
  const ParamSchedule s = schedule_from_json(j.at("schedule"));
  // (tree reconstructed below from the parsed schedule)
  CHECK(s.all_ok());
  CHECK(j.at("tree").at("depth").get<int>() == 6);
  CHECK(j.at("tree").at("levels").size() == 7);
  CHECK(j.at("tree").at("levels")[6].at("centers").size() == 64);

  // the decimal-string encoding round-trips centers bit for bit
  const IntervalTree tree = build_interval_tree(s, 6);
  for (int n = 0; n <= 6; ++n) {
    const auto& centers = j.at("tree").at("levels")[n].at("centers");
    CHECK(parse17(centers[0].get<std::string>()) == tree.level(n).centers.front());
    CHECK(parse17(centers[centers.size() - 1].get<std::string>()) ==
          tree.level(n).centers.back());
  }
  fs::remove_all(dir);
}

TEST_CASE("fast criteria report deterministically") {
  PipelineConfig cfg;
  cfg.mc_samples = 4000;
  cfg.grid_n = 32;
  cfg.depth = 6;

  ClaimRecord a = run_parameter_feasibility(cfg);
  ClaimRecord b = run_parameter_feasibility(cfg);
  CHECK(a.status == "pass");
  a.runtime_seconds = b.runtime_seconds = 0;
  CHECK(a.measured.dump() == b.measured.dump());

  const ClaimRecord conv = run_convexity(cfg);
  CHECK(conv.status == "pass");

  const ClaimRecord det = run_determinism(cfg);
  CHECK(det.status == "pass");
}

TEST_CASE("report serialization shape") {
  PipelineConfig cfg;
  cfg.mc_samples = 4000;
  VerificationReport rep;
  rep.config_echo = cfg.to_json();
  rep.claims.push_back(run_convexity(cfg));
  const nlohmann::ordered_json j = rep.to_json();
  CHECK(j.at("claims").size() == 1);
  CHECK(j.at("claims")[0].at("id") == "C8");
  CHECK(j.contains("all_pass"));
  const std::string text = rep.to_text();
  CHECK(text.find("C8") != std::string::npos);

  namespace fs = std::filesystem;
  const std::string dir = (fs::temp_directory_path() / "scv_report_test").string();
  fs::remove_all(dir);
  write_report(rep, dir);
  CHECK(fs::exists(fs::path(dir) / "report.json"));
  CHECK(fs::exists(fs::path(dir) / "report.txt"));
  fs::remove_all(dir);
}

TEST_CASE("pipeline dispatch") {
  namespace fs = std::filesystem;
  PipelineConfig cfg;
  cfg.depth = 5;
  cfg.mc_samples = 4000;
  cfg.out_dir = (fs::temp_directory_path() / "scv_dispatch_test").string();
  fs::remove_all(cfg.out_dir);
  const VerificationReport rep = run_pipeline(cfg, PipelineKind::ConstructF);
  CHECK(rep.all_pass());
  CHECK(fs::exists(fs::path(cfg.out_dir) / "f.json"));
  fs::remove_all(cfg.out_dir);

  PipelineConfig bad = cfg;
  bad.eps = 2.0;
  CHECK_THROWS_AS(run_pipeline(bad, PipelineKind::VerifyAll), ConfigError);
}

TEST_CASE("hartogs bundle applies the constant plumbing") {
  PipelineConfig cfg;
  const HartogsBundle b = build_hartogs_bundle(cfg);
  const Cutoff chi;
  // cap amplitude small enough for the annulus estimate, curvature floor
  // large enough for the plateau estimate
  CHECK(b.c1_eff <= cfg.r0 * cfg.r0 / chi.norm_second() * (1 + 1e-12));
  CHECK(b.c2_eff >= 16.0 * cfg.r0 * cfg.r0);
  CHECK(b.schedule.c1 == b.c1_eff);
  CHECK(b.schedule.c2 == b.c2_eff);
  CHECK(b.schedule.all_ok());
}
