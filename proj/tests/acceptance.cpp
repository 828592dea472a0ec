#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "scv/pipeline.hpp"

// Acceptance suite: every verification claim runs at its stated size and
// tolerance against the default configuration, printing one line per
// criterion. `ctest -R acceptance` is the gate.

using namespace scv;

namespace {

PipelineConfig defaults() { return PipelineConfig{}; }

void report(const ClaimRecord& rec) {
  std::printf("[%s] %s  %s  (%.2f s)\n", rec.status == "pass" ? "PASS" : "FAIL",
              rec.id.c_str(), rec.description.c_str(), rec.runtime_seconds);
  std::fflush(stdout);
}

}  // namespace

TEST_CASE("C1 parameter feasibility") {
  const ClaimRecord rec = run_parameter_feasibility(defaults());
  report(rec);
  CHECK(rec.status == "pass");
}

TEST_CASE("C2 plateau concavity") {
  const ClaimRecord rec = run_plateau_concavity(defaults());
  report(rec);
  CHECK(rec.status == "pass");
}

TEST_CASE("C3 Holder regularity") {
  const ClaimRecord rec = run_holder_regularity(defaults());
  report(rec);
  CHECK(rec.status == "pass");
}

TEST_CASE("C4 boundary classification map") {
  const ClaimRecord rec = run_boundary_classification(defaults());
  report(rec);
  CHECK(rec.status == "pass");
}

TEST_CASE("C5 Levi disc identity") {
  const ClaimRecord rec = run_levi_disc_identity(defaults());
  report(rec);
  CHECK(rec.status == "pass");
}

TEST_CASE("C6 kernel oracles") {
  const ClaimRecord rec = run_kernel_oracles(defaults());
  report(rec);
  CHECK(rec.status == "pass");
}

TEST_CASE("C7 slit-domain dichotomy") {
  const ClaimRecord rec = run_slit_dichotomy(defaults());
  report(rec);
  CHECK(rec.status == "pass");
}

TEST_CASE("C8 convexity of the dome interior") {
  const ClaimRecord rec = run_convexity(defaults());
  report(rec);
  CHECK(rec.status == "pass");
}

TEST_CASE("C9 sup-regularized witness") {
  const ClaimRecord rec = run_sup_witness(defaults());
  report(rec);
  CHECK(rec.status == "pass");
}

TEST_CASE("C10 greedy witness trace") {
  const ClaimRecord rec = run_greedy_trace(defaults());
  report(rec);
  CHECK(rec.status == "pass");
}

TEST_CASE("C11 determinism of repeated verification") {
  const ClaimRecord rec = run_determinism(defaults());
  report(rec);
  CHECK(rec.status == "pass");
}
