#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scv/bergman.hpp"
#include "scv/bump.hpp"
#include "scv/field.hpp"
#include "scv/pipeline.hpp"
#include "scv/witness.hpp"

// The OpenMP kernels must agree bit for bit with their serial twins:
// per-batch streams and fixed combination order make the arithmetic
// identical, and max-reductions are exact.

using namespace scv;

TEST_CASE("Gram accumulation: parallel equals serial") {
  const DomainSpec prod = annulus_disc_product();
  BasisFamily basis;
  basis.dim = 2;
  basis.j_min = -4;
  basis.j_max = 4;
  basis.k_min = 0;
  basis.k_max = 4;
  const GramResult par = mc_gram(prod, basis, 20000, 77, 10, true);
  const GramResult ser = mc_gram(prod, basis, 20000, 77, 10, false);
  REQUIRE(par.full.size() == ser.full.size());
  for (size_t i = 0; i < par.full.data().size(); ++i) {
    CHECK(par.full.data()[i].real() == ser.full.data()[i].real());
    CHECK(par.full.data()[i].imag() == ser.full.data()[i].imag());
  }
  CHECK(par.volume_estimate == ser.volume_estimate);
  for (int b = 0; b < 10; ++b) CHECK(par.batch_accept[b] == ser.batch_accept[b]);
}

TEST_CASE("Holder scan: parallel equals serial") {
  const BumpProfile profile = build_base_bump();
  const ParamSchedule s = solve_parameters(0.5, 1.0, 1.0, profile);
  const CantorBumpFn fn(profile, s, build_interval_tree(s, 8));
  PairSampleSpec pairs;
  pairs.count = 20000;
  pairs.seed = 5;
  const double par = holder_seminorm(fn, 0.5, pairs, 8, true);
  const double ser = holder_seminorm(fn, 0.5, pairs, 8, false);
  CHECK(par == ser);
}

TEST_CASE("classification scan: parallel equals serial") {
  PipelineConfig cfg;
  cfg.grid_n = 48;
  const HartogsBundle b = build_hartogs_bundle(cfg);
  GridSpec grid;
  grid.n = 48;
  const ClassificationMap par = scan_boundary(*b.field_d, grid, b.fn.get(), cfg.r0, 8,
                                              1e-6, true);
  const ClassificationMap ser = scan_boundary(*b.field_d, grid, b.fn.get(), cfg.r0, 8,
                                              1e-6, false);
  REQUIRE(par.cells.size() == ser.cells.size());
  for (size_t i = 0; i < par.cells.size(); ++i) {
    CHECK(par.cells[i].laplacian == ser.cells[i].laplacian);
    CHECK(par.cells[i].cls == ser.cells[i].cls);
    CHECK(par.cells[i].x == ser.cells[i].x);
  }
  CHECK(par.count_convex == ser.count_convex);
  CHECK(par.dense_at_coarse == ser.dense_at_coarse);
}

TEST_CASE("subharmonicity probes: parallel equals serial") {
  const DomainSpec ball = ball_domain(2);
  auto u = [](const cvec& z) { return norm2(z) - 0.3 * z[0].real(); };
  const PshProbeReport par = psh_check(u, ball, 400, 11, true);
  const PshProbeReport ser = psh_check(u, ball, 400, 11, false);
  CHECK(par.probes == ser.probes);
  CHECK(par.violations == ser.violations);
  CHECK(par.worst_gap == ser.worst_gap);
}
