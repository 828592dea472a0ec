#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "scv/errors.hpp"
#include "scv/pipeline.hpp"
#include "scv/rng.hpp"
#include "scv/witness.hpp"

using namespace scv;

TEST_CASE("peak function on the ball keeps its textbook polynomial") {
  const DefiningFn r = ball_defining(2);
  const DomainSpec dom = ball_domain(2);
  const cvec a{cplx(1, 0), cplx(0, 0)};
  const PshWitness w = levi_peak_function(r, a, dom, 3);

  CHECK(w.tighten == 0.0);  // the full complex Hessian is already definite
  // Re P = Re(z1) - 1 up to the vanishing quadratic part
  CHECK(w.peak_poly(cvec{cplx(0.5, 0.3), cplx(0.1, 0)}) ==
        doctest::Approx(-0.5).epsilon(1e-12));

  // negative on domain samples, -floor far away
  const std::vector<cvec> pts = sample_domain(dom, 20000, 7);
  for (const cvec& z : pts) CHECK(w.value(z) < 0);
  CHECK(w.value(cvec{cplx(-0.9, 0), cplx(0, 0)}) == -w.floor);

  // approaches zero along the inward normal
  double prev = -1;
  for (double t : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double v = w.value(cvec{cplx(1 - t, 0), cplx(0, 0)});
    CHECK(v < 0);
    if (prev != -1) CHECK(v > prev);
    prev = v;
  }
  CHECK(prev > -1e-3);
}

TEST_CASE("peak function refuses concave anchors") {
  PipelineConfig cfg;
  cfg.grid_n = 64;
  const HartogsBundle hb = build_hartogs_bundle(cfg);
  const DefiningFn r = hartogs_graph_defining(hb.field_d0);
  const DomainSpec dom = hartogs_domain_spec(hb.field_d0, "hartogs_plain");
  // over the carved core the graph is strictly pseudoconcave
  const cplx z0(0.05, 0.02);
  const cplx w0 = std::exp(hb.field_d0->value(z0.real(), z0.imag()));
  CHECK_THROWS_AS(levi_peak_function(r, cvec{z0, w0}, dom, 3),
                  NotStrictlyPseudoconvex);
}

TEST_CASE("peak function on the capped graph is tightened") {
  PipelineConfig cfg;
  cfg.grid_n = 64;
  const HartogsBundle hb = build_hartogs_bundle(cfg);
  const DefiningFn r = hartogs_graph_defining(hb.field_d);
  const DomainSpec dom = hartogs_domain_spec(hb.field_d, "hartogs_cap");

  const cplx z0(0.62, 0.0);
  const cplx w0 = std::exp(hb.field_d->value(z0.real(), z0.imag()));
  const PshWitness w = levi_peak_function(r, cvec{z0, w0}, dom, 5);
  CHECK(w.tighten > 0.0);  // log|w| is pluriharmonic, so tightening is needed

  const std::vector<cvec> pts = sample_domain(dom, 20000, 11);
  for (const cvec& z : pts) CHECK(w.value(z) < 0);

  // plurisubharmonic by probes
  const PshProbeReport rep =
      psh_check([&w](const cvec& z) { return w.value(z); }, dom, 300, 13);
  CHECK(rep.violations == 0);
}

TEST_CASE("probe harness on known functions") {
  const DomainSpec ball = ball_domain(2);
  const PshProbeReport harmonic =
      psh_check([](const cvec& z) { return z[0].real(); }, ball, 300, 17);
  CHECK(harmonic.violations == 0);

  const PshProbeReport subh =
      psh_check([](const cvec& z) { return norm2(z); }, ball, 300, 17);
  CHECK(subh.violations == 0);

  const PshProbeReport superh =
      psh_check([](const cvec& z) { return -norm2(z); }, ball, 300, 17);
  CHECK(superh.violations == superh.probes);
}

TEST_CASE("negative log transform") {
  CHECK(neg_log_transform(-1.0) == 0.0);
  CHECK(neg_log_transform(-std::exp(-1.0)) == doctest::Approx(1.0));
  CHECK(neg_log_transform(-1e-6) == doctest::Approx(13.815510557964274));
  CHECK_THROWS_AS(neg_log_transform(0.0), DomainError);
  CHECK_THROWS_AS(neg_log_transform(0.5), DomainError);
  // strictly increasing toward zero
  double prev = neg_log_transform(-1.0);
  for (double u : {-0.5, -0.1, -1e-3, -1e-9}) {
    const double v = neg_log_transform(u);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("normalized supremum of one witness") {
  const DefiningFn r = ball_defining(2);
  const DomainSpec dom = ball_domain(2);
  const cvec a{cplx(1, 0), cplx(0, 0)};
  const PshWitness w = levi_peak_function(r, a, dom, 3);

  const std::vector<cvec> samples = sample_domain(dom, 30000, 19);
  const Exhaustion exh = default_exhaustion(1);
  const SupWitness u = sup_regularized({w}, exh, dom, samples);

  // the sampled supremum over the first compact is exactly -1
  double sup = -1e300;
  for (const cvec& z : samples)
    if (exh.contains(dom, z, 0)) sup = std::max(sup, u.value(z));
  CHECK(sup == doctest::Approx(-1.0).epsilon(1e-12));
  for (const cvec& z : samples) CHECK(u.value(z) < 0);
}

TEST_CASE("two antipodal witnesses dominate near their anchors") {
  const DefiningFn r = ball_defining(2);
  const DomainSpec dom = ball_domain(2);
  const cvec a1{cplx(1, 0), cplx(0, 0)};
  const cvec a2{cplx(-1, 0), cplx(0, 0)};
  const PshWitness w1 = levi_peak_function(r, a1, dom, 3);
  const PshWitness w2 = levi_peak_function(r, a2, dom, 5);

  const std::vector<cvec> samples = sample_domain(dom, 30000, 23);
  const Exhaustion exh = default_exhaustion(2);
  const SupWitness u = sup_regularized({w1, w2}, exh, dom, samples);

  const double near1 = u.value(cvec{cplx(1 - 1e-3, 0), cplx(0, 0)});
  CHECK(near1 >= -1e-2);
  CHECK(near1 < 0);

  // v = -log(-u) passes the same probes
  const PshProbeReport rep = psh_check(
      [&u](const cvec& z) { return neg_log_transform(u.value(z)); }, dom, 300, 29);
  CHECK(rep.violations == 0);
}

TEST_CASE("witness must be negative somewhere sampled") {
  const DefiningFn r = ball_defining(2);
  const DomainSpec dom = ball_domain(2);
  const cvec a{cplx(1, 0), cplx(0, 0)};
  PshWitness w = levi_peak_function(r, a, dom, 3);
  w.floor = -0.1;  // breaks negativity on the glued region
  const std::vector<cvec> samples = sample_domain(dom, 5000, 31);
  CHECK_THROWS_AS(sup_regularized({w}, default_exhaustion(1), dom, samples),
                  NonNegativeWitness);
}

TEST_CASE("unit-ball functions obey the coarse mean-value ceiling") {
  // on a radius-2.2 ball the deep compact {dist >= 1} is nonempty; any
  // unit-norm span function stays under pi^n there
  const DomainSpec dom = ball_domain(2, 2.2);
  BasisFamily basis;
  basis.dim = 2;
  basis.j_min = 0;
  basis.j_max = 4;
  basis.k_min = 0;
  basis.k_max = 4;
  const GramResult gram = mc_gram(dom, basis, 40000, 37);
  const std::vector<cvec> samples = sample_domain(dom, 4000, 41);

  Rng rng(43);
  const double c = kPi * kPi;
  for (int trial = 0; trial < 20; ++trial) {
    cvec coeffs(basis.size());
    for (auto& cc : coeffs) cc = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const double n = std::sqrt(gram_norm2(gram, coeffs));
    for (auto& cc : coeffs) cc /= n;
    for (const cvec& z : samples)
      if (dom.boundary_distance(z) >= 1.0)
        CHECK(std::abs(basis_apply(basis, coeffs, z)) <= c);
  }
}

TEST_CASE("greedy growth smoke run") {
  BasisFamily basis;
  basis.dim = 2;
  basis.j_min = -6;
  basis.j_max = 6;
  basis.k_min = 0;
  basis.k_max = 4;
  const DomainSpec dom = slit_inside_domain();
  const cvec apex{cplx(1.0, 0.5), cplx(0, 0)};
  const GreedyTrace trace = greedy_unbounded_witness(dom, basis, apex, 3, 30000, 47);

  REQUIRE(trace.levels.size() == 3);
  for (const GreedyLevel& lv : trace.levels) {
    CHECK(lv.met);
    CHECK(lv.extremal >= lv.target);
    if (lv.k >= 2) CHECK(lv.h_at_z >= lv.k - 1.0);
  }
  // distances strictly decrease (each z_k leaves the previous compact)
  for (size_t i = 1; i < trace.levels.size(); ++i)
    CHECK(trace.levels[i].dist < trace.levels[i - 1].dist);
  CHECK(std::isfinite(trace.h_norm));
  CHECK(trace.h_norm > 0);
  CHECK(trace.c == doctest::Approx(kPi * kPi));
}

TEST_CASE("greedy growth fails loudly on a starved span") {
  BasisFamily basis;
  basis.dim = 2;
  basis.j_min = 0;
  basis.j_max = 1;
  basis.k_min = 0;
  basis.k_max = 0;
  const DomainSpec dom = slit_inside_domain();
  const cvec apex{cplx(1.0, 0.5), cplx(0, 0)};
  CHECK_THROWS_AS(greedy_unbounded_witness(dom, basis, apex, 5, 20000, 53),
                  GrowthTargetUnreachable);
}
