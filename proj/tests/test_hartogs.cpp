#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "scv/errors.hpp"
#include "scv/field.hpp"
#include "scv/pipeline.hpp"
#include "scv/rng.hpp"

using namespace scv;

TEST_CASE("radial profile branches and crossing") {
  const double r0 = 0.3;
  const RadialProfile psi = build_psi(r0);

  CHECK(psi.value(0.0) == doctest::Approx(-r0 * r0));
  CHECK(psi.crossing() > r0 / 2);
  CHECK(psi.crossing() < r0);
  CHECK(psi.zone_lo() > r0 / 2);
  CHECK(psi.zone_hi() < r0);

  // identical to the raw min outside the zone
  for (double x = 0.0; x < psi.zone_lo(); x += 0.01)
    CHECK(psi.value(x) == doctest::Approx(x * x - r0 * r0).epsilon(1e-15));
  for (double x = psi.zone_hi() + 1e-6; x < 0.999; x += 0.01)
    CHECK(psi.value(x) == doctest::Approx(std::log(1 - x * x)).epsilon(1e-13));

  // rounded corner stays below the raw min
  for (double x = psi.zone_lo(); x <= psi.zone_hi(); x += 1e-3)
    CHECK(psi.value(x) <=
          std::min(x * x - r0 * r0, std::log(1 - x * x)) + 1e-15);
}

TEST_CASE("radial Laplacian bullets") {
  const double r0 = 0.3;
  const RadialProfile psi = build_psi(r0);

  CHECK(psi.laplacian(r0 * r0 / 4) == doctest::Approx(4.0).epsilon(1e-13));
  for (int i = 0; i <= 5000; ++i) {
    const double x = 0.999 * i / 5000;
    const double lap = psi.laplacian(x);
    CHECK(lap <= 4.0 + 1e-9);
    if (x >= r0) CHECK(lap <= -4.0 + 1e-9);
    if (x <= r0 / 2) CHECK(lap == doctest::Approx(4.0).epsilon(1e-12));
  }
  // exact log-branch value on the annulus
  CHECK(psi.laplacian(0.5) == doctest::Approx(-4.0 / (0.75 * 0.75)).epsilon(1e-12));
}

TEST_CASE("psi construction guards") {
  CHECK_THROWS_AS(build_psi(0.4), ConstraintViolation);       // r0 out of range
  CHECK_THROWS_AS(build_psi(0.3, 1.5), ConstraintViolation);  // zone too wide
}

TEST_CASE("radial Laplacian matches planar finite differences") {
  const RadialProfile psi = build_psi(0.3);
  const HalfPsiField field(psi);
  Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    const double x = rng.uniform(-0.7, 0.7);
    const double y = rng.uniform(-0.7, 0.7);
    const double rho = std::hypot(x, y);
    if (rho < 0.02 || rho > 0.95) continue;
    // skip the joints where third derivatives jump
    if (std::fabs(rho - psi.zone_lo()) < 0.01 || std::fabs(rho - psi.zone_hi()) < 0.01)
      continue;
    const double exact = *field.laplacian_exact(x, y);
    const double fd = field.laplacian_fd(x, y, 1e-4);
    CHECK(std::fabs(fd - exact) / std::fabs(exact) <= 1e-3);
  }
}

TEST_CASE("field hessian consistency") {
  const RadialProfile psi = build_psi(0.3);
  const HalfPsiField field(psi);
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform(-0.6, 0.6);
    const double y = rng.uniform(-0.6, 0.6);
    const double rho = std::hypot(x, y);
    if (rho < 0.05) continue;
    double fxx, fxy, fyy;
    REQUIRE(field.hessian_exact(x, y, &fxx, &fxy, &fyy));
    CHECK(fxx + fyy == doctest::Approx(*field.laplacian_exact(x, y)).epsilon(1e-12));
    // gradient matches finite differences
    double gx, gy;
    field.gradient(x, y, &gx, &gy);
    const double h = 1e-6;
    CHECK(gx == doctest::Approx((field.value(x + h, y) - field.value(x - h, y)) / (2 * h))
                    .epsilon(1e-6));
    CHECK(gy == doctest::Approx((field.value(x, y + h) - field.value(x, y - h)) / (2 * h))
                    .epsilon(1e-6));
  }
}

TEST_CASE("cutoff properties") {
  const Cutoff chi;
  for (double t = -1.0; t <= 1.0; t += 0.05) CHECK(chi.value(t) == 1.0);
  CHECK(chi.value(1.96) == 0.0);
  CHECK(chi.value(-2.3) == 0.0);
  double sup2 = 0;
  for (int i = 0; i <= 20000; ++i) {
    const double t = -2.2 + 4.4 * i / 20000;
    CHECK(chi.value(t) >= 0.0);
    CHECK(chi.value(t) <= 1.0);
    CHECK(chi.value(t) == chi.value(-t));
    sup2 = std::max(sup2, std::fabs(chi.second(t)));
  }
  CHECK(sup2 <= chi.norm_second() * (1 + 1e-9));
  CHECK(sup2 >= chi.norm_second() * 0.99);
}

namespace {

PipelineConfig small_cfg() {
  PipelineConfig cfg;
  cfg.grid_n = 64;
  cfg.depth = 10;
  return cfg;
}

}  // namespace

TEST_CASE("cap field support and bound") {
  const HartogsBundle b = build_hartogs_bundle(small_cfg());
  const CapField& cap = b.field_d->cap();
  Rng rng(11);
  for (int i = 0; i < 3000; ++i) {
    const double x = rng.uniform(-1, 1);
    const double y = rng.uniform(-1, 1);
    const double v = cap.value(x, y);
    CHECK(v >= 0.0);
    CHECK(v <= b.c1_eff);
    if (std::fabs(x) >= cap.r0) CHECK(v == 0.0);
  }
}

TEST_CASE("membership and inclusion") {
  const HartogsBundle b = build_hartogs_bundle(small_cfg());
  HartogsDomain d0{b.field_d0};
  HartogsDomain d{b.field_d};

  CHECK(d.contains(cplx(0, 0), cplx(0, 0)));
  CHECK_FALSE(d.contains(cplx(0.99, 0), cplx(0.99, 0)));
  CHECK_FALSE(d.contains(cplx(1.0, 0), cplx(0.1, 0)));

  Rng rng(13);
  long in_d0 = 0;
  for (int i = 0; i < 100000; ++i) {
    const cplx z(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const cplx w(rng.uniform(-1.1, 1.1), rng.uniform(-1.1, 1.1));
    const bool m0 = d0.contains(z, w);
    if (m0) {
      ++in_d0;
      CHECK(d.contains(z, w));  // the cap only raises the graph
    }
    // away from the cap columns both domains agree with the ball
    if (std::fabs(z.real()) > 0.3 && std::abs(z) < 1) {
      const bool ball = std::norm(z) + std::norm(w) < 1.0;
      CHECK(m0 == ball);
      CHECK(d.contains(z, w) == ball);
    }
  }
  CHECK(in_d0 > 1000);
}

TEST_CASE("point classification across the regions") {
  const HartogsBundle b = build_hartogs_bundle(small_cfg());
  const double r0 = 0.3;

  // spherical zone: strictly pseudoconvex with the exact log Laplacian
  const Classification outer = classify_point(*b.field_d, cplx(0.9, 0.0));
  CHECK(outer.cls == PointClass::StrictlyPseudoconvex);
  CHECK(outer.exact);

  // plateau column: the cap dominates, strongly pseudoconvex
  const Classification plat = classify_point(*b.field_d, cplx(0.0, 0.0));
  CHECK(plat.cls == PointClass::StrictlyPseudoconvex);
  CHECK(plat.exact);
  CHECK(plat.laplacian < -2.0);

  // carved core of the plain domain: strictly pseudoconcave, laplacian 2
  const Classification core = classify_point(*b.field_d0, cplx(0.05, 0.05));
  CHECK(core.cls == PointClass::StrictlyPseudoconcave);
  CHECK(core.laplacian == doctest::Approx(2.0).epsilon(1e-12));

  // plateau value formula: half the radial part plus the cap column
  const CantorLocation loc = b.fn->locate(0.0);
  REQUIRE(loc.in_open_set);
  const double expect = *b.field_d0->laplacian_exact(0, 0) +
                        b.fn->second_on_plateau(0.0) / (r0 * r0);
  CHECK(plat.laplacian == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("annulus estimate where the cutoff is active") {
  // wherever chi < 1 or chi'' != 0 (|y| > r0) the halved radial Laplacian
  // is at most -2.41 and the cap contributes at most C1 ||chi''|| / r0^2,
  // so the total stays below -1 on every plateau column
  const HartogsBundle b = build_hartogs_bundle(small_cfg());
  const double r0 = 0.3;
  for (int n = 0; n <= 3; ++n) {
    const auto& lv = b.fn->tree().level(n);
    for (double c : lv.centers) {
      const double x = c * r0;
      for (double y = r0 + 0.01; y < 0.58; y += 0.025) {
        if (std::hypot(x, y) >= 0.97) continue;
        const auto lap = b.field_d->laplacian_exact(x, y);
        REQUIRE(lap.has_value());
        CHECK(*lap <= -1.0);
        const auto lap2 = b.field_d->laplacian_exact(x, -y);
        CHECK(*lap2 <= -1.0);
      }
    }
  }
}

TEST_CASE("boundary scan on a coarse grid") {
  PipelineConfig cfg = small_cfg();
  const HartogsBundle b = build_hartogs_bundle(cfg);
  GridSpec grid;
  grid.n = 64;

  const ClassificationMap map = scan_boundary(*b.field_d, grid, b.fn.get(), cfg.r0, 8);
  CHECK(map.dense_at_coarse);
  CHECK(map.count_convex > 0);

  const double cell = 2.0 * grid.extent / grid.n;
  for (int iy = 0; iy < grid.n; ++iy)
    for (int ix = 0; ix < grid.n; ++ix) {
      const CellRecord& rec = map.at(ix, iy);
      if (!rec.covered) continue;
      const double xc = -grid.extent + (ix + 0.5) * cell;
      if (std::fabs(xc) > cfg.r0)
        CHECK(rec.cls == PointClass::StrictlyPseudoconvex);
    }

  // the plain domain shows the concave cap over the carved core
  const ClassificationMap map0 = scan_boundary(*b.field_d0, grid, nullptr, cfg.r0, 8);
  long concave = 0;
  for (const CellRecord& rec : map0.cells)
    if (rec.covered && rec.cls == PointClass::StrictlyPseudoconcave) ++concave;
  CHECK(concave > 0);
}
