#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "scv/bergman.hpp"
#include "scv/errors.hpp"
#include "scv/rng.hpp"

using namespace scv;

TEST_CASE("disc kernel series against the closed form") {
  CHECK(disc_kernel(cplx(0, 0)) == doctest::Approx(1.0 / kPi).epsilon(1e-14));
  for (double r : {0.5, 1.0, 2.0})
    CHECK(disc_kernel(cplx(0, 0), r) == doctest::Approx(1.0 / (kPi * r * r)).epsilon(1e-14));

  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const double radius = rng.uniform(0.4, 2.0);
    const double a = rng.uniform(0, 0.95 * radius);
    const double th = rng.uniform(0, 2 * kPi);
    const cplx z = a * cplx(std::cos(th), std::sin(th));
    const double r2 = radius * radius;
    const double closed = r2 / (kPi * (r2 - a * a) * (r2 - a * a));
    CHECK(disc_kernel(z, radius) == doctest::Approx(closed).epsilon(1e-12));
  }

  // monotone along a ray toward the boundary
  double prev = 0;
  for (double t = 0; t < 0.99; t += 0.05) {
    const double k = disc_kernel(cplx(t, 0));
    CHECK(k >= prev);
    prev = k;
  }
  CHECK_THROWS_AS(disc_kernel(cplx(1.1, 0)), OutsideDomain);
}

TEST_CASE("annulus monomial norms against quadrature") {
  CHECK(annulus_monomial_norm2(-1, 0.5, 1.5) ==
        doctest::Approx(2 * kPi * std::log(3.0)).epsilon(1e-14));

  // Simpson quadrature of 2 pi r^{2k+1} as the independent route
  auto quad = [](int k, double rin, double rout) {
    const int n = 20000;
    const double h = (rout - rin) / n;
    double s = 0;
    auto f = [k](double r) { return 2 * kPi * std::pow(r, 2 * k + 1); };
    for (int i = 0; i < n; ++i) {
      const double a = rin + i * h;
      s += (f(a) + 4 * f(a + h / 2) + f(a + h)) * h / 6;
    }
    return s;
  };
  for (int k = -6; k <= 6; ++k)
    CHECK(annulus_monomial_norm2(k, 0.5, 1.5) ==
          doctest::Approx(quad(k, 0.5, 1.5)).epsilon(1e-9));
}

TEST_CASE("series partial sums grow with the truncation degree") {
  const cplx z(0.6, 0.2);
  double partial = 0, prev = -1;
  const double a2 = std::norm(z);
  double pw = 1.0;
  for (int k = 0; k <= 24; ++k) {
    partial += pw / disc_monomial_norm2(k, 1.0);
    CHECK(partial > prev);
    prev = partial;
    pw *= a2;
  }
  CHECK(partial <= disc_kernel(z) * (1 + 1e-12));
}

TEST_CASE("annulus kernel symmetry") {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const double a = rng.uniform(0.55, 1.45);
    const double t1 = rng.uniform(0, 2 * kPi), t2 = rng.uniform(0, 2 * kPi);
    const double k1 = annulus_kernel(a * cplx(std::cos(t1), std::sin(t1)));
    const double k2 = annulus_kernel(a * cplx(std::cos(t2), std::sin(t2)));
    CHECK(k1 == doctest::Approx(k2).epsilon(1e-12));
  }
  CHECK_THROWS_AS(annulus_kernel(cplx(0.3, 0)), OutsideDomain);
}

TEST_CASE("constant-function estimate recovers the volume") {
  const DomainSpec disc = disc_domain(1.0);
  BasisFamily basis;
  basis.dim = 1;
  basis.j_min = 0;
  basis.j_max = 0;
  const KernelEstimate est = mc_gram_kernel(disc, basis, cvec{cplx(0.2, 0.1)}, 50000, 42);
  CHECK(est.value == doctest::Approx(1.0 / kPi).epsilon(0.05));
  CHECK(est.stderr_estimate > 0);
}

TEST_CASE("disc estimate within noise of the series") {
  const DomainSpec disc = disc_domain(1.0);
  BasisFamily basis;
  basis.dim = 1;
  basis.j_min = 0;
  basis.j_max = 8;
  const GramResult gram = mc_gram(disc, basis, 50000, 99);
  for (const cplx z : {cplx(0, 0), cplx(0.5, 0), cplx(-0.2, 0.4)}) {
    const KernelEstimate est = mc_gram_kernel(disc, basis, cvec{z}, 50000, 99, &gram);
    const double truth = disc_kernel(z);
    CHECK(std::fabs(est.value - truth) <= 5 * std::max(est.stderr_estimate, 1e-4 * truth));
  }
}

TEST_CASE("reproducing lower bound and extremal equality") {
  const DomainSpec disc = disc_domain(1.0);
  BasisFamily basis;
  basis.dim = 1;
  basis.j_min = 0;
  basis.j_max = 6;
  const GramResult gram = mc_gram(disc, basis, 30000, 7);
  const cvec z{cplx(0.4, -0.1)};
  const double kz = gram_extremal_value(gram, basis, z);

  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    cvec coeffs(basis.size());
    for (auto& c : coeffs) c = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const double fz2 = std::norm(basis_apply(basis, coeffs, z));
    const double n2 = gram_norm2(gram, coeffs);
    CHECK(fz2 / n2 <= kz * (1 + 1e-9));
  }
  // the extremal coefficients achieve the bound
  const cvec ext = gram_extremal_coeffs(gram, basis, z);
  const double achieved = std::norm(basis_apply(basis, ext, z)) / gram_norm2(gram, ext);
  CHECK(achieved == doctest::Approx(kz).epsilon(1e-6));
}

TEST_CASE("domain monotonicity of the estimates") {
  BasisFamily basis;
  basis.dim = 1;
  basis.j_min = 0;
  basis.j_max = 6;
  const cvec z{cplx(0.3, 0.2)};
  const KernelEstimate small =
      mc_gram_kernel(disc_domain(0.8), basis, z, 50000, 21);
  const KernelEstimate large =
      mc_gram_kernel(disc_domain(1.0), basis, z, 50000, 21);
  CHECK(small.value >= large.value - 3 * (small.stderr_estimate + large.stderr_estimate));
}

TEST_CASE("product rule against the component series") {
  const DomainSpec prod = annulus_disc_product();
  BasisFamily basis;
  basis.dim = 2;
  basis.j_min = -6;
  basis.j_max = 6;
  basis.k_min = 0;
  basis.k_max = 6;
  const GramResult gram = mc_gram(prod, basis, 60000, 17);
  for (const cvec& z : {cvec{cplx(1.0, 0), cplx(0, 0)}, cvec{cplx(0.8, 0.4), cplx(0.3, 0)}}) {
    const KernelEstimate est = mc_gram_kernel(prod, basis, z, 60000, 17, &gram);
    const double truth = product_kernel(annulus_kernel(z[0]), disc_kernel(z[1]));
    CHECK(std::fabs(est.value - truth) / truth <= 0.08);
  }
}

TEST_CASE("slit membership and sides") {
  const DomainSpec slit = slit_domain();
  const cvec inside{cplx(1.0, 0.49), cplx(0, 0)};
  CHECK(slit.member(inside));
  CHECK(slit.side(inside) == Side::InsideD1);
  CHECK(slit_surface_value(inside) == doctest::Approx(0.2401));

  const cvec on_s{cplx(1.0, 0.5), cplx(0, 0)};
  CHECK_FALSE(slit.member(on_s));

  const cvec below{cplx(1.0, -0.3), cplx(0.9, 0)};
  CHECK(slit.member(below));
  CHECK(slit.side(below) == Side::OutsideD1);

  // distance oracle: near the apex from above, distance is the gap to S
  const cvec above{cplx(1.0, 0.52), cplx(0, 0)};
  CHECK(slit.boundary_distance(above) == doctest::Approx(0.02).epsilon(0.05));

  // membership/distance coherence on random samples
  const std::vector<cvec> pts = sample_domain(slit, 2000, 23);
  for (const cvec& z : pts) CHECK(slit.boundary_distance(z) > 0);
}

TEST_CASE("convexity probes") {
  CHECK(convexity_check(slit_inside_domain(), 2000, 31));
  CHECK_FALSE(convexity_check(annulus_domain(), 2000, 31));
  CHECK(convexity_check(ball_domain(2), 2000, 31));
}

TEST_CASE("blow-up along a disc ray via the series") {
  const DomainSpec disc = disc_domain(1.0);
  BasisFamily basis;  // unused by the series path
  const auto path = [](double t) { return cvec{cplx(t, 0)}; };
  const auto oracle = [](const cvec& z) { return disc_kernel(z[0]); };
  const BlowupReport rep = blowup_scan(disc, path, basis, 6, 1000, 1, oracle);
  CHECK(rep.verdict == BlowupVerdict::Blowup);
  CHECK(rep.method == KernelMethod::Series);
  for (size_t i = 0; i + 1 < rep.estimate.size(); ++i)
    CHECK(rep.estimate[i] < rep.estimate[i + 1]);
}

TEST_CASE("gram cache round trip and corruption recovery") {
  namespace fs = std::filesystem;
  const std::string dir = (fs::temp_directory_path() / "scv_cache_test").string();
  fs::remove_all(dir);

  const DomainSpec disc = disc_domain(1.0);
  BasisFamily basis;
  basis.dim = 1;
  basis.j_min = 0;
  basis.j_max = 4;

  const GramResult fresh = cached_gram(dir, disc, basis, 20000, 5);
  const GramResult loaded = cached_gram(dir, disc, basis, 20000, 5);
  REQUIRE(fresh.full.size() == loaded.full.size());
  for (size_t i = 0; i < fresh.full.data().size(); ++i) {
    CHECK(fresh.full.data()[i].real() == loaded.full.data()[i].real());
    CHECK(fresh.full.data()[i].imag() == loaded.full.data()[i].imag());
  }

  // corrupt the payload; the loader must detect and recompute
  const std::string key = gram_cache_key(disc, basis, 20000, 5, 10);
  const fs::path file = fs::path(dir) / ("gram_" + key + ".json");
  REQUIRE(fs::exists(file));
  {
    std::ifstream in(file);
    std::string text((std::istreambuf_iterator<char>(in)), {});
    const size_t pos = text.find("\"full\"");
    REQUIRE(pos != std::string::npos);
    text.replace(text.find('3', pos), 1, "4");
    std::ofstream out(file);
    out << text;
  }
  const GramResult healed = cached_gram(dir, disc, basis, 20000, 5);
  for (size_t i = 0; i < fresh.full.data().size(); ++i)
    CHECK(fresh.full.data()[i].real() == healed.full.data()[i].real());
  fs::remove_all(dir);
}

TEST_CASE("ill-conditioned basis is refused") {
  const DomainSpec tiny = disc_domain(0.05);
  BasisFamily basis;
  basis.dim = 1;
  basis.j_min = 0;
  basis.j_max = 120;
  CHECK_THROWS_AS(mc_gram_kernel(tiny, basis, cvec{cplx(0, 0)}, 2000, 3),
                  SingularGram);
}

TEST_CASE("estimate requires an interior point and enough samples") {
  const DomainSpec disc = disc_domain(1.0);
  BasisFamily basis;
  CHECK_THROWS_AS(mc_gram_kernel(disc, basis, cvec{cplx(2, 0)}, 5000, 1), OutsideDomain);
  CHECK_THROWS_AS(mc_gram_kernel(disc, basis, cvec{cplx(0, 0)}, 10, 1), Error);
}
