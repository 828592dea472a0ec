#include "scv/domain.hpp"

#include <algorithm>
#include <cmath>

#include "scv/errors.hpp"
#include "scv/rng.hpp"

namespace scv {

DomainSpec disc_domain(real radius) {
  DomainSpec d;
  d.dim = 1;
  d.name = "disc(" + fmt17(radius) + ")";
  d.box = {{-radius, radius}, {-radius, radius}};
  d.member = [radius](const cvec& z) { return std::abs(z[0]) < radius; };
  d.boundary_distance = [radius](const cvec& z) { return radius - std::abs(z[0]); };
  return d;
}

DomainSpec annulus_domain(real r_in, real r_out) {
  DomainSpec d;
  d.dim = 1;
  d.name = "annulus(" + fmt17(r_in) + "," + fmt17(r_out) + ")";
  d.box = {{-r_out, r_out}, {-r_out, r_out}};
  d.member = [r_in, r_out](const cvec& z) {
    const real a = std::abs(z[0]);
    return a > r_in && a < r_out;
  };
  d.boundary_distance = [r_in, r_out](const cvec& z) {
    const real a = std::abs(z[0]);
    return std::min(a - r_in, r_out - a);
  };
  return d;
}

DomainSpec ball_domain(int dim, real radius) {
  DomainSpec d;
  d.dim = dim;
  d.name = "ball" + std::to_string(dim) + "(" + fmt17(radius) + ")";
  for (int i = 0; i < 2 * dim; ++i) d.box.push_back({-radius, radius});
  d.member = [radius](const cvec& z) { return norm2(z) < radius * radius; };
  d.boundary_distance = [radius](const cvec& z) {
    return radius - std::sqrt(norm2(z));
  };
  return d;
}

DomainSpec annulus_disc_product() {
  DomainSpec d;
  d.dim = 2;
  d.name = "annulus_x_disc";
  d.box = {{-1.5, 1.5}, {-1.5, 1.5}, {-1.0, 1.0}, {-1.0, 1.0}};
  d.member = [](const cvec& z) {
    const real a = std::abs(z[0]);
    return a > 0.5 && a < 1.5 && std::abs(z[1]) < 1.0;
  };
  d.boundary_distance = [](const cvec& z) {
    const real a = std::abs(z[0]);
    return std::min({a - 0.5, 1.5 - a, 1.0 - std::abs(z[1])});
  };
  return d;
}

real slit_surface_value(const cvec& z) {
  const real x1 = z[0].real() - 1.0;
  const real y1 = z[0].imag();
  const real s2 = std::norm(z[1]);
  return x1 * x1 + (1.0 + s2) / (1.0 - s2) * y1 * y1;
}

real slit_surface_distance(const cvec& z) {
  // S parametrized by (tau, s): z1 = 1 + (cos tau)/2 + i b(s) sin tau with
  // b(s) = sqrt((1-s^2)/(1+s^2))/2, tau in (0, pi); the optimal zeta_2
  // shares the phase of z2, so |z2 - zeta2| = ||z2| - s|.
  const real az2 = std::abs(z[1]);
  auto dist2 = [&](real tau, real s) {
    const real b = 0.5 * std::sqrt((1.0 - s * s) / (1.0 + s * s));
    const real dx = (z[0].real() - 1.0) - 0.5 * std::cos(tau);
    const real dy = z[0].imag() - b * std::sin(tau);
    const real dz2 = az2 - s;
    return dx * dx + dy * dy + dz2 * dz2;
  };
  // coarse grid then coordinate refinement
  real best = 1e300, bt = 0, bs = 0;
  const int nt = 64, ns = 64;
  for (int i = 1; i < nt; ++i)
    for (int j = 0; j < ns; ++j) {
      const real tau = kPi * i / nt;
      const real s = 0.999 * j / (ns - 1);
      const real d2 = dist2(tau, s);
      if (d2 < best) { best = d2; bt = tau; bs = s; }
    }
  real ht = kPi / nt, hs = 0.999 / (ns - 1);
  for (int it = 0; it < 40; ++it) {
    for (const real tau : {bt - ht, bt, bt + ht})
      for (const real s : {bs - hs, bs, bs + hs}) {
        if (tau <= 0 || tau >= kPi || s < 0 || s > 0.9999) continue;
        const real d2 = dist2(tau, s);
        if (d2 < best) { best = d2; bt = tau; bs = s; }
      }
    ht *= 0.6;
    hs *= 0.6;
  }
  return std::sqrt(best);
}

DomainSpec slit_domain() {
  DomainSpec d = annulus_disc_product();
  d.name = "slit";
  auto ambient_member = d.member;
  auto ambient_dist = d.boundary_distance;
  d.member = [ambient_member](const cvec& z) {
    if (!ambient_member(z)) return false;
    if (z[0].imag() <= 0.0) return true;
    return std::fabs(slit_surface_value(z) - 0.25) > 1e-12;
  };
  d.boundary_distance = [ambient_dist](const cvec& z) {
    return std::min(ambient_dist(z), slit_surface_distance(z));
  };
  d.side = [](const cvec& z) {
    return (z[0].imag() > 0.0 && slit_surface_value(z) <= 0.25) ? Side::InsideD1
                                                                : Side::OutsideD1;
  };
  return d;
}

DomainSpec slit_inside_domain() {
  DomainSpec d;
  d.dim = 2;
  d.name = "slit_inside";
  d.box = {{0.5, 1.5}, {0.0, 0.5}, {-1.0, 1.0}, {-1.0, 1.0}};
  d.member = [](const cvec& z) {
    if (std::abs(z[1]) >= 1.0) return false;
    if (z[0].imag() <= 0.0) return false;
    return slit_surface_value(z) < 0.25;
  };
  d.boundary_distance = [](const cvec& z) {
    // boundary pieces: the dome, the flat bottom y1 = 0, the z2 wall
    return std::min({slit_surface_distance(z), z[0].imag(), 1.0 - std::abs(z[1])});
  };
  d.side = [](const cvec&) { return Side::InsideD1; };
  return d;
}

bool convexity_check(const DomainSpec& region, int pairs, std::uint64_t seed) {
  std::vector<cvec> pts = sample_domain(region, 2 * pairs, seed);
  if (static_cast<int>(pts.size()) < 2 * pairs) return false;
  for (int i = 0; i < pairs; ++i) {
    const cvec& p = pts[2 * i];
    const cvec& q = pts[2 * i + 1];
    for (const real t : {0.25, 0.5, 0.75}) {
      cvec m(region.dim);
      for (int k = 0; k < region.dim; ++k) m[k] = (1 - t) * p[k] + t * q[k];
      if (!region.member(m)) return false;
    }
  }
  return true;
}

std::vector<cvec> sample_domain(const DomainSpec& dom, int count, std::uint64_t seed,
                                long max_draws_factor) {
  std::vector<cvec> out;
  out.reserve(count);
  Rng rng(seed);
  const long max_draws = static_cast<long>(count) * max_draws_factor;
  cvec z(dom.dim);
  for (long it = 0; it < max_draws && static_cast<int>(out.size()) < count; ++it) {
    for (int k = 0; k < dom.dim; ++k) {
      const real re = rng.uniform(dom.box[2 * k].first, dom.box[2 * k].second);
      const real im = rng.uniform(dom.box[2 * k + 1].first, dom.box[2 * k + 1].second);
      z[k] = cplx(re, im);
    }
    if (dom.member(z)) out.push_back(z);
  }
  return out;
}

real ray_boundary_distance(const DomainSpec& dom, const cvec& z, int rays,
                           std::uint64_t seed) {
  if (!dom.member(z)) return 0.0;
  if (dom.boundary_distance) return dom.boundary_distance(z);
  Rng rng(seed);
  real span = 0;
  for (auto& [lo, hi] : dom.box) span = std::max(span, hi - lo);
  real best = span;
  const int n2 = 2 * dom.dim;
  for (int r = 0; r < rays; ++r) {
    // random direction on the real 2n-sphere via normalized gaussians
    std::vector<real> dir(n2);
    real nn = 0;
    for (real& d : dir) {
      // Box-Muller from two uniforms
      const real u1 = std::max(rng.unit(), 1e-16), u2 = rng.unit();
      d = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
      nn += d * d;
    }
    nn = std::sqrt(nn);
    if (nn == 0) continue;
    for (real& d : dir) d /= nn;
    auto at = [&](real t) {
      cvec p(dom.dim);
      for (int k = 0; k < dom.dim; ++k)
        p[k] = z[k] + cplx(t * dir[2 * k], t * dir[2 * k + 1]);
      return p;
    };
    real lo = 0, hi = span;
    if (dom.member(at(hi))) continue;
    for (int it = 0; it < 60; ++it) {
      const real mid = 0.5 * (lo + hi);
      if (dom.member(at(mid))) lo = mid; else hi = mid;
    }
    best = std::min(best, hi);
  }
  return best;
}

}  // namespace scv
