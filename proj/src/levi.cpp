#include "scv/levi.hpp"

#include <algorithm>
#include <cmath>

#include "scv/errors.hpp"

namespace scv {

cvec DefiningFn::unit_normal(const cvec& z) const {
  cvec g = grad(z);
  // gradient in real coordinates is 2 * conj(dr/dz)
  real n = 0;
  for (cplx& c : g) {
    c = 2.0 * std::conj(c);
    n += std::norm(c);
  }
  n = std::sqrt(n);
  if (n < 1e-14) throw DegenerateGradient("vanishing gradient");
  for (cplx& c : g) c /= n;
  return g;
}

// ------------------------------------------------------------- built-ins

DefiningFn ball_defining(int dim, real radius) {
  DefiningFn r;
  r.dim = dim;
  r.analytic = true;
  r.value = [radius](const cvec& z) { return norm2(z) - radius * radius; };
  r.grad = [dim](const cvec& z) {
    cvec g(dim);
    for (int j = 0; j < dim; ++j) g[j] = std::conj(z[j]);
    return g;
  };
  r.hermitian = [dim](const cvec&) {
    HermMatrix h(dim);
    for (int j = 0; j < dim; ++j) h.at(j, j) = 1.0;
    return h;
  };
  r.holomorphic = [dim](const cvec&) {
    return std::vector<cvec>(dim, cvec(dim, cplx(0, 0)));
  };
  return r;
}

DefiningFn quadric_defining(real c, real radius) {
  DefiningFn r;
  r.dim = 2;
  r.analytic = true;
  r.value = [c, radius](const cvec& z) {
    return norm2(z) + c * (z[1] * z[1]).real() - radius * radius;
  };
  r.grad = [c](const cvec& z) {
    return cvec{std::conj(z[0]), std::conj(z[1]) + c * z[1]};
  };
  r.hermitian = [](const cvec&) {
    HermMatrix h(2);
    h.at(0, 0) = 1.0;
    h.at(1, 1) = 1.0;
    return h;
  };
  r.holomorphic = [c](const cvec&) {
    std::vector<cvec> h(2, cvec(2, cplx(0, 0)));
    h[1][1] = c;
    return h;
  };
  return r;
}

DefiningFn saddle_defining(real shift) {
  DefiningFn r;
  r.dim = 2;
  r.analytic = true;
  r.value = [shift](const cvec& z) { return std::norm(z[0]) - std::norm(z[1]) + shift; };
  r.grad = [](const cvec& z) { return cvec{std::conj(z[0]), -std::conj(z[1])}; };
  r.hermitian = [](const cvec&) {
    HermMatrix h(2);
    h.at(0, 0) = 1.0;
    h.at(1, 1) = -1.0;
    return h;
  };
  r.holomorphic = [](const cvec&) {
    return std::vector<cvec>(2, cvec(2, cplx(0, 0)));
  };
  return r;
}

DefiningFn halfspace_defining(int dim) {
  DefiningFn r;
  r.dim = dim;
  r.analytic = true;
  r.value = [](const cvec& z) { return z[0].real(); };
  r.grad = [dim](const cvec&) {
    cvec g(dim, cplx(0, 0));
    g[0] = 0.5;
    return g;
  };
  r.hermitian = [dim](const cvec&) { return HermMatrix(dim); };
  r.holomorphic = [dim](const cvec&) {
    return std::vector<cvec>(dim, cvec(dim, cplx(0, 0)));
  };
  return r;
}

DefiningFn hartogs_graph_defining(std::shared_ptr<const ScalarField2> field) {
  DefiningFn r;
  r.dim = 2;
  r.analytic = true;  // exact wherever the field exposes a Hessian
  r.value = [field](const cvec& z) {
    const real aw = std::abs(z[1]);
    if (aw == 0.0) return -1e300;
    return std::log(aw) - field->value(z[0].real(), z[0].imag());
  };
  r.grad = [field](const cvec& z) {
    real gx = 0, gy = 0;
    field->gradient(z[0].real(), z[0].imag(), &gx, &gy);
    // d/dz of -phi is -(phi_x - i phi_y)/2; d/dw of log|w| is 1/(2w)
    return cvec{cplx(-0.5 * gx, 0.5 * gy), 1.0 / (2.0 * z[1])};
  };
  r.hermitian = [field](const cvec& z) {
    const std::optional<real> lap = field->laplacian_exact(z[0].real(), z[0].imag());
    if (!lap) throw DomainError("field has no exact Laplacian at this point");
    HermMatrix h(2);
    h.at(0, 0) = -*lap / 4.0;
    return h;
  };
  r.holomorphic = [field](const cvec& z) {
    real fxx = 0, fxy = 0, fyy = 0;
    if (!field->hessian_exact(z[0].real(), z[0].imag(), &fxx, &fxy, &fyy))
      throw DomainError("field has no exact Hessian at this point");
    std::vector<cvec> h(2, cvec(2, cplx(0, 0)));
    // d2(-phi)/dz^2 = -((fxx - fyy) - 2 i fxy)/4
    h[0][0] = cplx(-(fxx - fyy) / 4.0, fxy / 2.0);
    h[1][1] = -1.0 / (2.0 * z[1] * z[1]);
    return h;
  };
  return r;
}

DefiningFn fd_defining(int dim, std::function<real(const cvec&)> f, real scale) {
  DefiningFn r;
  r.dim = dim;
  r.analytic = false;
  r.value = f;

  auto shift = [dim](const cvec& z, int axis, real h) {
    cvec w = z;
    const int k = axis / 2;
    if (axis % 2 == 0) w[k] += cplx(h, 0);
    else w[k] += cplx(0, h);
    return w;
  };
  auto d1 = [f, shift](const cvec& z, int axis, real h) {
    // central difference with one Richardson level
    auto cd = [&](real hh) {
      return (f(shift(z, axis, hh)) - f(shift(z, axis, -hh))) / (2 * hh);
    };
    return (4.0 * cd(h) - cd(2 * h)) / 3.0;
  };
  auto d2 = [f, shift](const cvec& z, int ax1, int ax2, real h) {
    auto cd = [&](real hh) {
      if (ax1 == ax2) {
        return (f(shift(z, ax1, hh)) - 2.0 * f(z) + f(shift(z, ax1, -hh))) / (hh * hh);
      }
      const cvec pp = shift(shift(z, ax1, hh), ax2, hh);
      const cvec pm = shift(shift(z, ax1, hh), ax2, -hh);
      const cvec mp = shift(shift(z, ax1, -hh), ax2, hh);
      const cvec mm = shift(shift(z, ax1, -hh), ax2, -hh);
      return (f(pp) - f(pm) - f(mp) + f(mm)) / (4 * hh * hh);
    };
    return (4.0 * cd(h) - cd(2 * h)) / 3.0;
  };

  const real hg = 1e-6 * scale;
  const real hh = 1e-4 * scale;
  r.grad = [dim, d1, hg](const cvec& z) {
    cvec g(dim);
    for (int j = 0; j < dim; ++j)
      g[j] = 0.5 * cplx(d1(z, 2 * j, hg), -d1(z, 2 * j + 1, hg));
    return g;
  };
  r.hermitian = [dim, d2, hh](const cvec& z) {
    HermMatrix m(dim);
    for (int j = 0; j < dim; ++j)
      for (int k = j; k < dim; ++k) {
        const real xx = d2(z, 2 * j, 2 * k, hh);
        const real yy = d2(z, 2 * j + 1, 2 * k + 1, hh);
        const real xy = d2(z, 2 * j, 2 * k + 1, hh);
        const real yx = d2(z, 2 * j + 1, 2 * k, hh);
        m.at(j, k) = 0.25 * cplx(xx + yy, xy - yx);
      }
    m.symmetrize();
    return m;
  };
  r.holomorphic = [dim, d2, hh](const cvec& z) {
    std::vector<cvec> m(dim, cvec(dim));
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) {
        const real xx = d2(z, 2 * j, 2 * k, hh);
        const real yy = d2(z, 2 * j + 1, 2 * k + 1, hh);
        const real xy = d2(z, 2 * j, 2 * k + 1, hh);
        const real yx = d2(z, 2 * j + 1, 2 * k, hh);
        m[j][k] = 0.25 * cplx(xx - yy, -(xy + yx));
      }
    return m;
  };
  return r;
}

// ------------------------------------------------------------- operations

real levi_form(const DefiningFn& r, const cvec& z, const cvec& a) {
  const HermMatrix h = r.hermitian(z);
  cplx s(0, 0);
  for (int j = 0; j < r.dim; ++j)
    for (int k = 0; k < r.dim; ++k) s += h.at(j, k) * a[j] * std::conj(a[k]);
  const real an = norm2(a);
  if (std::fabs(s.imag()) > 1e-8 * std::max(an, 1e-300))
    throw Error("Levi form lost Hermitian symmetry: imag " + fmt17(s.imag()));
  return s.real();
}

cvec tangent_adjust(const DefiningFn& r, const cvec& z, const cvec& a, real min_dz1) {
  const cvec g = r.grad(z);
  if (std::abs(g[0]) < min_dz1)
    throw DegenerateGradient("dr/dz_1 = " + fmt17(std::abs(g[0])) +
                             "; rotate coordinates first");
  cplx pairing(0, 0);
  for (int j = 0; j < r.dim; ++j) pairing += a[j] * g[j];
  cvec out = a;
  out[0] -= pairing / g[0];
  return out;
}

cvec AnalyticDisc::at(cplx lambda) const {
  cvec z = base;
  for (size_t j = 0; j < z.size(); ++j) z[j] += lambda * direction[j];
  z[0] += lambda * lambda * b1;
  return z;
}

AnalyticDisc levi_disc(const DefiningFn& r, const cvec& z, const cvec& a,
                       real boundary_tol) {
  if (std::fabs(r.value(z)) > boundary_tol)
    throw DomainError("base point is not on the boundary: r = " + fmt17(r.value(z)));
  AnalyticDisc d;
  d.base = z;
  d.direction = tangent_adjust(r, z, a);
  const std::vector<cvec> hol = r.holomorphic(z);
  cplx q(0, 0);
  for (int j = 0; j < r.dim; ++j)
    for (int k = 0; k < r.dim; ++k) q += hol[j][k] * d.direction[j] * d.direction[k];
  const cvec g = r.grad(z);
  d.b1 = -q / (2.0 * g[0]);
  return d;
}

ResidualReport taylor_residual(const DefiningFn& r, const AnalyticDisc& disc,
                               const std::vector<real>& radii, int circle_points) {
  ResidualReport rep;
  rep.levi_value = levi_form(r, disc.base, disc.direction);
  for (const real rho : radii) {
    ResidualRow row;
    row.rho = rho;
    real mean = 0;
    for (int k = 0; k < circle_points; ++k) {
      const real th = 2.0 * kPi * k / circle_points;
      const cplx lambda = rho * cplx(std::cos(th), std::sin(th));
      const real q = r.value(disc.at(lambda)) / (rho * rho);
      row.sup_residual = std::max(row.sup_residual, std::fabs(q - rep.levi_value));
      mean += q;
    }
    row.mean_quotient = mean / circle_points;
    rep.rows.push_back(row);
  }
  std::sort(rep.rows.begin(), rep.rows.end(),
            [](const ResidualRow& a, const ResidualRow& b) { return a.rho > b.rho; });

  // least-squares slope in log-log, ignoring rows at the rounding floor
  // (the quotient divides rounding noise in r by rho^2)
  const real noise = 1e-12 * std::max(1.0, std::fabs(rep.levi_value));
  int n = 0;
  real sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const ResidualRow& row : rep.rows) {
    if (row.sup_residual <= noise / (row.rho * row.rho)) continue;
    const real lx = std::log(row.rho), ly = std::log(row.sup_residual);
    ++n;
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  rep.loglog_slope = (n >= 2) ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
  rep.vanishing = n < 2;

  // the circle mean kills odd orders, so Richardson on the two smallest
  // radii removes the rho^2 term as well
  const size_t m = rep.rows.size();
  if (m >= 2) {
    const ResidualRow& small = rep.rows[m - 1];
    const ResidualRow& prev = rep.rows[m - 2];
    const real ratio = prev.rho / small.rho;
    const real r2 = ratio * ratio;
    rep.intercept = (r2 * small.mean_quotient - prev.mean_quotient) / (r2 - 1.0);
  } else if (m == 1) {
    rep.intercept = rep.rows[0].mean_quotient;
  }
  return rep;
}

namespace {

// orthonormal frame whose first vector spans conj(grad); the rest spans
// the complex tangent space
std::vector<cvec> tangent_frame(const DefiningFn& r, const cvec& z) {
  const cvec g = r.grad(z);
  const real gn = std::sqrt(norm2(g));
  if (gn < 1e-12) throw DegenerateGradient("gradient too small for a tangent frame");
  cvec normal(r.dim);
  for (int j = 0; j < r.dim; ++j) normal[j] = std::conj(g[j]) / gn;

  std::vector<cvec> frame;
  frame.push_back(normal);
  for (int e = 0; e < r.dim && static_cast<int>(frame.size()) < r.dim; ++e) {
    cvec v(r.dim, cplx(0, 0));
    v[e] = 1.0;
    for (const cvec& f : frame) {
      cplx proj(0, 0);
      for (int j = 0; j < r.dim; ++j) proj += v[j] * std::conj(f[j]);
      for (int j = 0; j < r.dim; ++j) v[j] -= proj * f[j];
    }
    const real vn = std::sqrt(norm2(v));
    if (vn > 1e-8) {
      for (cplx& c : v) c /= vn;
      frame.push_back(v);
    }
  }
  return frame;
}

EighResult restricted_levi_eigh(const DefiningFn& r, const cvec& z,
                                const std::vector<cvec>& frame) {
  const int tdim = static_cast<int>(frame.size()) - 1;
  const HermMatrix h = r.hermitian(z);
  HermMatrix restricted(std::max(tdim, 1));
  for (int p = 0; p < tdim; ++p)
    for (int q = 0; q < tdim; ++q) {
      cplx s(0, 0);
      for (int j = 0; j < r.dim; ++j)
        for (int k = 0; k < r.dim; ++k)
          s += h.at(j, k) * frame[p + 1][j] * std::conj(frame[q + 1][k]);
      restricted.at(p, q) = s;
    }
  restricted.symmetrize();
  return jacobi_eigh(restricted);
}

}  // namespace

real tangent_levi_min(const DefiningFn& r, const cvec& z) {
  const std::vector<cvec> frame = tangent_frame(r, z);
  if (static_cast<int>(frame.size()) - 1 <= 0)
    throw DegenerateGradient("no tangent directions in dimension 1");
  return restricted_levi_eigh(r, z, frame).values.front();
}

std::optional<ConcaveDirection> find_concave_direction(const DefiningFn& r, const cvec& z,
                                                       real tol) {
  const std::vector<cvec> frame = tangent_frame(r, z);
  const int tdim = static_cast<int>(frame.size()) - 1;
  if (tdim <= 0) return std::nullopt;

  const EighResult eig = restricted_levi_eigh(r, z, frame);
  if (eig.values.front() >= -tol) return std::nullopt;

  ConcaveDirection dir;
  dir.eigenvalue = eig.values.front();
  dir.direction.assign(r.dim, cplx(0, 0));
  for (int p = 0; p < tdim; ++p)
    for (int j = 0; j < r.dim; ++j)
      dir.direction[j] += eig.vectors.front()[p] * frame[p + 1][j];
  return dir;
}

DiscFamilyReport continuity_violation(const DomainSpec& dom,
                                      const std::function<cvec(cplx)>& disc, real rho,
                                      int edge_points, int rings) {
  if (!(rho > 0)) throw DiscExits("edge radius must be positive");
  const cvec center = disc(cplx(0, 0));
  if (!dom.member(center)) throw DiscExits("center outside the domain");

  // interior rings: membership only
  for (int ring = 1; ring < rings; ++ring) {
    const real rr = rho * ring / rings;
    for (int k = 0; k < edge_points / 4; ++k) {
      const real th = 2.0 * kPi * k / (edge_points / 4);
      const cvec p = disc(rr * cplx(std::cos(th), std::sin(th)));
      if (!dom.member(p))
        throw DiscExits("sample at |zeta|=" + fmt17(rr) + " angle " + fmt17(th));
    }
  }

  DiscFamilyReport rep;
  rep.center_distance = dom.boundary_distance(center);
  rep.edge_distance = 1e300;
  for (int k = 0; k < edge_points; ++k) {
    const real th = 2.0 * kPi * k / edge_points;
    const cvec p = disc(rho * cplx(std::cos(th), std::sin(th)));
    if (!dom.member(p))
      throw DiscExits("edge sample at angle " + fmt17(th));
    rep.edge_distance = std::min(rep.edge_distance, dom.boundary_distance(p));
  }
  rep.violation = rep.center_distance < rep.edge_distance;
  return rep;
}

}  // namespace scv
