#include "scv/field.hpp"

#include <algorithm>
#include <cmath>

#include "scv/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace scv {

// ------------------------------------------------------------------- psi

real RadialProfile::gap(real x) const { return (x * x - r0_ * r0_) - std::log1p(-x * x); }
real RadialProfile::gap_d1(real x) const { return 2 * x + 2 * x / (1 - x * x); }
real RadialProfile::gap_d2(real x) const {
  const real d = 1 - x * x;
  return 2 + (2 + 2 * x * x) / (d * d);
}

// ramp(s) = 2 s2 * Q((s+s2)/(2 s2)) with Q the integral of the quintic
// smoothstep; ramp'' >= 0 and ramp = max(s, 0) outside [-s2, s2].
real RadialProfile::ramp(real s) const {
  if (s <= -s2_) return 0;
  if (s >= s2_) return s;
  const real t = (s + s2_) / (2 * s2_);
  const real q = t * t * t * t * (2.5 + t * (-3.0 + t));
  return 2 * s2_ * q;
}
real RadialProfile::ramp_d1(real s) const {
  if (s <= -s2_) return 0;
  if (s >= s2_) return 1;
  return smoothstep5((s + s2_) / (2 * s2_));
}
real RadialProfile::ramp_d2(real s) const {
  if (s <= -s2_ || s >= s2_) return 0;
  return smoothstep5_d1((s + s2_) / (2 * s2_)) / (2 * s2_);
}

real RadialProfile::value(real rho) const {
  const real x = std::fabs(rho);
  return (x * x - r0_ * r0_) - ramp(gap(x));
}
real RadialProfile::deriv(real rho) const {
  const real x = std::fabs(rho);
  return 2 * x - ramp_d1(gap(x)) * gap_d1(x);
}
real RadialProfile::second(real rho) const {
  const real x = std::fabs(rho);
  const real g = gap(x), g1 = gap_d1(x);
  return 2 - ramp_d2(g) * g1 * g1 - ramp_d1(g) * gap_d2(x);
}
real RadialProfile::laplacian(real rho) const {
  const real x = std::fabs(rho);
  if (x < 1e-8) return 2 * second(0.0);
  return second(x) + deriv(x) / x;
}

RadialProfile build_psi(real r0, real smoothing_width) {
  if (!(r0 > 0 && r0 < 1.0 / 3.0)) throw ConstraintViolation("r0 must lie in (0, 1/3)");
  if (!(smoothing_width > 0 && smoothing_width < 1))
    throw ConstraintViolation("smoothing width must lie in (0,1)");

  RadialProfile psi;
  psi.r0_ = r0;
  // symmetric gap window; |gap| at the interval ends bounds the usable size
  const real gl = psi.gap(r0 / 2);  // negative (quadratic branch active)
  const real gr = psi.gap(r0);     // positive (log branch active)
  if (!(gl < 0 && gr > 0))
    throw ConstraintViolation("branches do not cross inside (r0/2, r0)");
  psi.s2_ = smoothing_width * std::min(-gl, gr);

  // locate zone bounds and the branch crossing by bisection (gap is
  // strictly increasing on (0,1))
  auto solve_gap = [&](real target) {
    real lo = r0 / 2, hi = r0;
    for (int it = 0; it < 200; ++it) {
      const real mid = 0.5 * (lo + hi);
      if (psi.gap(mid) < target) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  psi.x1_ = solve_gap(-psi.s2_);
  psi.x2_ = solve_gap(psi.s2_);
  psi.cross_ = solve_gap(0.0);
  if (!(r0 / 2 < psi.x1_ && psi.x2_ < r0))
    throw ConstraintViolation("smoothing zone leaves (r0/2, r0)");

  // re-verify the Laplacian bullets on a radial grid
  const int kGrid = 20000;
  for (int i = 0; i <= kGrid; ++i) {
    const real x = 0.999 * i / kGrid;
    const real lap = psi.laplacian(x);
    if (lap > 4.0 + 1e-9)
      throw ConstraintViolation("laplacian above 4 at rho=" + fmt17(x));
    if (x >= r0 && lap > -4.0 + 1e-9)
      throw ConstraintViolation("laplacian above -4 at rho=" + fmt17(x));
    if (x <= r0 / 2 && std::fabs(lap - 4.0) > 1e-9)
      throw ConstraintViolation("laplacian differs from 4 at rho=" + fmt17(x));
  }
  return psi;
}

// ------------------------------------------------------------------ chi

real Cutoff::value(real t) const {
  const real u = std::fabs(t);
  if (u <= 1.0) return 1.0;
  if (u >= kB) return 0.0;
  return smoothstep5((kB - u) / (kB - 1.0));
}
real Cutoff::deriv(real t) const {
  const real u = std::fabs(t);
  if (u <= 1.0 || u >= kB) return 0.0;
  const real sign = (t < 0) ? -1.0 : 1.0;
  return -sign * smoothstep5_d1((kB - u) / (kB - 1.0)) / (kB - 1.0);
}
real Cutoff::second(real t) const {
  const real u = std::fabs(t);
  if (u <= 1.0 || u >= kB) return 0.0;
  return smoothstep5_d2((kB - u) / (kB - 1.0)) / ((kB - 1.0) * (kB - 1.0));
}
real Cutoff::norm_second() const {
  // sup |S5''| = 10/sqrt(3) at the interior extrema of the quintic step
  return (10.0 / std::sqrt(3.0)) / ((kB - 1.0) * (kB - 1.0));
}

real CapField::value(real x, real y) const {
  const real c = chi.value(y / r0);
  if (c == 0.0) return 0.0;
  return f->eval(x / r0).value * c;
}

// ----------------------------------------------------------------- fields

std::string to_string(PointClass c) {
  switch (c) {
    case PointClass::StrictlyPseudoconvex: return "PSC+";
    case PointClass::StrictlyPseudoconcave: return "PSC-";
    default: return "IND";
  }
}

real ScalarField2::laplacian_fd(real x, real y, real h) const {
  const real c = value(x, y);
  return (value(x + h, y) + value(x - h, y) + value(x, y + h) + value(x, y - h) - 4 * c) /
         (h * h);
}

real HalfPsiField::value(real x, real y) const {
  return 0.5 * psi_.value(std::hypot(x, y));
}
void HalfPsiField::gradient(real x, real y, real* gx, real* gy) const {
  const real rho = std::hypot(x, y);
  if (rho < 1e-14) { *gx = 0; *gy = 0; return; }
  const real d = 0.5 * psi_.deriv(rho) / rho;
  *gx = d * x;
  *gy = d * y;
}
std::optional<real> HalfPsiField::laplacian_exact(real x, real y) const {
  return 0.5 * psi_.laplacian(std::hypot(x, y));
}
bool HalfPsiField::hessian_exact(real x, real y, real* fxx, real* fxy, real* fyy) const {
  const real rho = std::hypot(x, y);
  if (rho < 1e-12) {
    const real s = 0.5 * psi_.second(0.0);
    *fxx = s; *fyy = s; *fxy = 0;
    return true;
  }
  const real s = 0.5 * psi_.second(rho);
  const real d = 0.5 * psi_.deriv(rho) / rho;
  const real cx = x / rho, cy = y / rho;
  *fxx = s * cx * cx + d * cy * cy;
  *fyy = s * cy * cy + d * cx * cx;
  *fxy = (s - d) * cx * cy;
  return true;
}

real CapGraphField::value(real x, real y) const {
  return base_.value(x, y) + cap_.value(x, y);
}
void CapGraphField::gradient(real x, real y, real* gx, real* gy) const {
  base_.gradient(x, y, gx, gy);
  const real r0 = cap_.r0;
  const real u = x / r0, t = y / r0;
  const real f = cap_.f->eval(u).value;
  const real fp = cap_.f->deriv(u);
  *gx += fp * cap_.chi.value(t) / r0;
  *gy += f * cap_.chi.deriv(t) / r0;
}
std::optional<real> CapGraphField::laplacian_exact(real x, real y) const {
  const real r0 = cap_.r0;
  const real u = x / r0, t = y / r0;
  const real base = *base_.laplacian_exact(x, y);
  // cap identically zero in a neighborhood: outside the bump columns or
  // outside the cutoff support
  if (std::fabs(u) > 1.0 + 1e-12 || std::fabs(t) > cap_.chi.support_hi() + 1e-12)
    return base;
  const CantorLocation loc = cap_.f->locate(u);
  if (!loc.in_open_set) return std::nullopt;
  const real fval = cap_.f->eval(u).value;
  const real fsec = cap_.f->second_on_plateau(u);
  return base + (fsec * cap_.chi.value(t) + fval * cap_.chi.second(t)) / (r0 * r0);
}
bool CapGraphField::hessian_exact(real x, real y, real* fxx, real* fxy, real* fyy) const {
  if (!base_.hessian_exact(x, y, fxx, fxy, fyy)) return false;
  const real r0 = cap_.r0;
  const real u = x / r0, t = y / r0;
  if (std::fabs(u) > 1.0 + 1e-12 || std::fabs(t) > cap_.chi.support_hi() + 1e-12)
    return true;
  const CantorLocation loc = cap_.f->locate(u);
  if (!loc.in_open_set) return false;
  const real fval = cap_.f->eval(u).value;
  const real fder = cap_.f->deriv(u);
  const real fsec = cap_.f->second_on_plateau(u);
  *fxx += fsec * cap_.chi.value(t) / (r0 * r0);
  *fxy += fder * cap_.chi.deriv(t) / (r0 * r0);
  *fyy += fval * cap_.chi.second(t) / (r0 * r0);
  return true;
}

// ----------------------------------------------------------- classify

Classification classify_point(const ScalarField2& field, cplx z0, real tol, real fd_step) {
  Classification c;
  const std::optional<real> lap = field.laplacian_exact(z0.real(), z0.imag());
  if (lap) {
    c.laplacian = *lap;
    c.exact = true;
  } else {
    c.laplacian = field.laplacian_fd(z0.real(), z0.imag(), fd_step);
    c.fd_step = fd_step;
  }
  if (c.laplacian < -tol) c.cls = PointClass::StrictlyPseudoconvex;
  else if (c.laplacian > tol) c.cls = PointClass::StrictlyPseudoconcave;
  return c;
}

namespace {

// first plateau column (level <= snap_depth) whose u-interval meets
// (ulo, uhi); returns the midpoint of the overlap
std::optional<real> plateau_in_window(const IntervalTree& tree, int snap_depth,
                                      real ulo, real uhi) {
  const int dmax = std::min(snap_depth, tree.depth());
  for (int n = 0; n <= dmax; ++n) {
    const IntervalTree::Level& lv = tree.level(n);
    const real half = lv.p / 4.0;
    // centers are sorted; binary search the window
    auto lo = std::lower_bound(lv.centers.begin(), lv.centers.end(), ulo - half);
    for (auto it = lo; it != lv.centers.end() && *it - half < uhi; ++it) {
      const real jlo = std::max(ulo, *it - half);
      const real jhi = std::min(uhi, *it + half);
      if (jlo < jhi) return 0.5 * (jlo + jhi);
    }
  }
  return std::nullopt;
}

CellRecord classify_cell(const ScalarField2& field, const GridSpec& grid,
                         const CantorBumpFn* cap_fn, real r0, int snap_depth, real tol,
                         int ix, int iy) {
  CellRecord rec;
  const real cell = 2.0 * grid.extent / grid.n;
  const real xc = -grid.extent + (ix + 0.5) * cell;
  const real yc = -grid.extent + (iy + 0.5) * cell;
  rec.x = xc;
  rec.y = yc;
  if (std::hypot(xc, yc) >= grid.extent) return rec;  // not covered
  rec.covered = true;

  Classification c = classify_point(field, cplx(xc, yc), tol, cell / 4);
  if (!c.exact && cap_fn) {
    // snap the abscissa to a plateau column crossing this cell
    const real ulo = (xc - cell / 2) / r0, uhi = (xc + cell / 2) / r0;
    const std::optional<real> u = plateau_in_window(cap_fn->tree(), snap_depth, ulo, uhi);
    if (u) {
      const real xs = *u * r0;
      if (std::hypot(xs, yc) < grid.extent) {
        c = classify_point(field, cplx(xs, yc), tol, cell / 4);
        rec.x = xs;
      }
    }
  }
  rec.laplacian = c.laplacian;
  rec.cls = c.cls;
  rec.exact = c.exact;
  return rec;
}

}  // namespace

ClassificationMap scan_boundary(const ScalarField2& field, const GridSpec& grid,
                                const CantorBumpFn* cap_fn, real r0, int snap_depth,
                                real tol, bool parallel) {
  ClassificationMap map;
  map.grid = grid;
  map.cells.resize(static_cast<size_t>(grid.n) * grid.n);

  const int n = grid.n;
  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix)
        map.cells[static_cast<size_t>(iy) * n + ix] =
            classify_cell(field, grid, cap_fn, r0, snap_depth, tol, ix, iy);
  } else {
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix)
        map.cells[static_cast<size_t>(iy) * n + ix] =
            classify_cell(field, grid, cap_fn, r0, snap_depth, tol, ix, iy);
  }

  for (const CellRecord& rec : map.cells) {
    if (!rec.covered) continue;
    switch (rec.cls) {
      case PointClass::StrictlyPseudoconvex: ++map.count_convex; break;
      case PointClass::StrictlyPseudoconcave: ++map.count_concave; break;
      default: ++map.count_indeterminate; break;
    }
  }

  // density at the 2x-coarsened resolution
  map.dense_at_coarse = true;
  for (int by = 0; by < n / 2 && map.dense_at_coarse; ++by) {
    for (int bx = 0; bx < n / 2; ++bx) {
      bool any_covered = false, any_convex = false;
      for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx) {
          const CellRecord& rec = map.at(2 * bx + dx, 2 * by + dy);
          any_covered |= rec.covered;
          any_convex |= rec.covered && rec.cls == PointClass::StrictlyPseudoconvex;
        }
      if (any_covered && !any_convex) {
        map.dense_at_coarse = false;
        break;
      }
    }
  }
  return map;
}

bool HartogsDomain::contains(cplx z, cplx w) const {
  if (std::abs(z) >= 1.0) return false;
  const real aw = std::abs(w);
  if (aw == 0.0) return true;
  return std::log(aw) < graph->value(z.real(), z.imag());
}

}  // namespace scv
