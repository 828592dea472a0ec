#include "scv/bump.hpp"

#include <algorithm>
#include <cmath>

#include "scv/errors.hpp"
#include "scv/linalg.hpp"
#include "scv/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace scv {

// ---------------------------------------------------------------- profile

real BumpProfile::value(real x) const {
  const real u = std::fabs(x);
  if (u <= kQuadraticRadius) return 1.0 - 4.0 * u * u;
  const real t = (u - kQuadraticRadius) / width_;
  if (t >= 1.0) return 0.0;
  real v = 0;
  for (int k = 5; k >= 0; --k) v = v * t + h_[k];
  return v;
}

real BumpProfile::deriv(real x) const {
  const real u = std::fabs(x);
  const real sign = (x < 0) ? -1.0 : 1.0;
  if (u <= kQuadraticRadius) return sign * (-8.0 * u);
  const real t = (u - kQuadraticRadius) / width_;
  if (t >= 1.0) return 0.0;
  real v = 0;
  for (int k = 5; k >= 1; --k) v = v * t + k * h_[k];
  return sign * v / width_;
}

real BumpProfile::second(real x) const {
  const real u = std::fabs(x);
  if (u <= kQuadraticRadius) return -8.0;
  const real t = (u - kQuadraticRadius) / width_;
  if (t >= 1.0) return 0.0;
  real v = 0;
  for (int k = 5; k >= 2; --k) v = v * t + k * (k - 1) * h_[k];
  return v / (width_ * width_);
}

BumpProfile BumpProfile::with_bounds(real c3, real c4) {
  BumpProfile b;
  b.c3_ = c3;
  b.c4_ = c4;
  b.stub_ = true;
  return b;
}

BumpProfile build_base_bump(real transition_width) {
  if (!(transition_width > 0.0) || transition_width > 0.5)
    throw ConstraintViolation("transition width must lie in (0, 1/2]");

  BumpProfile b;
  const real w = transition_width;
  b.width_ = w;
  // quintic h(t) on [0,1] matching the quadratic core at t=0 (value 3/4,
  // slope -2w, curvature -8w^2) and vanishing to second order at t=1
  b.h_[0] = 0.75;
  b.h_[1] = -2.0 * w;
  b.h_[2] = -4.0 * w * w;
  const real r1 = -(b.h_[0] + b.h_[1] + b.h_[2]);
  const real r2 = -(b.h_[1] + 2.0 * b.h_[2]);
  const real r3 = -2.0 * b.h_[2];
  std::vector<real> tail = solve_real(
      {{1, 1, 1}, {3, 4, 5}, {6, 12, 20}}, {r1, r2, r3});
  b.h_[3] = tail[0];
  b.h_[4] = tail[1];
  b.h_[5] = tail[2];

  // grid verification of the profile invariants
  const int kGrid = 20001;
  real c3 = 0, c4 = 0;
  real prev = b.value(0.0);
  for (int i = 0; i <= kGrid; ++i) {
    const real x = 0.75 * i / kGrid;
    const real v = b.value(x);
    const real d1 = b.deriv(x);
    const real d2 = b.second(x);
    if (v < -1e-12) throw ConstraintViolation("bump negative at x=" + fmt17(x));
    if (d2 < -8.0 - 1e-9)
      throw ConstraintViolation("bump curvature below -8 at x=" + fmt17(x));
    if (i > 0 && v > prev + 1e-12)
      throw ConstraintViolation("bump not decreasing at x=" + fmt17(x));
    prev = v;
    c3 = std::max(c3, std::fabs(d1));
    c4 = std::max(c4, d2);
  }
  b.c3_ = c3;
  b.c4_ = c4;
  return b;
}

// --------------------------------------------------------------- schedule

real ParamSchedule::a(int n) const { return a0 * std::pow(gamma, n); }
real ParamSchedule::p(int n) const { return p0 * std::pow(delta, n); }
real ParamSchedule::tail_bound(int depth) const {
  return a0 * std::pow(gamma, depth + 1) / (1.0 - gamma);
}

bool ParamSchedule::geom_ok() const {
  return std::fabs(a0 - big_b * p0 * p0) <= 1e-12 * a0 &&
         std::fabs(big_a - gamma / (delta * delta)) <= 1e-12 * big_a;
}
bool ParamSchedule::cond_a_ok() const { return big_a > 1.0 + c4 / 4.0; }
bool ParamSchedule::cond_c1_ok() const { return gamma / delta < 1.0; }
bool ParamSchedule::holder_ok() const {
  return gamma * std::pow(delta, eps - 2.0) <= 1.0;
}
bool ParamSchedule::supnorm_ok() const { return a0 / (1.0 - gamma) < c1; }
bool ParamSchedule::all_ok() const {
  return geom_ok() && cond_a_ok() && cond_c1_ok() && holder_ok() && supnorm_ok();
}

ParamSchedule solve_parameters(real eps, real c1, real c2, const BumpProfile& profile) {
  if (!(eps > 0.0 && eps < 1.0)) throw Infeasible("eps must lie in (0,1)");
  if (!(c1 > 0.0 && c2 > 0.0)) throw Infeasible("C1 and C2 must be positive");

  const real c4 = profile.c4();
  const real hurdle = 1.0 + c4 / 4.0;

  // delta must satisfy delta^(-eps) > hurdle so that a feasible gamma
  // window ((hurdle) delta^2, delta^(2-eps)] exists; search a log grid
  // downward from the cap, preferring the largest feasible delta.
  const real cap = std::min(0.49, std::pow(hurdle, -1.0 / eps));
  ParamSchedule s;
  s.eps = eps;
  s.c1 = c1;
  s.c2 = c2;
  s.c3 = profile.c3();
  s.c4 = c4;
  s.big_b = c2 / 4.0;

  bool found = false;
  for (int k = 0; k < 400 && !found; ++k) {
    const real delta = cap * std::pow(0.97, k);
    const real lo = hurdle * delta * delta;
    const real hi = std::min(std::pow(delta, 2.0 - eps), 0.999 * delta);
    if (!(lo < hi)) continue;
    const real gamma = std::sqrt(lo * hi);  // margin on both sides
    if (!(gamma > 0.0 && gamma < 1.0)) continue;
    s.delta = delta;
    s.gamma = gamma;
    s.big_a = gamma / (delta * delta);
    if (s.big_a > hurdle && gamma / delta < 1.0 &&
        gamma * std::pow(delta, eps - 2.0) <= 1.0)
      found = true;
  }
  if (!found) throw Infeasible("no (gamma, delta) pair for eps=" + fmt17(eps));

  real p0 = 0.49;
  while (s.big_b * p0 * p0 / (1.0 - s.gamma) >= c1) {
    p0 *= 0.5;
    if (p0 < 1e-150) throw Infeasible("p0 underflow while fitting sup norm");
  }
  s.p0 = p0;
  s.a0 = s.big_b * p0 * p0;

  if (!s.all_ok()) throw Infeasible("solved schedule fails its own checks");
  return s;
}

// ------------------------------------------------------------------- tree

IntervalTree build_interval_tree(const ParamSchedule& schedule, int depth) {
  if (depth < 0) throw ConstraintViolation("depth must be >= 0");
  IntervalTree t;
  t.levels_.resize(static_cast<size_t>(depth) + 1);

  t.levels_[0].length = 2.0;
  t.levels_[0].p = schedule.p(0);
  t.levels_[0].centers = {0.0};

  for (int n = 0; n <= depth; ++n) {
    IntervalTree::Level& lv = t.levels_[n];
    lv.p = schedule.p(n);
    if (!(lv.p < lv.length / 2.0))
      throw ConstraintViolation("p_n >= |I_n|/2 at level " + std::to_string(n));
    if (n == depth) break;

    IntervalTree::Level& next = t.levels_[n + 1];
    next.length = (lv.length - lv.p / 2.0) / 2.0;
    next.centers.reserve(lv.centers.size() * 2);
    for (real c : lv.centers) {
      const real lo = c - lv.length / 2.0;
      const real hi = c + lv.length / 2.0;
      next.centers.push_back((lo + (c - lv.p / 4.0)) / 2.0);
      next.centers.push_back(((c + lv.p / 4.0) + hi) / 2.0);
    }
    if (!(next.length < lv.length / 2.0))
      throw ConstraintViolation("length halving failed at level " + std::to_string(n));
  }
  return t;
}

// --------------------------------------------------------------- function

CantorBumpFn::CantorBumpFn(BumpProfile profile, ParamSchedule schedule, IntervalTree tree)
    : profile_(std::move(profile)), schedule_(std::move(schedule)), tree_(std::move(tree)) {}

void CantorBumpFn::descend(real x, std::vector<ChainEntry>& chain, int* plateau_level,
                           bool* plateau_interior) const {
  chain.clear();
  if (plateau_level) *plateau_level = -1;
  if (plateau_interior) *plateau_interior = false;
  if (!(x > -1.0 && x < 1.0)) return;

  real c = 0.0;
  for (int n = 0; n <= tree_.depth(); ++n) {
    const IntervalTree::Level& lv = tree_.level(n);
    chain.push_back({n, c, lv.p});
    const real off = x - c;
    if (std::fabs(off) <= lv.p / 4.0) {
      if (plateau_level) *plateau_level = n;
      if (plateau_interior) *plateau_interior = std::fabs(off) < lv.p / 4.0;
      return;
    }
    if (n == tree_.depth()) return;
    // child centers derived exactly as in build_interval_tree
    const real lo = c - lv.length / 2.0;
    const real hi = c + lv.length / 2.0;
    c = (off < 0) ? (lo + (c - lv.p / 4.0)) / 2.0 : ((c + lv.p / 4.0) + hi) / 2.0;
  }
}

EvalResult CantorBumpFn::eval(real x, int depth) const {
  EvalResult r;
  r.tail_bound = schedule_.tail_bound(depth);
  std::vector<ChainEntry> chain;
  descend(x, chain, nullptr, nullptr);
  real sum = 0;
  for (const ChainEntry& e : chain) {
    if (e.level > depth) break;
    sum += schedule_.a(e.level) * profile_.value((x - e.center) / e.p);
  }
  r.value = sum;
  return r;
}

real CantorBumpFn::deriv(real x, int depth) const {
  std::vector<ChainEntry> chain;
  descend(x, chain, nullptr, nullptr);
  real sum = 0;
  for (const ChainEntry& e : chain) {
    if (e.level > depth) break;
    sum += schedule_.a(e.level) / e.p * profile_.deriv((x - e.center) / e.p);
  }
  return sum;
}

real CantorBumpFn::second_on_plateau(real x, int* level_out) const {
  std::vector<ChainEntry> chain;
  int plateau = -1;
  bool interior = false;
  descend(x, chain, &plateau, &interior);
  if (plateau < 0 || !interior)
    throw NotOnPlateau("x=" + fmt17(x) + " up to depth " + std::to_string(tree_.depth()));
  if (level_out) *level_out = plateau;
  real sum = 0;
  for (const ChainEntry& e : chain) {
    const real p2 = e.p * e.p;
    sum += schedule_.a(e.level) / p2 * profile_.second((x - e.center) / e.p);
  }
  return sum;
}

#ifdef __SIZEOF_FLOAT128__
using wide = __float128;
#else
using wide = long double;
#endif

real CantorBumpFn::fd_second(real x, real h) const {
  // The second-difference signal F''*h^2 at deep levels sits far below
  // double rounding noise (values ~a0 vs h ~ 1e-5 p_n), so the stencil is
  // evaluated in wide precision; doubles embed exactly, so this is still
  // the central difference of the same F at the same step.
  std::vector<ChainEntry> chain;
  descend(x, chain, nullptr, nullptr);
  const wide wx = x, wh = h;
  auto total = [&](wide t) {
    wide s = 0;
    for (const ChainEntry& e : chain) {
      const wide u = (t - static_cast<wide>(e.center)) / static_cast<wide>(e.p);
      s += static_cast<wide>(schedule_.a(e.level)) * profile_.value_wide(u);
    }
    return s;
  };
  const wide num = total(wx + wh) - 2 * total(wx) + total(wx - wh);
  return static_cast<real>(num / (wh * wh));
}

real CantorBumpFn::fd_deriv(real x) const {
  std::vector<ChainEntry> chain;
  descend(x, chain, nullptr, nullptr);
  // The deepest chain level sets the step: descent stops on a plateau (or
  // at max depth), and any deeper bump support sits at least half a child
  // interval away, so a stencil at 1e-4 p cannot straddle unseen layers.
  const real scale = chain.empty() ? schedule_.p(0) : chain.back().p;
  const wide wh = 1e-4 * scale;
  const wide wx = x;
  auto total = [&](wide t) {
    wide s = 0;
    for (const ChainEntry& e : chain) {
      const wide u = (t - static_cast<wide>(e.center)) / static_cast<wide>(e.p);
      s += static_cast<wide>(schedule_.a(e.level)) * profile_.value_wide(u);
    }
    return s;
  };
  return static_cast<real>((total(wx + wh) - total(wx - wh)) / (2 * wh));
}

CantorLocation CantorBumpFn::locate(real x) const {
  std::vector<ChainEntry> chain;
  int plateau = -1;
  bool interior = false;
  descend(x, chain, &plateau, &interior);
  CantorLocation loc;
  loc.tree_depth = tree_.depth();
  if (plateau >= 0 && interior) {
    loc.in_open_set = true;
    loc.level = plateau;
  }
  return loc;
}

// ----------------------------------------------------------- Holder scan

real holder_seminorm(const CantorBumpFn& fn, real eps, const PairSampleSpec& pairs,
                     int depth, bool parallel) {
  const real expo = 1.0 - eps;
  const int n = pairs.count;

  // pregenerate pairs so the parallel and serial paths see identical data
  std::vector<real> xs(n), ys(n);
  {
    Rng rng(pairs.seed);
    for (int i = 0; i < n; ++i) {
      const real x = rng.uniform(-1.0, 1.0);
      real y;
      if (i % 2 == 0) {
        y = rng.uniform(-1.0, 1.0);
      } else {
        const real mag = std::pow(10.0, rng.uniform(-9.0, -0.3));
        const real d = (rng.unit() < 0.5) ? -mag : mag;
        y = std::clamp(x + d, -1.0, 1.0);
      }
      xs[i] = x;
      ys[i] = y;
    }
  }

  real best = 0.0;
  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for reduction(max : best) schedule(static)
#endif
    for (int i = 0; i < n; ++i) {
      const real sep = std::fabs(xs[i] - ys[i]);
      if (sep < pairs.min_separation) continue;
      const real q =
          std::fabs(fn.deriv(xs[i], depth) - fn.deriv(ys[i], depth)) / std::pow(sep, expo);
      best = std::max(best, q);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      const real sep = std::fabs(xs[i] - ys[i]);
      if (sep < pairs.min_separation) continue;
      const real q =
          std::fabs(fn.deriv(xs[i], depth) - fn.deriv(ys[i], depth)) / std::pow(sep, expo);
      best = std::max(best, q);
    }
  }
  return best;
}

}  // namespace scv
