#ifndef SCV_BUMP_HPP
#define SCV_BUMP_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scv/core.hpp"

namespace scv {

/// Even C^2 bump: exactly 1 - 4x^2 on |x| <= 1/4, a quintic decay to zero
/// on [1/4, 1/4 + width], zero beyond. Support is inside [-3/4, 3/4] and
/// the function is non-increasing on [0, 3/4].
///
/// C3 = sup |b'| and C4 = sup b'' are measured on a dense grid at
/// construction; b'' >= -8 everywhere (the quadratic core attains it).
class BumpProfile {
 public:
  static constexpr real kQuadraticRadius = 0.25;
  static constexpr real kSupportRadius = 0.75;

  real transition_width() const { return width_; }
  real c3() const { return c3_; }
  real c4() const { return c4_; }

  real value(real x) const;
  real deriv(real x) const;
  real second(real x) const;

  /// Same polynomial evaluated at a wide-precision argument. Used by the
  /// finite-difference cross-checks, whose stencil at steps ~1e-5 p_n
  /// carries a signal far below double rounding noise.
  template <typename W>
  W value_wide(W u) const {
    if (u < W(0)) u = -u;
    if (u <= W(kQuadraticRadius)) return W(1) - W(4) * u * u;
    const W t = (u - W(kQuadraticRadius)) / W(width_);
    if (t >= W(1)) return W(0);
    W v(0);
    for (int k = 5; k >= 0; --k) v = v * t + W(h_[k]);
    return v;
  }

  /// Stub profile carrying given derivative bounds; parameter solving only
  /// needs C3/C4, so tests can exercise schedules for hypothetical bumps.
  static BumpProfile with_bounds(real c3, real c4);

 private:
  friend BumpProfile build_base_bump(real transition_width);
  real width_ = 0.5;
  std::array<real, 6> h_{};  // quintic glue coefficients in t = (x - 1/4)/width
  real c3_ = 0, c4_ = 0;
  bool stub_ = false;
};

/// Builds the profile and verifies its invariants on a dense grid.
/// Throws ConstraintViolation if b'' dips below -8 or monotonicity fails,
/// which happens when the joining zone is too narrow.
BumpProfile build_base_bump(real transition_width = 0.5);

/// Geometric layer schedule: a_n = a0 gamma^n, p_n = p0 delta^n with
/// a_n / p_n^2 = B A^n, B = C2/4, A = gamma/delta^2.
struct ParamSchedule {
  real eps = 0, c1 = 0, c2 = 0;
  real c3 = 0, c4 = 0;  // copied from the profile used to solve
  real a0 = 0, p0 = 0, gamma = 0, delta = 0;
  real big_a = 0, big_b = 0;

  real a(int n) const;
  real p(int n) const;
  /// sup |F - F_n| <= a0 gamma^{n+1} / (1 - gamma)
  real tail_bound(int depth) const;

  /// The five schedule constraints as exact inequality checks.
  bool geom_ok() const;        // a0 = B p0^2 and A = gamma/delta^2
  bool cond_a_ok() const;      // A > 1 + C4/4
  bool cond_c1_ok() const;     // gamma/delta < 1
  bool holder_ok() const;      // gamma * delta^(eps-2) <= 1
  bool supnorm_ok() const;     // a0/(1-gamma) < C1
  bool all_ok() const;
};

/// Solves for (gamma, delta, p0) given the target regularity and bounds.
/// Log-spaced feasibility search preferring the largest workable delta,
/// then p0 halving until the sup-norm constraint holds.
ParamSchedule solve_parameters(real eps, real c1, real c2, const BumpProfile& profile);

/// Nested dyadic interval tree. Level n holds 2^n open intervals of equal
/// length; the plateau J_{n,i} is the central closed interval of length
/// p_n/2, and the two children of I_{n,i} are the components of
/// I_{n,i} \ J_{n,i}.
class IntervalTree {
 public:
  struct Level {
    real length = 0;   // |I_{n,i}|, identical across i
    real p = 0;        // p_n
    std::vector<real> centers;
  };

  int depth() const { return static_cast<int>(levels_.size()) - 1; }
  const Level& level(int n) const { return levels_[static_cast<size_t>(n)]; }
  const std::vector<Level>& levels() const { return levels_; }

  /// interval bounds for a given (level, index)
  real lo(int n, int i) const { return levels_[n].centers[i] - levels_[n].length / 2; }
  real hi(int n, int i) const { return levels_[n].centers[i] + levels_[n].length / 2; }

 private:
  friend IntervalTree build_interval_tree(const ParamSchedule&, int);
  std::vector<Level> levels_;
};

IntervalTree build_interval_tree(const ParamSchedule& schedule, int depth);

/// Result of locating x against the open plateau set U = union of J_{n,i}°.
struct CantorLocation {
  bool in_open_set = false;
  int level = -1;      // plateau level when in_open_set
  int tree_depth = 0;  // decidability horizon otherwise
};

struct EvalResult {
  real value = 0;
  real tail_bound = 0;
};

/// F = sum of layers f_n, f_n(x) = sum_i a_n b((x - c_{n,i})/p_n).
/// Evaluation descends the interval tree, so each level contributes at
/// most one bump; cost O(depth).
class CantorBumpFn {
 public:
  CantorBumpFn(BumpProfile profile, ParamSchedule schedule, IntervalTree tree);

  const ParamSchedule& schedule() const { return schedule_; }
  const IntervalTree& tree() const { return tree_; }
  const BumpProfile& profile() const { return profile_; }
  int depth() const { return tree_.depth(); }

  EvalResult eval(real x, int depth) const;
  EvalResult eval(real x) const { return eval(x, depth()); }

  /// exact layerwise derivative of the depth-truncated sum
  real deriv(real x, int depth) const;
  real deriv(real x) const { return deriv(x, depth()); }

  /// Exact F'' at an interior plateau point (deeper layers vanish there);
  /// throws NotOnPlateau otherwise. If level_out is given it receives the
  /// plateau level.
  real second_on_plateau(real x, int* level_out = nullptr) const;

  /// Central finite differences computed layer by layer (the same sum in
  /// exact arithmetic, but it keeps roundoff at the scale of each layer
  /// instead of the scale of F).
  real fd_second(real x, real h) const;
  real fd_deriv(real x) const;  // 4th-order stencil, step scaled to the
                                // deepest bump support containing x

  CantorLocation locate(real x) const;

 private:
  struct ChainEntry {
    int level;
    real center;
    real p;
  };
  // chain of bump centers whose interval contains x, plus plateau hit info
  void descend(real x, std::vector<ChainEntry>& chain, int* plateau_level,
               bool* plateau_interior) const;

  BumpProfile profile_;
  ParamSchedule schedule_;
  IntervalTree tree_;
};

struct PairSampleSpec {
  int count = 100000;
  std::uint64_t seed = 1;
  real min_separation = 1e-13;
};

/// max over seeded pairs of |F'(x)-F'(y)| / |x-y|^(1-eps); pairs mix
/// uniform draws with geometrically small separations. Deterministic for a
/// fixed spec; the parallel path reduces with max (exact, order-free).
real holder_seminorm(const CantorBumpFn& fn, real eps, const PairSampleSpec& pairs,
                     int depth, bool parallel = true);

}  // namespace scv

#endif
