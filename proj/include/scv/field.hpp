#ifndef SCV_FIELD_HPP
#define SCV_FIELD_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "scv/bump.hpp"
#include "scv/core.hpp"

namespace scv {

/// Radial profile psi: equals min{log(1-x^2), x^2 - r0^2} outside a
/// transition zone strictly inside (r0/2, r0). Inside the zone the corner
/// of the min is rounded by subtracting a convex C^3 ramp of the branch
/// gap, which keeps the planar Laplacian <= 4 pointwise:
///   laplacian = 4 exactly for |z| below the zone,
///   laplacian <= -4 for |z| >= r0 (pure logarithmic branch),
///   laplacian <= 4 everywhere.
class RadialProfile {
 public:
  RadialProfile() = default;

  real r0() const { return r0_; }
  real zone_lo() const { return x1_; }
  real zone_hi() const { return x2_; }
  real crossing() const { return cross_; }

  real value(real rho) const;
  real deriv(real rho) const;
  real second(real rho) const;
  /// planar Laplacian of psi(|z|): psi'' + psi'/rho (limit 2 psi''(0) at 0)
  real laplacian(real rho) const;

 private:
  friend RadialProfile build_psi(real r0, real smoothing_width);
  real r0_ = 0.3;
  real s2_ = 0;          // half-width of the symmetric gap window
  real x1_ = 0, x2_ = 0; // zone bounds in rho
  real cross_ = 0;       // branch crossing abscissa

  real gap(real rho) const;        // (x^2-r0^2) - log(1-x^2)
  real gap_d1(real rho) const;
  real gap_d2(real rho) const;
  real ramp(real s) const;         // convex C^3 ramp with ramp=max(s,0) outside
  real ramp_d1(real s) const;
  real ramp_d2(real s) const;
};

/// smoothing_width in (0,1) scales the gap window; the transition zone is
/// strictly inside (r0/2, r0) whenever smoothing_width < 1. Laplacian
/// bullets are re-verified on a radial grid (ConstraintViolation on
/// failure).
RadialProfile build_psi(real r0, real smoothing_width = 0.8);

/// Smooth even cutoff: 1 on [-1,1], quintic decay on [1, 1.95], 0 beyond;
/// support inside (-2,2). norm_second() is the measured sup |chi''|.
class Cutoff {
 public:
  real value(real t) const;
  real deriv(real t) const;
  real second(real t) const;
  real norm_second() const;
  real support_hi() const { return kB; }

 private:
  static constexpr real kB = 1.95;
};

/// Cap field Phi(x+iy) = F(x/r0) chi(y/r0); nonnegative, vanishes for
/// |x| >= r0, bounded by C1.
struct CapField {
  std::shared_ptr<const CantorBumpFn> f;
  Cutoff chi;
  real r0 = 0.3;

  real value(real x, real y) const;
};

enum class PointClass { StrictlyPseudoconvex, StrictlyPseudoconcave, Indeterminate };

std::string to_string(PointClass c);

/// Scalar field on the unit disc slice with evaluation, gradient and
/// Laplacian contracts. laplacian_exact is empty where the field is not
/// twice differentiable (off-plateau cap columns).
class ScalarField2 {
 public:
  virtual ~ScalarField2() = default;
  virtual real value(real x, real y) const = 0;
  virtual void gradient(real x, real y, real* gx, real* gy) const = 0;
  virtual std::optional<real> laplacian_exact(real x, real y) const = 0;
  /// 5-point finite-difference Laplacian fallback
  real laplacian_fd(real x, real y, real h) const;
  /// second partials where they exist (used by defining-function oracles)
  virtual bool hessian_exact(real x, real y, real* fxx, real* fxy, real* fyy) const = 0;
};

/// phi = psi(|z|)/2, the graph function of the carved ball.
class HalfPsiField : public ScalarField2 {
 public:
  explicit HalfPsiField(RadialProfile psi) : psi_(std::move(psi)) {}
  real value(real x, real y) const override;
  void gradient(real x, real y, real* gx, real* gy) const override;
  std::optional<real> laplacian_exact(real x, real y) const override;
  bool hessian_exact(real x, real y, real* fxx, real* fxy, real* fyy) const override;
  const RadialProfile& psi() const { return psi_; }

 private:
  RadialProfile psi_;
};

/// phi = psi(|z|)/2 + Phi(z), the capped graph function.
class CapGraphField : public ScalarField2 {
 public:
  CapGraphField(RadialProfile psi, CapField cap)
      : base_(std::move(psi)), cap_(std::move(cap)) {}
  real value(real x, real y) const override;
  void gradient(real x, real y, real* gx, real* gy) const override;
  std::optional<real> laplacian_exact(real x, real y) const override;
  bool hessian_exact(real x, real y, real* fxx, real* fxy, real* fyy) const override;

  const HalfPsiField& base() const { return base_; }
  const CapField& cap() const { return cap_; }

 private:
  HalfPsiField base_;
  CapField cap_;
};

/// Sign classification of the boundary point above z0 by the Laplacian of
/// the graph function: negative means strictly pseudoconvex. Falls back to
/// finite differences (step fd_step) when no exact value exists; then
/// |value| <= tol lands in Indeterminate.
struct Classification {
  PointClass cls = PointClass::Indeterminate;
  real laplacian = 0;
  bool exact = false;
  real fd_step = 0;
};

Classification classify_point(const ScalarField2& field, cplx z0, real tol = 1e-6,
                              real fd_step = 1e-4);

struct GridSpec {
  int n = 512;          // cells per side over [-extent, extent]^2
  real extent = 0.95;   // grid covers {|z| < extent}
};

struct CellRecord {
  real x = 0, y = 0;      // evaluation point (cell center, possibly snapped)
  real laplacian = 0;
  PointClass cls = PointClass::Indeterminate;
  bool exact = false;
  bool covered = false;   // cell center inside the covered disc
};

struct ClassificationMap {
  GridSpec grid;
  std::vector<CellRecord> cells;  // row-major, size n*n
  long count_convex = 0, count_concave = 0, count_indeterminate = 0;
  bool dense_at_coarse = false;   // every covered 2x-coarsened block holds a PSC+ cell

  const CellRecord& at(int ix, int iy) const {
    return cells[static_cast<size_t>(iy) * grid.n + ix];
  }
};

/// Classifies every covered cell. When the cell center has no exact
/// Laplacian, the scan snaps the abscissa to a plateau column crossing the
/// cell (levels up to snap_depth) so the verdict stays exact; cells with
/// no such column fall back to finite differences.
ClassificationMap scan_boundary(const ScalarField2& field, const GridSpec& grid,
                                const CantorBumpFn* cap_fn, real r0,
                                int snap_depth = 8, real tol = 1e-6,
                                bool parallel = true);

/// Hartogs domain over the unit disc: {(z,w) : |z|<1, log|w| < phi(z)}.
struct HartogsDomain {
  std::shared_ptr<const ScalarField2> graph;

  bool contains(cplx z, cplx w) const;
};

}  // namespace scv

#endif
