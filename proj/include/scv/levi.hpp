#ifndef SCV_LEVI_HPP
#define SCV_LEVI_HPP

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "scv/core.hpp"
#include "scv/domain.hpp"
#include "scv/field.hpp"
#include "scv/linalg.hpp"

namespace scv {

/// Twice-differentiable defining function with Wirtinger-derivative
/// oracles: grad_j = dr/dz_j, the Hermitian block d2r/dz_j dzbar_k, and the
/// holomorphic block d2r/dz_j dz_k. Analytic oracles where supplied;
/// otherwise central finite differences with one Richardson level.
struct DefiningFn {
  int dim = 0;
  bool analytic = false;
  std::function<real(const cvec&)> value;
  std::function<cvec(const cvec&)> grad;
  std::function<HermMatrix(const cvec&)> hermitian;
  std::function<std::vector<cvec>(const cvec&)> holomorphic;  // symmetric matrix rows

  cvec unit_normal(const cvec& z) const;  // grad / |grad| (as a real 2n vector)
};

/// r = |z|^2 - R^2
DefiningFn ball_defining(int dim, real radius = 1.0);
/// r = |z1|^2 + |z2|^2 + c Re(z2^2) - R^2 (|c| < 1 keeps the gradient alive)
DefiningFn quadric_defining(real c, real radius = 1.0);
/// r = |z1|^2 - |z2|^2 + shift
DefiningFn saddle_defining(real shift);
/// r = Re z1 (flat model)
DefiningFn halfspace_defining(int dim);
/// Hartogs graph r(z,w) = log|w| - phi(z); exact wherever the field has an
/// exact Hessian, finite differences elsewhere.
DefiningFn hartogs_graph_defining(std::shared_ptr<const ScalarField2> field);
/// Finite-difference-backed oracle from a plain real function on C^n.
DefiningFn fd_defining(int dim, std::function<real(const cvec&)> f, real scale = 1.0);

/// Levi form sum_{jk} d2r/dz_j dzbar_k a_j conj(a_k); the imaginary residue
/// must stay below 1e-8 |a|^2 (Hermitian symmetry).
real levi_form(const DefiningFn& r, const cvec& z, const cvec& a);

/// Shifts the first coordinate of a so that sum_j a_j dr/dz_j(z) = 0.
/// Throws DegenerateGradient when dr/dz_1 is too small.
cvec tangent_adjust(const DefiningFn& r, const cvec& z, const cvec& a,
                    real min_dz1 = 1e-10);

/// Second-order analytic disc through a boundary point:
///   phi_z(lambda) = z + lambda a(z) + lambda^2 b1 e_1,
/// with b1 = -(sum_{jk} d2r/dz_j dz_k a_j a_k) / (2 dr/dz_1) chosen so the
/// pure second-order holomorphic term of r(phi_z) cancels and
///   r(phi_z(lambda)) = |lambda|^2 (levi_form(z, a(z)) + o(1)).
struct AnalyticDisc {
  cvec base;       // z
  cvec direction;  // a(z), complex-tangent at z
  cplx b1;

  cvec at(cplx lambda) const;
};

AnalyticDisc levi_disc(const DefiningFn& r, const cvec& z, const cvec& a,
                       real boundary_tol = 1e-8);

struct ResidualRow {
  real rho = 0;
  real sup_residual = 0;   // sup over the circle of |r(phi)/|l|^2 - L|
  real mean_quotient = 0;  // circle mean of r(phi)/|l|^2
};

struct ResidualReport {
  std::vector<ResidualRow> rows;  // radii descending
  real levi_value = 0;
  real loglog_slope = 0;     // least-squares slope of log sup_residual vs log rho,
                             // over rows above the rounding floor
  real intercept = 0;        // Richardson-extrapolated mean quotient at rho -> 0
  bool vanishing = false;    // every residual sits at the rounding floor
                             // (exact second-order surfaces: the identity is exact)

  bool decays(real min_slope = 0.9) const { return vanishing || loglog_slope >= min_slope; }
};

ResidualReport taylor_residual(const DefiningFn& r, const AnalyticDisc& disc,
                               const std::vector<real>& radii, int circle_points = 64);

struct ConcaveDirection {
  cvec direction;
  real eigenvalue = 0;
};

/// Minimal eigenvalue of the Levi form restricted to the complex tangent
/// space, via an orthonormal tangent frame; empty when the restricted form
/// is >= -tol.
std::optional<ConcaveDirection> find_concave_direction(const DefiningFn& r, const cvec& z,
                                                       real tol = 1e-8);

/// the restricted minimal eigenvalue itself (sign included)
real tangent_levi_min(const DefiningFn& r, const cvec& z);

struct DiscFamilyReport {
  real center_distance = 0;
  real edge_distance = 0;  // min over sampled |zeta| = rho
  bool violation = false;  // center strictly closer to the boundary
};

/// Continuity-principle probe: samples the disc on rings |zeta| <= rho and
/// compares boundary distances. Throws DiscExits if a sample leaves dom.
DiscFamilyReport continuity_violation(const DomainSpec& dom,
                                      const std::function<cvec(cplx)>& disc, real rho,
                                      int edge_points = 128, int rings = 8);

}  // namespace scv

#endif
