#ifndef SCV_WITNESS_HPP
#define SCV_WITNESS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "scv/bergman.hpp"
#include "scv/core.hpp"
#include "scv/domain.hpp"
#include "scv/levi.hpp"

namespace scv {

/// Local plurisubharmonic peak at a strictly pseudoconvex boundary point:
/// u_a = max(Re P, -s) inside the validity ball and -s elsewhere, where P
/// is the Levi polynomial of the exponentially tightened defining function
/// (e^{Kr} - 1)/K. K = 0 when the full complex Hessian is already positive
/// definite, so the ball keeps its textbook polynomial z1 - 1.
struct PshWitness {
  cvec base;            // boundary point a
  cvec linear;          // coefficients of (z - a)
  std::vector<cvec> quadratic;  // half the holomorphic Hessian
  real floor = 0.01;    // glue level s
  real radius = 0.3;    // validity radius
  real tighten = 0;     // the K used

  real peak_poly(const cvec& z) const;  // Re P
  real value(const cvec& z) const;      // max(Re P, -s) inside, -s outside
};

PshWitness levi_peak_function(const DefiningFn& r, const cvec& a,
                              const DomainSpec& dom, std::uint64_t seed,
                              real margin = 1e-6);

/// Increasing compacts D_j = {dist >= delta_j, |z| <= R_j}.
struct Exhaustion {
  std::vector<real> delta;
  std::vector<real> radius;

  bool contains(const DomainSpec& dom, const cvec& z, int j) const;
};

Exhaustion default_exhaustion(int count, real delta0 = 0.2, real radius0 = 4.0);

/// u = sup_j u_j / m_j with m_j = -(sampled sup of u_j over D_j).
struct SupWitness {
  std::vector<PshWitness> parts;
  std::vector<real> m;

  real value(const cvec& z) const;
};

SupWitness sup_regularized(const std::vector<PshWitness>& witnesses, const Exhaustion& exh,
                           const DomainSpec& dom, const std::vector<cvec>& samples);

struct PshProbeReport {
  int probes = 0;
  int violations = 0;
  real worst_gap = 0;  // max of u(center) - mean (positive = violation)
};

/// Circle sub-mean-value test on random complex lines: u(z) must not
/// exceed the 64-point circle mean by more than 1e-6 (1 + |u(z)|).
PshProbeReport psh_check(const std::function<real(const cvec&)>& u, const DomainSpec& dom,
                         int probes, std::uint64_t seed, bool parallel = true);

/// v = -log(-u); DomainError unless u < 0.
real neg_log_transform(real u_value);

struct GreedyLevel {
  int k = 0;
  cvec z;
  real dist = 0;           // dist(z_k, boundary)
  real d = 0;              // normalizer d_k = c dist(z_{k-1})^n
  real extremal = 0;       // |f_k(z_k)|
  real target = 0;         // d_k (k^3 + k^2 sum M_j)
  bool met = false;
  real m_bound = 0;        // M_k: max |g_k| over the later committed points
                           // (zero by the vanishing constraints)
  real near_sup = 0;       // diagnostic: sampled sup of |g_k| near a
  real h_at_z = 0;         // |h(z_k)| for the final h
};

struct GreedyTrace {
  std::vector<GreedyLevel> levels;
  cvec h_coeffs;           // h = sum g_j / j^2 in the basis span
  real h_norm = 0;         // MC L2 norm of h
  real c = 0;              // pi^n
};

/// Greedy construction of an L2 function growing along z_k -> a. Uses the
/// Gram extremal function at each z_k; throws GrowthTargetUnreachable when
/// the span cannot meet a level's target.
GreedyTrace greedy_unbounded_witness(const DomainSpec& dom, const BasisFamily& basis,
                                     const cvec& a, int levels, long samples,
                                     std::uint64_t seed);

}  // namespace scv

#endif
