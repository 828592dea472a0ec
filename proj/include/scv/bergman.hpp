#ifndef SCV_BERGMAN_HPP
#define SCV_BERGMAN_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scv/core.hpp"
#include "scv/domain.hpp"
#include "scv/linalg.hpp"

namespace scv {

// ------------------------------------------------------- series kernels

/// Diagonal Bergman kernel of the radius-R disc via the monomial series;
/// terms are added until one falls below 1e-14 of the partial sum.
real disc_kernel(cplx z, real radius = 1.0);

/// Annulus kernel with Laurent monomials; k = -1 carries the log norm.
real annulus_kernel(cplx z, real r_in = 0.5, real r_out = 1.5);

/// squared monomial norms, exposed for oracle tests
real disc_monomial_norm2(int k, real radius);
real annulus_monomial_norm2(int k, real r_in, real r_out);

inline real product_kernel(real k_a, real k_b) { return k_a * k_b; }

// --------------------------------------------------------- basis family

/// Monomial-type family z1^j z2^k (j possibly negative on annulus-type
/// factors). dim 1 uses exponents_j only.
struct BasisFamily {
  int dim = 1;
  int j_min = 0, j_max = 8;   // first-coordinate exponents
  int k_min = 0, k_max = 0;   // second-coordinate exponents (dim 2)

  int size() const { return (j_max - j_min + 1) * (dim == 2 ? (k_max - k_min + 1) : 1); }
  void eval(const cvec& z, std::vector<cplx>& out) const;
  std::string key() const;
};

// --------------------------------------------------------- MC machinery

struct GramResult {
  HermMatrix full;                 // volume-weighted Gram over the domain
  std::vector<HermMatrix> batch;   // per-batch Grams (fixed order)
  std::vector<long> batch_accept;  // accepted samples per batch
  long total_draws = 0;
  real box_volume = 0;
  real volume_estimate = 0;
  mutable real condition_memo = -1;  // condition number of the regularized
                                     // Gram, filled on first use

  HermMatrix regularized(real eps_scale = 1e-10) const;
  real regularization(real eps_scale = 1e-10) const;
  real condition() const;  // computes and memoizes
};

/// Accumulates the Monte-Carlo Gram matrix of the basis over the domain by
/// uniform rejection from the bounding box. Batches are independent
/// streams derived from the master seed and combined in index order, so
/// the result is identical in serial and parallel runs.
GramResult mc_gram(const DomainSpec& dom, const BasisFamily& basis, long samples,
                   std::uint64_t seed, int batches = 10, bool parallel = true);

enum class KernelMethod { Series, MonteCarloGram };

struct KernelEstimate {
  cvec point;
  real value = 0;
  KernelMethod method = KernelMethod::MonteCarloGram;
  long samples = 0;
  real stderr_estimate = 0;
  std::string basis_key;
};

/// Extremal value sup |f(z)|^2 / ||f||^2 over the basis span, computed as
/// v* (G + eps I)^{-1} v from a precomputed Gram.
real gram_extremal_value(const GramResult& gram, const BasisFamily& basis, const cvec& z);
/// coefficient vector of the extremal unit-norm function at z
cvec gram_extremal_coeffs(const GramResult& gram, const BasisFamily& basis, const cvec& z);
/// Extremal of the subspace vanishing at the given points (reduced-kernel
/// Schur complement); value_out receives |f(at)| for the unit-norm result.
cvec gram_constrained_extremal(const GramResult& gram, const BasisFamily& basis,
                               const cvec& at, const std::vector<cvec>& zeros,
                               real* value_out);
/// evaluates a coefficient vector against the basis
cplx basis_apply(const BasisFamily& basis, const cvec& coeffs, const cvec& z);
/// Monte-Carlo L2 norm of a coefficient vector (from the Gram)
real gram_norm2(const GramResult& gram, const cvec& coeffs);

/// Full estimate with stderr from the 10 batch sub-estimates. Throws
/// SingularGram when the regularized Gram is still ill-conditioned.
KernelEstimate mc_gram_kernel(const DomainSpec& dom, const BasisFamily& basis,
                              const cvec& point, long samples, std::uint64_t seed,
                              const GramResult* precomputed = nullptr,
                              real cond_limit = 1e12);

// ---------------------------------------------------------- blow-up scan

enum class BlowupVerdict { Blowup, Bounded, Inconclusive };

struct BlowupReport {
  std::vector<real> t;         // 1 - 2^{-j}
  std::vector<real> estimate;
  std::vector<real> stderr_estimate;
  KernelMethod method = KernelMethod::MonteCarloGram;
  BlowupVerdict verdict = BlowupVerdict::Inconclusive;
};

/// Kernel estimates along path(t) for t = 1 - 2^{-j}, j = 1..steps.
/// Blowup: last three increasing and final > 10x first. Bounded: all
/// values within 2x the first.
BlowupReport blowup_scan(const DomainSpec& dom, const std::function<cvec(real)>& path,
                         const BasisFamily& basis, int steps, long samples,
                         std::uint64_t seed,
                         const std::function<real(const cvec&)>& series_oracle = nullptr,
                         const GramResult* precomputed = nullptr);

// -------------------------------------------------------------- caching

/// Loads a cached Gram keyed by (domain, basis, samples, seed, batches);
/// recomputes and stores on miss or checksum mismatch.
GramResult cached_gram(const std::string& cache_dir, const DomainSpec& dom,
                       const BasisFamily& basis, long samples, std::uint64_t seed,
                       int batches = 10, bool parallel = true);

std::string gram_cache_key(const DomainSpec& dom, const BasisFamily& basis, long samples,
                           std::uint64_t seed, int batches);

}  // namespace scv

#endif
