#ifndef SCV_LINALG_HPP
#define SCV_LINALG_HPP

#include <vector>

#include "scv/core.hpp"

namespace scv {

/// Dense Hermitian matrix, row-major.
class HermMatrix {
 public:
  HermMatrix() = default;
  explicit HermMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, cplx(0, 0)) {}

  int size() const { return n_; }
  cplx& at(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
  const cplx& at(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

  /// copies the upper triangle onto the lower one (conjugated)
  void symmetrize();

  std::vector<cplx>& data() { return a_; }
  const std::vector<cplx>& data() const { return a_; }

 private:
  int n_ = 0;
  std::vector<cplx> a_;
};

struct EighResult {
  std::vector<real> values;          // ascending
  std::vector<cvec> vectors;         // vectors[k] belongs to values[k]
};

/// Cyclic Jacobi sweeps with fixed (row-major) rotation order, so the
/// result is deterministic. Intended for the small matrices this project
/// produces (tangent Levi forms, Gram conditioning probes).
EighResult jacobi_eigh(const HermMatrix& m, int max_sweeps = 64, real tol = 1e-13);

/// In-place Cholesky factorization A = L L^H of a Hermitian positive
/// definite matrix; throws SingularGram when a pivot collapses.
void cholesky(HermMatrix& a);

/// Solves A x = b given the Cholesky factor produced by cholesky().
cvec cholesky_solve(const HermMatrix& chol, const cvec& b);

/// Solves the small dense real system M x = r (Gaussian elimination with
/// partial pivoting); used for polynomial coefficient fits.
std::vector<real> solve_real(std::vector<std::vector<real>> m, std::vector<real> r);

}  // namespace scv

#endif
