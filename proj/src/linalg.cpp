#include "scv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scv/errors.hpp"

namespace scv {

void HermMatrix::symmetrize() {
  for (int i = 0; i < n_; ++i) {
    at(i, i) = cplx(at(i, i).real(), 0.0);
    for (int j = i + 1; j < n_; ++j) at(j, i) = std::conj(at(i, j));
  }
}

EighResult jacobi_eigh(const HermMatrix& m_in, int max_sweeps, real tol) {
  const int n = m_in.size();
  HermMatrix a = m_in;
  // accumulate the unitary transform column-wise: v[k] is eigenvector k
  std::vector<cvec> v(n, cvec(n, cplx(0, 0)));
  for (int i = 0; i < n; ++i) v[i][i] = 1.0;

  real fro = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) fro += std::norm(a.at(i, j));
  fro = std::sqrt(fro);
  if (fro == 0) fro = 1;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    real off = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::norm(a.at(p, q));
    if (std::sqrt(off) <= tol * fro) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cplx apq = a.at(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const real app = a.at(p, p).real();
        const real aqq = a.at(q, q).real();
        // complex Jacobi rotation: diagonalize the 2x2 block [app apq; apq* aqq]
        const real absapq = std::abs(apq);
        const cplx phase = apq / absapq;
        const real tau = (aqq - app) / (2.0 * absapq);
        const real t = (tau >= 0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                 : 1.0 / (tau - std::sqrt(1.0 + tau * tau)));
        const real c = 1.0 / std::sqrt(1.0 + t * t);
        const real s = t * c;
        const cplx sp = s * phase;  // rotation applied to columns p,q

        for (int k = 0; k < n; ++k) {
          const cplx akp = a.at(k, p), akq = a.at(k, q);
          a.at(k, p) = c * akp - std::conj(sp) * akq;
          a.at(k, q) = sp * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const cplx apk = a.at(p, k), aqk = a.at(q, k);
          a.at(p, k) = c * apk - sp * aqk;
          a.at(q, k) = std::conj(sp) * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const cplx vkp = v[p][k], vkq = v[q][k];
          v[p][k] = c * vkp - std::conj(sp) * vkq;
          v[q][k] = sp * vkp + c * vkq;
        }
      }
    }
  }

  EighResult res;
  res.values.resize(n);
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<real> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = a.at(i, i).real();
  std::sort(idx.begin(), idx.end(), [&](int i, int j) { return diag[i] < diag[j]; });
  res.vectors.resize(n);
  for (int k = 0; k < n; ++k) {
    res.values[k] = diag[idx[k]];
    res.vectors[k] = v[idx[k]];
  }
  return res;
}

void cholesky(HermMatrix& a) {
  const int n = a.size();
  for (int j = 0; j < n; ++j) {
    real d = a.at(j, j).real();
    for (int k = 0; k < j; ++k) d -= std::norm(a.at(j, k));
    if (!(d > 0)) throw SingularGram("pivot " + std::to_string(j) + " is " + std::to_string(d));
    const real ljj = std::sqrt(d);
    a.at(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      cplx s = a.at(i, j);
      for (int k = 0; k < j; ++k) s -= a.at(i, k) * std::conj(a.at(j, k));
      a.at(i, j) = s / ljj;
    }
    for (int k = j + 1; k < n; ++k) a.at(j, k) = cplx(0, 0);
  }
}

cvec cholesky_solve(const HermMatrix& l, const cvec& b) {
  const int n = l.size();
  cvec y(b);
  for (int i = 0; i < n; ++i) {
    cplx s = y[i];
    for (int k = 0; k < i; ++k) s -= l.at(i, k) * y[k];
    y[i] = s / l.at(i, i).real();
  }
  for (int i = n - 1; i >= 0; --i) {
    cplx s = y[i];
    for (int k = i + 1; k < n; ++k) s -= std::conj(l.at(k, i)) * y[k];
    y[i] = s / l.at(i, i).real();
  }
  return y;
}

std::vector<real> solve_real(std::vector<std::vector<real>> m, std::vector<real> r) {
  const int n = static_cast<int>(r.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int i = col + 1; i < n; ++i)
      if (std::fabs(m[i][col]) > std::fabs(m[piv][col])) piv = i;
    std::swap(m[piv], m[col]);
    std::swap(r[piv], r[col]);
    if (m[col][col] == 0) throw Error("singular system in solve_real");
    for (int i = col + 1; i < n; ++i) {
      const real f = m[i][col] / m[col][col];
      for (int j = col; j < n; ++j) m[i][j] -= f * m[col][j];
      r[i] -= f * r[col];
    }
  }
  std::vector<real> x(n);
  for (int i = n - 1; i >= 0; --i) {
    real s = r[i];
    for (int j = i + 1; j < n; ++j) s -= m[i][j] * x[j];
    x[i] = s / m[i][i];
  }
  return x;
}

}  // namespace scv
