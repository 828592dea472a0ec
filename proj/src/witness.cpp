#include "scv/witness.hpp"

#include <algorithm>
#include <cmath>

#include "scv/errors.hpp"
#include "scv/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace scv {

real PshWitness::peak_poly(const cvec& z) const {
  cplx p(0, 0);
  cvec d(z.size());
  for (size_t j = 0; j < z.size(); ++j) d[j] = z[j] - base[j];
  for (size_t j = 0; j < z.size(); ++j) {
    p += linear[j] * d[j];
    for (size_t k = 0; k < z.size(); ++k) p += 0.5 * quadratic[j][k] * d[j] * d[k];
  }
  return p.real();
}

real PshWitness::value(const cvec& z) const {
  real dd = 0;
  for (size_t j = 0; j < z.size(); ++j) dd += std::norm(z[j] - base[j]);
  if (dd >= radius * radius * 0.9025)  // 0.95^2; Re P < -floor holds past here
    return -floor;
  return std::max(peak_poly(z), -floor);
}

PshWitness levi_peak_function(const DefiningFn& r, const cvec& a, const DomainSpec& dom,
                              std::uint64_t seed, real margin) {
  const real c0 = tangent_levi_min(r, a);
  if (!(c0 > margin))
    throw NotStrictlyPseudoconvex("restricted Levi eigenvalue " + fmt17(c0));

  const cvec g = r.grad(a);
  const HermMatrix h = r.hermitian(a);
  const std::vector<cvec> q = r.holomorphic(a);

  // exponential tightening (e^{Kr}-1)/K: the full Hermitian form gains
  // K |<a, conj g>|^2; raise K until it is positive definite with margin
  real K = 0.0;
  {
    auto lambda_min = [&](real kk) {
      HermMatrix m = h;
      for (int i = 0; i < r.dim; ++i)
        for (int j = 0; j < r.dim; ++j) m.at(i, j) += kk * g[i] * std::conj(g[j]);
      return jacobi_eigh(m).values.front();
    };
    if (lambda_min(0.0) < 0.5 * c0) {
      K = 1.0;
      int guard = 0;
      while (lambda_min(K) < 0.5 * c0 && guard++ < 60) K *= 2.0;
      if (guard >= 60) throw NotStrictlyPseudoconvex("tightening failed to converge");
    }
  }

  PshWitness w;
  w.base = a;
  w.tighten = K;
  w.linear = g;
  w.quadratic.assign(r.dim, cvec(r.dim, cplx(0, 0)));
  for (int i = 0; i < r.dim; ++i)
    for (int j = 0; j < r.dim; ++j) w.quadratic[i][j] = q[i][j] + K * g[i] * g[j];

  // shrink the validity radius until Re P <= -(c0/4)|z-a|^2 on all domain
  // samples in the ball; a large radius keeps the glue level s high, which
  // keeps the normalized values near the anchor from collapsing
  std::vector<cvec> samples = sample_domain(dom, 4000, Rng::derive(seed, 77));
  real delta = 1.0;
  for (int attempt = 0; attempt < 80; ++attempt) {
    bool ok = true;
    for (const cvec& z : samples) {
      real dd = 0;
      for (size_t j = 0; j < z.size(); ++j) dd += std::norm(z[j] - a[j]);
      if (dd >= delta * delta) continue;
      if (w.peak_poly(z) > -0.25 * c0 * dd + 1e-14) {
        ok = false;
        break;
      }
    }
    if (ok) break;
    delta *= 0.8;
    if (delta < 1e-4)
      throw NotStrictlyPseudoconvex("no validity radius for the peak at this point");
  }
  w.radius = delta;
  // the rim |z-a| ~ 0.95 delta has Re P <= -0.2256 c0 delta^2, so this
  // floor glues strictly inside the negative zone
  w.floor = 0.18 * c0 * delta * delta;
  return w;
}

// ------------------------------------------------------------ exhaustion

bool Exhaustion::contains(const DomainSpec& dom, const cvec& z, int j) const {
  if (!dom.member(z)) return false;
  real nz = std::sqrt(norm2(z));
  return dom.boundary_distance(z) >= delta[j] && nz <= radius[j];
}

Exhaustion default_exhaustion(int count, real delta0, real radius0) {
  Exhaustion e;
  for (int j = 1; j <= count; ++j) {
    e.delta.push_back(delta0 / j);
    e.radius.push_back(radius0 + j);
  }
  return e;
}

// --------------------------------------------------------------- sup mix

real SupWitness::value(const cvec& z) const {
  real best = -1e300;
  for (size_t j = 0; j < parts.size(); ++j)
    best = std::max(best, parts[j].value(z) / m[j]);
  return best;
}

SupWitness sup_regularized(const std::vector<PshWitness>& witnesses, const Exhaustion& exh,
                           const DomainSpec& dom, const std::vector<cvec>& samples) {
  if (witnesses.size() > exh.delta.size())
    throw Error("exhaustion too short for the witness family");
  SupWitness sw;
  sw.parts = witnesses;
  sw.m.resize(witnesses.size());
  for (size_t j = 0; j < witnesses.size(); ++j) {
    real sup = -1e300;
    long used = 0;
    for (const cvec& z : samples) {
      const real v = witnesses[j].value(z);
      if (v >= 0.0)
        throw NonNegativeWitness("witness " + std::to_string(j) + " at a domain sample");
      if (!exh.contains(dom, z, static_cast<int>(j))) continue;
      ++used;
      sup = std::max(sup, v);
    }
    if (used == 0) throw Error("compact " + std::to_string(j) + " holds no samples");
    sw.m[j] = -sup;
    if (!(sw.m[j] > 0)) throw NonNegativeWitness("m_j not positive");
  }
  return sw;
}

// -------------------------------------------------------------- psh test

PshProbeReport psh_check(const std::function<real(const cvec&)>& u, const DomainSpec& dom,
                         int probes, std::uint64_t seed, bool parallel) {
  // keep enough clearance that the probe circle has a meaningful radius
  std::vector<cvec> centers;
  {
    const std::vector<cvec> raw =
        sample_domain(dom, probes * 3, Rng::derive(seed, 3));
    for (const cvec& z : raw) {
      if (static_cast<int>(centers.size()) == probes) break;
      if (dom.boundary_distance(z) >= 0.02) centers.push_back(z);
    }
  }
  PshProbeReport rep;
  rep.probes = static_cast<int>(centers.size());

  std::vector<real> gaps(centers.size(), -1e300);
  auto probe_one = [&](int i) {
    Rng rng(Rng::derive(seed, 1000 + i));
    const cvec& z = centers[i];
    // random complex line direction
    cvec w(dom.dim);
    real nn = 0;
    for (int k = 0; k < dom.dim; ++k) {
      const real u1 = std::max(rng.unit(), 1e-16), u2 = rng.unit();
      const real m = std::sqrt(-2.0 * std::log(u1));
      w[k] = cplx(m * std::cos(2 * kPi * u2), m * std::sin(2 * kPi * u2));
      nn += std::norm(w[k]);
    }
    nn = std::sqrt(nn);
    for (cplx& c : w) c /= nn;

    real rho = 0.5 * std::max(dom.boundary_distance(z), 1e-6);
    const int kN = 64;
    for (int shrink = 0; shrink < 30; ++shrink) {
      bool inside = true;
      for (int k = 0; k < kN && inside; ++k) {
        const real th = 2 * kPi * k / kN;
        cvec p = z;
        const cplx e = rho * cplx(std::cos(th), std::sin(th));
        for (int d = 0; d < dom.dim; ++d) p[d] += e * w[d];
        inside = dom.member(p);
      }
      if (inside) break;
      rho *= 0.5;
    }

    real mean = 0;
    for (int k = 0; k < kN; ++k) {
      const real th = 2 * kPi * k / kN;
      cvec p = z;
      const cplx e = rho * cplx(std::cos(th), std::sin(th));
      for (int d = 0; d < dom.dim; ++d) p[d] += e * w[d];
      mean += u(p);
    }
    mean /= kN;
    const real uz = u(z);
    gaps[i] = uz - mean - 1e-6 * (1.0 + std::fabs(uz));
  };

  const int n = static_cast<int>(centers.size());
  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
    for (int i = 0; i < n; ++i) probe_one(i);
  } else {
    for (int i = 0; i < n; ++i) probe_one(i);
  }

  for (real g : gaps) {
    if (g > 0) ++rep.violations;
    rep.worst_gap = std::max(rep.worst_gap, g);
  }
  return rep;
}

real neg_log_transform(real u_value) {
  if (!(u_value < 0)) throw DomainError("neg_log_transform needs a negative value");
  return -std::log(-u_value);
}

// ---------------------------------------------------------------- greedy

namespace {

struct GreedyAttempt {
  bool ok = false;
  int failed_level = 0;
  real achieved = 0, wanted = 0;
  GreedyTrace trace;
};

// One pass with a precommitted placement schedule. Fixing every z_k up
// front lets M_k be evaluated on the actual later points, so the trace
// inequality |h(z_k)| >= k - 1 follows from the recorded numbers alone.
GreedyAttempt greedy_attempt(const DomainSpec& dom, const BasisFamily& basis,
                             const cvec& a, int levels, const GramResult& gram,
                             const std::vector<cvec>& pool, const cvec& inward,
                             real eta1, real ratio, real k1_level) {
  GreedyAttempt out;
  out.trace.c = std::pow(kPi, dom.dim);

  // Placements: depth eta_k into the domain along `inward`, plus a
  // golden-angle transverse offset ~ sqrt(eta_k) (the transverse extent of
  // the domain near a smooth boundary point scales like the square root of
  // the depth). The spread keeps the committed points resolvable by the
  // span, so the vanishing constraints below do not collapse the reduced
  // kernel.
  int trans = 0;
  for (int d = 1; d < dom.dim; ++d)
    if (std::abs(inward[d]) < std::abs(inward[trans])) trans = d;
  std::vector<cvec> zs(levels, cvec(dom.dim));
  std::vector<real> dists(levels, 0.0);
  real prev_dist = k1_level;
  real eta = eta1;
  for (int k = 1; k <= levels; ++k) {
    real e = std::min(eta, 0.4 / k);
    const real phi = 2.399963 * k;
    bool placed = false;
    for (int attempt = 0; attempt < 30 && !placed; ++attempt) {
      // shrink the transverse radius before the depth; sigma = 0 is the
      // plain on-axis point, which always lands inside
      for (const real sigma : {1.0, 0.6, 0.3, 0.0}) {
        const real r = sigma * std::min(0.6 * std::sqrt(e), 0.5 / k);
        cvec z(dom.dim);
        for (int d = 0; d < dom.dim; ++d)
          z[d] = a[d] + e * inward[d] + r * std::cos(phi) * cplx(0, 1) * inward[d];
        z[trans] += r * std::sin(phi);
        if (!dom.member(z)) continue;
        const real dist = dom.boundary_distance(z);
        if (dist > 0 && dist < 0.95 * prev_dist) {
          zs[k - 1] = z;
          dists[k - 1] = dist;
          placed = true;
          break;
        }
      }
      if (!placed) e *= 0.75;
    }
    if (!placed) {
      out.failed_level = k;
      return out;
    }
    prev_dist = dists[k - 1];
    eta = e * ratio;
  }

  std::vector<cvec> gs;      // normalized coefficient vectors g_k
  std::vector<real> m_hist;  // M_k
  prev_dist = k1_level;
  for (int k = 1; k <= levels; ++k) {
    const cvec& zk = zs[k - 1];

    // The extremal of the subspace vanishing at the other committed
    // points: still a unit-norm span function, and the cross terms
    // g_j(z_k) in the trace inequality vanish identically.
    std::vector<cvec> others;
    for (int j = 0; j < levels; ++j)
      if (j != k - 1) others.push_back(zs[j]);
    real ext = 0;
    cvec ck;
    try {
      ck = gram_constrained_extremal(gram, basis, zk, others, &ext);
    } catch (const SingularGram&) {
      out.failed_level = k;
      return out;  // span too small for the vanishing constraints
    }

    const real d_k = out.trace.c * std::pow(prev_dist, dom.dim);

    real msum = 0;
    for (real m : m_hist) msum += m;
    const real target = d_k * (std::pow(k, 3) + std::pow(k, 2) * msum);
    if (ext < target) {
      out.failed_level = k;
      out.achieved = ext / d_k;
      out.wanted = target / d_k;
      return out;
    }

    cvec gk = ck;
    for (cplx& c : gk) c /= d_k;

    // M_k: the bound on |g_k| at the points the telescoping later
    // evaluates, i.e. the committed z_j for j > k. These are zeros of g_k
    // by construction. The plain neighborhood sup is kept as a diagnostic.
    real m_k = 0;
    for (int j = k; j < levels; ++j)
      m_k = std::max(m_k, std::abs(basis_apply(basis, gk, zs[j])));
    real near_sup = m_k;
    {
      real near_r = 0;
      for (int d = 0; d < dom.dim; ++d) near_r += std::norm(zk[d] - a[d]);
      near_r = std::sqrt(near_r) * 1.2;
      for (size_t i = 0; i < pool.size(); ++i) {
        real da = 0;
        for (int d = 0; d < dom.dim; ++d) da += std::norm(pool[i][d] - a[d]);
        if (da < near_r * near_r)
          near_sup = std::max(near_sup, std::abs(basis_apply(basis, gk, pool[i])));
      }
    }

    GreedyLevel lv;
    lv.k = k;
    lv.z = zk;
    lv.dist = dists[k - 1];
    lv.d = d_k;
    lv.extremal = ext;
    lv.target = target;
    lv.met = true;
    lv.m_bound = m_k;
    lv.near_sup = near_sup;
    out.trace.levels.push_back(lv);
    gs.push_back(gk);
    m_hist.push_back(m_k);
    prev_dist = dists[k - 1];
  }

  // h = sum g_j / j^2
  out.trace.h_coeffs.assign(basis.size(), cplx(0, 0));
  for (size_t j = 0; j < gs.size(); ++j)
    for (int i = 0; i < basis.size(); ++i)
      out.trace.h_coeffs[i] += gs[j][i] / static_cast<real>((j + 1) * (j + 1));
  out.trace.h_norm = std::sqrt(std::max(gram_norm2(gram, out.trace.h_coeffs), 0.0));
  for (GreedyLevel& lv : out.trace.levels)
    lv.h_at_z = std::abs(basis_apply(basis, out.trace.h_coeffs, lv.z));
  out.ok = true;
  return out;
}

}  // namespace

GreedyTrace greedy_unbounded_witness(const DomainSpec& dom, const BasisFamily& basis,
                                     const cvec& a, int levels, long samples,
                                     std::uint64_t seed) {
  const GramResult gram = mc_gram(dom, basis, samples, seed);
  const std::vector<cvec> pool = sample_domain(dom, 20000, Rng::derive(seed, 9));
  if (pool.empty()) throw Error("no samples in the greedy domain");

  std::vector<real> pool_dist(pool.size());
  real dist_max = 0;
  for (size_t i = 0; i < pool.size(); ++i) {
    pool_dist[i] = dom.boundary_distance(pool[i]);
    dist_max = std::max(dist_max, pool_dist[i]);
  }

  // inward direction: from a toward the deepest sample
  cvec deep = pool[0];
  for (size_t i = 0; i < pool.size(); ++i)
    if (pool_dist[i] == dist_max) { deep = pool[i]; break; }
  cvec inward(dom.dim);
  real in_norm = 0;
  for (int d = 0; d < dom.dim; ++d) {
    inward[d] = deep[d] - a[d];
    in_norm += std::norm(inward[d]);
  }
  in_norm = std::sqrt(in_norm);
  for (cplx& c : inward) c /= in_norm;

  const real k1_level = 0.5 * dist_max;
  GreedyAttempt last;
  real eta1 = 0.35 * in_norm;
  for (int restart = 0; restart < 5; ++restart) {
    last = greedy_attempt(dom, basis, a, levels, gram, pool, inward, eta1, 0.4,
                          k1_level);
    if (last.ok) return last.trace;
    eta1 *= 0.55;  // pull the whole schedule toward the boundary
  }
  throw GrowthTargetUnreachable(last.failed_level, last.achieved, last.wanted);
}

}  // namespace scv
