#include "scv/bergman.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "scv/errors.hpp"
#include "scv/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace scv {

// ------------------------------------------------------- series kernels

real disc_monomial_norm2(int k, real radius) {
  return kPi * std::pow(radius, 2 * k + 2) / (k + 1);
}

real disc_kernel(cplx z, real radius) {
  const real a2 = std::norm(z);
  if (!(a2 < radius * radius)) throw OutsideDomain("|z| >= R in disc kernel");
  real sum = 0;
  real pw = 1.0;  // |z|^{2k}
  for (int k = 0; k < 100000; ++k) {
    const real term = pw / disc_monomial_norm2(k, radius);
    sum += term;
    if (term < 1e-14 * sum) break;
    pw *= a2;
  }
  return sum;
}

real annulus_monomial_norm2(int k, real r_in, real r_out) {
  if (k == -1) return 2.0 * kPi * std::log(r_out / r_in);
  const real e = 2 * k + 2;
  return 2.0 * kPi * (std::pow(r_out, e) - std::pow(r_in, e)) / e;
}

real annulus_kernel(cplx z, real r_in, real r_out) {
  const real a = std::abs(z);
  if (!(a > r_in && a < r_out)) throw OutsideDomain("z outside annulus");
  real sum = 0;
  // symmetric truncation: grow both tails until each term is negligible
  for (int k = 0;; ++k) {
    const real term = std::pow(a, 2 * k) / annulus_monomial_norm2(k, r_in, r_out);
    sum += term;
    if (k > 0 && term < 1e-14 * sum) break;
    if (k > 100000) break;
  }
  for (int k = -1;; --k) {
    const real term = std::pow(a, 2 * k) / annulus_monomial_norm2(k, r_in, r_out);
    sum += term;
    if (term < 1e-14 * sum) break;
    if (k < -100000) break;
  }
  return sum;
}

// --------------------------------------------------------- basis family

void BasisFamily::eval(const cvec& z, std::vector<cplx>& out) const {
  out.resize(size());
  const int nj = j_max - j_min + 1;
  // powers of z1 from j_min to j_max, built incrementally
  thread_local std::vector<cplx> pj;
  pj.resize(nj);
  cplx base = std::pow(z[0], j_min);
  for (int i = 0; i < nj; ++i) {
    pj[i] = base;
    base *= z[0];
  }
  if (dim == 1) {
    for (int i = 0; i < nj; ++i) out[i] = pj[i];
    return;
  }
  const int nk = k_max - k_min + 1;
  cplx pk = std::pow(z[1], k_min);
  for (int kk = 0; kk < nk; ++kk) {
    for (int i = 0; i < nj; ++i) out[static_cast<size_t>(kk) * nj + i] = pj[i] * pk;
    pk *= z[1];
  }
}

std::string BasisFamily::key() const {
  return "dim" + std::to_string(dim) + "_j" + std::to_string(j_min) + ".." +
         std::to_string(j_max) +
         (dim == 2 ? "_k" + std::to_string(k_min) + ".." + std::to_string(k_max) : "");
}

// --------------------------------------------------------- MC machinery

HermMatrix GramResult::regularized(real eps_scale) const {
  HermMatrix g = full;
  const real eps = regularization(eps_scale);
  for (int i = 0; i < g.size(); ++i) g.at(i, i) += eps;
  return g;
}

real GramResult::regularization(real eps_scale) const {
  real tr = 0;
  for (int i = 0; i < full.size(); ++i) tr += full.at(i, i).real();
  return eps_scale * tr / std::max(full.size(), 1);
}

real GramResult::condition() const {
  if (condition_memo < 0) {
    const EighResult eig = jacobi_eigh(regularized());
    const real lmin = eig.values.front(), lmax = eig.values.back();
    condition_memo = (lmin > 0) ? lmax / lmin : 1e300;
  }
  return condition_memo;
}

namespace {

struct BatchOut {
  HermMatrix gram;
  long accepted = 0;
};

BatchOut run_batch(const DomainSpec& dom, const BasisFamily& basis, long draws,
                   std::uint64_t batch_seed) {
  const int nb = basis.size();
  BatchOut out;
  out.gram = HermMatrix(nb);
  Rng rng(batch_seed);
  cvec z(dom.dim);
  std::vector<cplx> phi;
  for (long it = 0; it < draws; ++it) {
    for (int k = 0; k < dom.dim; ++k) {
      const real re = rng.uniform(dom.box[2 * k].first, dom.box[2 * k].second);
      const real im = rng.uniform(dom.box[2 * k + 1].first, dom.box[2 * k + 1].second);
      z[k] = cplx(re, im);
    }
    if (!dom.member(z)) continue;
    ++out.accepted;
    basis.eval(z, phi);
    for (int i = 0; i < nb; ++i) {
      const cplx pi = phi[i];
      cplx* row = &out.gram.at(i, 0);
      for (int j = i; j < nb; ++j) row[j] += pi * std::conj(phi[j]);
    }
  }
  return out;
}

}  // namespace

GramResult mc_gram(const DomainSpec& dom, const BasisFamily& basis, long samples,
                   std::uint64_t seed, int batches, bool parallel) {
  GramResult res;
  res.box_volume = dom.box_volume();
  res.total_draws = samples;
  res.batch.resize(batches);
  res.batch_accept.resize(batches);

  const long per = samples / batches;
  std::vector<BatchOut> outs(batches);

  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (int b = 0; b < batches; ++b)
      outs[b] = run_batch(dom, basis, per, Rng::derive(seed, b));
  } else {
    for (int b = 0; b < batches; ++b)
      outs[b] = run_batch(dom, basis, per, Rng::derive(seed, b));
  }

  const int nb = basis.size();
  res.full = HermMatrix(nb);
  long accepted = 0;
  for (int b = 0; b < batches; ++b) {  // fixed combination order
    accepted += outs[b].accepted;
    res.batch_accept[b] = outs[b].accepted;
    // per-batch Gram scaled by its own draws
    HermMatrix bg(nb);
    const real bscale = res.box_volume / per;
    for (int i = 0; i < nb; ++i)
      for (int j = i; j < nb; ++j) {
        res.full.at(i, j) += outs[b].gram.at(i, j);
        bg.at(i, j) = outs[b].gram.at(i, j) * bscale;
      }
    bg.symmetrize();
    res.batch[b] = std::move(bg);
  }
  const real scale = res.box_volume / (static_cast<real>(per) * batches);
  for (int i = 0; i < nb; ++i)
    for (int j = i; j < nb; ++j) res.full.at(i, j) *= scale;
  res.full.symmetrize();
  res.volume_estimate = res.box_volume * accepted / (static_cast<real>(per) * batches);
  return res;
}

real gram_extremal_value(const GramResult& gram, const BasisFamily& basis, const cvec& z) {
  HermMatrix g = gram.regularized();
  cholesky(g);
  std::vector<cplx> v;
  basis.eval(z, v);
  const cvec x = cholesky_solve(g, v);
  cplx s(0, 0);
  for (size_t i = 0; i < v.size(); ++i) s += std::conj(v[i]) * x[i];
  return s.real();
}

cvec gram_extremal_coeffs(const GramResult& gram, const BasisFamily& basis, const cvec& z) {
  HermMatrix g = gram.regularized();
  cholesky(g);
  std::vector<cplx> v;
  basis.eval(z, v);
  cvec x = cholesky_solve(g, v);
  // the Rayleigh maximizer of |sum c_i phi_i(z)|^2 / ||f||^2 has
  // coefficients conj(G^{-1} v); its squared norm is v^H G^{-1} v
  cplx s(0, 0);
  for (size_t i = 0; i < v.size(); ++i) s += std::conj(v[i]) * x[i];
  const real nrm = std::sqrt(std::max(s.real(), 1e-300));
  for (cplx& c : x) c = std::conj(c) / nrm;
  return x;
}

cvec gram_constrained_extremal(const GramResult& gram, const BasisFamily& basis,
                               const cvec& at, const std::vector<cvec>& zeros,
                               real* value_out) {
  const int nb = basis.size();
  const int m = static_cast<int>(zeros.size()) + 1;
  HermMatrix g = gram.regularized();
  cholesky(g);

  // point functionals u_i = G^{-1} v_i, with the target point first
  std::vector<std::vector<cplx>> v(m);
  std::vector<cvec> u(m);
  basis.eval(at, v[0]);
  for (int i = 1; i < m; ++i) basis.eval(zeros[i - 1], v[i]);
  for (int i = 0; i < m; ++i) u[i] = cholesky_solve(g, v[i]);

  // kernel matrix of the points A_ij = v_i^H G^{-1} v_j
  HermMatrix a(m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      cplx s(0, 0);
      for (int b = 0; b < nb; ++b) s += std::conj(v[i][b]) * u[j][b];
      a.at(i, j) = s;
    }
  a.symmetrize();
  cholesky(a);  // throws SingularGram when the constraints exhaust the span
  cvec e0(m, cplx(0, 0));
  e0[0] = 1.0;
  const cvec beta = cholesky_solve(a, e0);
  const real schur = beta[0].real();  // (A^{-1})_{00} > 0
  if (!(schur > 0)) throw SingularGram("degenerate reduced kernel");

  cvec d(nb, cplx(0, 0));
  for (int i = 0; i < m; ++i)
    for (int b = 0; b < nb; ++b) d[b] += u[i][b] * beta[i];
  const real nrm = std::sqrt(schur);
  cvec coeffs(nb);
  for (int b = 0; b < nb; ++b) coeffs[b] = std::conj(d[b]) / nrm;
  if (value_out) *value_out = 1.0 / nrm;
  return coeffs;
}

cplx basis_apply(const BasisFamily& basis, const cvec& coeffs, const cvec& z) {
  std::vector<cplx> v;
  basis.eval(z, v);
  cplx s(0, 0);
  for (size_t i = 0; i < v.size(); ++i) s += coeffs[i] * v[i];
  return s;
}

real gram_norm2(const GramResult& gram, const cvec& coeffs) {
  const int n = gram.full.size();
  // ||sum c_i phi_i||^2 = sum_ij c_i conj(c_j) <phi_i, phi_j>
  cplx s(0, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += coeffs[i] * gram.full.at(i, j) * std::conj(coeffs[j]);
  return s.real();
}

KernelEstimate mc_gram_kernel(const DomainSpec& dom, const BasisFamily& basis,
                              const cvec& point, long samples, std::uint64_t seed,
                              const GramResult* precomputed, real cond_limit) {
  if (!dom.member(point)) throw OutsideDomain("kernel point outside the domain");
  if (samples < 1000) throw Error("mc_gram_kernel needs at least 1e3 samples");

  GramResult local;
  const GramResult* gram = precomputed;
  if (!gram) {
    local = mc_gram(dom, basis, samples, seed);
    gram = &local;
  }

  // conditioning gate on the regularized Gram
  if (gram->condition() > cond_limit)
    throw SingularGram("condition " + fmt17(gram->condition()) + " exceeds " +
                       fmt17(cond_limit));

  KernelEstimate est;
  est.point = point;
  est.method = KernelMethod::MonteCarloGram;
  est.samples = samples;
  est.basis_key = basis.key();
  est.value = gram_extremal_value(*gram, basis, point);

  // stderr from batch sub-estimates
  std::vector<real> sub;
  for (size_t b = 0; b < gram->batch.size(); ++b) {
    GramResult gb;
    gb.full = gram->batch[b];
    gb.box_volume = gram->box_volume;
    try {
      sub.push_back(gram_extremal_value(gb, basis, point));
    } catch (const SingularGram&) {
      // a sparse batch can be singular; skip it in the spread estimate
    }
  }
  if (sub.size() >= 2) {
    real mean = 0;
    for (real v : sub) mean += v;
    mean /= sub.size();
    real var = 0;
    for (real v : sub) var += (v - mean) * (v - mean);
    var /= (sub.size() - 1);
    est.stderr_estimate = std::sqrt(var / sub.size());
  }
  return est;
}

// ---------------------------------------------------------- blow-up scan

BlowupReport blowup_scan(const DomainSpec& dom, const std::function<cvec(real)>& path,
                         const BasisFamily& basis, int steps, long samples,
                         std::uint64_t seed,
                         const std::function<real(const cvec&)>& series_oracle,
                         const GramResult* precomputed) {
  BlowupReport rep;
  std::optional<GramResult> local;
  const GramResult* gram = precomputed;
  if (!series_oracle && !gram) {
    local = mc_gram(dom, basis, samples, seed);
    gram = &*local;
  }

  for (int j = 1; j <= steps; ++j) {
    const real t = 1.0 - std::pow(2.0, -j);
    const cvec z = path(t);
    if (!dom.member(z)) throw OutsideDomain("path left the domain at t=" + fmt17(t));
    rep.t.push_back(t);
    if (series_oracle) {
      rep.method = KernelMethod::Series;
      rep.estimate.push_back(series_oracle(z));
      rep.stderr_estimate.push_back(0.0);
    } else {
      KernelEstimate est = mc_gram_kernel(dom, basis, z, samples, seed, gram);
      rep.estimate.push_back(est.value);
      rep.stderr_estimate.push_back(est.stderr_estimate);
    }
  }

  const size_t n = rep.estimate.size();
  if (n >= 3) {
    const real first = rep.estimate.front();
    const bool tail_up = rep.estimate[n - 1] > rep.estimate[n - 2] &&
                         rep.estimate[n - 2] > rep.estimate[n - 3];
    const real peak = *std::max_element(rep.estimate.begin(), rep.estimate.end());
    if (tail_up && rep.estimate[n - 1] > 10.0 * first)
      rep.verdict = BlowupVerdict::Blowup;
    else if (peak <= 2.0 * first)
      rep.verdict = BlowupVerdict::Bounded;
  }
  return rep;
}

// -------------------------------------------------------------- caching

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string matrix_payload(const HermMatrix& m) {
  std::string s;
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) {
      s += fmt17(m.at(i, j).real());
      s += ',';
      s += fmt17(m.at(i, j).imag());
      s += ';';
    }
  return s;
}

}  // namespace

std::string gram_cache_key(const DomainSpec& dom, const BasisFamily& basis, long samples,
                           std::uint64_t seed, int batches) {
  std::string desc = dom.name + "|" + basis.key() + "|" + std::to_string(samples) + "|" +
                     std::to_string(seed) + "|" + std::to_string(batches);
  for (auto& [lo, hi] : dom.box) desc += "|" + fmt17(lo) + ":" + fmt17(hi);
  return hex64(fnv1a(desc));
}

GramResult cached_gram(const std::string& cache_dir, const DomainSpec& dom,
                       const BasisFamily& basis, long samples, std::uint64_t seed,
                       int batches, bool parallel) {
  namespace fs = std::filesystem;
  const std::string key = gram_cache_key(dom, basis, samples, seed, batches);
  const fs::path file = fs::path(cache_dir) / ("gram_" + key + ".json");

  const int nb = basis.size();
  if (fs::exists(file)) {
    try {
      std::ifstream in(file);
      nlohmann::json j;
      in >> j;
      if (j.at("key").get<std::string>() != key) throw CacheCorruption("key mismatch");
      GramResult res;
      res.box_volume = parse17(j.at("box_volume").get<std::string>());
      res.volume_estimate = parse17(j.at("volume_estimate").get<std::string>());
      res.total_draws = j.at("total_draws").get<long>();
      auto read_matrix = [nb](const nlohmann::json& arr) {
        HermMatrix m(nb);
        if (static_cast<int>(arr.size()) != 2 * nb * nb)
          throw CacheCorruption("matrix size mismatch");
        for (int i = 0; i < nb * nb; ++i)
          m.data()[i] = cplx(parse17(arr[2 * i].get<std::string>()),
                             parse17(arr[2 * i + 1].get<std::string>()));
        return m;
      };
      res.full = read_matrix(j.at("full"));
      for (const auto& b : j.at("batches")) res.batch.push_back(read_matrix(b));
      for (const auto& a : j.at("batch_accept")) res.batch_accept.push_back(a.get<long>());
      const std::uint64_t want = fnv1a(matrix_payload(res.full));
      if (hex64(want) != j.at("checksum").get<std::string>())
        throw CacheCorruption("checksum mismatch");
      return res;
    } catch (const std::exception&) {
      // corrupt or stale: fall through and recompute
    }
  }

  GramResult res = mc_gram(dom, basis, samples, seed, batches, parallel);
  if (!cache_dir.empty()) {
    fs::create_directories(cache_dir);
    nlohmann::ordered_json j;
    j["key"] = key;
    j["box_volume"] = fmt17(res.box_volume);
    j["volume_estimate"] = fmt17(res.volume_estimate);
    j["total_draws"] = res.total_draws;
    auto dump_matrix = [](const HermMatrix& m) {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const cplx& c : m.data()) {
        arr.push_back(fmt17(c.real()));
        arr.push_back(fmt17(c.imag()));
      }
      return arr;
    };
    j["full"] = dump_matrix(res.full);
    nlohmann::ordered_json batches_json = nlohmann::ordered_json::array();
    for (const HermMatrix& b : res.batch) batches_json.push_back(dump_matrix(b));
    j["batches"] = batches_json;
    j["batch_accept"] = res.batch_accept;
    j["checksum"] = hex64(fnv1a(matrix_payload(res.full)));
    std::ofstream out(file);
    out << j.dump(1) << "\n";
  }
  return res;
}

}  // namespace scv
