#include "scv/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "scv/errors.hpp"
#include "scv/levi.hpp"
#include "scv/rng.hpp"

namespace scv {

namespace {

using Clock = std::chrono::steady_clock;

real elapsed(Clock::time_point t0) {
  return std::chrono::duration<real>(Clock::now() - t0).count();
}

std::string status_of(bool ok) { return ok ? "pass" : "fail"; }

}  // namespace

// ----------------------------------------------------------------- config

void PipelineConfig::validate() const {
  if (!(eps > 0 && eps < 1)) throw ConfigError("eps must lie in (0,1)");
  if (!(c1 > 0 && c2 > 0)) throw ConfigError("c1 and c2 must be positive");
  if (!(r0 > 0 && r0 < 1.0 / 3.0)) throw ConfigError("r0 must lie in (0,1/3)");
  if (depth < 1 || depth > 14) throw ConfigError("depth must lie in [1,14]");
  if (grid_n < 16 || grid_n > 4096) throw ConfigError("grid_n must lie in [16,4096]");
  if (mc_samples < 1000) throw ConfigError("mc_samples must be >= 1000");
  if (basis_deg1 < 1 || basis_deg1 > 16 || basis_deg2 < 0 || basis_deg2 > 16)
    throw ConfigError("basis degrees must lie in [1,16] x [0,16]");
  if (blowup_steps < 3 || blowup_steps > 12) throw ConfigError("blowup_steps in [3,12]");
  if (levels < 1 || levels > 10) throw ConfigError("levels must lie in [1,10]");
}

nlohmann::ordered_json PipelineConfig::to_json() const {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["eps"] = fmt17(eps);
  j["c1"] = fmt17(c1);
  j["c2"] = fmt17(c2);
  j["r0"] = fmt17(r0);
  j["depth"] = depth;
  j["grid_n"] = grid_n;
  j["mc_samples"] = mc_samples;
  j["seed"] = seed;
  j["basis_deg1"] = basis_deg1;
  j["basis_deg2"] = basis_deg2;
  j["blowup_steps"] = blowup_steps;
  j["levels"] = levels;
  j["out_dir"] = out_dir;
  j["cache_dir"] = cache_dir;
  return j;
}

PipelineConfig PipelineConfig::from_json(const nlohmann::ordered_json& j) {
  PipelineConfig c;
  auto realf = [&](const char* key, real dflt) {
    return j.contains(key) ? parse17(j.at(key).get<std::string>()) : dflt;
  };
  c.eps = realf("eps", c.eps);
  c.c1 = realf("c1", c.c1);
  c.c2 = realf("c2", c.c2);
  c.r0 = realf("r0", c.r0);
  c.depth = j.value("depth", c.depth);
  c.grid_n = j.value("grid_n", c.grid_n);
  c.mc_samples = j.value("mc_samples", c.mc_samples);
  if (!j.contains("seed")) throw ConfigError("seed is mandatory");
  c.seed = j.at("seed").get<std::uint64_t>();
  c.basis_deg1 = j.value("basis_deg1", c.basis_deg1);
  c.basis_deg2 = j.value("basis_deg2", c.basis_deg2);
  c.blowup_steps = j.value("blowup_steps", c.blowup_steps);
  c.levels = j.value("levels", c.levels);
  c.out_dir = j.value("out_dir", c.out_dir);
  c.cache_dir = j.value("cache_dir", c.cache_dir);
  c.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  nlohmann::ordered_json j;
  in >> j;
  return from_json(j);
}

// ----------------------------------------------------------------- report

bool VerificationReport::all_pass() const {
  for (const ClaimRecord& c : claims)
    if (c.status != "pass") return false;
  return true;
}

nlohmann::ordered_json VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["config"] = config_echo;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const ClaimRecord& c : claims) {
    nlohmann::ordered_json cj;
    cj["id"] = c.id;
    cj["description"] = c.description;
    cj["status"] = c.status;
    cj["measured"] = c.measured;
    cj["tolerances"] = c.tolerances;
    arr.push_back(cj);
  }
  j["claims"] = arr;
  j["all_pass"] = all_pass();
  return j;
}

std::string VerificationReport::to_text() const {
  std::ostringstream os;
  for (const ClaimRecord& c : claims)
    os << (c.status == "pass" ? "[PASS] " : "[FAIL] ") << c.id << "  " << c.description
       << "\n";
  os << (all_pass() ? "ALL CRITERIA PASS\n" : "SOME CRITERIA FAILED\n");
  return os.str();
}

// ----------------------------------------------------------------- bundle

HartogsBundle build_hartogs_bundle(const PipelineConfig& cfg) {
  HartogsBundle b;
  b.profile = build_base_bump();
  Cutoff chi;
  // the halved radial Laplacian contributes -2 on the annulus, so the cap
  // amplitude must keep C1 ||chi''|| / r0^2 within 1
  b.c1_eff = std::min(cfg.c1, cfg.r0 * cfg.r0 / chi.norm_second());
  b.c2_eff = std::max(cfg.c2, std::max(1.0, 16.0 * cfg.r0 * cfg.r0));
  b.schedule = solve_parameters(cfg.eps, b.c1_eff, b.c2_eff, b.profile);
  b.fn = std::make_shared<CantorBumpFn>(b.profile, b.schedule,
                                        build_interval_tree(b.schedule, cfg.depth));
  b.psi = build_psi(cfg.r0);
  b.field_d0 = std::make_shared<HalfPsiField>(b.psi);
  CapField cap;
  cap.f = b.fn;
  cap.chi = chi;
  cap.r0 = cfg.r0;
  b.field_d = std::make_shared<CapGraphField>(b.psi, cap);
  return b;
}

DomainSpec hartogs_domain_spec(std::shared_ptr<const ScalarField2> field,
                               const std::string& name) {
  DomainSpec d;
  d.dim = 2;
  d.name = name;
  d.box = {{-1, 1}, {-1, 1}, {-1.05, 1.05}, {-1.05, 1.05}};
  d.member = [field](const cvec& z) {
    if (std::abs(z[0]) >= 1.0) return false;
    const real aw = std::abs(z[1]);
    if (aw == 0.0) return true;
    return std::log(aw) < field->value(z[0].real(), z[0].imag());
  };
  d.boundary_distance = [field](const cvec& z) {
    const real gap_base = 1.0 - std::abs(z[0]);
    const real gap_graph =
        std::exp(field->value(z[0].real(), z[0].imag())) - std::abs(z[1]);
    return std::min(gap_base, gap_graph);
  };
  return d;
}

// ------------------------------------------------------------- criteria

ClaimRecord run_parameter_feasibility(const PipelineConfig& cfg) {
  (void)cfg;
  ClaimRecord rec;
  rec.id = "C1";
  rec.description = "parameter feasibility across the regularity range";
  rec.tolerances = {{"runtime_seconds_each", fmt17(1.0)}};
  const BumpProfile profile = build_base_bump();
  bool ok = true;
  nlohmann::ordered_json cases = nlohmann::ordered_json::array();
  const auto t0 = Clock::now();
  for (const real eps : {0.1, 0.5, 0.9}) {
    const auto te = Clock::now();
    const ParamSchedule s = solve_parameters(eps, 1.0, 1.0, profile);
    const real dt = elapsed(te);
    nlohmann::ordered_json c;
    c["eps"] = fmt17(eps);
    c["gamma"] = fmt17(s.gamma);
    c["delta"] = fmt17(s.delta);
    c["p0"] = fmt17(s.p0);
    c["a0"] = fmt17(s.a0);
    c["geom"] = s.geom_ok();
    c["cond_a"] = s.cond_a_ok();
    c["cond_c1"] = s.cond_c1_ok();
    c["holder"] = s.holder_ok();
    c["supnorm"] = s.supnorm_ok();
    cases.push_back(c);
    ok = ok && s.all_ok() && dt < 1.0;
  }
  rec.measured = {{"cases", cases}};
  rec.runtime_seconds = elapsed(t0);
  rec.status = status_of(ok);
  return rec;
}

ClaimRecord run_plateau_concavity(const PipelineConfig& cfg) {
  ClaimRecord rec;
  rec.id = "C2";
  rec.description = "plateau second derivative bounds with FD cross-check";
  rec.tolerances = {{"fd_relative", fmt17(1e-4)}, {"runtime_seconds", fmt17(10.0)}};
  const auto t0 = Clock::now();

  const BumpProfile profile = build_base_bump();
  const ParamSchedule s = solve_parameters(cfg.eps, cfg.c1, cfg.c2, profile);
  const CantorBumpFn fn(profile, s, build_interval_tree(s, cfg.depth));

  Rng rng(cfg.seed);
  const int points = 1000;
  bool ok = true;
  real worst_rel = 0, worst_margin = 1e300;
  for (int i = 0; i < points; ++i) {
    const int n = static_cast<int>(rng.unit() * 9);  // levels 0..8
    const IntervalTree::Level& lv = fn.tree().level(n);
    const int idx = static_cast<int>(rng.unit() * lv.centers.size());
    const real off = rng.uniform(-0.98, 0.98) * lv.p / 4.0;
    const real x = lv.centers[idx] + off;

    int level = -1;
    const real exact = fn.second_on_plateau(x, &level);
    const real bound = -4.0 * s.big_b * std::pow(s.big_a, level);
    ok = ok && level == n && exact <= -s.c2 && exact <= bound * (1.0 - 1e-12);
    worst_margin = std::min(worst_margin, bound - exact);

    const real fd = fn.fd_second(x, 1e-5 * lv.p);
    const real rel = std::fabs(fd - exact) / std::fabs(exact);
    worst_rel = std::max(worst_rel, rel);
    ok = ok && rel <= 1e-4;
  }
  rec.runtime_seconds = elapsed(t0);
  rec.measured = {{"points", points},
                  {"worst_fd_relative", fmt17(worst_rel)},
                  {"worst_margin_to_level_bound", fmt17(worst_margin)}};
  ok = ok && rec.runtime_seconds < 10.0;
  rec.status = status_of(ok);
  return rec;
}

ClaimRecord run_holder_regularity(const PipelineConfig& cfg) {
  ClaimRecord rec;
  rec.id = "C3";
  rec.description = "Holder seminorm stability and sup-norm bound";
  rec.tolerances = {{"seminorm_change", fmt17(0.10)}, {"runtime_seconds", fmt17(30.0)}};
  const auto t0 = Clock::now();

  const BumpProfile profile = build_base_bump();
  const ParamSchedule s = solve_parameters(cfg.eps, cfg.c1, cfg.c2, profile);
  const CantorBumpFn fn(profile, s, build_interval_tree(s, cfg.depth));

  PairSampleSpec pairs;
  pairs.count = 100000;
  pairs.seed = cfg.seed;
  const real s8 = holder_seminorm(fn, cfg.eps, pairs, 8);
  const real s10 = holder_seminorm(fn, cfg.eps, pairs, 10);
  const real change = std::fabs(s10 / s8 - 1.0);

  real sup = 0;
  for (int i = 0; i <= 20000; ++i)
    sup = std::max(sup, fn.eval(-1.0 + 2.0 * i / 20000.0).value);
  const real sup_with_tail = sup + s.tail_bound(cfg.depth);

  rec.runtime_seconds = elapsed(t0);
  rec.measured = {{"seminorm_depth8", fmt17(s8)},
                  {"seminorm_depth10", fmt17(s10)},
                  {"relative_change", fmt17(change)},
                  {"sup_norm_with_tail", fmt17(sup_with_tail)},
                  {"c1", fmt17(s.c1)}};
  const bool ok = change <= 0.10 && sup_with_tail < s.c1 && rec.runtime_seconds < 30.0;
  rec.status = status_of(ok);
  return rec;
}

ClaimRecord run_boundary_classification(const PipelineConfig& cfg) {
  ClaimRecord rec;
  rec.id = "C4";
  rec.description = "boundary classification map over the capped domain";
  rec.tolerances = {{"concave_laplacian_error", fmt17(1e-3)},
                    {"plateau_laplacian_bound", fmt17(-2.0)},
                    {"runtime_seconds", fmt17(120.0)}};
  const auto t0 = Clock::now();

  const HartogsBundle b = build_hartogs_bundle(cfg);
  GridSpec grid;
  grid.n = cfg.grid_n;
  const real r0 = cfg.r0;

  const ClassificationMap dmap = scan_boundary(*b.field_d, grid, b.fn.get(), r0, 8);
  const ClassificationMap d0map = scan_boundary(*b.field_d0, grid, nullptr, r0, 8);

  long outer = 0, outer_bad = 0;
  long plateau = 0, plateau_bad = 0;
  long core = 0, core_bad = 0;
  const real cell = 2.0 * grid.extent / grid.n;
  for (int iy = 0; iy < grid.n; ++iy)
    for (int ix = 0; ix < grid.n; ++ix) {
      const real xc = -grid.extent + (ix + 0.5) * cell;
      const real yc = -grid.extent + (iy + 0.5) * cell;
      const CellRecord& d = dmap.at(ix, iy);
      if (d.covered && std::fabs(xc) > r0) {
        ++outer;
        if (d.cls != PointClass::StrictlyPseudoconvex) ++outer_bad;
      }
      if (d.covered && std::fabs(yc) <= r0) {
        const CantorLocation loc = b.fn->locate(xc / r0);
        if (loc.in_open_set && loc.level <= 8) {
          ++plateau;
          if (d.cls != PointClass::StrictlyPseudoconvex || !(d.laplacian < -2.0))
            ++plateau_bad;
        }
      }
      const CellRecord& d0 = d0map.at(ix, iy);
      if (d0.covered && std::hypot(xc, yc) < r0 / 2) {
        ++core;
        if (d0.cls != PointClass::StrictlyPseudoconcave ||
            std::fabs(d0.laplacian - 2.0) > 1e-3)
          ++core_bad;
      }
    }

  rec.runtime_seconds = elapsed(t0);
  rec.measured = {{"outer_cells", outer},
                  {"outer_misclassified", outer_bad},
                  {"plateau_cells", plateau},
                  {"plateau_misclassified", plateau_bad},
                  {"concave_core_cells", core},
                  {"concave_core_misclassified", core_bad},
                  {"convex_cells", dmap.count_convex},
                  {"concave_cells", dmap.count_concave},
                  {"indeterminate_cells", dmap.count_indeterminate},
                  {"dense_at_coarse", dmap.dense_at_coarse}};
  const bool ok = outer > 0 && outer_bad == 0 && plateau > 0 && plateau_bad == 0 &&
                  core > 0 && core_bad == 0 && dmap.dense_at_coarse &&
                  rec.runtime_seconds < 120.0;
  rec.status = status_of(ok);
  return rec;
}

namespace {

// seeded boundary point and direction on a quadric-type surface
cvec seeded_boundary_point(const DefiningFn& r, Rng& rng) {
  // scale a random direction until r = 0 by bisection
  cvec u(r.dim);
  for (int j = 0; j < r.dim; ++j)
    u[j] = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  real lo = 0, hi = 4.0;
  int guard = 0;
  auto at = [&](real t) {
    cvec z(u);
    for (cplx& c : z) c *= t;
    return z;
  };
  while (r.value(at(hi)) < 0 && guard++ < 60) hi *= 2;
  for (int it = 0; it < 200; ++it) {
    const real mid = 0.5 * (lo + hi);
    if (r.value(at(mid)) < 0) lo = mid; else hi = mid;
  }
  return at(0.5 * (lo + hi));
}

cvec seeded_direction(int dim, Rng& rng) {
  cvec a(dim);
  real n = 0;
  for (int j = 0; j < dim; ++j) {
    a[j] = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    n += std::norm(a[j]);
  }
  n = std::sqrt(n);
  for (cplx& c : a) c /= n;
  return a;
}

}  // namespace

ClaimRecord run_levi_disc_identity(const PipelineConfig& cfg) {
  ClaimRecord rec;
  rec.id = "C5";
  rec.description = "Levi disc Taylor identity: residual decay and intercept";
  rec.tolerances = {{"loglog_slope", fmt17(0.9)},
                    {"intercept_relative", fmt17(1e-3)},
                    {"runtime_seconds", fmt17(10.0)}};
  const auto t0 = Clock::now();

  std::vector<real> radii;
  for (int i = 0; i <= 6; ++i) radii.push_back(0.1 * std::pow(2.0, -i));

  const HartogsBundle b = build_hartogs_bundle(cfg);
  const auto graph_r = hartogs_graph_defining(b.field_d0);

  Rng rng(cfg.seed);
  bool ok = true;
  real worst_slope = 1e300, worst_rel = 0;
  int cases = 0;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();

  auto run_case = [&](const DefiningFn& r, const cvec& z, const cvec& a) {
    const AnalyticDisc disc = levi_disc(r, z, a);
    const ResidualReport rep = taylor_residual(r, disc, radii);
    const real rel =
        std::fabs(rep.intercept - rep.levi_value) / std::max(std::fabs(rep.levi_value), 1e-12);
    if (!rep.vanishing) worst_slope = std::min(worst_slope, rep.loglog_slope);
    worst_rel = std::max(worst_rel, rel);
    ok = ok && rep.decays() && rel <= 1e-3;
    nlohmann::ordered_json row;
    row["levi"] = fmt17(rep.levi_value);
    row["slope"] = fmt17(rep.loglog_slope);
    row["vanishing"] = rep.vanishing;
    row["intercept_rel"] = fmt17(rel);
    rows.push_back(row);
    ++cases;
  };

  const DefiningFn ball = ball_defining(2);
  for (int i = 0; i < 8; ++i) {
    const cvec z = seeded_boundary_point(ball, rng);
    run_case(ball, z, seeded_direction(2, rng));
  }
  for (const real c : {0.3, -0.5}) {
    const DefiningFn q = quadric_defining(c);
    for (int i = 0; i < 3; ++i) {
      const cvec z = seeded_boundary_point(q, rng);
      run_case(q, z, seeded_direction(2, rng));
    }
  }
  // graph points over the logarithmic branch of the carved ball
  for (int i = 0; i < 6; ++i) {
    const real ang = rng.uniform(-0.7, 0.7);
    const real rho = rng.uniform(0.55, 0.8);
    const cplx z0 = rho * cplx(std::cos(ang), std::sin(ang));
    const real phi = b.field_d0->value(z0.real(), z0.imag());
    const real wang = rng.uniform(0, 2 * kPi);
    const cplx w0 = std::exp(phi) * cplx(std::cos(wang), std::sin(wang));
    cvec a = seeded_direction(2, rng);
    for (cplx& c : a) c *= 0.5;  // keep the disc inside the smooth zone
    run_case(graph_r, cvec{z0, w0}, a);
  }

  rec.runtime_seconds = elapsed(t0);
  rec.measured = {{"cases", cases},
                  {"worst_slope", fmt17(worst_slope)},
                  {"worst_intercept_relative", fmt17(worst_rel)},
                  {"rows", rows}};
  ok = ok && cases == 20 && rec.runtime_seconds < 10.0;
  rec.status = status_of(ok);
  return rec;
}

ClaimRecord run_kernel_oracles(const PipelineConfig& cfg) {
  ClaimRecord rec;
  rec.id = "C6";
  rec.description = "kernel estimates against the series oracles";
  rec.tolerances = {{"disc_sigma", fmt17(3.0)},
                    {"product_relative", fmt17(0.05)},
                    {"runtime_seconds", fmt17(60.0)}};
  const auto t0 = Clock::now();

  bool ok = true;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();

  // unit disc against the closed-form kernel
  {
    const DomainSpec disc = disc_domain(1.0);
    BasisFamily basis;
    basis.dim = 1;
    basis.j_min = 0;
    basis.j_max = 8;
    const GramResult gram = mc_gram(disc, basis, cfg.mc_samples, cfg.seed);
    const std::vector<cplx> pts = {cplx(0, 0), cplx(0.3, 0), cplx(0, 0.5),
                                   cplx(-0.2, 0.4), cplx(0.55, -0.35)};
    for (const cplx z : pts) {
      const KernelEstimate est =
          mc_gram_kernel(disc, basis, cvec{z}, cfg.mc_samples, cfg.seed, &gram);
      const real truth = disc_kernel(z);
      const real sig = std::fabs(est.value - truth) / std::max(est.stderr_estimate, 1e-12);
      nlohmann::ordered_json row;
      row["z"] = fmt17(std::abs(z));
      row["estimate"] = fmt17(est.value);
      row["series"] = fmt17(truth);
      row["sigma"] = fmt17(sig);
      rows.push_back(row);
      ok = ok && sig <= 3.0;
    }
  }

  // product domain against the product of the component series
  {
    const DomainSpec prod = annulus_disc_product();
    BasisFamily basis;
    basis.dim = 2;
    basis.j_min = -8;
    basis.j_max = 8;
    basis.k_min = 0;
    basis.k_max = 8;
    const GramResult gram = mc_gram(prod, basis, cfg.mc_samples, cfg.seed);
    const std::vector<cvec> pts = {cvec{cplx(1.0, 0), cplx(0, 0)},
                                   cvec{cplx(0.8, 0.4), cplx(0.3, 0)},
                                   cvec{cplx(-1.1, 0), cplx(-0.2, 0.3)},
                                   cvec{cplx(0, -0.9), cplx(0.1, -0.4)},
                                   cvec{cplx(0.7, 0.7), cplx(0, 0.45)}};
    for (const cvec& z : pts) {
      const KernelEstimate est =
          mc_gram_kernel(prod, basis, z, cfg.mc_samples, cfg.seed, &gram);
      const real truth = product_kernel(annulus_kernel(z[0]), disc_kernel(z[1]));
      const real rel = std::fabs(est.value - truth) / truth;
      nlohmann::ordered_json row;
      row["estimate"] = fmt17(est.value);
      row["product_series"] = fmt17(truth);
      row["relative"] = fmt17(rel);
      rows.push_back(row);
      ok = ok && rel <= 0.05;
    }
  }

  rec.runtime_seconds = elapsed(t0);
  rec.measured = {{"rows", rows}};
  ok = ok && rec.runtime_seconds < 60.0;
  rec.status = status_of(ok);
  return rec;
}

ClaimRecord run_slit_dichotomy(const PipelineConfig& cfg) {
  ClaimRecord rec;
  rec.id = "C7";
  rec.description = "kernel blow-up under the dome, boundedness from the other side";
  rec.tolerances = {{"blowup_ratio", fmt17(10.0)},
                    {"bounded_ratio", fmt17(2.0)},
                    {"runtime_seconds", fmt17(300.0)}};
  const auto t0 = Clock::now();

  BasisFamily basis;
  basis.dim = 2;
  basis.j_min = -cfg.basis_deg1;
  basis.j_max = cfg.basis_deg1;
  basis.k_min = 0;
  basis.k_max = cfg.basis_deg2;

  // approach within the dome side: the kernel of the side-restricted span
  const DomainSpec inside = slit_inside_domain();
  const auto path_in = [](real t) { return cvec{cplx(1.0, 0.5 * t), cplx(0, 0)}; };
  const BlowupReport rin = blowup_scan(inside, path_in, basis, cfg.blowup_steps,
                                       cfg.mc_samples, cfg.seed);

  // approach from above the dome with the global basis
  const DomainSpec slit = slit_domain();
  const auto path_out = [](real t) {
    return cvec{cplx(1.0, 0.5 + 0.3 * (1.0 - t)), cplx(0, 0)};
  };
  const BlowupReport rout = blowup_scan(slit, path_out, basis, cfg.blowup_steps,
                                        cfg.mc_samples, cfg.seed);

  auto dump = [](const BlowupReport& r) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (size_t i = 0; i < r.t.size(); ++i) {
      nlohmann::ordered_json row;
      row["t"] = fmt17(r.t[i]);
      row["estimate"] = fmt17(r.estimate[i]);
      row["stderr"] = fmt17(r.stderr_estimate[i]);
      rows.push_back(row);
    }
    return rows;
  };

  rec.runtime_seconds = elapsed(t0);
  rec.measured = {{"inside", dump(rin)},
                  {"inside_verdict", rin.verdict == BlowupVerdict::Blowup ? "Blowup"
                                                                          : "other"},
                  {"outside", dump(rout)},
                  {"outside_verdict",
                   rout.verdict == BlowupVerdict::Bounded ? "Bounded" : "other"}};
  const bool ok = rin.verdict == BlowupVerdict::Blowup &&
                  rout.verdict == BlowupVerdict::Bounded && rec.runtime_seconds < 300.0;
  rec.status = status_of(ok);
  return rec;
}

ClaimRecord run_convexity(const PipelineConfig& cfg) {
  ClaimRecord rec;
  rec.id = "C8";
  rec.description = "convexity of the open dome region; annulus control fails";
  rec.tolerances = {{"pairs", 10000}, {"runtime_seconds", fmt17(5.0)}};
  const auto t0 = Clock::now();

  const bool dome = convexity_check(slit_inside_domain(), 10000, cfg.seed);
  const bool annulus = convexity_check(annulus_domain(), 10000, cfg.seed);
  const bool ball = convexity_check(ball_domain(2), 10000, cfg.seed);

  rec.runtime_seconds = elapsed(t0);
  rec.measured = {{"dome_region", dome}, {"annulus_control", annulus}, {"ball_control", ball}};
  const bool ok = dome && !annulus && ball && rec.runtime_seconds < 5.0;
  rec.status = status_of(ok);
  return rec;
}

ClaimRecord run_sup_witness(const PipelineConfig& cfg) {
  ClaimRecord rec;
  rec.id = "C9";
  rec.description = "normalized peak-function supremum is negative and plurisubharmonic";
  rec.tolerances = {{"inward_value_floor", fmt17(-0.1)},
                    {"probe_violations", 0},
                    {"runtime_seconds", fmt17(60.0)}};
  const auto t0 = Clock::now();

  const HartogsBundle b = build_hartogs_bundle(cfg);
  const DomainSpec dom = hartogs_domain_spec(b.field_d, "hartogs_cap");
  const DefiningFn r = hartogs_graph_defining(b.field_d);

  // 16 boundary points over the spherical part (|x| > r0)
  std::vector<cvec> anchors;
  Rng rng(cfg.seed);
  for (int i = 0; i < 16; ++i) {
    const real ang0 = -0.9 + 1.8 * (i % 8) / 7.0;
    const real ang = (i < 8) ? ang0 : ang0 + kPi;
    const cplx z0 = 0.62 * cplx(std::cos(ang), std::sin(ang));
    const real phi = b.field_d->value(z0.real(), z0.imag());
    const real wang = rng.uniform(0, 2 * kPi);
    anchors.push_back(cvec{z0, std::exp(phi) * cplx(std::cos(wang), std::sin(wang))});
  }

  std::vector<PshWitness> parts;
  for (size_t j = 0; j < anchors.size(); ++j)
    parts.push_back(levi_peak_function(r, anchors[j], dom, Rng::derive(cfg.seed, j)));

  const std::vector<cvec> samples = sample_domain(dom, 100000, Rng::derive(cfg.seed, 5));
  const Exhaustion exh = default_exhaustion(static_cast<int>(parts.size()));
  const SupWitness u = sup_regularized(parts, exh, dom, samples);

  bool negative = true;
  real max_u = -1e300;
  for (const cvec& z : samples) {
    const real v = u.value(z);
    max_u = std::max(max_u, v);
    if (v >= 0) negative = false;
  }

  const PshProbeReport probes =
      psh_check([&u](const cvec& z) { return u.value(z); }, dom, 1000, cfg.seed);

  bool limit_ok = true;
  real worst_inward = 0;
  for (size_t j = 0; j < anchors.size(); ++j) {
    const cvec nu = r.unit_normal(anchors[j]);
    cvec z = anchors[j];
    for (int d = 0; d < 2; ++d) z[d] -= 1e-3 * nu[d];
    const real v = u.value(z);
    worst_inward = std::min(worst_inward == 0 ? v : worst_inward, v);
    if (!(v > -0.1)) limit_ok = false;
  }

  rec.runtime_seconds = elapsed(t0);
  rec.measured = {{"witnesses", static_cast<int>(parts.size())},
                  {"max_value_over_samples", fmt17(max_u)},
                  {"probe_count", probes.probes},
                  {"probe_violations", probes.violations},
                  {"worst_inward_value", fmt17(worst_inward)}};
  const bool ok = negative && probes.violations == 0 && limit_ok &&
                  rec.runtime_seconds < 60.0;
  rec.status = status_of(ok);
  return rec;
}

ClaimRecord run_greedy_trace(const PipelineConfig& cfg) {
  ClaimRecord rec;
  rec.id = "C10";
  rec.description = "greedy growth trace along the dome apex";
  rec.tolerances = {{"h_lower_bound", "k - 1 for k >= 2"},
                    {"runtime_seconds", fmt17(300.0)}};
  const auto t0 = Clock::now();

  BasisFamily basis;
  basis.dim = 2;
  basis.j_min = -cfg.basis_deg1;
  basis.j_max = cfg.basis_deg1;
  basis.k_min = 0;
  basis.k_max = cfg.basis_deg2;

  const DomainSpec dom = slit_inside_domain();
  const cvec apex{cplx(1.0, 0.5), cplx(0, 0)};
  const GreedyTrace trace =
      greedy_unbounded_witness(dom, basis, apex, cfg.levels, cfg.mc_samples, cfg.seed);

  bool ok = true;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const GreedyLevel& lv : trace.levels) {
    nlohmann::ordered_json row;
    row["k"] = lv.k;
    row["dist"] = fmt17(lv.dist);
    row["extremal"] = fmt17(lv.extremal);
    row["target"] = fmt17(lv.target);
    row["met"] = lv.met;
    row["m_bound"] = fmt17(lv.m_bound);
    row["near_sup"] = fmt17(lv.near_sup);
    row["h_at_z"] = fmt17(lv.h_at_z);
    row["paper_telescoping_floor"] = fmt17(lv.k - 1.0 / 6.0);
    rows.push_back(row);
    ok = ok && lv.met;
    if (lv.k >= 2) ok = ok && lv.h_at_z >= lv.k - 1.0;
  }
  ok = ok && std::isfinite(trace.h_norm) &&
       static_cast<int>(trace.levels.size()) == cfg.levels;

  rec.runtime_seconds = elapsed(t0);
  rec.measured = {{"levels", rows}, {"h_norm", fmt17(trace.h_norm)}, {"c", fmt17(trace.c)}};
  ok = ok && rec.runtime_seconds < 300.0;
  rec.status = status_of(ok);
  return rec;
}

ClaimRecord run_determinism(const PipelineConfig& cfg) {
  ClaimRecord rec;
  rec.id = "C11";
  rec.description = "repeated runs with one seed produce byte-identical reports";
  rec.tolerances = {{"byte_identical", true}};
  const auto t0 = Clock::now();

  PipelineConfig small = cfg;
  small.mc_samples = 5000;
  small.grid_n = 64;
  small.depth = 6;
  auto mini_report = [&small]() {
    VerificationReport rep;
    rep.config_echo = small.to_json();
    rep.claims.push_back(run_parameter_feasibility(small));
    rep.claims.push_back(run_convexity(small));
    for (ClaimRecord& c : rep.claims) c.runtime_seconds = 0;  // timings vary by run
    return rep.to_json().dump(1);
  };
  const std::string a = mini_report();
  const std::string bst = mini_report();

  rec.runtime_seconds = elapsed(t0);
  rec.measured = {{"bytes", static_cast<long>(a.size())}, {"identical", a == bst}};
  rec.status = status_of(a == bst);
  return rec;
}

VerificationReport run_verify_all(const PipelineConfig& cfg) {
  cfg.validate();
  VerificationReport rep;
  rep.config_echo = cfg.to_json();
  rep.claims.push_back(run_parameter_feasibility(cfg));
  rep.claims.push_back(run_plateau_concavity(cfg));
  rep.claims.push_back(run_holder_regularity(cfg));
  rep.claims.push_back(run_boundary_classification(cfg));
  rep.claims.push_back(run_levi_disc_identity(cfg));
  rep.claims.push_back(run_kernel_oracles(cfg));
  rep.claims.push_back(run_slit_dichotomy(cfg));
  rep.claims.push_back(run_convexity(cfg));
  rep.claims.push_back(run_sup_witness(cfg));
  rep.claims.push_back(run_greedy_trace(cfg));
  rep.claims.push_back(run_determinism(cfg));
  return rep;
}

VerificationReport run_pipeline(const PipelineConfig& cfg, PipelineKind kind) {
  cfg.validate();
  if (kind == PipelineKind::VerifyAll) return run_verify_all(cfg);

  VerificationReport rep;
  rep.config_echo = cfg.to_json();
  switch (kind) {
    case PipelineKind::ConstructF: {
      write_construct_f(cfg, cfg.out_dir);
      ClaimRecord rec;
      rec.id = "P-construct";
      rec.description = "bump profile sum constructed and serialized";
      const BumpProfile profile = build_base_bump();
      const ParamSchedule s = solve_parameters(cfg.eps, cfg.c1, cfg.c2, profile);
      rec.measured = {{"schedule", schedule_to_json(s)},
                      {"leaf_count", 1L << cfg.depth}};
      rec.status = status_of(s.all_ok());
      rep.claims.push_back(rec);
      break;
    }
    case PipelineKind::ClassifyBoundary:
      write_classification(cfg, cfg.out_dir);
      rep.claims.push_back(run_boundary_classification(cfg));
      break;
    case PipelineKind::BergmanScan:
      rep.claims.push_back(run_slit_dichotomy(cfg));
      break;
    case PipelineKind::Witness:
      rep.claims.push_back(run_greedy_trace(cfg));
      break;
    case PipelineKind::VerifyAll:
      break;
  }
  return rep;
}

// ----------------------------------------------------------- serialization

nlohmann::ordered_json schedule_to_json(const ParamSchedule& s) {
  nlohmann::ordered_json j;
  j["eps"] = fmt17(s.eps);
  j["c1"] = fmt17(s.c1);
  j["c2"] = fmt17(s.c2);
  j["c3"] = fmt17(s.c3);
  j["c4"] = fmt17(s.c4);
  j["a0"] = fmt17(s.a0);
  j["p0"] = fmt17(s.p0);
  j["gamma"] = fmt17(s.gamma);
  j["delta"] = fmt17(s.delta);
  j["A"] = fmt17(s.big_a);
  j["B"] = fmt17(s.big_b);
  return j;
}

ParamSchedule schedule_from_json(const nlohmann::ordered_json& j) {
  ParamSchedule s;
  s.eps = parse17(j.at("eps").get<std::string>());
  s.c1 = parse17(j.at("c1").get<std::string>());
  s.c2 = parse17(j.at("c2").get<std::string>());
  s.c3 = parse17(j.at("c3").get<std::string>());
  s.c4 = parse17(j.at("c4").get<std::string>());
  s.a0 = parse17(j.at("a0").get<std::string>());
  s.p0 = parse17(j.at("p0").get<std::string>());
  s.gamma = parse17(j.at("gamma").get<std::string>());
  s.delta = parse17(j.at("delta").get<std::string>());
  s.big_a = parse17(j.at("A").get<std::string>());
  s.big_b = parse17(j.at("B").get<std::string>());
  return s;
}

nlohmann::ordered_json tree_to_json(const IntervalTree& t) {
  nlohmann::ordered_json levels = nlohmann::ordered_json::array();
  for (const IntervalTree::Level& lv : t.levels()) {
    nlohmann::ordered_json j;
    j["length"] = fmt17(lv.length);
    j["p"] = fmt17(lv.p);
    nlohmann::ordered_json cs = nlohmann::ordered_json::array();
    for (real c : lv.centers) cs.push_back(fmt17(c));
    j["centers"] = cs;
    levels.push_back(j);
  }
  nlohmann::ordered_json j;
  j["depth"] = t.depth();
  j["levels"] = levels;
  return j;
}

// ----------------------------------------------------------------- output

void write_construct_f(const PipelineConfig& cfg, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const BumpProfile profile = build_base_bump();
  const ParamSchedule s = solve_parameters(cfg.eps, cfg.c1, cfg.c2, profile);
  const IntervalTree tree = build_interval_tree(s, cfg.depth);
  const CantorBumpFn fn(profile, s, tree);

  nlohmann::ordered_json j;
  j["schedule"] = schedule_to_json(s);
  j["tree"] = tree_to_json(tree);
  {
    std::ofstream out(fs::path(out_dir) / "f.json");
    out << j.dump(1) << "\n";
  }
  {
    std::ofstream out(fs::path(out_dir) / "f.csv");
    out << "x,F,Fprime,Fsecond\n";
    const int n = 2000;
    for (int i = 0; i <= n; ++i) {
      const real x = -1.05 + 2.10 * i / n;
      out << fmt17(x) << "," << fmt17(fn.eval(x).value) << "," << fmt17(fn.deriv(x)) << ",";
      if (std::fabs(x) > 1.0) {
        out << "0";  // identically zero outside the support
      } else {
        try {
          out << fmt17(fn.second_on_plateau(x));
        } catch (const NotOnPlateau&) {
          // second derivative undefined off the plateaus
        }
      }
      out << "\n";
    }
  }
}

void write_classification(const PipelineConfig& cfg, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const HartogsBundle b = build_hartogs_bundle(cfg);
  GridSpec grid;
  grid.n = cfg.grid_n;
  const ClassificationMap map = scan_boundary(*b.field_d, grid, b.fn.get(), cfg.r0, 8);

  {
    std::ofstream out(fs::path(out_dir) / "map.csv");
    out << "x,y,laplacian,class\n";
    for (const CellRecord& c : map.cells) {
      if (!c.covered) continue;
      out << fmt17(c.x) << "," << fmt17(c.y) << "," << fmt17(c.laplacian) << ","
          << to_string(c.cls) << "\n";
    }
  }
  {
    nlohmann::ordered_json j;
    j["r0"] = fmt17(cfg.r0);
    j["grid_n"] = cfg.grid_n;
    j["c1_eff"] = fmt17(b.c1_eff);
    j["c2_eff"] = fmt17(b.c2_eff);
    j["convex_cells"] = map.count_convex;
    j["concave_cells"] = map.count_concave;
    j["indeterminate_cells"] = map.count_indeterminate;
    j["dense_at_coarse"] = map.dense_at_coarse;
    std::ofstream out(fs::path(out_dir) / "map_summary.json");
    out << j.dump(1) << "\n";
  }
}

void write_report(const VerificationReport& rep, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  {
    std::ofstream out(fs::path(out_dir) / "report.json");
    out << rep.to_json().dump(1) << "\n";
  }
  {
    std::ofstream out(fs::path(out_dir) / "report.txt");
    out << rep.to_text();
  }
}

}  // namespace scv
