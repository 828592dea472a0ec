// Benchmark: the OpenMP kernels against their serial reference paths.
// Results are bit-identical by construction (see test_parallel); this
// target reports the speedups.

#include <chrono>
#include <cstdio>

#include "scv/bergman.hpp"
#include "scv/bump.hpp"
#include "scv/field.hpp"
#include "scv/pipeline.hpp"
#include "scv/witness.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace scv;
using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double time_of(F&& f) {
  const auto t0 = Clock::now();
  f();
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-28s %9.3f s %9.3f s %6.2fx\n", name, serial, parallel,
              serial / parallel);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both columns run serially\n");
#endif
  std::printf("%-28s %11s %11s %7s\n", "kernel", "serial", "parallel", "speedup");

  {
    const DomainSpec prod = annulus_disc_product();
    BasisFamily basis;
    basis.dim = 2;
    basis.j_min = -8;
    basis.j_max = 8;
    basis.k_min = 0;
    basis.k_max = 8;
    const double ts = time_of([&] { mc_gram(prod, basis, 60000, 1, 10, false); });
    const double tp = time_of([&] { mc_gram(prod, basis, 60000, 1, 10, true); });
    row("mc_gram 153x153 @60k", ts, tp);
  }
  {
    PipelineConfig cfg;
    const HartogsBundle b = build_hartogs_bundle(cfg);
    GridSpec grid;
    grid.n = 384;
    const double ts =
        time_of([&] { scan_boundary(*b.field_d, grid, b.fn.get(), cfg.r0, 8, 1e-6, false); });
    const double tp =
        time_of([&] { scan_boundary(*b.field_d, grid, b.fn.get(), cfg.r0, 8, 1e-6, true); });
    row("scan_boundary 384x384", ts, tp);
  }
  {
    const BumpProfile profile = build_base_bump();
    const ParamSchedule s = solve_parameters(0.5, 1.0, 1.0, profile);
    const CantorBumpFn fn(profile, s, build_interval_tree(s, 10));
    PairSampleSpec pairs;
    pairs.count = 300000;
    pairs.seed = 2;
    const double ts = time_of([&] { holder_seminorm(fn, 0.5, pairs, 10, false); });
    const double tp = time_of([&] { holder_seminorm(fn, 0.5, pairs, 10, true); });
    row("holder_seminorm 300k", ts, tp);
  }
  {
    // witness-sized integrand: a sup of 16 peak polynomials
    const DomainSpec ball = ball_domain(2);
    auto u = [](const cvec& z) {
      double best = -1e300;
      for (int j = 0; j < 16; ++j) {
        const double ang = 0.3927 * j;
        const cplx a(std::cos(ang), std::sin(ang));
        best = std::max(best, (z[0] * std::conj(a)).real() - 1.0 +
                                  0.1 * std::norm(z[1] - 0.05 * a));
      }
      return best;
    };
    const double ts = time_of([&] { psh_check(u, ball, 6000, 3, false); });
    const double tp = time_of([&] { psh_check(u, ball, 6000, 3, true); });
    row("psh_check 6000 probes", ts, tp);
  }
  return 0;
}
