#ifndef SCV_RNG_HPP
#define SCV_RNG_HPP

#include <cstdint>
#include <random>

namespace scv {

/// Deterministic RNG. mt19937_64 has a standardized sequence, and the
/// uniform mapping below avoids std::uniform_real_distribution (whose
/// output is implementation-defined), so streams are reproducible across
/// compilers and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// uniform in [0,1)
  double unit() { return (gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * unit(); }

  std::uint64_t raw() { return gen_(); }

  /// deterministic derivation of per-batch sub-streams
  static std::uint64_t derive(std::uint64_t master, std::uint64_t stream) {
    // splitmix64 step on (master ^ golden*stream)
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace scv

#endif
