#ifndef SCV_ERRORS_HPP
#define SCV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace scv {

struct Error : std::runtime_error {
  explicit Error(const std::string& m) : std::runtime_error(m) {}
};

struct ConstraintViolation : Error {
  explicit ConstraintViolation(const std::string& m) : Error("constraint violation: " + m) {}
};
struct Infeasible : Error {
  explicit Infeasible(const std::string& m) : Error("infeasible: " + m) {}
};
struct NotOnPlateau : Error {
  explicit NotOnPlateau(const std::string& m) : Error("not on a plateau: " + m) {}
};
struct DegenerateGradient : Error {
  explicit DegenerateGradient(const std::string& m) : Error("degenerate gradient: " + m) {}
};
struct OutsideDomain : Error {
  explicit OutsideDomain(const std::string& m) : Error("outside domain: " + m) {}
};
struct SingularGram : Error {
  explicit SingularGram(const std::string& m) : Error("singular Gram matrix: " + m) {}
};
struct DiscExits : Error {
  explicit DiscExits(const std::string& m) : Error("disc leaves the domain: " + m) {}
};
struct NotStrictlyPseudoconvex : Error {
  explicit NotStrictlyPseudoconvex(const std::string& m) : Error("not strictly pseudoconvex: " + m) {}
};
struct NonNegativeWitness : Error {
  explicit NonNegativeWitness(const std::string& m) : Error("witness not negative: " + m) {}
};
struct GrowthTargetUnreachable : Error {
  int level;
  double achieved;
  double target;
  GrowthTargetUnreachable(int k, double got, double want)
      : Error("growth target unreachable at level " + std::to_string(k) + ": achieved " +
              std::to_string(got) + ", target " + std::to_string(want)),
        level(k), achieved(got), target(want) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& m) : Error("domain error: " + m) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& m) : Error("config error: " + m) {}
};
struct CacheCorruption : Error {
  explicit CacheCorruption(const std::string& m) : Error("cache corruption: " + m) {}
};

}  // namespace scv

#endif
