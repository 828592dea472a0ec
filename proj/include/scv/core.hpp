#ifndef SCV_CORE_HPP
#define SCV_CORE_HPP

#include <complex>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace scv {

using real = double;
using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

inline constexpr real kPi = 3.14159265358979323846;

/// Formats a double with 17 significant digits (round-trips bit-exactly
/// through strtod). Used everywhere a real lands in JSON or a report.
inline std::string fmt17(real x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

inline real parse17(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

inline real sqr(real x) { return x * x; }
inline real norm2(const cvec& a) {
  real s = 0;
  for (const cplx& c : a) s += std::norm(c);
  return s;
}

// quintic smoothstep and its derivatives; C^2 joins at 0 and 1
inline real smoothstep5(real t) {
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}
inline real smoothstep5_d1(real t) {
  if (t <= 0 || t >= 1) return 0;
  return t * t * (30.0 + t * (-60.0 + 30.0 * t));
}
inline real smoothstep5_d2(real t) {
  if (t <= 0 || t >= 1) return 0;
  return t * (60.0 + t * (-180.0 + 120.0 * t));
}

}  // namespace scv

#endif
