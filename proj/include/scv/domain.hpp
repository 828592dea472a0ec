#ifndef SCV_DOMAIN_HPP
#define SCV_DOMAIN_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "scv/core.hpp"

namespace scv {

enum class Side { InsideD1, OutsideD1 };

/// Bounded region of C^n given by an indicator, a bounding box, and a
/// boundary-distance oracle. The box is stored as 2n real intervals
/// (re, im per coordinate).
struct DomainSpec {
  int dim = 0;
  std::string name;
  std::vector<std::pair<real, real>> box;  // size 2*dim
  std::function<bool(const cvec&)> member;
  std::function<real(const cvec&)> boundary_distance;
  std::function<Side(const cvec&)> side;  // empty unless the domain is slit

  real box_volume() const {
    real v = 1;
    for (auto& [lo, hi] : box) v *= (hi - lo);
    return v;
  }
};

DomainSpec disc_domain(real radius = 1.0);
DomainSpec annulus_domain(real r_in = 0.5, real r_out = 1.5);
DomainSpec ball_domain(int dim, real radius = 1.0);
/// annulus x disc product (the ambient of the slit domain)
DomainSpec annulus_disc_product();

/// Slit domain: (P x D) minus the surface
///   S = {(x1-1)^2 + ((1+|z2|^2)/(1-|z2|^2)) y1^2 = 1/4, y1 > 0},
/// with a side oracle telling which side of the dome a point lies on.
/// Membership excludes a 1e-12 band around S.
DomainSpec slit_domain();

/// The open region under the dome (interior of the closed side), used for
/// side-restricted kernel estimation and the greedy construction.
DomainSpec slit_inside_domain();

/// the dome equation value (x1-1)^2 + ((1+|z2|^2)/(1-|z2|^2)) y1^2
real slit_surface_value(const cvec& z);
/// Euclidean distance from z to the dome surface S (numeric minimization)
real slit_surface_distance(const cvec& z);

/// Segment test: for sampled point pairs inside the region and
/// t in {1/4, 1/2, 3/4}, checks the segment point stays inside.
bool convexity_check(const DomainSpec& region, int pairs, std::uint64_t seed);

/// rejection-samples `count` points of the domain (deterministic)
std::vector<cvec> sample_domain(const DomainSpec& dom, int count, std::uint64_t seed,
                                long max_draws_factor = 1000);

/// Generic ray-bisection distance estimate for domains without an exact
/// oracle; underestimates are handled by callers that shrink radii.
real ray_boundary_distance(const DomainSpec& dom, const cvec& z, int rays,
                           std::uint64_t seed);

}  // namespace scv

#endif
