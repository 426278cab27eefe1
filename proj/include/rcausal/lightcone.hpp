// Exact causal geometry in d+1 Minkowski space-time: future-cone membership,
// the decision procedure for "is the intersection of future cones contained
// in another future cone", exact rational Lorentz boosts, and a randomized
// sampling oracle used to cross-check the decision procedure.
//
// The containment question is reduced to escape directions: the intersection
// of the cones K(a_i) escapes K(w) precisely when some unit direction u
// satisfies (x_i - x_w) . u > (t_i - t_w) for every apex a_i.  Whether that
// open polyhedron meets the unit sphere is decided exactly with rational
// linear programming plus face enumeration for the extremal norms.

#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "rcausal/rational.hpp"

namespace rc {

struct SpacetimePoint {
  Rat t;
  Vec x;

  int spatial_dim() const { return static_cast<int>(x.size()); }
  bool operator==(const SpacetimePoint& o) const { return t == o.t && x == o.x; }
};

// q lies in the closed future light cone of p (unit speed of light).
bool future_contains(const SpacetimePoint& p, const SpacetimePoint& q);

// Is the intersection of the closed future cones of `apexes` contained in the
// closed future cone of `witness`?  Exact; throws on empty apex list or
// mismatched spatial dimensions.
bool intersection_within_cone(const std::vector<SpacetimePoint>& apexes,
                              const SpacetimePoint& witness);

// A Lorentz boost with rational velocity and rational Lorentz factor.
struct Boost {
  Vec beta;   // velocity vector, |beta| < 1
  Rat gamma;  // 1/sqrt(1 - |beta|^2), exact
};

// Validates that 1 - |beta|^2 is a square of a rational, so the whole
// transformation stays inside Q; throws otherwise.
Boost make_boost(const Vec& beta);

SpacetimePoint boost_point(const Boost& b, const SpacetimePoint& p);

// Exact random boosts built from Pythagorean triples: the speed 2mn/(m^2+n^2)
// and a rational unit direction always give a rational Lorentz factor.
Boost random_pythagorean_boost(std::mt19937_64& rng, int spatial_dim);

// Randomized search for a point that is in every K(apex) but escapes
// K(witness).  The returned point is verified exactly before being reported,
// so a non-empty result refutes containment outright; an empty result proves
// nothing.  Entirely independent of the decision procedure above.
std::optional<SpacetimePoint> sampling_oracle(const std::vector<SpacetimePoint>& apexes,
                                              const SpacetimePoint& witness,
                                              std::uint64_t seed, int trials);

}  // namespace rc
