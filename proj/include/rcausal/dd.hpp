// Double description method over exact rationals: extreme-ray enumeration of
// polyhedral cones, vertex enumeration of H-polyhedra (via homogenization),
// and facet enumeration of V-polyhedra (via the polar cone).
//
// Adjacency of rays is decided combinatorially (no third ray's tight set
// contains the candidate pair's common tight set), with an independently
// implemented algebraic rank test available as a cross-check.  Insertion
// order is the lexicographic order of the normalized rows.  Results are
// byte-identical for any worker count: parallel sections only fill
// preallocated slots that are merged in a fixed order.

#pragma once

#include "rcausal/polyhedron.hpp"

namespace rc {

struct DdOptions {
  int workers = 0;           // 0 = all available; 1 = serial reference path
  long max_rays = 0;         // 0 = unlimited; else throw ResourceLimitError
  double time_budget_s = 0;  // 0 = unlimited; checked between insertions
  bool cross_check_adjacency = false;  // run the rank test alongside (testing)
};

// Generators of a polyhedral cone: nonnegative combinations of `rays` plus
// arbitrary combinations of `lines`.
struct ConeRep {
  std::vector<Vec> rays;
  std::vector<Vec> lines;
};

// Extreme rays and lineality space of {y : r . y >= 0 for r in ineq_rows,
// e . y = 0 for e in eq_rows}.
ConeRep dd_cone(int dim, std::vector<Vec> ineq_rows, std::vector<Vec> eq_rows,
                const DdOptions& opt = {});

// All vertices (and extreme rays, if unbounded) of h.  An empty result means
// h is infeasible.  If h contains a line, each lineality direction is
// reported as a pair of opposite rays.
VPolyhedron enumerate_vertices(const HPolyhedron& h, const DdOptions& opt = {});

// Irredundant H-description (facets plus affine-hull equalities) of a
// nonempty V-polyhedron.  Throws on empty input.
HPolyhedron facets(const VPolyhedron& v, const DdOptions& opt = {});

}  // namespace rc
