// Exact rational linear programming via a dense two-phase simplex with
// Bland's rule.  A double-precision twin of the same code exists purely as a
// screening heuristic; no decision reported by the library rests on it.

#pragma once

#include "rcausal/polyhedron.hpp"

namespace rc {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rat value;  // optimal objective value when status == Optimal
  Vec x;      // an optimal (or feasible) point when one exists
};

// Minimize objective . x over h.  Exact.
LpResult lp_minimize(const HPolyhedron& h, const Vec& objective);

// Exact feasibility test; fills *witness with a feasible point if asked.
bool lp_feasible(const HPolyhedron& h, Vec* witness = nullptr);

// True iff every point of h satisfies row.a . x >= row.b.  Decided by exact
// minimization of row.a over h: an infeasible h implies anything, an
// unbounded minimum implies nothing.
bool implied(const HPolyhedron& h, const Row& row);

// Same question decided by the dual route: search for an exact nonnegative
// combination of h's inequality rows (plus a free combination of its
// equalities) that dominates `row`.  Equivalent to `implied` whenever h is
// feasible, which callers in this library guarantee; kept as an independently
// implemented second route and preferred in inner loops because its tableau
// has only h.dim rows.
bool implied_farkas(const HPolyhedron& h, const Row& row);

// Double-precision screen for implied_farkas.  "false" must only ever be
// acted on as "keep the row" (conservative); "true" must be confirmed by an
// exact route before a row is dropped.
bool implied_farkas_hint(const HPolyhedron& h, const Row& row);

}  // namespace rc
