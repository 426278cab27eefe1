// Fourier-Motzkin projection of H-polyhedra with exact arithmetic.
//
// Equalities are used first to substitute away as many dropped variables as
// possible; the rest are eliminated pairwise with a greedy smallest-blowup
// variable order.  Growth is controlled by the classical ancestor-count rule
// (a row combined from more than s+1 original rows after s elimination steps
// is redundant) plus interleaved LP-based redundancy passes.  A final exact
// pass makes the output irredundant and turns implicit equalities into
// explicit ones.

#pragma once

#include "rcausal/polyhedron.hpp"

namespace rc {

struct FmOptions {
  int workers = 0;                       // reserved; elimination runs serially
  int lp_prune_threshold = 64;           // LP passes start above this row count
  long max_rows = 0;                     // 0 = unlimited, else ResourceLimitError
  double time_budget_s = 0;              // 0 = unlimited
  bool detect_implicit_equalities = true;
};

// Project h onto the coordinates NOT listed in drop_vars.  The result lives
// on the kept coordinates in ascending original order and is canonical:
// irredundant, with implicit equalities surfaced, rows normalized and sorted.
// An infeasible input yields the canonical infeasible system {0 >= 1}.
HPolyhedron eliminate(const HPolyhedron& h, std::vector<int> drop_vars,
                      const FmOptions& opt = {});

}  // namespace rc
