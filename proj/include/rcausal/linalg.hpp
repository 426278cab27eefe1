// Exact dense rational linear algebra: row reduction, rank, linear solves,
// nullspace bases, and minimum-norm points on affine subspaces.

#pragma once

#include "rcausal/rational.hpp"

namespace rc {

using Mat = std::vector<Vec>;

// Reduce m to reduced row echelon form in place.  Returns the pivot column of
// each nonzero row, in order; the rank is the size of the returned vector.
// Zero rows are removed.  If prefer_cols is nonempty, pivots are chosen from
// those columns first (used to eliminate designated variables).
std::vector<int> rref(Mat& m, const std::vector<int>& prefer_cols = {});

int rank_of(Mat m);

// Basis of {x in Q^n_cols : m x = 0}.  Rows of the result are the basis
// vectors, in the deterministic order induced by the free columns.
Mat nullspace_basis(const Mat& m, int n_cols);

// One solution of m x = b (x of width n_cols); returns false if inconsistent.
bool solve_linear(Mat m, Vec b, int n_cols, Vec& x);

// The minimum-Euclidean-norm point on {x : m x = b}; false if inconsistent.
bool min_norm_point(const Mat& m, const Vec& b, int n_cols, Vec& x);

}  // namespace rc
