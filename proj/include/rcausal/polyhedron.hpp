// H- and V-representations of rational polyhedra, canonical row forms, and
// the resource-limit error type shared by the heavier algorithms.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rcausal/rational.hpp"

namespace rc {

// Thrown when an enumeration or elimination exceeds a caller-imposed row,
// ray, or time budget.  Partial output is never returned silently.
struct ResourceLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One linear condition a . x >= b (inequality) or a . x = b (equality,
// context-dependent).
struct Row {
  Vec a;
  Rat b = 0;
};

bool row_eq(const Row& r, const Row& s);
bool row_lex_less(const Row& r, const Row& s);

// Scale to coprime integer entries.  Inequalities keep their orientation;
// equalities are additionally flipped so the first nonzero coefficient is
// positive (their orientation carries no meaning).
void normalize_ineq_row(Row& r);
void normalize_eq_row(Row& r);

// {x : eqs hold, ineqs hold}.
struct HPolyhedron {
  int dim = 0;
  std::vector<Row> eqs;    // a . x  = b
  std::vector<Row> ineqs;  // a . x >= b

  // Normalize every row to primitive-integer form, drop duplicates and
  // trivially true rows, and sort each group lexicographically.  A trivially
  // false row (0 >= b with b > 0) is kept so infeasibility stays visible.
  void canonicalize();

  std::string to_text(const std::vector<std::string>& names = {}) const;
};

// Convex hull of `vertices` plus the cone over `rays` (ray entries are kept
// as primitive integer directions).
struct VPolyhedron {
  std::vector<Vec> vertices;
  std::vector<Vec> rays;

  bool empty() const { return vertices.empty() && rays.empty(); }
  void canonicalize();  // normalize rays, sort both lists, drop duplicates
};

// Exact membership test.
bool satisfies(const HPolyhedron& h, const Vec& x);

// Canonical vertex export: one vertex per line, coordinates as "num/den"
// separated by single spaces, lines sorted lexicographically.
std::string vertex_lines(const VPolyhedron& v);
VPolyhedron parse_vertex_lines(const std::string& text);

std::string row_to_text(const Row& r, bool equality,
                        const std::vector<std::string>& names);

}  // namespace rc
