#include "rcausal/polyhedron.hpp"

#include <algorithm>
#include <sstream>

namespace rc {

bool row_eq(const Row& r, const Row& s) {
  return r.b == s.b && r.a == s.a;
}

bool row_lex_less(const Row& r, const Row& s) {
  if (r.a != s.a) return lex_less(r.a, s.a);
  return r.b < s.b;
}

namespace {

void normalize_row_combined(Row& r, bool sign_normalize) {
  Vec combined = r.a;
  combined.push_back(r.b);
  normalize_primitive(combined, sign_normalize);
  r.b = combined.back();
  combined.pop_back();
  r.a = std::move(combined);
}

}  // namespace

void normalize_ineq_row(Row& r) { normalize_row_combined(r, false); }
void normalize_eq_row(Row& r) { normalize_row_combined(r, true); }

void HPolyhedron::canonicalize() {
  for (Row& r : eqs) {
    if (static_cast<int>(r.a.size()) != dim)
      throw std::runtime_error("HPolyhedron: equality row width mismatch");
    normalize_eq_row(r);
  }
  for (Row& r : ineqs) {
    if (static_cast<int>(r.a.size()) != dim)
      throw std::runtime_error("HPolyhedron: inequality row width mismatch");
    normalize_ineq_row(r);
  }
  auto all_zero = [](const Row& r) { return is_zero_vec(r.a); };
  eqs.erase(std::remove_if(eqs.begin(), eqs.end(),
                           [&](const Row& r) { return all_zero(r) && sgn(r.b) == 0; }),
            eqs.end());
  ineqs.erase(std::remove_if(ineqs.begin(), ineqs.end(),
                             [&](const Row& r) { return all_zero(r) && sgn(r.b) <= 0; }),
              ineqs.end());
  std::sort(eqs.begin(), eqs.end(), row_lex_less);
  eqs.erase(std::unique(eqs.begin(), eqs.end(), row_eq), eqs.end());
  std::sort(ineqs.begin(), ineqs.end(), row_lex_less);
  ineqs.erase(std::unique(ineqs.begin(), ineqs.end(), row_eq), ineqs.end());
}

std::string row_to_text(const Row& r, bool equality,
                        const std::vector<std::string>& names) {
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < r.a.size(); ++i) {
    if (sgn(r.a[i]) == 0) continue;
    Rat c = r.a[i];
    std::string name = i < names.size() ? names[i] : "x" + std::to_string(i);
    if (first) {
      if (c == -1)
        out << "-";
      else if (c != 1)
        out << rat_to_string(c) << " ";
      first = false;
    } else {
      out << (sgn(c) > 0 ? " + " : " - ");
      Rat ac = abs(c);
      if (ac != 1) out << rat_to_string(ac) << " ";
    }
    out << name;
  }
  if (first) out << "0";
  out << (equality ? " = " : " >= ") << rat_to_string(r.b);
  return out.str();
}

std::string HPolyhedron::to_text(const std::vector<std::string>& names) const {
  std::ostringstream out;
  for (const Row& r : eqs) out << row_to_text(r, true, names) << "\n";
  for (const Row& r : ineqs) out << row_to_text(r, false, names) << "\n";
  return out.str();
}

void VPolyhedron::canonicalize() {
  for (Vec& r : rays) normalize_primitive(r, false);
  std::sort(vertices.begin(), vertices.end(), lex_less);
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  std::sort(rays.begin(), rays.end(), lex_less);
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
}

bool satisfies(const HPolyhedron& h, const Vec& x) {
  if (static_cast<int>(x.size()) != h.dim)
    throw std::runtime_error("satisfies: point width mismatch");
  for (const Row& r : h.eqs)
    if (dot(r.a, x) != r.b) return false;
  for (const Row& r : h.ineqs)
    if (dot(r.a, x) < r.b) return false;
  return true;
}

std::string vertex_lines(const VPolyhedron& v) {
  std::vector<std::string> lines;
  lines.reserve(v.vertices.size());
  for (const Vec& vert : v.vertices) {
    std::string line;
    for (std::size_t i = 0; i < vert.size(); ++i) {
      if (i) line += " ";
      line += rat_to_den_string(vert[i]);
    }
    lines.push_back(std::move(line));
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const std::string& line : lines) {
    out += line;
    out += "\n";
  }
  return out;
}

VPolyhedron parse_vertex_lines(const std::string& text) {
  VPolyhedron v;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    Vec vert;
    std::string tok;
    while (ls >> tok) vert.push_back(rat_from_string(tok));
    if (!vert.empty()) v.vertices.push_back(std::move(vert));
  }
  return v;
}

}  // namespace rc
