#include "rcausal/scenario.hpp"

#include <algorithm>
#include <sstream>

namespace rc {
namespace {

// Enumerate all mixed-radix assignments over `cards` in lexicographic order
// (leftmost digit most significant).
void for_each_assignment(const std::vector<int>& cards,
                         const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> a(cards.size(), 0);
  for (int c : cards)
    if (c <= 0) throw std::runtime_error("assignment enumeration: nonpositive cardinality");
  while (true) {
    fn(a);
    int pos = static_cast<int>(a.size()) - 1;
    while (pos >= 0) {
      if (++a[pos] < cards[pos]) break;
      a[pos] = 0;
      --pos;
    }
    if (pos < 0) return;
  }
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> toks;
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

}  // namespace

std::string mode_name(ConstraintMode m) {
  switch (m) {
    case ConstraintMode::FullNs:
      return "full_ns";
    case ConstraintMode::Line:
      return "line";
    case ConstraintMode::GeometricRc:
      return "geometric_rc";
    case ConstraintMode::Explicit:
      return "explicit";
  }
  throw std::runtime_error("mode_name: bad mode");
}

ConstraintMode mode_from_name(const std::string& name) {
  if (name == "full_ns") return ConstraintMode::FullNs;
  if (name == "line") return ConstraintMode::Line;
  if (name == "geometric_rc") return ConstraintMode::GeometricRc;
  if (name == "explicit") return ConstraintMode::Explicit;
  throw std::runtime_error("unknown constraint mode: " + name);
}

bool operator==(const Family& a, const Family& b) {
  return a.dropped_input == b.dropped_input && a.out_parties == b.out_parties;
}

bool family_less(const Family& a, const Family& b) {
  if (a.dropped_input != b.dropped_input) return a.dropped_input < b.dropped_input;
  return a.out_parties < b.out_parties;
}

int Scenario::spatial_dim() const {
  for (const Party& p : parties)
    if (p.location) return p.location->spatial_dim();
  return -1;
}

long Scenario::output_space() const {
  long n = 1;
  for (const Party& p : parties) n *= p.output_card;
  return n;
}

long Scenario::input_space() const {
  long n = 1;
  for (const Party& p : parties) n *= p.input_card;
  return n;
}

long Scenario::coord_count() const { return output_space() * input_space(); }

long Scenario::index_of(const std::vector<int>& outs, const std::vector<int>& ins) const {
  if (outs.size() != parties.size() || ins.size() != parties.size())
    throw std::runtime_error("index_of: assignment width mismatch");
  long oi = 0, ii = 0;
  for (std::size_t k = 0; k < parties.size(); ++k) {
    if (outs[k] < 0 || outs[k] >= parties[k].output_card ||
        ins[k] < 0 || ins[k] >= parties[k].input_card)
      throw std::runtime_error("index_of: value out of range");
    oi = oi * parties[k].output_card + outs[k];
    ii = ii * parties[k].input_card + ins[k];
  }
  return oi * input_space() + ii;
}

void Scenario::decode(long idx, std::vector<int>& outs, std::vector<int>& ins) const {
  const long is = input_space();
  long oi = idx / is, ii = idx % is;
  const std::size_t n = parties.size();
  outs.assign(n, 0);
  ins.assign(n, 0);
  for (std::size_t k = n; k-- > 0;) {
    outs[k] = static_cast<int>(oi % parties[k].output_card);
    oi /= parties[k].output_card;
    ins[k] = static_cast<int>(ii % parties[k].input_card);
    ii /= parties[k].input_card;
  }
}

int Scenario::party_index(const std::string& name) const {
  for (std::size_t k = 0; k < parties.size(); ++k)
    if (parties[k].name == name) return static_cast<int>(k);
  return -1;
}

std::vector<int> Scenario::nontrivial_output_parties() const {
  std::vector<int> v;
  for (std::size_t k = 0; k < parties.size(); ++k)
    if (parties[k].output_card >= 2) v.push_back(static_cast<int>(k));
  return v;
}

std::vector<int> Scenario::nontrivial_input_parties() const {
  std::vector<int> v;
  for (std::size_t k = 0; k < parties.size(); ++k)
    if (parties[k].input_card >= 2) v.push_back(static_cast<int>(k));
  return v;
}

std::string Scenario::canonical_text() const {
  std::ostringstream out;
  out << "rcausal scenario v1\n";
  out << "mode " << mode_name(mode) << "\n";
  for (const Party& p : parties) {
    out << "party " << p.name << " inputs " << p.input_card << " outputs " << p.output_card;
    if (p.location) {
      out << " at " << rat_to_string(p.location->t);
      for (const Rat& q : p.location->x) out << " " << rat_to_string(q);
    }
    out << "\n";
  }
  std::vector<Family> om = omitted_families;
  std::sort(om.begin(), om.end(), family_less);
  for (const Family& f : om) {
    out << "omit ";
    for (std::size_t i = 0; i < f.out_parties.size(); ++i) {
      if (i) out << ",";
      out << parties[f.out_parties[i]].name;
    }
    out << " / " << parties[f.dropped_input].name << "\n";
  }
  return out.str();
}

std::uint64_t Scenario::hash() const { return fnv1a(canonical_text()); }

bool CondDistribution::is_valid() const {
  if (!scenario) return false;
  if (static_cast<long>(values.size()) != scenario->coord_count()) return false;
  for (const Rat& q : values)
    if (sgn(q) < 0) return false;
  const long os = scenario->output_space();
  const long is = scenario->input_space();
  for (long ii = 0; ii < is; ++ii) {
    Rat sum = 0;
    for (long oi = 0; oi < os; ++oi) sum += values[oi * is + ii];
    if (sum != 1) return false;
  }
  return true;
}

Rat CondDistribution::cell(const std::vector<int>& outs, const std::vector<int>& ins) const {
  return values[scenario->index_of(outs, ins)];
}

namespace {

// Rows for one family: for each assignment of the kept outputs and of all
// inputs other than the dropped one, consecutive values of the dropped input
// give equal marginals.
void append_family_rows(const Scenario& s, const Family& f, std::vector<Row>& rows) {
  const std::size_t n = s.parties.size();
  const long dim = s.coord_count();
  const int drop = f.dropped_input;
  if (drop < 0 || drop >= static_cast<int>(n))
    throw std::runtime_error("constraint family: bad dropped-input party");
  if (s.parties[drop].input_card < 2) return;
  std::vector<char> in_J(n, 0);
  for (int j : f.out_parties) {
    if (j < 0 || j >= static_cast<int>(n) || j == drop)
      throw std::runtime_error("constraint family: bad output party list");
    in_J[j] = 1;
  }

  std::vector<int> jcards;
  for (int j : f.out_parties) jcards.push_back(s.parties[j].output_card);
  std::vector<int> comp_cards(n, 1);
  for (std::size_t k = 0; k < n; ++k)
    if (!in_J[k]) comp_cards[k] = s.parties[k].output_card;
  std::vector<int> in_cards(n);
  for (std::size_t k = 0; k < n; ++k)
    in_cards[k] = (static_cast<int>(k) == drop) ? 1 : s.parties[k].input_card;

  for_each_assignment(jcards, [&](const std::vector<int>& jo) {
    for_each_assignment(in_cards, [&](const std::vector<int>& base_in) {
      for (int v = 0; v + 1 < s.parties[drop].input_card; ++v) {
        Row r;
        r.a.assign(dim, Rat(0));
        r.b = 0;
        for_each_assignment(comp_cards, [&](const std::vector<int>& co) {
          std::vector<int> outs(co);
          for (std::size_t t = 0; t < f.out_parties.size(); ++t) outs[f.out_parties[t]] = jo[t];
          std::vector<int> ins(base_in);
          ins[drop] = v + 1;
          r.a[s.index_of(outs, ins)] += 1;
          ins[drop] = v;
          r.a[s.index_of(outs, ins)] -= 1;
        });
        rows.push_back(std::move(r));
      }
    });
  });
}

}  // namespace

EqualitySystem ns_constraints(const Scenario& s) {
  EqualitySystem sys;
  sys.dim = s.coord_count();
  std::vector<int> outs = s.nontrivial_output_parties();
  for (int k : s.nontrivial_input_parties()) {
    Family f;
    f.dropped_input = k;
    for (int j : outs)
      if (j != k) f.out_parties.push_back(j);
    if (f.out_parties.empty()) continue;
    append_family_rows(s, f, sys.rows);
  }
  return sys;
}

EqualitySystem line_constraints(const Scenario& s) {
  EqualitySystem sys;
  sys.dim = s.coord_count();
  std::vector<int> outs = s.nontrivial_output_parties();
  for (int k : s.nontrivial_input_parties()) {
    Family left, right;
    left.dropped_input = k;
    right.dropped_input = k;
    for (int j : outs) {
      if (j < k) left.out_parties.push_back(j);
      if (j > k) right.out_parties.push_back(j);
    }
    if (!left.out_parties.empty()) append_family_rows(s, left, sys.rows);
    if (!right.out_parties.empty()) append_family_rows(s, right, sys.rows);
  }
  return sys;
}

FamilyReport rc_family_report(const Scenario& s) {
  const std::vector<int> outs = s.nontrivial_output_parties();
  const std::vector<int> ins = s.nontrivial_input_parties();
  const int m = static_cast<int>(outs.size());

  std::function<bool(const std::vector<int>&, int)> retained_test;
  if (s.mode == ConstraintMode::Explicit) {
    retained_test = [&s](const std::vector<int>& J, int i) {
      // A family is omitted when a declared omission (J0, i) has J0 inside J:
      // if the smaller marginal may depend on the input, so may the larger.
      for (const Family& f : s.omitted_families) {
        if (f.dropped_input != i) continue;
        bool subset = true;
        for (int j : f.out_parties)
          if (std::find(J.begin(), J.end(), j) == J.end()) {
            subset = false;
            break;
          }
        if (subset) return false;
      }
      return true;
    };
  } else if (s.mode == ConstraintMode::GeometricRc) {
    for (const Party& p : s.parties)
      if (!p.location)
        throw std::runtime_error("rc_family_report: party '" + p.name + "' has no location");
    retained_test = [&s](const std::vector<int>& J, int i) {
      std::vector<SpacetimePoint> apexes;
      for (int j : J) apexes.push_back(*s.parties[j].location);
      return !intersection_within_cone(apexes, *s.parties[i].location);
    };
  } else {
    throw std::runtime_error("rc_family_report: scenario mode has no retention test");
  }

  FamilyReport rep;
  for (int i : ins) {
    std::vector<std::uint32_t> retained_masks;
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
      std::vector<int> J;
      bool skip = false;
      for (int t = 0; t < m; ++t)
        if (mask & (1u << t)) {
          if (outs[t] == i) skip = true;
          J.push_back(outs[t]);
        }
      if (skip) continue;
      Family f{J, i};
      if (retained_test(J, i))
        retained_masks.push_back(mask);
      else
        rep.omitted.push_back(std::move(f));
    }
    for (std::uint32_t mask : retained_masks) {
      bool maximal = true;
      for (std::uint32_t other : retained_masks)
        if (other != mask && (mask & other) == mask) {
          maximal = false;
          break;
        }
      if (!maximal) continue;
      Family f;
      f.dropped_input = i;
      for (int t = 0; t < m; ++t)
        if (mask & (1u << t)) f.out_parties.push_back(outs[t]);
      rep.retained_maximal.push_back(std::move(f));
    }
  }
  return rep;
}

EqualitySystem rc_constraints(const Scenario& s) {
  EqualitySystem sys;
  sys.dim = s.coord_count();
  FamilyReport rep = rc_family_report(s);
  for (const Family& f : rep.retained_maximal) append_family_rows(s, f, sys.rows);
  return sys;
}

EqualitySystem constraints_for(const Scenario& s) {
  switch (s.mode) {
    case ConstraintMode::FullNs:
      return ns_constraints(s);
    case ConstraintMode::Line:
      return line_constraints(s);
    case ConstraintMode::GeometricRc:
    case ConstraintMode::Explicit:
      return rc_constraints(s);
  }
  throw std::runtime_error("constraints_for: bad mode");
}

EqualitySystem support_constraint(
    const Scenario& s,
    const std::function<bool(const std::vector<int>&, const std::vector<int>&)>& zero_cell) {
  EqualitySystem sys;
  sys.dim = s.coord_count();
  std::vector<int> outs, ins;
  for (long idx = 0; idx < sys.dim; ++idx) {
    s.decode(idx, outs, ins);
    if (!zero_cell(outs, ins)) continue;
    Row r;
    r.a.assign(sys.dim, Rat(0));
    r.a[idx] = 1;
    r.b = 0;
    sys.rows.push_back(std::move(r));
  }
  return sys;
}

EqualitySystem marginal_constraints(const Scenario& s,
                                    const std::vector<MarginalRelation>& relations) {
  EqualitySystem sys;
  sys.dim = s.coord_count();
  const std::size_t n = s.parties.size();
  for (const MarginalRelation& rel : relations) {
    std::vector<char> is_out(n, 0);
    for (int p : rel.out_parties) {
      if (p < 0 || p >= static_cast<int>(n))
        throw std::runtime_error("marginal relation: bad output party");
      is_out[p] = 1;
    }
    std::vector<int> fixed_val(n, -1);
    for (const auto& [p, v] : rel.fixed_inputs) {
      if (p < 0 || p >= static_cast<int>(n) || v < 0 || v >= s.parties[p].input_card)
        throw std::runtime_error("marginal relation: bad fixed input");
      fixed_val[p] = v;
    }
    for (const MarginalTerm& t : rel.terms)
      if (t.out_values.size() != rel.out_parties.size())
        throw std::runtime_error("marginal relation: term width mismatch");

    std::vector<int> free_cards(n);
    for (std::size_t k = 0; k < n; ++k)
      free_cards[k] = fixed_val[k] >= 0 ? 1 : s.parties[k].input_card;
    std::vector<int> comp_cards(n, 1);
    for (std::size_t k = 0; k < n; ++k)
      if (!is_out[k]) comp_cards[k] = s.parties[k].output_card;

    for_each_assignment(free_cards, [&](const std::vector<int>& free_in) {
      std::vector<int> ins(free_in);
      for (std::size_t k = 0; k < n; ++k)
        if (fixed_val[k] >= 0) ins[k] = fixed_val[k];
      Row r;
      r.a.assign(sys.dim, Rat(0));
      r.b = rel.rhs;
      for (const MarginalTerm& t : rel.terms) {
        for_each_assignment(comp_cards, [&](const std::vector<int>& co) {
          std::vector<int> outs(co);
          for (std::size_t j = 0; j < rel.out_parties.size(); ++j) {
            int val = t.out_values[j];
            if (val < 0 || val >= s.parties[rel.out_parties[j]].output_card)
              throw std::runtime_error("marginal relation: output value out of range");
            outs[rel.out_parties[j]] = val;
          }
          r.a[s.index_of(outs, ins)] += t.coeff;
        });
      }
      sys.rows.push_back(std::move(r));
    });
  }
  return sys;
}

HPolyhedron distribution_polytope(const Scenario& s, const std::vector<EqualitySystem>& extra) {
  HPolyhedron h;
  h.dim = static_cast<int>(s.coord_count());
  const long os = s.output_space();
  const long is = s.input_space();
  for (long ii = 0; ii < is; ++ii) {
    Row r;
    r.a.assign(h.dim, Rat(0));
    r.b = 1;
    for (long oi = 0; oi < os; ++oi) r.a[oi * is + ii] = 1;
    h.eqs.push_back(std::move(r));
  }
  EqualitySystem mode_sys = constraints_for(s);
  for (Row& r : mode_sys.rows) h.eqs.push_back(std::move(r));
  for (const EqualitySystem& sys : extra) {
    if (sys.dim != h.dim)
      throw std::runtime_error("distribution_polytope: extra system dimension mismatch");
    for (const Row& r : sys.rows) h.eqs.push_back(r);
  }
  for (long idx = 0; idx < h.dim; ++idx) {
    Row r;
    r.a.assign(h.dim, Rat(0));
    r.a[idx] = 1;
    r.b = 0;
    h.ineqs.push_back(std::move(r));
  }
  h.canonicalize();
  return h;
}

OwnedDistribution marginalize(const CondDistribution& p,
                              std::vector<int> keep_output_parties,
                              std::vector<int> keep_input_parties) {
  if (!p.scenario) throw std::runtime_error("marginalize: missing scenario");
  const Scenario& s = *p.scenario;
  const std::size_t n = s.parties.size();
  auto clean = [&](std::vector<int>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    for (int k : v)
      if (k < 0 || k >= static_cast<int>(n)) throw std::runtime_error("marginalize: bad party index");
  };
  clean(keep_output_parties);
  clean(keep_input_parties);

  std::vector<char> keep_out(n, 0), keep_in(n, 0), keep_any(n, 0);
  for (int k : keep_output_parties) keep_out[k] = keep_any[k] = 1;
  for (int k : keep_input_parties) keep_in[k] = keep_any[k] = 1;

  OwnedDistribution res;
  std::vector<int> new_index(n, -1);
  for (std::size_t k = 0; k < n; ++k) {
    if (!keep_any[k]) continue;
    Party q = s.parties[k];
    if (!keep_out[k]) q.output_card = 1;
    if (!keep_in[k]) q.input_card = 1;
    new_index[k] = static_cast<int>(res.scenario.parties.size());
    res.scenario.parties.push_back(std::move(q));
  }
  res.scenario.mode = s.mode;
  if (s.mode == ConstraintMode::Explicit) {
    for (const Family& f : s.omitted_families) {
      if (new_index[f.dropped_input] < 0) continue;
      Family g;
      g.dropped_input = new_index[f.dropped_input];
      bool ok = true;
      for (int j : f.out_parties) {
        if (new_index[j] < 0) {
          ok = false;
          break;
        }
        g.out_parties.push_back(new_index[j]);
      }
      if (ok) res.scenario.omitted_families.push_back(std::move(g));
    }
  }

  const Scenario& sub = res.scenario;
  res.values.assign(sub.coord_count(), Rat(0));

  // Cardinalities for the summed-out outputs and the removed inputs.
  std::vector<int> gone_out_cards(n, 1), gone_in_cards(n, 1);
  for (std::size_t k = 0; k < n; ++k) {
    if (!keep_out[k]) gone_out_cards[k] = s.parties[k].output_card;
    if (!keep_in[k]) gone_in_cards[k] = s.parties[k].input_card;
  }

  std::vector<int> sub_outs, sub_ins;
  for (long idx = 0; idx < sub.coord_count(); ++idx) {
    sub.decode(idx, sub_outs, sub_ins);
    bool first = true;
    Rat ref;
    for_each_assignment(gone_in_cards, [&](const std::vector<int>& gi) {
      std::vector<int> ins(gi);
      for (std::size_t k = 0; k < n; ++k)
        if (keep_in[k]) ins[k] = sub_ins[new_index[k]];
      Rat sum = 0;
      for_each_assignment(gone_out_cards, [&](const std::vector<int>& go) {
        std::vector<int> outs(go);
        for (std::size_t k = 0; k < n; ++k)
          if (keep_out[k]) outs[k] = sub_outs[new_index[k]];
        sum += p.values[s.index_of(outs, ins)];
      });
      if (first) {
        ref = sum;
        first = false;
      } else if (sum != ref) {
        throw std::runtime_error(
            "marginalize: restricted distribution depends on a removed input");
      }
    });
    res.values[idx] = ref;
  }
  return res;
}

namespace {

Scenario build_preset(const std::string& name) {
  auto party = [](std::string nm, int ic, int oc) {
    Party p;
    p.name = std::move(nm);
    p.input_card = ic;
    p.output_card = oc;
    return p;
  };
  auto at = [](Party p, Rat t, Vec x) {
    p.location = SpacetimePoint{std::move(t), std::move(x)};
    return p;
  };
  Scenario s;
  if (name == "triangle") {
    s.mode = ConstraintMode::GeometricRc;
    s.parties = {
        at(party("A", 1, 2), 0, {Rat(0), Rat(0)}),
        at(party("B", 1, 2), 0, {Rat(1), Rat(0)}),
        at(party("C", 1, 2), 0, {Rat(0), Rat(1)}),
        at(party("X", 2, 1), 0, {Rat(1, 2), Rat(1, 2)}),
        at(party("Y", 2, 1), 0, {Rat(0), Rat(1, 2)}),
        at(party("Z", 2, 1), 0, {Rat(1, 2), Rat(0)}),
    };
  } else if (name == "compass") {
    s.mode = ConstraintMode::GeometricRc;
    s.parties = {
        at(party("A", 1, 2), 0, {Rat(0), Rat(2)}),
        at(party("B", 1, 2), 0, {Rat(0), Rat(0)}),
        at(party("C", 1, 2), 0, {Rat(2), Rat(0)}),
        at(party("X", 2, 1), 0, {Rat(0), Rat(1)}),
        at(party("Y", 2, 1), 0, {Rat(1), Rat(0)}),
    };
  } else if (name == "line3") {
    s.mode = ConstraintMode::GeometricRc;
    s.parties = {
        at(party("A", 1, 2), 0, {Rat(0)}),
        at(party("B", 1, 2), 0, {Rat(1)}),
        at(party("C", 1, 2), 0, {Rat(2)}),
        at(party("X", 2, 1), 0, {Rat(1, 2)}),
        at(party("Y", 2, 1), 0, {Rat(3, 2)}),
    };
  } else if (name == "fig2") {
    s.mode = ConstraintMode::GeometricRc;
    s.parties = {
        at(party("A", 2, 2), 0, {Rat(0)}),
        at(party("B", 2, 2), 0, {Rat(1)}),
        at(party("C", 2, 2), 0, {Rat(2)}),
    };
  } else if (name == "bipartite") {
    s.mode = ConstraintMode::FullNs;
    s.parties = {party("A", 2, 2), party("B", 2, 2)};
  } else {
    throw std::runtime_error("unknown preset scenario: " + name);
  }
  return s;
}

}  // namespace

Scenario preset_scenario(const std::string& name) { return build_preset(name); }

std::vector<std::string> preset_names() {
  return {"triangle", "compass", "line3", "fig2", "bipartite"};
}

namespace {

// "A,B,C" -> party indices (parties must already be declared).
std::vector<int> parse_party_list(const Scenario& s, const std::string& text) {
  std::vector<int> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, ',')) {
    int idx = s.party_index(cur);
    if (idx < 0) throw std::runtime_error("unknown party: " + cur);
    out.push_back(idx);
  }
  if (out.empty()) throw std::runtime_error("empty party list");
  return out;
}

std::pair<int, int> parse_party_value(const Scenario& s, const std::string& tok) {
  auto eq = tok.find('=');
  if (eq == std::string::npos) throw std::runtime_error("expected name=value, got: " + tok);
  int idx = s.party_index(tok.substr(0, eq));
  if (idx < 0) throw std::runtime_error("unknown party: " + tok.substr(0, eq));
  return {idx, std::stoi(tok.substr(eq + 1))};
}

// Parse "<term> +/- <term> ... = <rat>" where a term is
// [coefficient [*]] P(v1,v2,...).
void parse_relation_expr(const std::string& expr, std::size_t arity,
                         std::vector<MarginalTerm>& terms, Rat& rhs) {
  auto eq = expr.rfind('=');
  if (eq == std::string::npos) throw std::runtime_error("relation needs '=': " + expr);
  std::string rhs_text = expr.substr(eq + 1);
  rhs_text.erase(std::remove_if(rhs_text.begin(), rhs_text.end(), ::isspace), rhs_text.end());
  rhs = rat_from_string(rhs_text);

  std::string lhs = expr.substr(0, eq);
  std::size_t i = 0;
  auto skip_ws = [&]() {
    while (i < lhs.size() && std::isspace(static_cast<unsigned char>(lhs[i]))) ++i;
  };
  bool first = true;
  while (true) {
    skip_ws();
    if (i >= lhs.size()) break;
    Rat sign(1);
    if (lhs[i] == '+') {
      ++i;
    } else if (lhs[i] == '-') {
      sign = -1;
      ++i;
    } else if (!first) {
      throw std::runtime_error("expected '+' or '-' between relation terms");
    }
    first = false;
    skip_ws();
    Rat coeff(1);
    if (i < lhs.size() && lhs[i] != 'P') {
      std::size_t j = i;
      while (j < lhs.size() && (std::isdigit(static_cast<unsigned char>(lhs[j])) || lhs[j] == '/'))
        ++j;
      if (j == i) throw std::runtime_error("malformed relation term near: " + lhs.substr(i));
      coeff = rat_from_string(lhs.substr(i, j - i));
      i = j;
      skip_ws();
      if (i < lhs.size() && lhs[i] == '*') {
        ++i;
        skip_ws();
      }
    }
    if (i >= lhs.size() || lhs[i] != 'P')
      throw std::runtime_error("relation term must contain P(...)");
    ++i;
    skip_ws();
    if (i >= lhs.size() || lhs[i] != '(') throw std::runtime_error("expected '(' after P");
    auto close = lhs.find(')', i);
    if (close == std::string::npos) throw std::runtime_error("unterminated P(...)");
    std::string vals = lhs.substr(i + 1, close - i - 1);
    i = close + 1;
    MarginalTerm t;
    t.coeff = sign * coeff;
    std::istringstream vin(vals);
    std::string v;
    while (std::getline(vin, v, ',')) {
      v.erase(std::remove_if(v.begin(), v.end(), ::isspace), v.end());
      t.out_values.push_back(std::stoi(v));
    }
    if (t.out_values.size() != arity)
      throw std::runtime_error("P(...) arity does not match the output party list");
    terms.push_back(std::move(t));
  }
  if (terms.empty()) throw std::runtime_error("relation has no terms");
}

}  // namespace

ParsedScenario parse_scenario_text(const std::string& text) {
  ParsedScenario out;
  Scenario& s = out.scenario;
  int declared_dim = -1;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    std::vector<std::string> tok = split_ws(raw);
    if (tok.empty()) continue;
    auto fail = [&](const std::string& msg) -> std::runtime_error {
      return std::runtime_error("scenario line " + std::to_string(lineno) + ": " + msg);
    };
    try {
      if (tok[0] == "dimension") {
        if (tok.size() != 2) throw fail("usage: dimension <d>");
        declared_dim = std::stoi(tok[1]);
      } else if (tok[0] == "mode") {
        if (tok.size() != 2) throw fail("usage: mode <full_ns|line|geometric_rc|explicit>");
        s.mode = mode_from_name(tok[1]);
      } else if (tok[0] == "party") {
        if (tok.size() < 6) throw fail("usage: party <name> inputs <n> outputs <m> [at <t> <x...>]");
        Party p;
        p.name = tok[1];
        if (s.party_index(p.name) >= 0) throw fail("duplicate party name: " + p.name);
        std::size_t i = 2;
        while (i < tok.size()) {
          if (tok[i] == "inputs" && i + 1 < tok.size()) {
            p.input_card = std::stoi(tok[i + 1]);
            i += 2;
          } else if (tok[i] == "outputs" && i + 1 < tok.size()) {
            p.output_card = std::stoi(tok[i + 1]);
            i += 2;
          } else if (tok[i] == "at") {
            if (i + 2 > tok.size()) throw fail("'at' needs a time and coordinates");
            SpacetimePoint loc;
            loc.t = rat_from_string(tok[i + 1]);
            for (std::size_t j = i + 2; j < tok.size(); ++j)
              loc.x.push_back(rat_from_string(tok[j]));
            if (declared_dim >= 0 && static_cast<int>(loc.x.size()) != declared_dim)
              throw fail("location does not match the declared dimension");
            p.location = std::move(loc);
            i = tok.size();
          } else {
            throw fail("unexpected token: " + tok[i]);
          }
        }
        if (p.input_card < 1 || p.output_card < 1) throw fail("cardinalities must be >= 1");
        s.parties.push_back(std::move(p));
      } else if (tok[0] == "omit") {
        // omit A,B / X
        std::string rest;
        for (std::size_t i = 1; i < tok.size(); ++i) rest += tok[i];
        auto slash = rest.find('/');
        if (slash == std::string::npos) throw fail("usage: omit <parties> / <input party>");
        Family f;
        f.out_parties = parse_party_list(s, rest.substr(0, slash));
        std::sort(f.out_parties.begin(), f.out_parties.end());
        int drop = s.party_index(rest.substr(slash + 1));
        if (drop < 0) throw fail("unknown party after '/'");
        f.dropped_input = drop;
        s.omitted_families.push_back(std::move(f));
      } else if (tok[0] == "zero") {
        // zero out A=0 B=1 in X=0
        CellPattern pat;
        int section = 0;  // 1 = out, 2 = in
        for (std::size_t i = 1; i < tok.size(); ++i) {
          if (tok[i] == "out") {
            section = 1;
          } else if (tok[i] == "in") {
            section = 2;
          } else if (section == 1) {
            pat.out_match.push_back(parse_party_value(s, tok[i]));
          } else if (section == 2) {
            pat.in_match.push_back(parse_party_value(s, tok[i]));
          } else {
            throw fail("zero: expected 'out' or 'in' section first");
          }
        }
        if (pat.out_match.empty() && pat.in_match.empty())
          throw fail("zero: pattern is empty");
        out.zeros.push_back(std::move(pat));
      } else if (tok[0] == "relation") {
        // relation out A,C in Y=0 : P(0,0) + P(1,1) = 1/2
        std::string rest;
        for (std::size_t i = 1; i < tok.size(); ++i) {
          if (i > 1) rest += " ";
          rest += tok[i];
        }
        auto colon = rest.find(':');
        if (colon == std::string::npos) throw fail("relation needs ':'");
        std::vector<std::string> head = split_ws(rest.substr(0, colon));
        MarginalRelation rel;
        std::size_t i = 0;
        while (i < head.size()) {
          if (head[i] == "out" && i + 1 < head.size()) {
            rel.out_parties = parse_party_list(s, head[i + 1]);
            i += 2;
          } else if (head[i] == "in") {
            ++i;
            while (i < head.size() && head[i] != "out")
              rel.fixed_inputs.push_back(parse_party_value(s, head[i++]));
          } else {
            throw fail("relation header: unexpected token " + head[i]);
          }
        }
        if (rel.out_parties.empty()) throw fail("relation needs an 'out' party list");
        parse_relation_expr(rest.substr(colon + 1), rel.out_parties.size(), rel.terms, rel.rhs);
        out.relations.push_back(std::move(rel));
      } else {
        throw fail("unknown directive: " + tok[0]);
      }
    } catch (const std::invalid_argument&) {
      throw std::runtime_error("scenario line " + std::to_string(lineno) + ": malformed number");
    }
  }
  if (s.parties.empty()) throw std::runtime_error("scenario has no parties");
  if (!s.omitted_families.empty() && s.mode != ConstraintMode::Explicit)
    throw std::runtime_error("omit lines require 'mode explicit'");
  int d = s.spatial_dim();
  if (d >= 0)
    for (const Party& p : s.parties)
      if (p.location && p.location->spatial_dim() != d)
        throw std::runtime_error("inconsistent spatial dimensions across parties");
  return out;
}

ParsedScenario load_scenario_file(const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("cannot open scenario file: " + path);
  std::string text;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, got);
  std::fclose(f);
  return parse_scenario_text(text);
}

EqualitySystem zero_pattern_rows(const Scenario& s, const std::vector<CellPattern>& zeros) {
  return support_constraint(s, [&](const std::vector<int>& outs, const std::vector<int>& ins) {
    for (const CellPattern& pat : zeros) {
      bool match = true;
      for (const auto& [p, v] : pat.out_match)
        if (outs[p] != v) {
          match = false;
          break;
        }
      if (match)
        for (const auto& [p, v] : pat.in_match)
          if (ins[p] != v) {
            match = false;
            break;
          }
      if (match) return true;
    }
    return false;
  });
}

}  // namespace rc
