// Measurement scenarios: parties with inputs/outputs and optional space-time
// locations, conditional distributions over them, and the constraint systems
// that carve out the correlation polytopes (full no-signalling, orderings on
// a line, causal-geometry-driven families, or an explicit family list).
//
// Index contract for flattened conditional distributions P(outputs|inputs):
//   index = output_index * input_space + input_index,
// where output_index and input_index are mixed-radix numbers over the
// parties in declaration order, party 0 most significant.

#pragma once

#include <functional>
#include <optional>
#include <string>

#include "rcausal/lightcone.hpp"
#include "rcausal/polyhedron.hpp"

namespace rc {

struct Party {
  std::string name;
  int input_card = 1;
  int output_card = 1;
  std::optional<SpacetimePoint> location;
};

enum class ConstraintMode { FullNs, Line, GeometricRc, Explicit };

std::string mode_name(ConstraintMode m);
ConstraintMode mode_from_name(const std::string& name);

// One constraint family: the joint marginal of the outputs of `out_parties`
// must be independent of the input of party `dropped_input`.
struct Family {
  std::vector<int> out_parties;  // ascending party indices
  int dropped_input = -1;
};
bool operator==(const Family& a, const Family& b);
bool family_less(const Family& a, const Family& b);

struct Scenario {
  std::vector<Party> parties;
  ConstraintMode mode = ConstraintMode::FullNs;
  std::vector<Family> omitted_families;  // Explicit mode: declared omissions

  int spatial_dim() const;  // -1 if no party has a location
  long output_space() const;
  long input_space() const;
  long coord_count() const;
  long index_of(const std::vector<int>& outs, const std::vector<int>& ins) const;
  void decode(long idx, std::vector<int>& outs, std::vector<int>& ins) const;
  int party_index(const std::string& name) const;  // -1 if absent
  std::vector<int> nontrivial_output_parties() const;
  std::vector<int> nontrivial_input_parties() const;

  std::string canonical_text() const;
  std::uint64_t hash() const;
};

struct CondDistribution {
  const Scenario* scenario = nullptr;
  Vec values;

  bool is_valid() const;  // exact: nonnegative and normalized per input
  Rat cell(const std::vector<int>& outs, const std::vector<int>& ins) const;
};

struct EqualitySystem {
  long dim = 0;
  std::vector<Row> rows;  // a . P = b
};

// Which families a scenario retains.  Only the maximal retained families are
// emitted as rows (the smaller ones are linear consequences); the omitted
// list records every family the retention test rejected.
struct FamilyReport {
  std::vector<Family> retained_maximal;
  std::vector<Family> omitted;
};

FamilyReport rc_family_report(const Scenario& s);

// Full no-signalling: for every party with a nontrivial input, everyone
// else's joint output marginal is independent of it.
EqualitySystem ns_constraints(const Scenario& s);

// Parties ordered along a line (declaration order): for each party, the
// output marginal of the parties strictly to its left, and the one strictly
// to its right, are independent of its input.
EqualitySystem line_constraints(const Scenario& s);

// Families determined by rc_family_report (geometric retention test in
// GeometricRc mode, the declared list in Explicit mode).
EqualitySystem rc_constraints(const Scenario& s);

// Dispatch on s.mode.
EqualitySystem constraints_for(const Scenario& s);

// Rows P(cell) = 0 for every cell the predicate marks.
EqualitySystem support_constraint(
    const Scenario& s,
    const std::function<bool(const std::vector<int>&, const std::vector<int>&)>& zero_cell);

struct MarginalTerm {
  std::vector<int> out_values;  // one value per party in out_parties
  Rat coeff;
};

// sum_k coeff_k * P(out_values_k | fixed inputs) = rhs, imposed for every
// assignment of the inputs the relation does not fix.
struct MarginalRelation {
  std::vector<int> out_parties;
  std::vector<std::pair<int, int>> fixed_inputs;  // (party, value)
  std::vector<MarginalTerm> terms;
  Rat rhs;
};

EqualitySystem marginal_constraints(const Scenario& s,
                                    const std::vector<MarginalRelation>& relations);

// Normalization + mode constraints (+ extra equality systems) + positivity.
HPolyhedron distribution_polytope(const Scenario& s,
                                  const std::vector<EqualitySystem>& extra = {});

// Restriction to a sub-scenario: outputs of parties outside
// keep_output_parties are summed out, inputs of parties outside
// keep_input_parties are fixed; throws if the result depends on a removed
// input (checked exactly over all assignments).
struct OwnedDistribution {
  Scenario scenario;
  Vec values;
};
OwnedDistribution marginalize(const CondDistribution& p,
                              std::vector<int> keep_output_parties,
                              std::vector<int> keep_input_parties);

// Built-in scenarios: "triangle", "compass", "line3", "fig2", "bipartite".
Scenario preset_scenario(const std::string& name);
std::vector<std::string> preset_names();

// Scenario files: see README for the line-oriented grammar (party /
// dimension / mode / omit / zero / relation lines).
struct CellPattern {
  std::vector<std::pair<int, int>> out_match;  // (party, output value)
  std::vector<std::pair<int, int>> in_match;   // (party, input value)
};

struct ParsedScenario {
  Scenario scenario;
  std::vector<CellPattern> zeros;
  std::vector<MarginalRelation> relations;
};

ParsedScenario parse_scenario_text(const std::string& text);
ParsedScenario load_scenario_file(const std::string& path);

EqualitySystem zero_pattern_rows(const Scenario& s, const std::vector<CellPattern>& zeros);

}  // namespace rc
