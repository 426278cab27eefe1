#include "rcausal/fm.hpp"

#include <algorithm>
#include <chrono>
#include <map>

#include "rcausal/linalg.hpp"
#include "rcausal/lp.hpp"

namespace rc {
namespace {

using Clock = std::chrono::steady_clock;

struct WorkRow {
  Vec a;
  Rat b;
  std::vector<std::uint64_t> anc;  // ancestor bitset over the starting rows
};

int anc_popcount(const std::vector<std::uint64_t>& a) {
  int c = 0;
  for (std::uint64_t w : a) c += __builtin_popcountll(w);
  return c;
}

}  // namespace

HPolyhedron eliminate(const HPolyhedron& h_in, std::vector<int> drop_vars,
                      const FmOptions& opt) {
  HPolyhedron h = h_in;
  h.canonicalize();
  const int dim = h.dim;

  std::sort(drop_vars.begin(), drop_vars.end());
  drop_vars.erase(std::unique(drop_vars.begin(), drop_vars.end()), drop_vars.end());
  for (int d : drop_vars)
    if (d < 0 || d >= dim) throw std::runtime_error("eliminate: variable index out of range");

  std::vector<char> dropped(dim, 0);
  for (int d : drop_vars) dropped[d] = 1;
  std::vector<int> kept;
  for (int j = 0; j < dim; ++j)
    if (!dropped[j]) kept.push_back(j);
  const int kdim = static_cast<int>(kept.size());

  auto infeasible_out = [&]() {
    HPolyhedron bad;
    bad.dim = kdim;
    Row r;
    r.a.assign(kdim, Rat(0));
    r.b = 1;
    bad.ineqs.push_back(std::move(r));
    return bad;
  };

  if (!lp_feasible(h)) return infeasible_out();

  const auto start = Clock::now();
  auto check_budget = [&]() {
    if (opt.time_budget_s <= 0) return;
    double el = std::chrono::duration<double>(Clock::now() - start).count();
    if (el > opt.time_budget_s) throw ResourceLimitError("eliminate: time budget exceeded");
  };

  // Use the equalities to substitute away dropped variables wherever a pivot
  // on a dropped column exists; the remaining equalities then involve kept
  // variables only (a preferred column with a nonzero entry anywhere would
  // have been chosen as that row's pivot).
  Mat esys;
  for (const Row& r : h.eqs) {
    Vec row = r.a;
    row.push_back(r.b);
    esys.push_back(std::move(row));
  }
  std::vector<int> pivots = rref(esys, drop_vars);
  std::vector<Row> kept_eqs;
  std::vector<std::pair<int, Vec>> subst;  // (pivot column, rref row incl. rhs)
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    int p = pivots[i];
    if (p == dim) return infeasible_out();
    if (dropped[p]) {
      subst.emplace_back(p, esys[i]);
    } else {
      Row r;
      r.a.assign(esys[i].begin(), esys[i].begin() + dim);
      r.b = esys[i][dim];
      kept_eqs.push_back(std::move(r));
    }
  }

  std::vector<WorkRow> rows;
  const std::size_t n_start = h.ineqs.size();
  const std::size_t anc_words = std::max<std::size_t>(1, (n_start + 63) / 64);
  bool hit_infeasible = false;
  for (std::size_t i = 0; i < n_start; ++i) {
    Vec a = h.ineqs[i].a;
    Rat b = h.ineqs[i].b;
    for (const auto& [p, e] : subst) {
      if (sgn(a[p]) == 0) continue;
      Rat f = a[p];
      for (int j = 0; j < dim; ++j)
        if (j != p && sgn(e[j]) != 0) a[j] -= f * e[j];
      b -= f * e[dim];
      a[p] = 0;
    }
    Row nr{std::move(a), std::move(b)};
    normalize_ineq_row(nr);
    if (is_zero_vec(nr.a)) {
      if (sgn(nr.b) > 0) hit_infeasible = true;
      continue;
    }
    WorkRow w;
    w.a = std::move(nr.a);
    w.b = std::move(nr.b);
    w.anc.assign(anc_words, 0);
    w.anc[i >> 6] |= std::uint64_t(1) << (i & 63);
    rows.push_back(std::move(w));
  }
  if (hit_infeasible) return infeasible_out();

  std::vector<int> remaining;
  {
    std::vector<char> solved(dim, 0);
    for (const auto& [p, e] : subst) solved[p] = 1;
    for (int d : drop_vars)
      if (!solved[d]) remaining.push_back(d);
  }

  auto dedupe_rows = [](std::vector<WorkRow>& rs) {
    // Identical left-hand sides: keep the strongest right-hand side; among
    // exact duplicates keep the smallest ancestor set (helps later pruning).
    std::sort(rs.begin(), rs.end(), [](const WorkRow& x, const WorkRow& y) {
      if (x.a != y.a) return lex_less(x.a, y.a);
      int c = cmp(x.b, y.b);
      if (c != 0) return c > 0;
      return anc_popcount(x.anc) < anc_popcount(y.anc);
    });
    rs.erase(std::unique(rs.begin(), rs.end(),
                         [](const WorkRow& x, const WorkRow& y) { return x.a == y.a; }),
             rs.end());
  };
  dedupe_rows(rows);

  auto current_system = [&](const std::vector<WorkRow>& rs, int skip) {
    HPolyhedron sys;
    sys.dim = dim;
    sys.eqs = kept_eqs;
    for (std::size_t j = 0; j < rs.size(); ++j) {
      if (static_cast<int>(j) == skip) continue;
      sys.ineqs.push_back(Row{rs[j].a, rs[j].b});
    }
    return sys;
  };

  auto lp_prune_pass = [&](std::vector<WorkRow>& rs, bool use_hint) {
    std::vector<WorkRow> alive;
    alive.reserve(rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) {
      check_budget();
      HPolyhedron sys;
      sys.dim = dim;
      sys.eqs = kept_eqs;
      for (const WorkRow& w : alive) sys.ineqs.push_back(Row{w.a, w.b});
      for (std::size_t j = i + 1; j < rs.size(); ++j) sys.ineqs.push_back(Row{rs[j].a, rs[j].b});
      Row cand{rs[i].a, rs[i].b};
      bool drop = false;
      if (!use_hint || implied_farkas_hint(sys, cand))
        drop = implied_farkas(sys, cand);
      if (!drop) alive.push_back(std::move(rs[i]));
    }
    rs = std::move(alive);
  };

  int steps = 0;
  while (!remaining.empty()) {
    check_budget();
    // Greedy variable choice: smallest product of positive and negative
    // occurrence counts (the worst-case number of combined rows).
    int best = -1;
    long best_score = 0;
    for (int v : remaining) {
      long np = 0, nn = 0;
      for (const WorkRow& w : rows) {
        int s = sgn(w.a[v]);
        if (s > 0)
          ++np;
        else if (s < 0)
          ++nn;
      }
      long score = np * nn;
      if (best < 0 || score < best_score || (score == best_score && v < best)) {
        best = v;
        best_score = score;
      }
    }
    const int v = best;
    remaining.erase(std::remove(remaining.begin(), remaining.end(), v), remaining.end());
    ++steps;

    std::vector<int> pos, neg;
    std::vector<WorkRow> next;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      int s = sgn(rows[i].a[v]);
      if (s > 0)
        pos.push_back(static_cast<int>(i));
      else if (s < 0)
        neg.push_back(static_cast<int>(i));
      else
        next.push_back(std::move(rows[i]));
    }
    for (int ip : pos) {
      // rows[ip] was not moved (only zero-sign rows were).
      for (int in : neg) {
        check_budget();
        const WorkRow& p = rows[ip];
        const WorkRow& q = rows[in];
        std::vector<std::uint64_t> anc(anc_words);
        for (std::size_t w = 0; w < anc_words; ++w) anc[w] = p.anc[w] | q.anc[w];
        if (anc_popcount(anc) > steps + 1) continue;  // ancestor-count rule
        Rat cp = -q.a[v];  // > 0
        Rat cq = p.a[v];   // > 0
        Row nr;
        nr.a.assign(dim, Rat(0));
        for (int j = 0; j < dim; ++j) {
          Rat s = 0;
          if (sgn(p.a[j]) != 0) s += cp * p.a[j];
          if (sgn(q.a[j]) != 0) s += cq * q.a[j];
          nr.a[j] = std::move(s);
        }
        nr.b = cp * p.b + cq * q.b;
        normalize_ineq_row(nr);
        if (is_zero_vec(nr.a)) {
          if (sgn(nr.b) > 0) return infeasible_out();
          continue;
        }
        next.push_back(WorkRow{std::move(nr.a), std::move(nr.b), std::move(anc)});
      }
    }
    rows = std::move(next);
    dedupe_rows(rows);
    if (opt.lp_prune_threshold > 0 &&
        static_cast<long>(rows.size()) > opt.lp_prune_threshold)
      lp_prune_pass(rows, /*use_hint=*/true);
    if (opt.max_rows > 0 && static_cast<long>(rows.size()) > opt.max_rows)
      throw ResourceLimitError("eliminate: row count exceeded max_rows while removing variable " +
                               std::to_string(v));
  }

  // Surface implicit equalities: an inequality whose reverse is also implied
  // by the full system holds with equality everywhere.
  std::vector<char> is_eq(rows.size(), 0);
  if (opt.detect_implicit_equalities) {
    HPolyhedron full = current_system(rows, -1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      check_budget();
      Row rev;
      rev.a.assign(dim, Rat(0));
      for (int j = 0; j < dim; ++j) rev.a[j] = -rows[i].a[j];
      rev.b = -rows[i].b;
      if (implied_farkas_hint(full, rev) && implied_farkas(full, rev)) is_eq[i] = 1;
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (is_eq[i]) kept_eqs.push_back(Row{rows[i].a, rows[i].b});
  {
    std::vector<WorkRow> still;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (!is_eq[i]) still.push_back(std::move(rows[i]));
    rows = std::move(still);
  }

  // Final exact irredundancy pass (no heuristic screen here: every surviving
  // row is certified non-redundant).
  {
    std::vector<WorkRow> alive;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      check_budget();
      HPolyhedron sys;
      sys.dim = dim;
      sys.eqs = kept_eqs;
      for (const WorkRow& w : alive) sys.ineqs.push_back(Row{w.a, w.b});
      for (std::size_t j = i + 1; j < rows.size(); ++j) sys.ineqs.push_back(Row{rows[j].a, rows[j].b});
      if (!implied_farkas(sys, Row{rows[i].a, rows[i].b})) alive.push_back(std::move(rows[i]));
    }
    rows = std::move(alive);
  }

  // Canonical independent equality set.
  {
    Mat esys2;
    for (const Row& r : kept_eqs) {
      Vec row = r.a;
      row.push_back(r.b);
      esys2.push_back(std::move(row));
    }
    std::vector<int> piv = rref(esys2);
    kept_eqs.clear();
    for (std::size_t i = 0; i < piv.size(); ++i) {
      if (piv[i] == dim) return infeasible_out();
      Row r;
      r.a.assign(esys2[i].begin(), esys2[i].begin() + dim);
      r.b = esys2[i][dim];
      kept_eqs.push_back(std::move(r));
    }
  }

  // Restrict to the kept coordinates (all dropped columns are zero by now).
  HPolyhedron out;
  out.dim = kdim;
  auto restrict_row = [&](const Vec& a, const Rat& b) {
    for (int d : drop_vars)
      if (sgn(a[d]) != 0)
        throw std::runtime_error("eliminate: dropped variable survived elimination");
    Row r;
    r.a.resize(kdim);
    for (int j = 0; j < kdim; ++j) r.a[j] = a[kept[j]];
    r.b = b;
    return r;
  };
  for (const Row& r : kept_eqs) out.eqs.push_back(restrict_row(r.a, r.b));
  for (const WorkRow& w : rows) out.ineqs.push_back(restrict_row(w.a, w.b));
  out.canonicalize();
  return out;
}

}  // namespace rc
