#include "rcausal/lightcone.hpp"

#include <cmath>
#include <functional>

#include "rcausal/linalg.hpp"
#include "rcausal/lp.hpp"
#include "rcausal/polyhedron.hpp"

namespace rc {
namespace {

Rat sq_norm(const Vec& v) {
  Rat s = 0;
  for (const Rat& q : v)
    if (sgn(q) != 0) s += q * q;
  return s;
}

Vec diff(const Vec& a, const Vec& b) {
  Vec d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

// Exact rational square root if one exists.
std::optional<Rat> rat_sqrt(const Rat& q) {
  if (sgn(q) < 0) return std::nullopt;
  mpz_class num = q.get_num(), den = q.get_den(), rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  if (rn * rn != num || rd * rd != den) return std::nullopt;
  Rat r(rn, rd);
  r.canonicalize();
  return r;
}

// A rational upper bound on sqrt(s), tightened by bisection against s.
Rat sqrt_upper_bound(const Rat& s) {
  if (sgn(s) <= 0) return Rat(0);
  if (auto exact = rat_sqrt(s)) return *exact;
  double est = std::sqrt(s.get_d()) * (1.0 + 1e-9) + 1e-12;
  Rat hi(est);
  hi.canonicalize();
  while (hi * hi < s) hi += Rat(1, 1024) + hi / 1024;
  return hi;
}

// All subsets of {0..n-1} with size <= maxk, emitted in a fixed order.
void subsets_up_to(int n, int maxk, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    fn(cur);
    if (static_cast<int>(cur.size()) == maxk) return;
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

}  // namespace

bool future_contains(const SpacetimePoint& p, const SpacetimePoint& q) {
  if (p.spatial_dim() != q.spatial_dim())
    throw std::runtime_error("future_contains: spatial dimension mismatch");
  Rat dt = q.t - p.t;
  if (sgn(dt) < 0) return false;
  return dt * dt >= sq_norm(diff(q.x, p.x));
}

bool intersection_within_cone(const std::vector<SpacetimePoint>& apexes,
                              const SpacetimePoint& witness) {
  if (apexes.empty())
    throw std::runtime_error("intersection_within_cone: no apexes given");
  const int d = witness.spatial_dim();
  for (const SpacetimePoint& a : apexes)
    if (a.spatial_dim() != d)
      throw std::runtime_error("intersection_within_cone: spatial dimension mismatch");

  // Containment fails exactly when some unit direction u satisfies
  // (x_i - x_w) . u > (t_i - t_w) for all i: travelling far along such a u,
  // the earliest moment that is inside every K(a_i) still escapes K(w).
  std::vector<Vec> c;
  std::vector<Rat> b;
  for (const SpacetimePoint& a : apexes) {
    if (future_contains(witness, a)) return true;  // K(a) alone sits inside K(w)
    Vec ci = diff(a.x, witness.x);
    Rat bi = a.t - witness.t;
    if (is_zero_vec(ci)) {
      if (sgn(bi) >= 0) return true;  // row unsatisfiable: no escape direction
      continue;                       // row trivially satisfied: drop it
    }
    c.push_back(std::move(ci));
    b.push_back(std::move(bi));
  }
  const int n = static_cast<int>(c.size());
  if (n == 0) return false;  // every direction escapes

  // Step 1: is the open region {c_i . u > b_i} nonempty?  Maximize the
  // common slack s (capped at 1) and ask for a strictly positive optimum.
  {
    HPolyhedron slack;
    slack.dim = d + 1;
    for (int i = 0; i < n; ++i) {
      Row r;
      r.a = c[i];
      r.a.push_back(Rat(-1));
      r.b = b[i];
      slack.ineqs.push_back(std::move(r));
    }
    Row cap;  // s <= 1
    cap.a.assign(d + 1, Rat(0));
    cap.a[d] = -1;
    cap.b = -1;
    slack.ineqs.push_back(std::move(cap));
    Vec obj(d + 1, Rat(0));
    obj[d] = -1;  // maximize s
    LpResult r = lp_minimize(slack, obj);
    if (r.status != LpStatus::Optimal)
      throw std::runtime_error("intersection_within_cone: slack LP did not solve");
    if (sgn(-r.value) <= 0) return true;  // open region empty: contained
  }

  // The closure is P = {c_i . u >= b_i}, now known to be the closure of a
  // nonempty open set.  The open region meets the unit sphere iff
  // min |u|^2 over P < 1 and sup |u|^2 over P > 1.

  // Step 2: minimum squared norm over P, by checking the minimum-norm point
  // of every active-set subspace (the optimum's active set is one of them).
  bool min_below_one = false;
  {
    std::optional<Rat> best;
    subsets_up_to(n, d, [&](const std::vector<int>& S) {
      Mat m;
      Vec rhs;
      for (int i : S) {
        m.push_back(c[i]);
        rhs.push_back(b[i]);
      }
      Vec u;
      if (!min_norm_point(m, rhs, d, u)) return;
      for (int i = 0; i < n; ++i)
        if (dot(c[i], u) < b[i]) return;  // not feasible for P
      Rat v = sq_norm(u);
      if (!best || v < *best) best = v;
    });
    if (!best)
      throw std::runtime_error("intersection_within_cone: no feasible active set");
    min_below_one = *best < 1;
  }
  if (!min_below_one) return true;

  // Step 3: is the squared norm unbounded over P?  Equivalent to a nonzero
  // recession direction, i.e. some +/- coordinate direction has positive
  // optimum over the box-capped recession cone.
  {
    HPolyhedron rec;
    rec.dim = d;
    for (int i = 0; i < n; ++i) rec.ineqs.push_back(Row{c[i], Rat(0)});
    for (int j = 0; j < d; ++j) {
      Row lo, hi;
      lo.a.assign(d, Rat(0));
      lo.a[j] = 1;
      lo.b = -1;  // u_j >= -1
      hi.a.assign(d, Rat(0));
      hi.a[j] = -1;
      hi.b = -1;  // u_j <= 1
      rec.ineqs.push_back(std::move(lo));
      rec.ineqs.push_back(std::move(hi));
    }
    for (int j = 0; j < d; ++j) {
      for (int s = -1; s <= 1; s += 2) {
        Vec obj(d, Rat(0));
        obj[j] = s;  // minimize s*u_j == maximize -s*u_j
        LpResult r = lp_minimize(rec, obj);
        if (r.status == LpStatus::Optimal && sgn(r.value) < 0) return false;  // unbounded norm: escape exists
      }
    }
  }

  // Step 4: P is bounded; the maximum squared norm is attained at a vertex,
  // i.e. at a full-rank active set.
  {
    Rat maxsq(0);
    subsets_up_to(n, d, [&](const std::vector<int>& S) {
      if (static_cast<int>(S.size()) != d) return;
      Mat m;
      Vec rhs;
      for (int i : S) {
        m.push_back(c[i]);
        rhs.push_back(b[i]);
      }
      if (rank_of(m) != d) return;
      Vec u;
      if (!solve_linear(m, rhs, d, u)) return;
      for (int i = 0; i < n; ++i)
        if (dot(c[i], u) < b[i]) return;
      Rat v = sq_norm(u);
      if (v > maxsq) maxsq = v;
    });
    return !(maxsq > 1);  // escape exists iff the sup strictly exceeds 1
  }
}

Boost make_boost(const Vec& beta) {
  Rat rem = Rat(1) - sq_norm(beta);
  if (sgn(rem) <= 0) throw std::runtime_error("make_boost: speed must be below 1");
  auto root = rat_sqrt(rem);
  if (!root)
    throw std::runtime_error(
        "make_boost: 1 - |beta|^2 is not a rational square; no exact Lorentz factor");
  Boost b;
  b.beta = beta;
  b.gamma = Rat(1) / *root;
  return b;
}

SpacetimePoint boost_point(const Boost& b, const SpacetimePoint& p) {
  if (static_cast<int>(b.beta.size()) != p.spatial_dim())
    throw std::runtime_error("boost_point: spatial dimension mismatch");
  Rat bsq = sq_norm(b.beta);
  SpacetimePoint out;
  if (sgn(bsq) == 0) {
    out = p;
    return out;
  }
  Rat bx = dot(b.beta, p.x);
  out.t = b.gamma * (p.t - bx);
  Rat coef = (b.gamma - 1) * bx / bsq - b.gamma * p.t;
  out.x = p.x;
  for (std::size_t j = 0; j < out.x.size(); ++j) out.x[j] += coef * b.beta[j];
  return out;
}

Boost random_pythagorean_boost(std::mt19937_64& rng, int spatial_dim) {
  if (spatial_dim < 1) throw std::runtime_error("random_pythagorean_boost: bad dimension");
  std::uniform_int_distribution<int> small(1, 12);
  auto pyth_pair = [&](Rat& c, Rat& s) {
    // cos = (m^2-n^2)/(m^2+n^2), sin = 2mn/(m^2+n^2) for random m > n >= 1.
    int m = 0, n = 0;
    do {
      m = small(rng);
      n = small(rng);
    } while (m <= n);
    Rat den(m * m + n * n);
    c = Rat(m * m - n * n) / den;
    s = Rat(2 * m * n) / den;
  };
  Rat cmag, smag;
  pyth_pair(cmag, smag);  // speed = smag in (0, 1)
  Vec dir(spatial_dim, Rat(0));
  if (spatial_dim == 1) {
    dir[0] = 1;
  } else if (spatial_dim == 2) {
    Rat c, s;
    pyth_pair(c, s);
    dir[0] = c;
    dir[1] = s;
  } else {
    Rat c1, s1, c2, s2;
    pyth_pair(c1, s1);
    pyth_pair(c2, s2);
    dir[0] = c1;
    dir[1] = s1 * c2;
    dir[2] = s1 * s2;
    for (int j = 3; j < spatial_dim; ++j) dir[j] = 0;
  }
  std::uniform_int_distribution<int> coin(0, 1);
  for (Rat& q : dir)
    if (coin(rng)) q = -q;
  Vec beta(spatial_dim);
  for (int j = 0; j < spatial_dim; ++j) beta[j] = smag * dir[j];
  return make_boost(beta);
}

std::optional<SpacetimePoint> sampling_oracle(const std::vector<SpacetimePoint>& apexes,
                                              const SpacetimePoint& witness,
                                              std::uint64_t seed, int trials) {
  if (apexes.empty())
    throw std::runtime_error("sampling_oracle: no apexes given");
  const int d = witness.spatial_dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  // Scale candidate radii to the configuration spread.
  double scale = 1.0;
  for (const SpacetimePoint& a : apexes) {
    scale = std::max(scale, std::abs(a.t.get_d() - witness.t.get_d()));
    for (int j = 0; j < d; ++j)
      scale = std::max(scale, std::abs(a.x[j].get_d() - witness.x[j].get_d()));
  }

  for (int trial = 0; trial < trials; ++trial) {
    // Random direction, rounded to a modest-denominator rational point.
    std::vector<double> u(d);
    double norm = 0;
    for (int j = 0; j < d; ++j) {
      u[j] = gauss(rng);
      norm += u[j] * u[j];
    }
    norm = std::sqrt(norm);
    if (norm < 1e-9) continue;
    double radius = scale * std::pow(10.0, 4.0 * unif(rng));
    Vec qx(d);
    for (int j = 0; j < d; ++j) {
      double coord = witness.x[j].get_d() + radius * u[j] / norm;
      qx[j] = Rat(static_cast<long>(std::floor(coord * 1048576.0)), 1048576L);
      qx[j].canonicalize();
    }
    // Earliest exactly-safe time that is inside every K(a_i).
    Rat tq = apexes[0].t;
    for (const SpacetimePoint& a : apexes) {
      Rat cand = a.t + sqrt_upper_bound(sq_norm(diff(qx, a.x)));
      if (cand > tq) tq = cand;
    }
    SpacetimePoint q{tq, qx};
    bool inside_all = true;
    for (const SpacetimePoint& a : apexes)
      if (!future_contains(a, q)) {
        inside_all = false;
        break;
      }
    if (inside_all && !future_contains(witness, q)) return q;  // exact refutation
  }
  return std::nullopt;
}

}  // namespace rc
