#include "rcausal/lp.hpp"

#include <limits>

namespace rc {
namespace {

// Sign with an absolute tolerance for the double twin; exact for rationals.
template <class T>
struct Num;

template <>
struct Num<Rat> {
  static int sign(const Rat& v) { return sgn(v); }
  static long iteration_cap(int, int) { return std::numeric_limits<long>::max(); }
};

template <>
struct Num<double> {
  static int sign(double v) { return v > 1e-9 ? 1 : (v < -1e-9 ? -1 : 0); }
  static long iteration_cap(int m, int n) { return 20000L + 50L * (m + n); }
};

enum class CoreStatus { Optimal, Infeasible, Unbounded, IterationCap };

// minimize c . z  subject to  M z = d, z >= 0, solved on a dense tableau.
template <class T>
class SimplexCore {
 public:
  // M given row-wise; d may have any signs.
  SimplexCore(std::vector<std::vector<T>> M, std::vector<T> d, int n_vars)
      : n_(n_vars), m_(static_cast<int>(M.size())) {
    tab_.assign(m_, std::vector<T>(n_ + m_ + 1, T(0)));
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      bool flip = Num<T>::sign(d[i]) < 0;
      for (int j = 0; j < n_; ++j) tab_[i][j] = flip ? T(-M[i][j]) : M[i][j];
      tab_[i][n_ + i] = T(1);
      tab_[i].back() = flip ? T(-d[i]) : d[i];
      basis_[i] = n_ + i;
    }
  }

  // Returns Optimal/Infeasible/Unbounded/IterationCap; on Optimal the basis
  // holds a feasible point and phase 2 has optimized `c`.
  CoreStatus solve(const std::vector<T>& c) {
    long cap = Num<T>::iteration_cap(m_, n_);
    // Phase 1: minimize the sum of artificials.
    cost_.assign(n_ + m_ + 1, T(0));
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j <= n_ + m_; ++j) cost_[j] -= tab_[i][j];
    for (int i = 0; i < m_; ++i) cost_[n_ + i] += T(1);
    n_active_ = n_ + m_;
    CoreStatus st = run(cap);
    if (st != CoreStatus::Optimal) return st;
    if (Num<T>::sign(-cost_.back()) > 0) return CoreStatus::Infeasible;
    drive_out_artificials();
    // Phase 2: artificials may no longer enter.
    n_active_ = n_;
    cost_.assign(n_ + m_ + 1, T(0));
    for (int j = 0; j < n_; ++j) cost_[j] = c[j];
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= n_) continue;
      T cb = c[basis_[i]];
      if (Num<T>::sign(cb) == 0) continue;
      for (int j = 0; j <= n_ + m_; ++j) cost_[j] -= cb * tab_[i][j];
    }
    return run(cap);
  }

  // z restricted to the original n variables.
  std::vector<T> solution() const {
    std::vector<T> z(n_, T(0));
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) z[basis_[i]] = tab_[i].back();
    return z;
  }

 private:
  void pivot(int r, int c) {
    T inv = tab_[r][c];
    for (auto& v : tab_[r]) {
      if (Num<T>::sign(v) != 0) v /= inv;
    }
    tab_[r][c] = T(1);
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      T f = tab_[i][c];
      if (Num<T>::sign(f) == 0) continue;
      for (int j = 0; j <= n_ + m_; ++j)
        if (Num<T>::sign(tab_[r][j]) != 0) tab_[i][j] -= f * tab_[r][j];
      tab_[i][c] = T(0);
    }
    T f = cost_[c];
    if (Num<T>::sign(f) != 0) {
      for (int j = 0; j <= n_ + m_; ++j)
        if (Num<T>::sign(tab_[r][j]) != 0) cost_[j] -= f * tab_[r][j];
      cost_[c] = T(0);
    }
    basis_[r] = c;
  }

  CoreStatus run(long cap) {
    for (long it = 0; it <= cap; ++it) {
      int enter = -1;
      for (int j = 0; j < n_active_; ++j)
        if (Num<T>::sign(cost_[j]) < 0) {
          enter = j;  // Bland: smallest eligible index
          break;
        }
      if (enter < 0) return CoreStatus::Optimal;
      int leave = -1;
      for (int i = 0; i < m_; ++i) {
        if (Num<T>::sign(tab_[i][enter]) <= 0) continue;
        if (leave < 0) {
          leave = i;
          continue;
        }
        T lhs = tab_[i].back() * tab_[leave][enter];
        T rhs = tab_[leave].back() * tab_[i][enter];
        int cmp = Num<T>::sign(lhs - rhs);
        if (cmp < 0 || (cmp == 0 && basis_[i] < basis_[leave])) leave = i;
      }
      if (leave < 0) return CoreStatus::Unbounded;
      pivot(leave, enter);
    }
    return CoreStatus::IterationCap;
  }

  void drive_out_artificials() {
    std::vector<int> keep;
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) {
        keep.push_back(i);
        continue;
      }
      int col = -1;
      for (int j = 0; j < n_; ++j)
        if (Num<T>::sign(tab_[i][j]) != 0) {
          col = j;
          break;
        }
      if (col >= 0) {
        pivot(i, col);
        keep.push_back(i);
      }
      // else: the row is redundant (all-zero over real variables); drop it.
    }
    if (static_cast<int>(keep.size()) != m_) {
      std::vector<std::vector<T>> nt;
      std::vector<int> nb;
      for (int i : keep) {
        nt.push_back(std::move(tab_[i]));
        nb.push_back(basis_[i]);
      }
      tab_ = std::move(nt);
      basis_ = std::move(nb);
      m_ = static_cast<int>(tab_.size());
    }
  }

  int n_ = 0;         // real variables
  int m_ = 0;         // rows
  int n_active_ = 0;  // columns eligible to enter (excludes artificials in phase 2)
  std::vector<std::vector<T>> tab_;
  std::vector<T> cost_;
  std::vector<int> basis_;
};

// Build the standard-form system for an HPolyhedron: x = u - w with
// u, w >= 0 and one slack per inequality.
template <class T>
void build_standard(const HPolyhedron& h, std::vector<std::vector<T>>& M,
                    std::vector<T>& d, int& n_vars) {
  const int n = h.dim;
  const int mi = static_cast<int>(h.ineqs.size());
  n_vars = 2 * n + mi;
  M.clear();
  d.clear();
  auto conv = [](const Rat& q) {
    if constexpr (std::is_same_v<T, Rat>)
      return q;
    else
      return q.get_d();
  };
  int k = 0;
  for (const Row& r : h.ineqs) {
    std::vector<T> row(n_vars, T(0));
    for (int j = 0; j < n; ++j) {
      row[j] = conv(r.a[j]);
      row[n + j] = conv(-r.a[j]);
    }
    row[2 * n + k] = T(-1);
    M.push_back(std::move(row));
    d.push_back(conv(r.b));
    ++k;
  }
  for (const Row& r : h.eqs) {
    std::vector<T> row(n_vars, T(0));
    for (int j = 0; j < n; ++j) {
      row[j] = conv(r.a[j]);
      row[n + j] = conv(-r.a[j]);
    }
    M.push_back(std::move(row));
    d.push_back(conv(r.b));
  }
}

// Build the standard-form Farkas system for (h, row): find lambda >= 0 over
// h.ineqs and free mu over h.eqs with  A^T lambda + E^T mu = row.a  and
// b . lambda + f . mu >= row.b.
template <class T>
void build_farkas(const HPolyhedron& h, const Row& row,
                  std::vector<std::vector<T>>& M, std::vector<T>& d, int& n_vars) {
  const int n = h.dim;
  const int mi = static_cast<int>(h.ineqs.size());
  const int me = static_cast<int>(h.eqs.size());
  n_vars = mi + 2 * me + 1;  // lambda, mu+, mu-, slack on the value row
  auto conv = [](const Rat& q) {
    if constexpr (std::is_same_v<T, Rat>)
      return q;
    else
      return q.get_d();
  };
  M.assign(n + 1, std::vector<T>(n_vars, T(0)));
  d.assign(n + 1, T(0));
  for (int k = 0; k < mi; ++k) {
    const Row& r = h.ineqs[k];
    for (int j = 0; j < n; ++j)
      if (sgn(r.a[j]) != 0) M[j][k] = conv(r.a[j]);
    M[n][k] = conv(r.b);
  }
  for (int l = 0; l < me; ++l) {
    const Row& r = h.eqs[l];
    for (int j = 0; j < n; ++j)
      if (sgn(r.a[j]) != 0) {
        M[j][mi + l] = conv(r.a[j]);
        M[j][mi + me + l] = conv(-r.a[j]);
      }
    M[n][mi + l] = conv(r.b);
    M[n][mi + me + l] = conv(-r.b);
  }
  M[n][mi + 2 * me] = T(-1);
  for (int j = 0; j < n; ++j) d[j] = conv(row.a[j]);
  d[n] = conv(row.b);
}

}  // namespace

LpResult lp_minimize(const HPolyhedron& h, const Vec& objective) {
  if (static_cast<int>(objective.size()) != h.dim)
    throw std::runtime_error("lp_minimize: objective width mismatch");
  std::vector<Vec> M;
  Vec d;
  int n_vars = 0;
  build_standard<Rat>(h, M, d, n_vars);
  Vec c(n_vars, Rat(0));
  for (int j = 0; j < h.dim; ++j) {
    c[j] = objective[j];
    c[h.dim + j] = -objective[j];
  }
  SimplexCore<Rat> core(std::move(M), std::move(d), n_vars);
  CoreStatus st = core.solve(c);
  LpResult res;
  if (st == CoreStatus::Infeasible) {
    res.status = LpStatus::Infeasible;
    return res;
  }
  if (st == CoreStatus::Unbounded) {
    res.status = LpStatus::Unbounded;
  } else if (st == CoreStatus::Optimal) {
    res.status = LpStatus::Optimal;
  } else {
    throw std::runtime_error("lp_minimize: exact simplex hit iteration cap");
  }
  Vec z = core.solution();
  res.x.assign(h.dim, Rat(0));
  for (int j = 0; j < h.dim; ++j) res.x[j] = z[j] - z[h.dim + j];
  res.value = dot(objective, res.x);
  return res;
}

bool lp_feasible(const HPolyhedron& h, Vec* witness) {
  LpResult r = lp_minimize(h, Vec(h.dim, Rat(0)));
  if (r.status == LpStatus::Infeasible) return false;
  if (witness) *witness = r.x;
  return true;
}

bool implied(const HPolyhedron& h, const Row& row) {
  LpResult r = lp_minimize(h, row.a);
  if (r.status == LpStatus::Infeasible) return true;   // vacuous
  if (r.status == LpStatus::Unbounded) return false;
  return r.value >= row.b;
}

bool implied_farkas(const HPolyhedron& h, const Row& row) {
  std::vector<Vec> M;
  Vec d;
  int n_vars = 0;
  build_farkas<Rat>(h, row, M, d, n_vars);
  SimplexCore<Rat> core(std::move(M), std::move(d), n_vars);
  CoreStatus st = core.solve(Vec(n_vars, Rat(0)));
  if (st == CoreStatus::IterationCap)
    throw std::runtime_error("implied_farkas: exact simplex hit iteration cap");
  return st == CoreStatus::Optimal;
}

bool implied_farkas_hint(const HPolyhedron& h, const Row& row) {
  std::vector<std::vector<double>> M;
  std::vector<double> d;
  int n_vars = 0;
  build_farkas<double>(h, row, M, d, n_vars);
  SimplexCore<double> core(std::move(M), std::move(d), n_vars);
  CoreStatus st = core.solve(std::vector<double>(n_vars, 0.0));
  // Anything other than a confident "infeasible" forces the exact check.
  return st != CoreStatus::Infeasible;
}

}  // namespace rc
