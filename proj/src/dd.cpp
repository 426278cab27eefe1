#include "rcausal/dd.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>

#include "rcausal/linalg.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rc {
namespace {

using Clock = std::chrono::steady_clock;
using ZSet = std::vector<std::uint64_t>;

// Tight-set bitsets: bit t is set when the ray satisfies processed row t with
// equality.
inline bool z_subset(const ZSet& a, const ZSet& b) {
  for (std::size_t w = 0; w < a.size(); ++w)
    if (a[w] & ~b[w]) return false;
  return true;
}

inline int z_popcount(const ZSet& a) {
  int c = 0;
  for (std::uint64_t w : a) c += __builtin_popcountll(w);
  return c;
}

inline void z_set(ZSet& a, int bit) { a[bit >> 6] |= std::uint64_t(1) << (bit & 63); }

int effective_workers(int workers) {
#ifdef _OPENMP
  return workers <= 0 ? omp_get_max_threads() : workers;
#else
  (void)workers;
  return 1;
#endif
}

struct RayRec {
  Vec v;
  ZSet z;
};

struct CandidateRay {
  Vec v;
  ZSet z;
  bool ok = false;
};

class DdEngine {
 public:
  DdEngine(int k, std::vector<Vec> rows, const DdOptions& opt)
      : k_(k), rows_(std::move(rows)), opt_(opt), start_(Clock::now()) {
    words_ = std::max<std::size_t>(1, (rows_.size() + 63) / 64);
    nthreads_ = effective_workers(opt.workers);
    for (int j = 0; j < k_; ++j) {
      Vec l(k_, Rat(0));
      l[j] = 1;
      lines_.push_back(std::move(l));
    }
  }

  void run() {
    for (std::size_t t = 0; t < rows_.size(); ++t) {
      check_budget();
      insert(static_cast<int>(t));
      if (opt_.max_rays > 0 && static_cast<long>(rays_.size()) > opt_.max_rays)
        throw ResourceLimitError("double description: ray count exceeded max_rays after row " +
                                 std::to_string(t));
    }
  }

  std::vector<Vec> ray_vectors() const {
    std::vector<Vec> out;
    out.reserve(rays_.size());
    for (const RayRec& r : rays_) out.push_back(r.v);
    return out;
  }

  const std::vector<Vec>& line_vectors() const { return lines_; }

 private:
  void check_budget() const {
    if (opt_.time_budget_s <= 0) return;
    double el = std::chrono::duration<double>(Clock::now() - start_).count();
    if (el > opt_.time_budget_s)
      throw ResourceLimitError("double description: time budget exceeded");
  }

  // Algebraic adjacency: the rows tight on both rays must have rank exactly
  // two less than the dimension of the pointed quotient.
  bool rank_adjacent(const ZSet& common, int t) const {
    Mat sub;
    for (int s = 0; s < t; ++s)
      if (common[s >> 6] & (std::uint64_t(1) << (s & 63))) sub.push_back(rows_[s]);
    int want = k_ - static_cast<int>(lines_.size()) - 2;
    return rank_of(std::move(sub)) == want;
  }

  void insert(int t) {
    const Vec& a = rows_[t];

    // If some lineality direction is not tight on the row, consume it: the
    // cone loses that line, gains the half-line pointing into the feasible
    // side, and every ray is sheared onto the hyperplane of the row.
    int pivot = -1;
    Rat pval;
    for (std::size_t j = 0; j < lines_.size(); ++j) {
      Rat d = dot(a, lines_[j]);
      if (sgn(d) != 0) {
        pivot = static_cast<int>(j);
        pval = d;
        break;
      }
    }
    if (pivot >= 0) {
      Vec lstar = lines_[pivot];
      std::vector<Vec> nl;
      nl.reserve(lines_.size() - 1);
      for (std::size_t j = 0; j < lines_.size(); ++j) {
        if (static_cast<int>(j) == pivot) continue;
        Vec l = lines_[j];
        Rat d = dot(a, l);
        if (sgn(d) != 0) {
          Rat f = d / pval;
          for (int c = 0; c < k_; ++c) l[c] -= f * lstar[c];
        }
        normalize_primitive(l, true);
        nl.push_back(std::move(l));
      }
      lines_ = std::move(nl);
      for (RayRec& r : rays_) {
        Rat d = dot(a, r.v);
        if (sgn(d) != 0) {
          Rat f = d / pval;
          for (int c = 0; c < k_; ++c) r.v[c] -= f * lstar[c];
          normalize_primitive(r.v);
        }
        z_set(r.z, t);
      }
      RayRec r0;
      r0.v = std::move(lstar);
      if (sgn(pval) < 0)
        for (Rat& q : r0.v) q = -q;
      normalize_primitive(r0.v);
      r0.z.assign(words_, 0);
      for (int s = 0; s < t; ++s) z_set(r0.z, s);
      rays_.push_back(std::move(r0));
      return;
    }

    // All lines are tight on the row; split the rays by sign.
    const std::size_t nr = rays_.size();
    std::vector<Rat> vals(nr);
    if (nthreads_ > 1 && nr > 64) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nthreads_)
#endif
      for (long i = 0; i < static_cast<long>(nr); ++i) vals[i] = dot(a, rays_[i].v);
    } else {
      for (std::size_t i = 0; i < nr; ++i) vals[i] = dot(a, rays_[i].v);
    }

    std::vector<int> pos, neg, zer;
    for (std::size_t i = 0; i < nr; ++i) {
      int s = sgn(vals[i]);
      if (s > 0)
        pos.push_back(static_cast<int>(i));
      else if (s < 0)
        neg.push_back(static_cast<int>(i));
      else
        zer.push_back(static_cast<int>(i));
    }

    if (neg.empty()) {
      for (int i : zer) z_set(rays_[i].z, t);
      return;
    }

    std::vector<CandidateRay> slots;
    if (!pos.empty()) {
      const std::size_t npairs = pos.size() * neg.size();
      slots.resize(npairs);
      int need = k_ - static_cast<int>(lines_.size()) - 2;
      if (need < 0) need = 0;

      auto try_pair = [&](std::size_t ci) {
        const int ip = pos[ci / neg.size()];
        const int in = neg[ci % neg.size()];
        ZSet common(words_);
        for (std::size_t w = 0; w < words_; ++w)
          common[w] = rays_[ip].z[w] & rays_[in].z[w];
        if (z_popcount(common) < need) return;
        for (std::size_t r = 0; r < nr; ++r) {
          if (r == static_cast<std::size_t>(ip) || r == static_cast<std::size_t>(in)) continue;
          if (z_subset(common, rays_[r].z)) return;
        }
        Vec w(k_);
        for (int c = 0; c < k_; ++c)
          w[c] = vals[ip] * rays_[in].v[c] - vals[in] * rays_[ip].v[c];
        normalize_primitive(w);
        z_set(common, t);
        slots[ci].v = std::move(w);
        slots[ci].z = std::move(common);
        slots[ci].ok = true;
      };

      if (opt_.cross_check_adjacency) {
        // Serial path with the algebraic test run alongside the combinatorial
        // one; any disagreement is a hard logic failure.
        for (std::size_t ci = 0; ci < npairs; ++ci) {
          const int ip = pos[ci / neg.size()];
          const int in = neg[ci % neg.size()];
          ZSet common(words_);
          for (std::size_t w = 0; w < words_; ++w)
            common[w] = rays_[ip].z[w] & rays_[in].z[w];
          bool comb = z_popcount(common) >= need;
          if (comb) {
            for (std::size_t r = 0; r < nr && comb; ++r) {
              if (r == static_cast<std::size_t>(ip) || r == static_cast<std::size_t>(in)) continue;
              if (z_subset(common, rays_[r].z)) comb = false;
            }
          }
          bool alg = rank_adjacent(common, t);
          if (comb != alg)
            throw std::runtime_error("double description: adjacency cross-check mismatch");
          if (comb) try_pair(ci);
        }
      } else if (nthreads_ > 1 && npairs > 32) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) num_threads(nthreads_)
#endif
        for (long ci = 0; ci < static_cast<long>(npairs); ++ci) try_pair(ci);
      } else {
        for (std::size_t ci = 0; ci < npairs; ++ci) try_pair(ci);
      }
    }

    std::vector<RayRec> next;
    next.reserve(zer.size() + pos.size() + slots.size());
    for (int i : zer) {
      z_set(rays_[i].z, t);
      next.push_back(std::move(rays_[i]));
    }
    for (int i : pos) next.push_back(std::move(rays_[i]));
    for (CandidateRay& c : slots)
      if (c.ok) next.push_back(RayRec{std::move(c.v), std::move(c.z)});
    rays_ = std::move(next);
  }

  int k_;
  std::vector<Vec> rows_;
  DdOptions opt_;
  Clock::time_point start_;
  std::size_t words_ = 1;
  int nthreads_ = 1;
  std::vector<Vec> lines_;
  std::vector<RayRec> rays_;
};

}  // namespace

ConeRep dd_cone(int dim, std::vector<Vec> ineq_rows, std::vector<Vec> eq_rows,
                const DdOptions& opt) {
  for (const Vec& r : ineq_rows)
    if (static_cast<int>(r.size()) != dim) throw std::runtime_error("dd_cone: row width mismatch");
  for (const Vec& r : eq_rows)
    if (static_cast<int>(r.size()) != dim) throw std::runtime_error("dd_cone: row width mismatch");

  // Solve the equalities once and run the ray computation inside their
  // solution space.
  Mat basis = nullspace_basis(eq_rows, dim);
  const int k = static_cast<int>(basis.size());
  ConeRep out;
  if (k == 0) return out;  // the cone is {0}

  std::vector<Vec> rows;
  rows.reserve(ineq_rows.size());
  for (const Vec& r : ineq_rows) {
    Vec rr(k);
    for (int j = 0; j < k; ++j) rr[j] = dot(r, basis[j]);
    normalize_primitive(rr);
    if (!is_zero_vec(rr)) rows.push_back(std::move(rr));
  }
  std::sort(rows.begin(), rows.end(), lex_less);
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());

  DdEngine engine(k, std::move(rows), opt);
  engine.run();

  auto lift = [&](const Vec& z, bool sign_normalize) {
    Vec y(dim, Rat(0));
    for (int j = 0; j < k; ++j) {
      if (sgn(z[j]) == 0) continue;
      for (int c = 0; c < dim; ++c)
        if (sgn(basis[j][c]) != 0) y[c] += z[j] * basis[j][c];
    }
    normalize_primitive(y, sign_normalize);
    return y;
  };
  for (const Vec& r : engine.ray_vectors()) out.rays.push_back(lift(r, false));
  for (const Vec& l : engine.line_vectors()) out.lines.push_back(lift(l, true));
  std::sort(out.rays.begin(), out.rays.end(), lex_less);
  out.rays.erase(std::unique(out.rays.begin(), out.rays.end()), out.rays.end());
  std::sort(out.lines.begin(), out.lines.end(), lex_less);
  out.lines.erase(std::unique(out.lines.begin(), out.lines.end()), out.lines.end());
  return out;
}

VPolyhedron enumerate_vertices(const HPolyhedron& h, const DdOptions& opt) {
  HPolyhedron hc = h;
  hc.canonicalize();
  const int d = hc.dim;
  std::vector<Vec> ineq, eq;
  auto homogenize = [&](const Row& r) {
    Vec y(d + 1);
    y[0] = -r.b;
    for (int j = 0; j < d; ++j) y[j + 1] = r.a[j];
    return y;
  };
  for (const Row& r : hc.ineqs) ineq.push_back(homogenize(r));
  {
    Vec e0(d + 1, Rat(0));
    e0[0] = 1;
    ineq.push_back(std::move(e0));
  }
  for (const Row& r : hc.eqs) eq.push_back(homogenize(r));

  ConeRep cone = dd_cone(d + 1, std::move(ineq), std::move(eq), opt);

  VPolyhedron v;
  for (const Vec& y : cone.rays) {
    int s = sgn(y[0]);
    if (s > 0) {
      Vec x(d);
      for (int j = 0; j < d; ++j) x[j] = y[j + 1] / y[0];
      v.vertices.push_back(std::move(x));
    } else if (s == 0) {
      v.rays.emplace_back(y.begin() + 1, y.end());
    } else {
      throw std::runtime_error("enumerate_vertices: negative homogenizing coordinate");
    }
  }
  for (const Vec& l : cone.lines) {
    if (sgn(l[0]) != 0)
      throw std::runtime_error("enumerate_vertices: line with nonzero homogenizing coordinate");
    Vec r(l.begin() + 1, l.end());
    Vec rm(d);
    for (int j = 0; j < d; ++j) rm[j] = -r[j];
    v.rays.push_back(std::move(r));
    v.rays.push_back(std::move(rm));
  }
  if (v.vertices.empty()) return VPolyhedron{};  // infeasible system
  v.canonicalize();
  return v;
}

HPolyhedron facets(const VPolyhedron& v, const DdOptions& opt) {
  if (v.empty()) throw std::runtime_error("facets: empty V-polyhedron");
  if (v.vertices.empty())
    throw std::runtime_error("facets: V-polyhedron has rays but no vertices");
  const int d = static_cast<int>(v.vertices[0].size());
  std::vector<Vec> rows;
  rows.reserve(v.vertices.size() + v.rays.size());
  for (const Vec& vert : v.vertices) {
    if (static_cast<int>(vert.size()) != d)
      throw std::runtime_error("facets: vertex width mismatch");
    Vec y(d + 1);
    y[0] = -1;
    for (int j = 0; j < d; ++j) y[j + 1] = vert[j];
    rows.push_back(std::move(y));
  }
  for (const Vec& ray : v.rays) {
    if (static_cast<int>(ray.size()) != d)
      throw std::runtime_error("facets: ray width mismatch");
    Vec y(d + 1, Rat(0));
    for (int j = 0; j < d; ++j) y[j + 1] = ray[j];
    rows.push_back(std::move(y));
  }

  ConeRep cone = dd_cone(d + 1, std::move(rows), {}, opt);

  HPolyhedron h;
  h.dim = d;
  for (const Vec& w : cone.rays) {
    Row r;
    r.b = w[0];
    r.a.assign(w.begin() + 1, w.end());
    if (is_zero_vec(r.a)) continue;  // the trivial "1 >= 0" direction
    h.ineqs.push_back(std::move(r));
  }
  for (const Vec& w : cone.lines) {
    Row r;
    r.b = w[0];
    r.a.assign(w.begin() + 1, w.end());
    if (is_zero_vec(r.a))
      throw std::runtime_error("facets: degenerate lineality direction");
    h.eqs.push_back(std::move(r));
  }
  h.canonicalize();
  return h;
}

}  // namespace rc
