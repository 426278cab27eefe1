#include "rcausal/linalg.hpp"

#include <stdexcept>

namespace rc {

std::vector<int> rref(Mat& m, const std::vector<int>& prefer_cols) {
  if (m.empty()) return {};
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  for (const Vec& row : m)
    if (static_cast<int>(row.size()) != cols)
      throw std::runtime_error("rref: ragged matrix");

  std::vector<int> order;
  order.reserve(cols);
  std::vector<char> used(cols, 0);
  for (int c : prefer_cols) {
    if (c < 0 || c >= cols) throw std::runtime_error("rref: bad preferred column");
    if (!used[c]) {
      order.push_back(c);
      used[c] = 1;
    }
  }
  for (int c = 0; c < cols; ++c)
    if (!used[c]) order.push_back(c);

  std::vector<int> pivots;
  int r = 0;
  for (int c : order) {
    if (r == rows) break;
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (sgn(m[i][c]) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(m[r], m[p]);
    Rat inv = m[r][c];
    for (int j = 0; j < cols; ++j)
      if (sgn(m[r][j]) != 0) m[r][j] /= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || sgn(m[i][c]) == 0) continue;
      Rat f = m[i][c];
      for (int j = 0; j < cols; ++j)
        if (sgn(m[r][j]) != 0) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  return pivots;
}

int rank_of(Mat m) { return static_cast<int>(rref(m).size()); }

Mat nullspace_basis(const Mat& m_in, int n_cols) {
  Mat m = m_in;
  for (Vec& row : m)
    if (static_cast<int>(row.size()) != n_cols)
      throw std::runtime_error("nullspace_basis: width mismatch");
  std::vector<int> pivots = rref(m);
  std::vector<char> is_pivot(n_cols, 0);
  for (int c : pivots) is_pivot[c] = 1;
  Mat basis;
  for (int f = 0; f < n_cols; ++f) {
    if (is_pivot[f]) continue;
    Vec x(n_cols, Rat(0));
    x[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = -m[i][f];
    basis.push_back(std::move(x));
  }
  return basis;
}

bool solve_linear(Mat m, Vec b, int n_cols, Vec& x) {
  if (m.size() != b.size()) throw std::runtime_error("solve_linear: size mismatch");
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (static_cast<int>(m[i].size()) != n_cols)
      throw std::runtime_error("solve_linear: width mismatch");
    m[i].push_back(b[i]);
  }
  std::vector<int> pivots = rref(m);
  for (int c : pivots)
    if (c == n_cols) return false;  // a row reduced to 0 = 1
  x.assign(n_cols, Rat(0));
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = m[i][n_cols];
  return true;
}

bool min_norm_point(const Mat& m_in, const Vec& b_in, int n_cols, Vec& x) {
  // Reduce to a consistent full-row-rank system A x = c, then use the normal
  // equations: the minimum-norm solution is x = A^T y with (A A^T) y = c.
  Mat aug = m_in;
  if (aug.size() != b_in.size()) throw std::runtime_error("min_norm_point: size mismatch");
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b_in[i]);
  std::vector<int> pivots = rref(aug);
  for (int c : pivots)
    if (c == n_cols) return false;
  const int r = static_cast<int>(aug.size());
  if (r == 0) {
    x.assign(n_cols, Rat(0));
    return true;
  }
  Mat gram(r, Vec(r, Rat(0)));
  Vec c(r);
  for (int i = 0; i < r; ++i) {
    c[i] = aug[i][n_cols];
    for (int j = i; j < r; ++j) {
      Rat s = 0;
      for (int k = 0; k < n_cols; ++k)
        if (sgn(aug[i][k]) != 0 && sgn(aug[j][k]) != 0) s += aug[i][k] * aug[j][k];
      gram[i][j] = s;
      gram[j][i] = s;
    }
  }
  Vec y;
  if (!solve_linear(gram, c, r, y))
    throw std::runtime_error("min_norm_point: singular Gram matrix");
  x.assign(n_cols, Rat(0));
  for (int i = 0; i < r; ++i) {
    if (sgn(y[i]) == 0) continue;
    for (int k = 0; k < n_cols; ++k)
      if (sgn(aug[i][k]) != 0) x[k] += y[i] * aug[i][k];
  }
  return true;
}

}  // namespace rc
