#include "orbitcat/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace orbitcat {

namespace {

// Row echelon form in place. Returns pivot columns in order. First nonzero
// entry of the remaining block picks the pivot, rows swapped into place.
std::vector<int> echelonize(std::vector<std::vector<Rat>>& a, int cols) {
  std::vector<int> pivot_cols;
  int row = 0;
  const int rows = int(a.size());
  for (int col = 0; col < cols && row < rows; ++col) {
    int pr = -1;
    for (int r = row; r < rows; ++r) {
      if (a[r][col] != 0) {
        pr = r;
        break;
      }
    }
    if (pr < 0) continue;
    std::swap(a[row], a[pr]);
    const Rat inv = Rat(1) / a[row][col];
    for (int c = col; c < cols; ++c) a[row][c] *= inv;
    for (int r = 0; r < rows; ++r) {
      if (r == row || a[r][col] == 0) continue;
      const Rat f = a[r][col];
      for (int c = col; c < cols; ++c) a[r][c] -= f * a[row][c];
    }
    pivot_cols.push_back(col);
    ++row;
  }
  return pivot_cols;
}

std::vector<std::vector<Rat>> to_rows(const QMat& m) {
  std::vector<std::vector<Rat>> a(m.rows());
  for (int i = 0; i < m.rows(); ++i) a[i] = m.row(i);
  return a;
}

}  // namespace

int rank(const QMat& m) {
  auto a = to_rows(m);
  return int(echelonize(a, m.cols()).size());
}

int cokernel_dim(const QMat& m) { return m.rows() - rank(m); }

std::vector<std::vector<Rat>> kernel_basis(const QMat& m) {
  auto a = to_rows(m);
  const int cols = m.cols();
  const auto pivot_cols = echelonize(a, cols);
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_cols) is_pivot[c] = true;

  std::vector<std::vector<Rat>> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rat> v(cols, Rat(0));
    v[free] = 1;
    // Back-substitute: pivot row r has unit pivot at pivot_cols[r].
    for (size_t r = 0; r < pivot_cols.size(); ++r) {
      v[pivot_cols[r]] = -a[r][free];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<Rat>> solve(const QMat& m, const std::vector<Rat>& b) {
  if (int(b.size()) != m.rows()) throw std::invalid_argument("solve: size mismatch");
  const int cols = m.cols();
  auto a = to_rows(m);
  for (int i = 0; i < m.rows(); ++i) a[i].push_back(b[i]);
  const auto pivot_cols = echelonize(a, cols + 1);
  for (int c : pivot_cols) {
    if (c == cols) return std::nullopt;  // pivot in the augmented column
  }
  std::vector<Rat> x(cols, Rat(0));
  for (size_t r = 0; r < pivot_cols.size(); ++r) x[pivot_cols[r]] = a[r][cols];
  return x;
}

std::optional<QMat> solve_matrix(const QMat& m, const QMat& b) {
  if (b.rows() != m.rows()) throw std::invalid_argument("solve_matrix: size mismatch");
  QMat x(m.cols(), b.cols());
  for (int j = 0; j < b.cols(); ++j) {
    auto col = solve(m, b.col(j));
    if (!col) return std::nullopt;
    x.set_col(j, *col);
  }
  return x;
}

bool EchelonBasis::insert(std::vector<Rat> v) {
  if (int(v.size()) != width_) throw std::invalid_argument("EchelonBasis: width mismatch");
  v = reduce(std::move(v));
  int pivot = -1;
  for (int i = 0; i < width_; ++i) {
    if (v[i] != 0) {
      pivot = i;
      break;
    }
  }
  if (pivot < 0) return false;
  const Rat inv = Rat(1) / v[pivot];
  for (auto& e : v) e *= inv;
  // Reduce existing rows against the new one to stay fully reduced.
  for (auto& row : rows_) {
    if (row[pivot] == 0) continue;
    const Rat f = row[pivot];
    for (int i = 0; i < width_; ++i) row[i] -= f * v[i];
  }
  const auto it = std::lower_bound(pivots_.begin(), pivots_.end(), pivot);
  const auto idx = it - pivots_.begin();
  pivots_.insert(it, pivot);
  rows_.insert(rows_.begin() + idx, std::move(v));
  return true;
}

std::vector<Rat> EchelonBasis::reduce(std::vector<Rat> v) const {
  if (int(v.size()) != width_) throw std::invalid_argument("EchelonBasis: width mismatch");
  for (size_t r = 0; r < rows_.size(); ++r) {
    const Rat f = v[pivots_[r]];
    if (f == 0) continue;
    for (int i = 0; i < width_; ++i) v[i] -= f * rows_[r][i];
  }
  return v;
}

bool EchelonBasis::contains(const std::vector<Rat>& v) const {
  auto r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](const Rat& e) { return e == 0; });
}

std::vector<int> EchelonBasis::free_positions() const {
  std::vector<int> out;
  size_t p = 0;
  for (int i = 0; i < width_; ++i) {
    if (p < pivots_.size() && pivots_[p] == i) {
      ++p;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

}  // namespace orbitcat
