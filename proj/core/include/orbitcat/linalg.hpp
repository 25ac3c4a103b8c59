#pragma once

#include <optional>
#include <vector>

#include "orbitcat/rational.hpp"

namespace orbitcat {

// Fraction-exact Gaussian elimination. Pivot rule everywhere: first nonzero
// entry in column order, so bases come out deterministic.

int rank(const QMat& m);
int cokernel_dim(const QMat& m);  // rows - rank

// Basis of {v : m v = 0}; size cols - rank. Deterministic: free columns in
// increasing order, free coordinate set to 1.
std::vector<std::vector<Rat>> kernel_basis(const QMat& m);

// Some x with m x = b, if any.
std::optional<std::vector<Rat>> solve(const QMat& m, const std::vector<Rat>& b);

// Solve m X = B column-wise; nullopt if any column is unsolvable.
std::optional<QMat> solve_matrix(const QMat& m, const QMat& b);

// Incremental reduced echelon basis of a growing span of row vectors.
// Rows kept unit-pivot and fully reduced against each other, so reduce()
// is a canonical projection onto the complement of the span.
class EchelonBasis {
 public:
  explicit EchelonBasis(int width) : width_(width) {}

  // Reduces v against the basis; if a nonzero residual remains it is
  // normalized and inserted. Returns true if the rank grew.
  bool insert(std::vector<Rat> v);
  // Residual of v modulo the span; zero vector iff v lies in the span.
  std::vector<Rat> reduce(std::vector<Rat> v) const;
  bool contains(const std::vector<Rat>& v) const;

  int rank() const { return int(rows_.size()); }
  int width() const { return width_; }
  const std::vector<int>& pivots() const { return pivots_; }  // sorted
  // Positions that are not pivots, in increasing order.
  std::vector<int> free_positions() const;

 private:
  int width_;
  std::vector<std::vector<Rat>> rows_;  // kept sorted by pivot position
  std::vector<int> pivots_;
};

}  // namespace orbitcat
