#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace orbitcat {

// Exact rationals. mpq_class keeps the canonical form we rely on:
// denominator > 0, gcd(|num|, den) = 1, zero as 0/1.
using Rat = mpq_class;

// mpq_class(num, den) does NOT canonicalize; this does.
inline Rat frac(long num, long den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// Accepts "n" or "n/d"; canonicalizes.
Rat rat_parse(const std::string& s);
// "n" when the denominator is 1, "n/d" otherwise.
std::string rat_str(const Rat& r);

// Dense row-major matrix over Q. Empty shapes (0 rows or 0 cols) are legal
// and act as zero maps.
class QMat {
 public:
  QMat() = default;
  QMat(int rows, int cols) : rows_(rows), cols_(cols), e_(size_t(rows) * cols) {}

  static QMat identity(int n);
  static QMat from_rows(const std::vector<std::vector<Rat>>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rat& at(int i, int j) { return e_[size_t(i) * cols_ + j]; }
  const Rat& at(int i, int j) const { return e_[size_t(i) * cols_ + j]; }

  QMat transpose() const;
  QMat operator*(const QMat& o) const;
  QMat operator*(const Rat& s) const;
  QMat operator+(const QMat& o) const;
  QMat operator-(const QMat& o) const;
  bool operator==(const QMat& o) const = default;
  bool is_zero() const;

  std::vector<Rat> apply(const std::vector<Rat>& v) const;  // m * v
  std::vector<Rat> row(int i) const;
  std::vector<Rat> col(int j) const;
  void set_col(int j, const std::vector<Rat>& v);

  // Block placement: copies `b` with upper-left corner at (i,j).
  void paste(int i, int j, const QMat& b);

  std::string str() const;  // compact debug form

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Rat> e_;
};

QMat hstack(const QMat& a, const QMat& b);
QMat vstack(const QMat& a, const QMat& b);
QMat block_diag(const std::vector<QMat>& blocks);

}  // namespace orbitcat
