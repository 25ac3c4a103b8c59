#include "orbitcat/rational.hpp"

#include <sstream>
#include <stdexcept>

namespace orbitcat {

Rat rat_parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("rat_parse: empty string");
  Rat r;
  try {
    r = Rat(s);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("rat_parse: bad rational literal '" + s + "'");
  }
  r.canonicalize();
  return r;
}

std::string rat_str(const Rat& r) { return r.get_str(); }

QMat QMat::identity(int n) {
  QMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

QMat QMat::from_rows(const std::vector<std::vector<Rat>>& rows) {
  int r = int(rows.size());
  int c = r ? int(rows[0].size()) : 0;
  QMat m(r, c);
  for (int i = 0; i < r; ++i) {
    if (int(rows[i].size()) != c) throw std::invalid_argument("QMat::from_rows: ragged rows");
    for (int j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

QMat QMat::transpose() const {
  QMat t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

QMat QMat::operator*(const Rat& s) const {
  QMat r(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j) * s;
  return r;
}

QMat QMat::operator*(const QMat& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("QMat::mul: shape mismatch");
  QMat r(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Rat& a = at(i, k);
      if (a == 0) continue;
      for (int j = 0; j < o.cols_; ++j) {
        const Rat& b = o.at(k, j);
        if (b != 0) r.at(i, j) += a * b;
      }
    }
  return r;
}

QMat QMat::operator+(const QMat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("QMat::add: shape mismatch");
  QMat r(rows_, cols_);
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + o.e_[i];
  return r;
}

QMat QMat::operator-(const QMat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("QMat::sub: shape mismatch");
  QMat r(rows_, cols_);
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] - o.e_[i];
  return r;
}

bool QMat::is_zero() const {
  for (const Rat& x : e_)
    if (x != 0) return false;
  return true;
}

std::vector<Rat> QMat::apply(const std::vector<Rat>& v) const {
  if (int(v.size()) != cols_) throw std::invalid_argument("QMat::apply: length mismatch");
  std::vector<Rat> r(rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      if (at(i, j) != 0 && v[j] != 0) r[i] += at(i, j) * v[j];
  return r;
}

std::vector<Rat> QMat::row(int i) const {
  std::vector<Rat> r(cols_);
  for (int j = 0; j < cols_; ++j) r[j] = at(i, j);
  return r;
}

std::vector<Rat> QMat::col(int j) const {
  std::vector<Rat> c(rows_);
  for (int i = 0; i < rows_; ++i) c[i] = at(i, j);
  return c;
}

void QMat::set_col(int j, const std::vector<Rat>& v) {
  if (int(v.size()) != rows_) throw std::invalid_argument("QMat::set_col: length mismatch");
  for (int i = 0; i < rows_; ++i) at(i, j) = v[i];
}

void QMat::paste(int i0, int j0, const QMat& b) {
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) at(i0 + i, j0 + j) = b.at(i, j);
}

std::string QMat::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rows_; ++i) {
    os << (i ? "; " : "");
    for (int j = 0; j < cols_; ++j) os << (j ? "," : "") << rat_str(at(i, j));
  }
  os << "]";
  return os.str();
}

QMat hstack(const QMat& a, const QMat& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("hstack: row mismatch");
  QMat r(a.rows(), a.cols() + b.cols());
  r.paste(0, 0, a);
  r.paste(0, a.cols(), b);
  return r;
}

QMat vstack(const QMat& a, const QMat& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("vstack: col mismatch");
  QMat r(a.rows() + b.rows(), a.cols());
  r.paste(0, 0, a);
  r.paste(a.rows(), 0, b);
  return r;
}

QMat block_diag(const std::vector<QMat>& blocks) {
  int r = 0, c = 0;
  for (const QMat& b : blocks) r += b.rows(), c += b.cols();
  QMat m(r, c);
  int i = 0, j = 0;
  for (const QMat& b : blocks) {
    m.paste(i, j, b);
    i += b.rows();
    j += b.cols();
  }
  return m;
}

}  // namespace orbitcat
