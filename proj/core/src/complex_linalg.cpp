#include "coherentfl/complex_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coherentfl {

double ComplexVector::norm_sq() const {
  double s = 0.0;
  for (const auto& z : v_) s += std::norm(z);
  return s;
}

ComplexVector ComplexVector::scaled(cdouble s) const {
  ComplexVector out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = v_[i] * s;
  return out;
}

ComplexVector& ComplexVector::operator+=(const ComplexVector& other) {
  if (other.size() != size())
    throw std::invalid_argument("ComplexVector: size mismatch in +=");
  for (std::size_t i = 0; i < size(); ++i) v_[i] += other[i];
  return *this;
}

ComplexVector ComplexVector::operator-(const ComplexVector& other) const {
  if (other.size() != size())
    throw std::invalid_argument("ComplexVector: size mismatch in -");
  ComplexVector out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = v_[i] - other[i];
  return out;
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::hermitian() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out.at(c, r) = std::conj(at(r, c));
  return out;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
  if (cols_ != rhs.rows_)
    throw std::invalid_argument("ComplexMatrix: inner dimension mismatch in *");
  ComplexMatrix out(rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const cdouble v = at(r, k);
      if (v == cdouble{}) continue;
      for (std::size_t c = 0; c < rhs.cols_; ++c) out.at(r, c) += v * rhs.at(k, c);
    }
  }
  return out;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw std::invalid_argument("ComplexMatrix: shape mismatch in +");
  ComplexMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] + rhs.a_[i];
  return out;
}

ComplexMatrix ComplexMatrix::scaled(cdouble s) const {
  ComplexMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] * s;
  return out;
}

ComplexMatrix ComplexMatrix::hstack(const ComplexMatrix& right) const {
  if (rows_ != right.rows_)
    throw std::invalid_argument("ComplexMatrix: row mismatch in hstack");
  ComplexMatrix out(rows_, cols_ + right.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out.at(r, c) = at(r, c);
    for (std::size_t c = 0; c < right.cols_; ++c) out.at(r, cols_ + c) = right.at(r, c);
  }
  return out;
}

ComplexVector ComplexMatrix::col(std::size_t j) const {
  if (j >= cols_) throw std::out_of_range("ComplexMatrix: column index out of range");
  ComplexVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = at(r, j);
  return out;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : a_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : a_) m = std::max(m, std::abs(z));
  return m;
}

ComplexVector left_apply_conj(const ComplexVector& h, const ComplexMatrix& x) {
  if (h.size() != x.rows())
    throw std::invalid_argument("left_apply_conj: vector length must match matrix rows");
  ComplexVector out(x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const cdouble hi = std::conj(h[i]);
    for (std::size_t j = 0; j < x.cols(); ++j) out[j] += hi * x.at(i, j);
  }
  return out;
}

ComplexVector right_apply_hermitian(const ComplexVector& y, const ComplexMatrix& x) {
  if (y.size() != x.cols())
    throw std::invalid_argument("right_apply_hermitian: vector length must match matrix cols");
  ComplexVector out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    cdouble acc = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) acc += y[j] * std::conj(x.at(i, j));
    out[i] = acc;
  }
  return out;
}

cdouble dot_plain(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot_plain: size mismatch");
  cdouble s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

cdouble dot_conj(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot_conj: size mismatch");
  cdouble s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      m = std::max(m, std::abs(a.at(r, c) - b.at(r, c)));
  return m;
}

double max_abs_diff(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("max_abs_diff: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace coherentfl
