#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace coherentfl {

using cdouble = std::complex<double>;

// Dense complex row/column vector. Only the handful of operations the
// simulator needs; not a general BLAS.
class ComplexVector {
 public:
  ComplexVector() = default;
  explicit ComplexVector(std::size_t n) : v_(n) {}
  ComplexVector(std::initializer_list<cdouble> init) : v_(init) {}

  std::size_t size() const { return v_.size(); }
  cdouble& operator[](std::size_t i) { return v_[i]; }
  const cdouble& operator[](std::size_t i) const { return v_[i]; }
  std::span<const cdouble> entries() const { return v_; }

  double norm_sq() const;
  ComplexVector scaled(cdouble s) const;
  ComplexVector& operator+=(const ComplexVector& other);
  ComplexVector operator-(const ComplexVector& other) const;

 private:
  std::vector<cdouble> v_;
};

// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  cdouble& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const cdouble& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  ComplexMatrix hermitian() const;  // conjugate transpose
  ComplexMatrix operator*(const ComplexMatrix& rhs) const;
  ComplexMatrix operator+(const ComplexMatrix& rhs) const;
  ComplexMatrix scaled(cdouble s) const;
  ComplexMatrix hstack(const ComplexMatrix& right) const;  // column concat
  ComplexVector col(std::size_t j) const;

  double frobenius_norm() const;
  double max_abs() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cdouble> a_;
};

// h^H X: out_j = sum_i conj(h_i) X(i, j)
ComplexVector left_apply_conj(const ComplexVector& h, const ComplexMatrix& x);

// y X^H: out_i = sum_j y_j conj(X(i, j))
ComplexVector right_apply_hermitian(const ComplexVector& y, const ComplexMatrix& x);

cdouble dot_plain(const ComplexVector& a, const ComplexVector& b);  // sum a_i b_i
cdouble dot_conj(const ComplexVector& a, const ComplexVector& b);   // sum conj(a_i) b_i

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs_diff(const ComplexVector& a, const ComplexVector& b);

}  // namespace coherentfl
