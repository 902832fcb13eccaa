#ifndef IFSTBC_MATRIX_HPP
#define IFSTBC_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ifstbc/errors.hpp"

namespace ifstbc {

using cplx = std::complex<double>;
using RealVector = std::vector<double>;

// Dense row-major matrices.  Dimensions in this code base are tiny (<= 16),
// so everything is plain loops over contiguous storage.

class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), e_(rows * cols, 0.0) {}

  static RealMatrix identity(std::size_t n) {
    RealMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return e_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return e_[r * cols_ + c]; }

  double* row(std::size_t r) { return e_.data() + r * cols_; }
  const double* row(std::size_t r) const { return e_.data() + r * cols_; }

  const std::vector<double>& data() const { return e_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> e_;
};

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), e_(rows * cols, cplx(0.0, 0.0)) {}

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = cplx(1.0, 0.0);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return e_[r * cols_ + c]; }
  cplx operator()(std::size_t r, std::size_t c) const { return e_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cplx> e_;
};

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), e_(rows * cols, 0) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  long long& operator()(std::size_t r, std::size_t c) { return e_[r * cols_ + c]; }
  long long operator()(std::size_t r, std::size_t c) const { return e_[r * cols_ + c]; }

  const std::vector<long long>& data() const { return e_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<long long> e_;
};

// A full-rank lattice described by its Gram form.  Construct through
// make_gram_lattice() (numerics.hpp) which checks symmetry and positive
// semidefiniteness and symmetrizes the stored matrix.
struct GramLattice {
  std::size_t dim = 0;
  RealMatrix gram;
};

// ---- basic arithmetic -----------------------------------------------------

RealMatrix operator*(const RealMatrix& a, const RealMatrix& b);
RealVector operator*(const RealMatrix& a, const RealVector& x);
RealMatrix operator+(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator-(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator*(double s, const RealMatrix& a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);

RealMatrix transpose(const RealMatrix& a);
RealMatrix to_real(const IntMatrix& a);
IntMatrix int_mat_mul(const IntMatrix& a, const IntMatrix& b);

double frobenius_norm(const RealMatrix& a);
double frobenius_norm(const ComplexMatrix& a);
double max_abs_diff(const RealMatrix& a, const RealMatrix& b);

// Row-stacking vectorization: X (complex rows x cols) -> [Re(X); Im(X)]
// read out row by row into a vector of length 2*rows*cols.
RealVector vec_real_rowstack(const ComplexMatrix& x);
ComplexMatrix unvec_complex_rowstack(const RealVector& v, std::size_t rows, std::size_t cols);

}  // namespace ifstbc

#endif
