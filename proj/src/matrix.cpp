#include "ifstbc/matrix.hpp"

#include <cmath>
#include <string>

namespace ifstbc {

namespace {
void require(bool ok, const char* what) {
  if (!ok) throw DimensionMismatch(what);
}
}  // namespace

RealMatrix operator*(const RealMatrix& a, const RealMatrix& b) {
  require(a.cols() == b.rows(), "matmul: inner dimensions differ");
  RealMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

RealVector operator*(const RealMatrix& a, const RealVector& x) {
  require(a.cols() == x.size(), "matvec: dimensions differ");
  RealVector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double acc = 0.0;
    const double* r = a.row(i);
    for (std::size_t j = 0; j < x.size(); ++j) acc += r[j] * x[j];
    y[i] = acc;
  }
  return y;
}

RealMatrix operator+(const RealMatrix& a, const RealMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "add: shapes differ");
  RealMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

RealMatrix operator-(const RealMatrix& a, const RealMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "sub: shapes differ");
  RealMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

RealMatrix operator*(double s, const RealMatrix& a) {
  RealMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
  return c;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.cols() == b.rows(), "cmatmul: inner dimensions differ");
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "csub: shapes differ");
  ComplexMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

RealMatrix transpose(const RealMatrix& a) {
  RealMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

RealMatrix to_real(const IntMatrix& a) {
  RealMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = static_cast<double>(a(i, j));
  return r;
}

IntMatrix int_mat_mul(const IntMatrix& a, const IntMatrix& b) {
  require(a.cols() == b.rows(), "int matmul: inner dimensions differ");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const long long aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

double frobenius_norm(const RealMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

double max_abs_diff(const RealMatrix& a, const RealMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "max_abs_diff: shapes differ");
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

RealVector vec_real_rowstack(const ComplexMatrix& x) {
  const std::size_t n = x.rows(), t = x.cols();
  RealVector v(2 * n * t);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < t; ++j) {
      v[i * t + j] = x(i, j).real();
      v[(n + i) * t + j] = x(i, j).imag();
    }
  return v;
}

ComplexMatrix unvec_complex_rowstack(const RealVector& v, std::size_t rows, std::size_t cols) {
  if (v.size() != 2 * rows * cols)
    throw DimensionMismatch("unvec: vector length does not match 2*rows*cols");
  ComplexMatrix x(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      x(i, j) = cplx(v[i * cols + j], v[(rows + i) * cols + j]);
  return x;
}

}  // namespace ifstbc
