#ifndef IFSTBC_NUMERICS_HPP
#define IFSTBC_NUMERICS_HPP

#include <cstdint>
#include <vector>

#include "ifstbc/matrix.hpp"

namespace ifstbc {

// Real expansion of a complex matrix:
//   [ Re(h)  -Im(h) ]
//   [ Im(h)   Re(h) ]
// so that vec_real_rowstack(h*x) == kron_identity_apply(real_expand(h), T, vec_real_rowstack(x)).
RealMatrix real_expand(const ComplexMatrix& h);

// Apply (hprime kron I_T) to x without forming the Kronecker product:
// reshape x into hprime.cols() rows of length T, left-multiply, re-stack.
RealVector kron_identity_apply(const RealMatrix& hprime, std::size_t T, const RealVector& x);

// Singular values of a complex nt x T matrix, descending, padded with zeros to
// length nt.  Computed by one-sided Jacobi on the real expansion; the real
// expansion carries each singular value twice, so every second value is kept.
std::vector<double> singular_values(const ComplexMatrix& x);

// One-sided Jacobi (Hestenes) on a real matrix; all min(rows,cols) singular
// values, descending.  Sweep cap 100, pair tolerance 1e-12 relative.
std::vector<double> real_singular_values(const RealMatrix& a);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, descending.
std::vector<double> symmetric_eigenvalues(const RealMatrix& m);

// Validating constructor for GramLattice: requires square, symmetric within
// 1e-10 relative, eigenvalues >= -1e-10 relative to the largest.  The stored
// gram is symmetrized.
GramLattice make_gram_lattice(const RealMatrix& gram);

// Cholesky factor L (lower triangular, m = L * L^T).  Throws
// NotPositiveDefinite when a pivot is not acceptably positive.
RealMatrix cholesky_factor(const RealMatrix& m);

// Solve m * x = rhs for symmetric positive definite m via Cholesky.
RealMatrix spd_solve(const RealMatrix& m, const RealMatrix& rhs);

struct LllResult {
  RealMatrix reduced;    // reduced basis, rows
  IntMatrix unimodular;  // U with reduced == U * basis, det(U) = +-1
};

// Lenstra-Lenstra-Lovasz reduction of a row basis (rows <= cols, full row
// rank).  Plain floating-point variant; fine at the dimensions used here.
LllResult lll_reduce(const RealMatrix& basis, double delta = 0.99);

struct ShortVector {
  std::vector<long long> coeffs;
  double norm2;
};

// All lattice vectors d != 0 with d * gram * d^T <= radius2 (a relative slack
// of 1e-12 is applied at the boundary), one representative per +-pair with the
// first nonzero coefficient positive, sorted by (norm2, lex), truncated to the
// max_count smallest.  Schnorr-Euchner depth-first search; each visited node
// counts against node_budget.
std::vector<ShortVector> enumerate_short_vectors(const GramLattice& lat, double radius2,
                                                 std::size_t max_count,
                                                 std::uint64_t node_budget = 10000000);

// LLL-accelerated candidate listing on a positive definite gram: enumerates up
// to max_count vectors inside the largest reduced-basis row norm and merges in
// the reduced basis rows themselves, so the list always contains dim linearly
// independent vectors.  Coordinates refer to the original basis; norms are
// recomputed against the original gram.
std::vector<ShortVector> lattice_candidates(const RealMatrix& gram, std::size_t max_count = 200,
                                            std::uint64_t node_budget = 10000000);

// Squared length of a shortest nonzero vector of the lattice with this gram.
double lattice_shortest_norm2(const RealMatrix& gram);

struct SuccessiveMinima {
  std::vector<double> norms2;                   // ascending
  std::vector<std::vector<long long>> vectors;  // matching coefficient rows
};

// Greedy successive-minima extraction: scan candidates in ascending norm and
// keep each vector that is linearly independent of those already kept.
SuccessiveMinima successive_minima(const RealMatrix& gram, std::size_t k,
                                   std::size_t max_candidates = 500);

// Exact rank over the rationals of integer rows (fraction-free elimination in
// 128-bit arithmetic).
std::size_t int_rows_rank(const std::vector<std::vector<long long>>& rows);

// iid complex Gaussian entries, row-major, real part drawn before imaginary
// part, each N(0, variance_per_real_dim).
ComplexMatrix sample_gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                                     double variance_per_real_dim);

}  // namespace ifstbc

#endif
