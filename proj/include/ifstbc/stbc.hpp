#ifndef IFSTBC_STBC_HPP
#define IFSTBC_STBC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ifstbc/matrix.hpp"

namespace ifstbc {

// PAM ring {0, 1, ..., sqrt_m - 1}, sqrt_m a power of two.  Symbols are
// shifted by `offset` before transmission so the used set is zero mean;
// avg_energy is the mean square of the shifted symbols.
struct Constellation {
  std::size_t sqrt_m = 2;
  double offset = 0.5;
  double avg_energy = 0.25;
  std::size_t bits_per_symbol = 1;
};

Constellation make_constellation(std::size_t sqrt_m);

// Linear dispersion code: X(s) = sum_{k=1}^{2K} D_k * stilde_k with real
// coefficients stilde and complex weight matrices D_k of shape nt x T.
struct LinearDesign {
  std::size_t nt = 0, T = 0, K = 0;
  std::vector<ComplexMatrix> weights;  // 2K matrices
};

LinearDesign make_alamouti();
LinearDesign make_vblast(std::size_t nt);

void validate_design(const LinearDesign& d);

// X = sum_k coeffs[k] * D_k (no scaling, no symbol shift).
ComplexMatrix combine_weights(const LinearDesign& d, const std::vector<double>& coeffs);

// Generator matrix of the real code lattice: column k is the row-stacked real
// vectorization of D_k; shape 2*nt*T x 2K.  The normalization factor is not
// applied here.
RealMatrix build_code_matrix(const LinearDesign& d);

// gamma with E||gamma * X(stilde)||_F^2 == nt*T over the codebook: full
// enumeration up to 1e5 codewords, otherwise a 1e4-sample fixed-seed average.
double normalization_factor(const LinearDesign& d, const Constellation& c);

struct Codeword {
  ComplexMatrix x;           // nt x T, includes gamma
  std::vector<int> symbols;  // the ring symbols that were encoded
};

Codeword encode(const LinearDesign& d, const Constellation& c, const std::vector<int>& s,
                double gamma);

enum class NvsMode { full, nonzero };

struct NvsResult {
  double sigma_min = 0.0;
  std::vector<long long> minimizer;  // first attaining vector in scan order
};

// Exhaustive scan of the nonzero integer box [-coeff_bound, coeff_bound]^{2K}
// (one representative per +- pair): minimum over the box of the nt-th
// singular value of X(v) (full mode) or of the smallest numerically nonzero
// singular value (nonzero mode).  A certificate within the searched box only.
NvsResult nvs_search(const LinearDesign& d, long long coeff_bound, NvsMode mode);
double nvs_sigma_min(const LinearDesign& d, long long coeff_bound, NvsMode mode);

// Plain-text design files: a header line "nt T K" followed by 2K blocks of nt
// rows, each row holding T re/im pairs.  '#' starts a comment.
LinearDesign load_design(const std::string& path);
void save_design(const LinearDesign& d, const std::string& path);

}  // namespace ifstbc

#endif
