#ifndef IFSTBC_ANALYSIS_HPP
#define IFSTBC_ANALYSIS_HPP

#include <string>
#include <utility>
#include <vector>

#include "ifstbc/matrix.hpp"

namespace ifstbc {

struct BoundCurve {
  std::string label;
  std::vector<double> snr_db;
  std::vector<double> values;
};

// Chernoff bound on a single layer error: exp(-P / (4 nt ||b_m||^2)).
double chernoff_layer_bound(double P, std::size_t nt, double b_row_norm2);

// c = 1 / (4 nt (2 K^3 + 3 K^2)).
double lemma1_constant(std::size_t K, std::size_t nt);

// Layer error bound in terms of the shortest vector of the receive lattice:
// exp(-c P eps1_sq).
double lemma1_bound(double P, std::size_t K, std::size_t nt, double eps1_sq);

// Squared first minimum of the lattice generated by the columns of heff.
double lattice_min_dist_sq(const RealMatrix& heff);

// Gram of the dual lattice, (heff^T heff)^{-1}.
RealMatrix dual_gram(const RealMatrix& heff);

// Rayleigh-averaged word error bound 2K * (1 + c P sigma_min_sq)^{-nt nr};
// requires a strictly positive non-vanishing singular value.
double theorem1_avg_bound(double P, std::size_t K, std::size_t nt, std::size_t nr,
                          double sigma_min_sq);

// Same shape for the uncoded spatial multiplexing case: receive diversity
// only, (1 + c P)^{-nr} with K = nt.
double vblast_bound(double P, std::size_t nt, std::size_t nr);

// Least squares slope of log10(ber) against log10(P); points are (snr_db,
// ber).  Returns the positive diversity order estimate.
double diversity_slope(const std::vector<std::pair<double, double>>& points);

}  // namespace ifstbc

#endif
