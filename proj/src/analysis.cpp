#include "ifstbc/analysis.hpp"

#include <cmath>

#include "ifstbc/numerics.hpp"

namespace ifstbc {

double chernoff_layer_bound(double P, std::size_t nt, double b_row_norm2) {
  if (!(P > 0.0) || nt == 0) throw ConfigError("chernoff bound: P and nt must be positive");
  if (!(b_row_norm2 > 0.0)) throw ConfigError("chernoff bound: ||b_m||^2 must be positive");
  return std::exp(-P / (4.0 * static_cast<double>(nt) * b_row_norm2));
}

double lemma1_constant(std::size_t K, std::size_t nt) {
  if (K == 0 || nt == 0) throw ConfigError("lemma1 constant: K and nt must be positive");
  const double k = static_cast<double>(K);
  return 1.0 / (4.0 * static_cast<double>(nt) * (2.0 * k * k * k + 3.0 * k * k));
}

double lemma1_bound(double P, std::size_t K, std::size_t nt, double eps1_sq) {
  if (!(P > 0.0)) throw ConfigError("lemma1 bound: P must be positive");
  if (!(eps1_sq > 0.0)) throw ConfigError("lemma1 bound: eps1_sq must be positive");
  return std::exp(-lemma1_constant(K, nt) * P * eps1_sq);
}

double lattice_min_dist_sq(const RealMatrix& heff) {
  return lattice_shortest_norm2(transpose(heff) * heff);
}

RealMatrix dual_gram(const RealMatrix& heff) {
  const RealMatrix gram = transpose(heff) * heff;
  return spd_solve(gram, RealMatrix::identity(gram.rows()));
}

double theorem1_avg_bound(double P, std::size_t K, std::size_t nt, std::size_t nr,
                          double sigma_min_sq) {
  if (!(P > 0.0) || nr == 0) throw ConfigError("theorem1 bound: P and nr must be positive");
  if (!(sigma_min_sq > 0.0))
    throw NvsViolated("theorem1 bound: non-vanishing singular value must be positive");
  const double c = lemma1_constant(K, nt);
  const double base = 1.0 / (1.0 + c * P * sigma_min_sq);
  return 2.0 * static_cast<double>(K) *
         std::pow(base, static_cast<double>(nt) * static_cast<double>(nr));
}

double vblast_bound(double P, std::size_t nt, std::size_t nr) {
  if (!(P > 0.0) || nr == 0) throw ConfigError("vblast bound: P and nr must be positive");
  const double c = lemma1_constant(nt, nt);
  return std::pow(1.0 / (1.0 + c * P), static_cast<double>(nr));
}

double diversity_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2)
    throw InsufficientErrors("diversity slope: need at least two points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [snr_db, ber] : points) {
    if (!(ber > 0.0))
      throw InsufficientErrors("diversity slope: zero error rate point");
    const double x = snr_db / 10.0;  // log10 of linear power
    const double y = std::log10(ber);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(points.size());
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-12)
    throw ConfigError("diversity slope: SNR points are degenerate");
  return -(n * sxy - sx * sy) / denom;
}

}  // namespace ifstbc
