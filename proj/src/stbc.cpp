#include "ifstbc/stbc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "ifstbc/numerics.hpp"
#include "ifstbc/rng.hpp"

namespace ifstbc {

Constellation make_constellation(std::size_t sqrt_m) {
  if (sqrt_m < 2 || (sqrt_m & (sqrt_m - 1)) != 0)
    throw ConfigError("sqrt_m must be a power of two and at least 2");
  Constellation c;
  c.sqrt_m = sqrt_m;
  c.offset = (static_cast<double>(sqrt_m) - 1.0) / 2.0;
  const double m = static_cast<double>(sqrt_m) * static_cast<double>(sqrt_m);
  c.avg_energy = (m - 1.0) / 12.0;
  c.bits_per_symbol = 0;
  for (std::size_t v = sqrt_m; v > 1; v >>= 1) ++c.bits_per_symbol;
  return c;
}

void validate_design(const LinearDesign& d) {
  if (d.nt == 0 || d.T == 0 || d.K == 0) throw ConfigError("design dimensions must be positive");
  if (d.weights.size() != 2 * d.K)
    throw DimensionMismatch("design must supply exactly 2K weight matrices");
  for (const ComplexMatrix& w : d.weights)
    if (w.rows() != d.nt || w.cols() != d.T)
      throw DimensionMismatch("weight matrix shape must be nt x T");
}

LinearDesign make_alamouti() {
  LinearDesign d;
  d.nt = 2;
  d.T = 2;
  d.K = 2;
  d.weights.assign(4, ComplexMatrix(2, 2));
  const cplx one(1.0, 0.0), i(0.0, 1.0);
  // x1 = s1 + i s2 on the diagonal, x2 = s3 + i s4 on the antidiagonal with
  // the conjugate structure of the orthogonal 2x2 design.
  d.weights[0](0, 0) = one;
  d.weights[0](1, 1) = one;
  d.weights[1](0, 0) = i;
  d.weights[1](1, 1) = -i;
  d.weights[2](0, 1) = one;
  d.weights[2](1, 0) = -one;
  d.weights[3](0, 1) = i;
  d.weights[3](1, 0) = i;
  return d;
}

LinearDesign make_vblast(std::size_t nt) {
  if (nt == 0) throw ConfigError("vblast: nt must be positive");
  LinearDesign d;
  d.nt = nt;
  d.T = 1;
  d.K = nt;
  d.weights.assign(2 * nt, ComplexMatrix(nt, 1));
  for (std::size_t j = 0; j < nt; ++j) {
    d.weights[2 * j](j, 0) = cplx(1.0, 0.0);
    d.weights[2 * j + 1](j, 0) = cplx(0.0, 1.0);
  }
  return d;
}

ComplexMatrix combine_weights(const LinearDesign& d, const std::vector<double>& coeffs) {
  validate_design(d);
  if (coeffs.size() != 2 * d.K)
    throw DimensionMismatch("combine_weights: coefficient count must be 2K");
  ComplexMatrix x(d.nt, d.T);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double ck = coeffs[k];
    if (ck == 0.0) continue;
    const ComplexMatrix& w = d.weights[k];
    for (std::size_t i = 0; i < d.nt; ++i)
      for (std::size_t j = 0; j < d.T; ++j) x(i, j) += ck * w(i, j);
  }
  return x;
}

RealMatrix build_code_matrix(const LinearDesign& d) {
  validate_design(d);
  RealMatrix r(2 * d.nt * d.T, 2 * d.K);
  for (std::size_t k = 0; k < 2 * d.K; ++k) {
    const RealVector col = vec_real_rowstack(d.weights[k]);
    for (std::size_t i = 0; i < col.size(); ++i) r(i, k) = col[i];
  }
  return r;
}

double normalization_factor(const LinearDesign& d, const Constellation& c) {
  validate_design(d);
  const std::size_t n = 2 * d.K;
  double mean_energy = 0.0;

  double words = 1.0;
  for (std::size_t k = 0; k < n && words <= 1e5; ++k) words *= static_cast<double>(c.sqrt_m);

  std::vector<double> coeffs(n, 0.0);
  if (words <= 1e5) {
    std::vector<std::size_t> digit(n, 0);
    const std::size_t total = static_cast<std::size_t>(words);
    for (std::size_t w = 0; w < total; ++w) {
      for (std::size_t k = 0; k < n; ++k)
        coeffs[k] = static_cast<double>(digit[k]) - c.offset;
      const ComplexMatrix x = combine_weights(d, coeffs);
      const double f = frobenius_norm(x);
      mean_energy += f * f;
      for (std::size_t k = 0; k < n; ++k) {
        if (++digit[k] < c.sqrt_m) break;
        digit[k] = 0;
      }
    }
    mean_energy /= words;
  } else {
    // Fixed-seed Monte Carlo average for codebooks too large to enumerate.
    Xoshiro256ss rng(0x5a1ad000cafeULL);
    const int samples = 10000;
    for (int t = 0; t < samples; ++t) {
      for (std::size_t k = 0; k < n; ++k)
        coeffs[k] = static_cast<double>(rng.uniform_pow2(c.sqrt_m)) - c.offset;
      const ComplexMatrix x = combine_weights(d, coeffs);
      const double f = frobenius_norm(x);
      mean_energy += f * f;
    }
    mean_energy /= samples;
  }

  const double per_entry = mean_energy / (static_cast<double>(d.nt) * static_cast<double>(d.T));
  if (per_entry <= 1e-300) throw DegenerateDesign("design radiates no energy");
  return 1.0 / std::sqrt(per_entry);
}

Codeword encode(const LinearDesign& d, const Constellation& c, const std::vector<int>& s,
                double gamma) {
  validate_design(d);
  if (s.size() != 2 * d.K) throw DimensionMismatch("encode: symbol count must be 2K");
  std::vector<double> coeffs(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] < 0 || static_cast<std::size_t>(s[k]) >= c.sqrt_m)
      throw SymbolOutOfRange("encode: symbol outside the ring");
    coeffs[k] = gamma * (static_cast<double>(s[k]) - c.offset);
  }
  Codeword cw;
  cw.x = combine_weights(d, coeffs);
  cw.symbols = s;
  return cw;
}

// ---- non-vanishing singular value search ------------------------------------

namespace {

double design_sigma(const LinearDesign& d, const std::vector<long long>& v, NvsMode mode) {
  std::vector<double> coeffs(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) coeffs[k] = static_cast<double>(v[k]);
  const ComplexMatrix x = combine_weights(d, coeffs);
  const std::vector<double> sigma = singular_values(x);  // descending, length nt
  if (mode == NvsMode::full) return sigma.back();
  const double zero_tol = 1e-9 * std::max(sigma.front(), 1e-30);
  double smallest = 0.0;
  for (double s : sigma)
    if (s > zero_tol) smallest = s;  // descending scan: last survivor is the smallest nonzero
  return smallest;
}

}  // namespace

NvsResult nvs_search(const LinearDesign& d, long long coeff_bound, NvsMode mode) {
  validate_design(d);
  if (coeff_bound < 1) throw ConfigError("nvs search: coeff_bound must be at least 1");
  const std::size_t n = 2 * d.K;
  const long long b = coeff_bound;

  NvsResult best;
  best.sigma_min = -1.0;
  std::vector<long long> v(n, -b);
  // Odometer over the box; representatives with negative leading sign are
  // skipped, as are all-zero coordinates.
  for (;;) {
    long long lead = 0;
    for (std::size_t k = 0; k < n; ++k)
      if (v[k] != 0) {
        lead = v[k];
        break;
      }
    if (lead > 0) {
      const double s = design_sigma(d, v, mode);
      if (best.sigma_min < 0.0 || s < best.sigma_min) {
        best.sigma_min = s;
        best.minimizer = v;
      }
    }
    std::size_t k = 0;
    while (k < n && ++v[k] > b) {
      v[k] = -b;
      ++k;
    }
    if (k == n) break;
  }
  if (best.sigma_min < 0.0) throw Error("nvs search: empty box");
  return best;
}

double nvs_sigma_min(const LinearDesign& d, long long coeff_bound, NvsMode mode) {
  return nvs_search(d, coeff_bound, mode).sigma_min;
}

// ---- design files -------------------------------------------------------------

namespace {

std::string strip_comment(const std::string& line) {
  const std::size_t pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

}  // namespace

LinearDesign load_design(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open design file: " + path);
  std::stringstream body;
  std::string line;
  while (std::getline(in, line)) body << strip_comment(line) << ' ';

  LinearDesign d;
  long long nt = 0, T = 0, K = 0;
  if (!(body >> nt >> T >> K) || nt < 1 || T < 1 || K < 1)
    throw ConfigError("design file: bad header (want: nt T K)");
  d.nt = static_cast<std::size_t>(nt);
  d.T = static_cast<std::size_t>(T);
  d.K = static_cast<std::size_t>(K);
  d.weights.assign(2 * d.K, ComplexMatrix(d.nt, d.T));
  for (std::size_t k = 0; k < 2 * d.K; ++k)
    for (std::size_t i = 0; i < d.nt; ++i)
      for (std::size_t j = 0; j < d.T; ++j) {
        double re = 0.0, im = 0.0;
        if (!(body >> re >> im))
          throw ConfigError("design file: truncated weight data");
        d.weights[k](i, j) = cplx(re, im);
      }
  double extra;
  if (body >> extra) throw ConfigError("design file: trailing data");
  validate_design(d);
  return d;
}

void save_design(const LinearDesign& d, const std::string& path) {
  validate_design(d);
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write design file: " + path);
  out << d.nt << ' ' << d.T << ' ' << d.K << "\n";
  out.precision(17);
  for (std::size_t k = 0; k < 2 * d.K; ++k) {
    out << "# weight " << k << "\n";
    for (std::size_t i = 0; i < d.nt; ++i) {
      for (std::size_t j = 0; j < d.T; ++j) {
        if (j) out << "  ";
        out << d.weights[k](i, j).real() << ' ' << d.weights[k](i, j).imag();
      }
      out << "\n";
    }
  }
}

}  // namespace ifstbc
