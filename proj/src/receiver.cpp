#include "ifstbc/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ifstbc/numerics.hpp"

namespace ifstbc {

namespace {

// F = heff^T (alpha I + heff heff^T)^{-1}, alpha = nt / (P * avg_energy).
// This is the per-layer forcing filter written row-wise: b_m = a_m F.
RealMatrix forcing_filter(const RealMatrix& heff, const Constellation& c, double P,
                          std::size_t nt) {
  if (!(P > 0.0)) throw ConfigError("forcing filter: power must be positive");
  if (nt == 0) throw ConfigError("forcing filter: nt must be positive");
  const std::size_t n = heff.rows();
  const double alpha = static_cast<double>(nt) / (P * c.avg_energy);
  RealMatrix m = heff * transpose(heff);
  for (std::size_t i = 0; i < n; ++i) m(i, i) += alpha;
  return transpose(spd_solve(m, heff));
}

double row_dot(const RealMatrix& a, std::size_t i, const RealMatrix& b, std::size_t j) {
  double s = 0.0;
  for (std::size_t t = 0; t < a.cols(); ++t) s += a(i, t) * b(j, t);
  return s;
}

}  // namespace

GramLattice if_gram(const RealMatrix& heff, const Constellation& c, double P, std::size_t nt) {
  const std::size_t n = heff.cols();
  const RealMatrix f = forcing_filter(heff, c, P, nt);
  RealMatrix fh = f * heff;
  for (std::size_t i = 0; i < n; ++i) fh(i, i) -= 1.0;  // F*heff - I

  RealMatrix g(n, n);
  const double noise_coef = static_cast<double>(nt) / (2.0 * P);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = c.avg_energy * row_dot(fh, i, fh, j) + noise_coef * row_dot(f, i, f, j);
      g(i, j) = v;
      g(j, i) = v;
    }
  return make_gram_lattice(g);
}

// ---- integer equation selection ------------------------------------------------

namespace {

struct Gf2Basis {
  std::vector<std::uint64_t> rows;  // reduced, distinct leading bits

  // Returns true (and absorbs the residue) when mask is independent.
  bool try_add(std::uint64_t mask) {
    for (std::uint64_t b : rows) {
      const std::uint64_t lead = b & ~(b - 1);  // lowest set bit used as pivot
      if (mask & lead) mask ^= b;
    }
    if (mask == 0) return false;
    rows.push_back(mask);
    return true;
  }
};

std::uint64_t parity_mask(const std::vector<long long>& v) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] & 1LL) m |= (1ULL << i);
  return m;
}

}  // namespace

IntMatrix if_select_A(const GramLattice& lat, std::size_t sqrt_m, std::size_t max_candidates) {
  if (sqrt_m < 2 || (sqrt_m & (sqrt_m - 1)) != 0)
    throw ConfigError("if_select_A: sqrt_m must be a power of two");
  const std::size_t n = lat.dim;
  if (n == 0 || n > 64) throw DimensionMismatch("if_select_A: unsupported dimension");
  if (max_candidates == 0) throw SelectionFailure("if_select_A: empty candidate budget");

  const std::vector<ShortVector> cands = lattice_candidates(lat.gram, max_candidates);

  std::vector<const ShortVector*> picked;
  Gf2Basis basis;
  for (const ShortVector& sv : cands) {
    if (picked.size() == n) break;
    if (basis.try_add(parity_mask(sv.coeffs))) picked.push_back(&sv);
  }
  if (picked.size() < n)
    throw SelectionFailure("if_select_A: could not assemble an odd-determinant matrix");

  // Canonical row order: norm, then position of the first nonzero, then lex.
  std::sort(picked.begin(), picked.end(), [](const ShortVector* a, const ShortVector* b) {
    if (a->norm2 != b->norm2) return a->norm2 < b->norm2;
    std::size_t fa = 0, fb = 0;
    while (a->coeffs[fa] == 0) ++fa;
    while (b->coeffs[fb] == 0) ++fb;
    if (fa != fb) return fa < fb;
    return a->coeffs < b->coeffs;
  });

  IntMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = picked[i]->coeffs[j];
  return a;
}

RealMatrix if_compute_B(const RealMatrix& heff, const IntMatrix& a, const Constellation& c,
                        double P, std::size_t nt) {
  if (a.cols() != heff.cols()) throw DimensionMismatch("if_compute_B: a and heff disagree");
  return to_real(a) * forcing_filter(heff, c, P, nt);
}

IfEquations build_if_equations(const RealMatrix& heff, const Constellation& c, double P,
                               std::size_t nt, std::size_t max_candidates) {
  IfEquations eq;
  eq.a = if_select_A(if_gram(heff, c, P, nt), c.sqrt_m, max_candidates);
  eq.b = if_compute_B(heff, eq.a, c, P, nt);

  const std::size_t n = eq.a.rows();
  eq.noise_powers.assign(n, 0.0);
  const RealMatrix bh = eq.b * heff;
  const double noise_coef = static_cast<double>(nt) / (2.0 * P);
  for (std::size_t m = 0; m < n; ++m) {
    double mis = 0.0, pow_b = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = bh(m, j) - static_cast<double>(eq.a(m, j));
      mis += d * d;
    }
    for (std::size_t t = 0; t < eq.b.cols(); ++t) pow_b += eq.b(m, t) * eq.b(m, t);
    eq.noise_powers[m] = c.avg_energy * mis + noise_coef * pow_b;
  }
  return eq;
}

// ---- ring arithmetic -------------------------------------------------------------

IntMatrix invert_mod_2k(const IntMatrix& a, std::size_t sqrt_m) {
  if (a.rows() != a.cols()) throw DimensionMismatch("invert_mod_2k: square matrix required");
  if (sqrt_m < 2 || (sqrt_m & (sqrt_m - 1)) != 0)
    throw ConfigError("invert_mod_2k: sqrt_m must be a power of two");
  const std::size_t n = a.rows();
  const std::uint64_t m = sqrt_m;

  auto reduce = [m](long long v) -> std::uint64_t {
    long long r = v % static_cast<long long>(m);
    if (r < 0) r += static_cast<long long>(m);
    return static_cast<std::uint64_t>(r);
  };
  // Inverse of an odd unit mod 2^k by Newton iteration.
  auto unit_inverse = [m](std::uint64_t p) {
    std::uint64_t x = p;
    for (int it = 0; it < 6; ++it) x = (x * (2 - p * x)) & (m - 1);
    return x & (m - 1);
  };

  std::vector<std::vector<std::uint64_t>> w(n, std::vector<std::uint64_t>(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) w[i][j] = reduce(a(i, j));
    w[i][n + i] = 1 % m;
  }

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && (w[piv][col] & 1ULL) == 0) ++piv;
    if (piv == n) throw NotInvertibleModM("invert_mod_2k: determinant is even");
    std::swap(w[piv], w[col]);
    const std::uint64_t inv = unit_inverse(w[col][col]);
    for (std::size_t j = 0; j < 2 * n; ++j) w[col][j] = (w[col][j] * inv) & (m - 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || w[i][col] == 0) continue;
      const std::uint64_t f = w[i][col];
      for (std::size_t j = 0; j < 2 * n; ++j)
        w[i][j] = (w[i][j] + (m - ((f * w[col][j]) & (m - 1)))) & (m - 1);
    }
  }

  IntMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = static_cast<long long>(w[i][n + j]);
  return inv;
}

// ---- decoders -------------------------------------------------------------------

namespace {

long long round_half_away(double v) {
  return static_cast<long long>(std::round(v));
}

}  // namespace

DecodeResult if_decode(const ReceivedVector& rv, const IfEquations& eq, const Constellation& c) {
  const std::size_t n = eq.a.rows();
  if (eq.b.cols() != rv.y.size()) throw DimensionMismatch("if_decode: filter and y disagree");

  const long long m = static_cast<long long>(c.sqrt_m);
  DecodeResult res;
  res.layer_integers.resize(n);
  std::vector<std::uint64_t> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    double u = 0.0;
    for (std::size_t t = 0; t < rv.y.size(); ++t) u += eq.b(i, t) * rv.y[t];
    long long row_sum = 0;
    for (std::size_t j = 0; j < n; ++j) row_sum += eq.a(i, j);
    u += c.offset * static_cast<double>(row_sum);  // layers estimate a_m * s, not a_m * stilde
    const long long ri = round_half_away(u);
    res.layer_integers[i] = ri;
    long long rm = ri % m;
    if (rm < 0) rm += m;
    r[i] = static_cast<std::uint64_t>(rm);
  }

  const IntMatrix ainv = invert_mod_2k(eq.a, c.sqrt_m);
  res.s_hat.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j < n; ++j)
      acc += static_cast<std::uint64_t>(ainv(i, j)) * r[j];
    res.s_hat[i] = static_cast<int>(acc & (c.sqrt_m - 1));
  }
  res.ok = true;
  return res;
}

namespace {

DecodeResult slice_clamped(const RealVector& u, const Constellation& c) {
  DecodeResult res;
  const long long hi = static_cast<long long>(c.sqrt_m) - 1;
  res.layer_integers.resize(u.size());
  res.s_hat.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const long long r = round_half_away(u[i] + c.offset);
    res.layer_integers[i] = r;
    res.s_hat[i] = static_cast<int>(std::clamp(r, 0LL, hi));
  }
  res.ok = true;
  return res;
}

}  // namespace

DecodeResult zf_decode(const ReceivedVector& rv, const RealMatrix& heff, const Constellation& c) {
  if (heff.rows() != rv.y.size()) throw DimensionMismatch("zf_decode: heff and y disagree");
  RealMatrix gram = transpose(heff) * heff;
  RealMatrix pinv;
  try {
    pinv = spd_solve(gram, transpose(heff));
  } catch (const NotPositiveDefinite&) {
    throw RankDeficient("zf_decode: effective channel is not full column rank");
  }
  return slice_clamped(pinv * rv.y, c);
}

DecodeResult mmse_decode(const ReceivedVector& rv, const RealMatrix& heff, const Constellation& c,
                         double P, std::size_t nt) {
  if (heff.rows() != rv.y.size()) throw DimensionMismatch("mmse_decode: heff and y disagree");
  const RealMatrix f = forcing_filter(heff, c, P, nt);
  return slice_clamped(f * rv.y, c);
}

// ---- maximum likelihood -----------------------------------------------------------

MlCodebook build_ml_codebook(const LinearDesign& d, const Constellation& c, double gamma) {
  validate_design(d);
  const std::size_t n = 2 * d.K;
  double words = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    words *= static_cast<double>(c.sqrt_m);
    if (words > 1e6) throw MlBudgetExceeded("ml codebook larger than 1e6 words");
  }

  MlCodebook cb;
  cb.nt = d.nt;
  cb.T = d.T;
  const std::size_t total = static_cast<std::size_t>(words);
  cb.symbols.reserve(total);
  cb.codewords.reserve(total);
  std::vector<int> s(n, 0);
  for (std::size_t w = 0; w < total; ++w) {
    cb.symbols.push_back(s);
    cb.codewords.push_back(encode(d, c, s, gamma).x);
    // lexicographic odometer, least significant digit last
    for (std::size_t k = n; k-- > 0;) {
      if (++s[k] < static_cast<int>(c.sqrt_m)) break;
      s[k] = 0;
    }
  }
  return cb;
}

DecodeResult ml_decode(const ComplexMatrix& y, const ComplexMatrix& h, const MlCodebook& cb,
                       double P) {
  if (!(P > 0.0)) throw ConfigError("ml_decode: power must be positive");
  if (h.cols() != cb.nt || y.rows() != h.rows() || y.cols() != cb.T)
    throw DimensionMismatch("ml_decode: shape mismatch");
  const double scale = std::sqrt(P / static_cast<double>(cb.nt));

  double best = std::numeric_limits<double>::infinity();
  std::size_t best_idx = 0;
  for (std::size_t w = 0; w < cb.codewords.size(); ++w) {
    const ComplexMatrix hx = h * cb.codewords[w];
    double metric = 0.0;
    for (std::size_t i = 0; i < y.rows(); ++i)
      for (std::size_t j = 0; j < y.cols(); ++j)
        metric += std::norm(y(i, j) - scale * hx(i, j));
    if (metric < best) {  // strict: ties resolve to the lexicographically first word
      best = metric;
      best_idx = w;
    }
  }

  DecodeResult res;
  res.s_hat = cb.symbols[best_idx];
  res.layer_integers.assign(res.s_hat.begin(), res.s_hat.end());
  res.ok = true;
  return res;
}

DecodeResult ml_decode(const ComplexMatrix& y, const ComplexMatrix& h, const LinearDesign& d,
                       const Constellation& c, double P) {
  const MlCodebook cb = build_ml_codebook(d, c, normalization_factor(d, c));
  return ml_decode(y, h, cb, P);
}

}  // namespace ifstbc
