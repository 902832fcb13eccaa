#include "ifstbc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "ifstbc/rng.hpp"

namespace ifstbc {

RealMatrix real_expand(const ComplexMatrix& h) {
  const std::size_t r = h.rows(), c = h.cols();
  RealMatrix e(2 * r, 2 * c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      const double re = h(i, j).real(), im = h(i, j).imag();
      e(i, j) = re;
      e(i, c + j) = -im;
      e(r + i, j) = im;
      e(r + i, c + j) = re;
    }
  return e;
}

RealVector kron_identity_apply(const RealMatrix& hprime, std::size_t T, const RealVector& x) {
  if (T == 0 || x.size() != hprime.cols() * T)
    throw DimensionMismatch("kron_identity_apply: x length must be hprime.cols()*T");
  RealVector y(hprime.rows() * T, 0.0);
  for (std::size_t i = 0; i < hprime.rows(); ++i) {
    const double* hr = hprime.row(i);
    for (std::size_t j = 0; j < hprime.cols(); ++j) {
      const double hij = hr[j];
      if (hij == 0.0) continue;
      for (std::size_t t = 0; t < T; ++t) y[i * T + t] += hij * x[j * T + t];
    }
  }
  return y;
}

// ---- Jacobi singular values / eigenvalues ----------------------------------

std::vector<double> real_singular_values(const RealMatrix& a) {
  // Work on the tall orientation; one-sided Jacobi orthogonalizes columns.
  const bool tall = a.rows() >= a.cols();
  const std::size_t nr = tall ? a.rows() : a.cols();
  const std::size_t nc = tall ? a.cols() : a.rows();
  std::vector<std::vector<double>> w(nc, std::vector<double>(nr));
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) w[j][i] = tall ? a(i, j) : a(j, i);

  const double tol = 1e-12;
  bool converged = false;
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < nc; ++p)
      for (std::size_t q = p + 1; q < nc; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < nr; ++i) {
          alpha += w[p][i] * w[p][i];
          beta += w[q][i] * w[q][i];
          gamma += w[p][i] * w[q][i];
        }
        if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        converged = false;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < nr; ++i) {
          const double wp = w[p][i], wq = w[q][i];
          w[p][i] = c * wp - s * wq;
          w[q][i] = s * wp + c * wq;
        }
      }
  }
  if (!converged) throw SvdNonConvergence("one-sided Jacobi did not converge in 100 sweeps");

  std::vector<double> sigma(nc);
  for (std::size_t j = 0; j < nc; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < nr; ++i) s += w[j][i] * w[j][i];
    sigma[j] = std::sqrt(s);
  }
  std::sort(sigma.begin(), sigma.end(), std::greater<double>());
  return sigma;
}

std::vector<double> singular_values(const ComplexMatrix& x) {
  if (x.rows() == 0 || x.cols() == 0) throw DimensionMismatch("singular_values: empty matrix");
  const std::vector<double> doubled = real_singular_values(real_expand(x));
  // Real expansion duplicates each singular value; take every second entry.
  const std::size_t k = std::min(x.rows(), x.cols());
  std::vector<double> out(x.rows(), 0.0);
  for (std::size_t i = 0; i < k; ++i) out[i] = doubled[2 * i];
  return out;
}

std::vector<double> symmetric_eigenvalues(const RealMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("symmetric_eigenvalues: square matrix required");
  const std::size_t n = m.rows();
  RealMatrix a = m;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
  if (scale == 0.0) return std::vector<double>(n, 0.0);

  const double tol = 1e-14 * scale;
  bool converged = false;
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= tol) continue;
        converged = false;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(p, i) = a(i, p);
          a(i, q) = s * aip + c * aiq;
          a(q, i) = a(i, q);
        }
      }
  }
  if (!converged) throw SvdNonConvergence("symmetric Jacobi did not converge in 100 sweeps");

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end(), std::greater<double>());
  return eig;
}

GramLattice make_gram_lattice(const RealMatrix& gram) {
  if (gram.rows() != gram.cols()) throw DimensionMismatch("gram matrix must be square");
  const std::size_t n = gram.rows();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(gram(i, j)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(gram(i, j) - gram(j, i)) > 1e-10 * std::max(scale, 1e-300))
        throw Error("gram matrix is not symmetric");

  GramLattice lat;
  lat.dim = n;
  lat.gram = RealMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) lat.gram(i, j) = 0.5 * (gram(i, j) + gram(j, i));

  if (n > 0) {
    const std::vector<double> eig = symmetric_eigenvalues(lat.gram);
    if (eig.front() < 0.0 || eig.back() < -1e-10 * std::max(eig.front(), 1e-300))
      throw NotPositiveDefinite("gram matrix has a negative eigenvalue");
  }
  return lat;
}

// ---- Cholesky and SPD solves ------------------------------------------------

RealMatrix cholesky_factor(const RealMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("cholesky: square matrix required");
  const std::size_t n = m.rows();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(m(i, i)));
  RealMatrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (s <= 1e-14 * std::max(scale, 1e-300))
          throw NotPositiveDefinite("cholesky pivot not positive");
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return l;
}

RealMatrix spd_solve(const RealMatrix& m, const RealMatrix& rhs) {
  if (m.rows() != rhs.rows()) throw DimensionMismatch("spd_solve: rhs row count mismatch");
  const RealMatrix l = cholesky_factor(m);
  const std::size_t n = m.rows(), k = rhs.cols();
  RealMatrix x(n, k);
  for (std::size_t col = 0; col < k; ++col) {
    // forward: L z = rhs
    RealVector z(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = rhs(i, col);
      for (std::size_t j = 0; j < i; ++j) s -= l(i, j) * z[j];
      z[i] = s / l(i, i);
    }
    // backward: L^T x = z
    for (std::size_t ii = n; ii-- > 0;) {
      double s = z[ii];
      for (std::size_t j = ii + 1; j < n; ++j) s -= l(j, ii) * x(j, col);
      x(ii, col) = s / l(ii, ii);
    }
  }
  return x;
}

// ---- LLL ---------------------------------------------------------------------

namespace {

struct GramSchmidt {
  std::vector<RealVector> bstar;
  std::vector<std::vector<double>> mu;
  std::vector<double> bnorm;
};

GramSchmidt compute_gs(const std::vector<RealVector>& b, double rank_tol2) {
  const std::size_t n = b.size(), m = b.empty() ? 0 : b[0].size();
  GramSchmidt gs;
  gs.bstar.assign(n, RealVector(m, 0.0));
  gs.mu.assign(n, std::vector<double>(n, 0.0));
  gs.bnorm.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    gs.bstar[i] = b[i];
    for (std::size_t j = 0; j < i; ++j) {
      double dot = 0.0;
      for (std::size_t t = 0; t < m; ++t) dot += b[i][t] * gs.bstar[j][t];
      const double muij = gs.bnorm[j] > 0.0 ? dot / gs.bnorm[j] : 0.0;
      gs.mu[i][j] = muij;
      for (std::size_t t = 0; t < m; ++t) gs.bstar[i][t] -= muij * gs.bstar[j][t];
    }
    double nrm = 0.0;
    for (std::size_t t = 0; t < m; ++t) nrm += gs.bstar[i][t] * gs.bstar[i][t];
    gs.bnorm[i] = nrm;
    if (nrm <= rank_tol2) throw RankDeficient("lll: basis rows are not linearly independent");
  }
  return gs;
}

}  // namespace

LllResult lll_reduce(const RealMatrix& basis, double delta) {
  const std::size_t n = basis.rows(), m = basis.cols();
  if (n == 0) throw DimensionMismatch("lll: empty basis");
  if (n > m) throw DimensionMismatch("lll: more rows than columns");
  if (!(delta > 0.25 && delta < 1.0)) throw Error("lll: delta outside (0.25, 1)");

  std::vector<RealVector> b(n, RealVector(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) b[i][j] = basis(i, j);

  double max_norm2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += b[i][j] * b[i][j];
    max_norm2 = std::max(max_norm2, s);
  }
  const double rank_tol2 = max_norm2 * 1e-24 + 1e-300;

  IntMatrix u = IntMatrix::identity(n);
  compute_gs(b, rank_tol2);  // up-front rank check

  std::size_t k = 1;
  long iter = 0;
  const long iter_cap = 10000 * static_cast<long>(n) * static_cast<long>(n) + 1000;
  while (k < n) {
    if (++iter > iter_cap) throw Error("lll: iteration cap reached");
    GramSchmidt gs = compute_gs(b, rank_tol2);
    // size-reduce row k, keeping mu coherent as rows are subtracted
    for (std::size_t jj = k; jj-- > 0;) {
      const long long q = std::llround(gs.mu[k][jj]);
      if (q == 0) continue;
      for (std::size_t t = 0; t < m; ++t) b[k][t] -= static_cast<double>(q) * b[jj][t];
      for (std::size_t t = 0; t < n; ++t) u(k, t) -= q * u(jj, t);
      for (std::size_t l = 0; l < jj; ++l) gs.mu[k][l] -= static_cast<double>(q) * gs.mu[jj][l];
      gs.mu[k][jj] -= static_cast<double>(q);
    }
    const double mukk1 = gs.mu[k][k - 1];
    if (gs.bnorm[k] >= (delta - mukk1 * mukk1) * gs.bnorm[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      for (std::size_t t = 0; t < n; ++t) std::swap(u(k, t), u(k - 1, t));
      k = (k > 1) ? k - 1 : 1;
    }
  }

  LllResult res;
  res.reduced = RealMatrix(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) res.reduced(i, j) = b[i][j];
  res.unimodular = u;
  return res;
}

// ---- short vector enumeration -------------------------------------------------

namespace {

// Depth-first walk over d_n-1, ..., d_0 with the quadratic form written
// through the upper-triangular factor R (gram = R^T R).  The admissible
// values at each level form an interval around the Babai center; the bound is
// fixed, so the interval is walked directly.  While every coefficient above
// the current level is zero ("leading"), only non-negative values are taken,
// which yields one representative per +-pair.
struct Enumerator {
  const RealMatrix& r;
  double bound;
  std::uint64_t budget;
  std::uint64_t nodes = 0;
  std::vector<long long> d;
  std::vector<ShortVector> found;

  explicit Enumerator(const RealMatrix& rr, double b, std::uint64_t nb)
      : r(rr), bound(b), budget(nb), d(rr.rows(), 0) {}

  void tick() {
    if (++nodes > budget) throw BudgetExceeded("enumeration node budget exhausted");
  }

  void record(double norm2) {
    for (long long v : d) {
      if (v == 0) continue;
      found.push_back(ShortVector{d, norm2});
      return;
    }
  }

  void descend(std::size_t level, double partial, bool leading) {
    const double rii = r(level, level);
    double center = 0.0;
    for (std::size_t j = level + 1; j < d.size(); ++j) center -= r(level, j) * d[j];
    center /= rii;

    const double w = std::sqrt(std::max(0.0, bound - partial)) / std::abs(rii);
    if (!(std::abs(center) + w < 1e15))
      throw BudgetExceeded("enumeration interval too wide");
    const long long lo =
        leading ? 0 : static_cast<long long>(std::ceil(center - w - 1e-9));
    const long long hi = static_cast<long long>(std::floor(center + w + 1e-9));
    for (long long v = lo; v <= hi; ++v) {
      tick();
      const double x = rii * (static_cast<double>(v) - center);
      const double acc = partial + x * x;
      if (acc > bound) continue;
      d[level] = v;
      if (level == 0)
        record(acc);
      else
        descend(level - 1, acc, leading && v == 0);
    }
    d[level] = 0;
  }
};

double gram_norm2(const RealMatrix& g, const std::vector<long long>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    double row = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) row += g(i, j) * static_cast<double>(v[j]);
    s += static_cast<double>(v[i]) * row;
  }
  return s;
}

void canonicalize_sign(std::vector<long long>& v) {
  for (long long x : v) {
    if (x > 0) return;
    if (x < 0) {
      for (long long& y : v) y = -y;
      return;
    }
  }
}

void sort_and_dedupe(std::vector<ShortVector>& vs) {
  std::sort(vs.begin(), vs.end(), [](const ShortVector& a, const ShortVector& b) {
    if (a.norm2 != b.norm2) return a.norm2 < b.norm2;
    return a.coeffs < b.coeffs;
  });
  vs.erase(std::unique(vs.begin(), vs.end(),
                       [](const ShortVector& a, const ShortVector& b) {
                         return a.coeffs == b.coeffs;
                       }),
           vs.end());
}

}  // namespace

std::vector<ShortVector> enumerate_short_vectors(const GramLattice& lat, double radius2,
                                                 std::size_t max_count,
                                                 std::uint64_t node_budget) {
  if (lat.dim == 0) return {};
  if (radius2 < 0.0) throw Error("enumerate_short_vectors: negative radius");
  const RealMatrix r = transpose(cholesky_factor(lat.gram));

  // Slightly inflate the search bound, then filter against the gram form, so
  // vectors sitting exactly on the radius are kept deterministically.
  Enumerator en(r, radius2 * (1.0 + 1e-9) + 1e-300, node_budget);
  en.descend(lat.dim - 1, 0.0, true);

  std::vector<ShortVector> out;
  out.reserve(en.found.size());
  for (ShortVector& sv : en.found) {
    canonicalize_sign(sv.coeffs);
    const double n2 = gram_norm2(lat.gram, sv.coeffs);
    if (n2 <= radius2 * (1.0 + 1e-12)) out.push_back(ShortVector{std::move(sv.coeffs), n2});
  }
  sort_and_dedupe(out);
  if (out.size() > max_count) out.resize(max_count);
  return out;
}

std::vector<ShortVector> lattice_candidates(const RealMatrix& gram, std::size_t max_count,
                                            std::uint64_t node_budget) {
  const GramLattice lat = make_gram_lattice(gram);
  const std::size_t n = lat.dim;
  const RealMatrix l = cholesky_factor(lat.gram);
  const LllResult red = lll_reduce(l);

  RealMatrix gred = red.reduced * transpose(red.reduced);
  GramLattice rlat;
  rlat.dim = n;
  rlat.gram = RealMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rlat.gram(i, j) = 0.5 * (gred(i, j) + gred(j, i));

  double radius = 0.0;
  for (std::size_t i = 0; i < n; ++i) radius = std::max(radius, rlat.gram(i, i));
  radius *= 1.0 + 1e-9;

  const std::vector<ShortVector> reduced_coords =
      enumerate_short_vectors(rlat, radius, max_count, node_budget);

  std::vector<ShortVector> out;
  out.reserve(reduced_coords.size() + n);
  for (const ShortVector& sv : reduced_coords) {
    std::vector<long long> d(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (sv.coeffs[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) d[j] += sv.coeffs[i] * red.unimodular(i, j);
    }
    canonicalize_sign(d);
    const double n2 = gram_norm2(lat.gram, d);
    out.push_back(ShortVector{std::move(d), n2});
  }
  // The reduced basis rows themselves guarantee dim independent candidates
  // even when max_count truncated the enumeration.
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<long long> d(n);
    for (std::size_t j = 0; j < n; ++j) d[j] = red.unimodular(i, j);
    canonicalize_sign(d);
    const double n2 = gram_norm2(lat.gram, d);
    out.push_back(ShortVector{std::move(d), n2});
  }
  sort_and_dedupe(out);
  return out;
}

double lattice_shortest_norm2(const RealMatrix& gram) {
  const std::vector<ShortVector> c = lattice_candidates(gram, 4);
  if (c.empty()) throw Error("lattice_shortest_norm2: empty candidate list");
  return c.front().norm2;
}

// ---- exact integer rank ------------------------------------------------------

std::size_t int_rows_rank(const std::vector<std::vector<long long>>& rows) {
  if (rows.empty()) return 0;
  const std::size_t nr = rows.size(), nc = rows[0].size();
  std::vector<std::vector<__int128>> m(nr, std::vector<__int128>(nc));
  for (std::size_t i = 0; i < nr; ++i) {
    if (rows[i].size() != nc) throw DimensionMismatch("int_rows_rank: ragged rows");
    for (std::size_t j = 0; j < nc; ++j) m[i][j] = rows[i][j];
  }
  // Bareiss fraction-free elimination; exact for the small entries used here.
  std::size_t rank = 0;
  __int128 prev = 1;
  for (std::size_t col = 0; col < nc && rank < nr; ++col) {
    std::size_t piv = rank;
    while (piv < nr && m[piv][col] == 0) ++piv;
    if (piv == nr) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t i = rank + 1; i < nr; ++i) {
      for (std::size_t j = col + 1; j < nc; ++j)
        m[i][j] = (m[i][j] * m[rank][col] - m[i][col] * m[rank][j]) / prev;
      m[i][col] = 0;
    }
    prev = m[rank][col];
    ++rank;
  }
  return rank;
}

SuccessiveMinima successive_minima(const RealMatrix& gram, std::size_t k,
                                   std::size_t max_candidates) {
  if (k > gram.rows()) throw DimensionMismatch("successive_minima: k exceeds dimension");
  const std::vector<ShortVector> cands = lattice_candidates(gram, max_candidates);
  SuccessiveMinima sm;
  for (const ShortVector& sv : cands) {
    if (sm.vectors.size() == k) break;
    sm.vectors.push_back(sv.coeffs);
    if (int_rows_rank(sm.vectors) == sm.vectors.size()) {
      sm.norms2.push_back(sv.norm2);
    } else {
      sm.vectors.pop_back();
    }
  }
  if (sm.vectors.size() < k)
    throw SelectionFailure("successive_minima: candidate list lacked independent vectors");
  return sm;
}

ComplexMatrix sample_gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                                     double variance_per_real_dim) {
  GaussianSampler g(seed);
  const double sd = std::sqrt(variance_per_real_dim);
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const double re = sd * g.normal();
      const double im = sd * g.normal();
      m(i, j) = cplx(re, im);
    }
  return m;
}

}  // namespace ifstbc
