#include "ifstbc/channel.hpp"

#include <cmath>

#include "ifstbc/numerics.hpp"

namespace ifstbc {

PreparedDesign prepare_design(const LinearDesign& d, const Constellation& c) {
  validate_design(d);
  PreparedDesign pd;
  pd.design = d;
  pd.constellation = c;
  pd.code_matrix = build_code_matrix(d);
  pd.gamma = normalization_factor(d, c);
  return pd;
}

ChannelRealization sample_channel(std::size_t nr, const PreparedDesign& pd, GaussianSampler& g) {
  if (nr == 0) throw ConfigError("sample_channel: nr must be positive");
  const std::size_t nt = pd.design.nt, T = pd.design.T, n2k = 2 * pd.design.K;

  for (int attempt = 0; attempt < 10; ++attempt) {
    ChannelRealization ch;
    ch.gamma = pd.gamma;
    ch.h = ComplexMatrix(nr, nt);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nt; ++j) {
        const double re = std::sqrt(0.5) * g.normal();
        const double im = std::sqrt(0.5) * g.normal();
        ch.h(i, j) = cplx(re, im);
      }
    ch.hprime = real_expand(ch.h);

    ch.heff = RealMatrix(2 * nr * T, n2k);
    RealVector col(2 * nt * T);
    for (std::size_t k = 0; k < n2k; ++k) {
      for (std::size_t i = 0; i < col.size(); ++i)
        col[i] = pd.gamma * pd.code_matrix(i, k);
      const RealVector out = kron_identity_apply(ch.hprime, T, col);
      for (std::size_t i = 0; i < out.size(); ++i) ch.heff(i, k) = out[i];
    }

    if (ch.heff.rows() >= n2k) {
      const std::vector<double> sv = real_singular_values(ch.heff);
      if (sv.back() > 1e-10 * sv.front() && sv.back() > 0.0) return ch;
    }
  }
  throw RankFailure("sample_channel: no full-rank effective channel in 10 attempts");
}

ChannelRealization sample_channel(std::size_t nr, std::size_t nt, const LinearDesign& d,
                                  const Constellation& c, std::uint64_t seed) {
  if (nt != d.nt) throw DimensionMismatch("sample_channel: nt disagrees with the design");
  const PreparedDesign pd = prepare_design(d, c);
  GaussianSampler g(seed);
  return sample_channel(nr, pd, g);
}

ReceivedVector transmit(const ChannelRealization& ch, const std::vector<int>& s,
                        const Constellation& c, double P, GaussianSampler& g) {
  if (!(P > 0.0)) throw ConfigError("transmit: power must be positive");
  if (s.size() != ch.heff.cols()) throw DimensionMismatch("transmit: symbol count mismatch");

  RealVector stilde(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] < 0 || static_cast<std::size_t>(s[k]) >= c.sqrt_m)
      throw SymbolOutOfRange("transmit: symbol outside the ring");
    stilde[k] = static_cast<double>(s[k]) - c.offset;
  }

  // nt recovered from the real expansion held next to heff.
  const std::size_t nt = ch.hprime.cols() / 2;
  ReceivedVector rv;
  rv.snr = P;
  rv.noise_scale = std::sqrt(static_cast<double>(nt) / P);
  rv.y = ch.heff * stilde;
  const double sd = std::sqrt(0.5);
  for (double& yi : rv.y) yi += rv.noise_scale * sd * g.normal();
  return rv;
}

ReceivedVector transmit(const ChannelRealization& ch, const std::vector<int>& s,
                        const Constellation& c, double P, std::uint64_t seed) {
  GaussianSampler g(seed);
  return transmit(ch, s, c, P, g);
}

ComplexMatrix received_complex(const ReceivedVector& rv, std::size_t nr, std::size_t T) {
  if (rv.y.size() != 2 * nr * T)
    throw DimensionMismatch("received_complex: length disagrees with nr*T");
  RealVector scaled(rv.y.size());
  for (std::size_t i = 0; i < rv.y.size(); ++i) scaled[i] = rv.y[i] / rv.noise_scale;
  return unvec_complex_rowstack(scaled, nr, T);
}

}  // namespace ifstbc
