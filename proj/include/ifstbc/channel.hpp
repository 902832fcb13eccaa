#ifndef IFSTBC_CHANNEL_HPP
#define IFSTBC_CHANNEL_HPP

#include <cstdint>

#include "ifstbc/matrix.hpp"
#include "ifstbc/rng.hpp"
#include "ifstbc/stbc.hpp"

namespace ifstbc {

// One quasi-static Rayleigh draw together with its derived real-valued model:
//   heff = (real_expand(h) kron I_T) * build_code_matrix(d) * gamma
// so that vec_real_rowstack(h * X(stilde)) == heff * stilde.
struct ChannelRealization {
  ComplexMatrix h;    // nr x nt, iid CN(0,1)
  RealMatrix hprime;  // 2nr x 2nt
  RealMatrix heff;    // 2*nr*T x 2K
  double gamma = 1.0;
};

// Design data that stays fixed across a sweep: the code matrix and the
// normalization factor are computed once, not per draw.
struct PreparedDesign {
  LinearDesign design;
  Constellation constellation;
  RealMatrix code_matrix;  // 2*nt*T x 2K
  double gamma = 1.0;
};

PreparedDesign prepare_design(const LinearDesign& d, const Constellation& c);

// Draw h until heff has full column rank (smallest/largest singular value
// ratio above 1e-10); at most 10 attempts, then RankFailure.
ChannelRealization sample_channel(std::size_t nr, const PreparedDesign& pd, GaussianSampler& g);
ChannelRealization sample_channel(std::size_t nr, std::size_t nt, const LinearDesign& d,
                                  const Constellation& c, std::uint64_t seed);

struct ReceivedVector {
  RealVector y;              // length 2*nr*T
  double snr = 1.0;          // linear power budget P
  double noise_scale = 1.0;  // sqrt(nt / P)
};

// y = heff * (s - offset) + sqrt(nt/P) * z with z iid N(0, 1/2) per real
// dimension (the real image of unit-variance complex noise).
ReceivedVector transmit(const ChannelRealization& ch, const std::vector<int>& s,
                        const Constellation& c, double P, GaussianSampler& g);
ReceivedVector transmit(const ChannelRealization& ch, const std::vector<int>& s,
                        const Constellation& c, double P, std::uint64_t seed);

// Undo the power normalization and fold y back into a complex nr x T matrix;
// this is the receiver-side input for maximum-likelihood decoding.
ComplexMatrix received_complex(const ReceivedVector& rv, std::size_t nr, std::size_t T);

}  // namespace ifstbc

#endif
