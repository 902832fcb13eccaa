#ifndef IFSTBC_RECEIVER_HPP
#define IFSTBC_RECEIVER_HPP

#include <cstdint>
#include <vector>

#include "ifstbc/channel.hpp"
#include "ifstbc/matrix.hpp"
#include "ifstbc/stbc.hpp"

namespace ifstbc {

// One set of integer-forcing equations for a fixed channel: integer matrix a
// (odd determinant, hence invertible over the symbol ring), forcing filter b,
// and the per-layer effective noise powers
//   g_m = avg_energy * ||b_m heff - a_m||^2 + nt/(2P) * ||b_m||^2.
struct IfEquations {
  IntMatrix a;
  RealMatrix b;
  std::vector<double> noise_powers;
};

// Gram form of the layer noise quadratic: g(v) = v G v^T for integer rows v,
// evaluated at the regularized forcing filter b(v) = v * F.
GramLattice if_gram(const RealMatrix& heff, const Constellation& c, double P, std::size_t nt);

// Greedy selection of 2K short equations whose matrix has odd determinant:
// candidates ascend by norm and a row is kept iff it is independent of the
// kept prefix over GF(2).  Full GF(2) rank forces odd determinant and real
// independence, so the result is always invertible over the ring.
IntMatrix if_select_A(const GramLattice& lat, std::size_t sqrt_m,
                      std::size_t max_candidates = 200);

// b = a * F with F = heff^T (nt/(P*avg_energy) I + heff heff^T)^{-1}.
RealMatrix if_compute_B(const RealMatrix& heff, const IntMatrix& a, const Constellation& c,
                        double P, std::size_t nt);

IfEquations build_if_equations(const RealMatrix& heff, const Constellation& c, double P,
                               std::size_t nt, std::size_t max_candidates = 200);

struct DecodeResult {
  std::vector<int> s_hat;                 // ring symbols
  std::vector<long long> layer_integers; // rounded integer layers (pre mod/clamp)
  bool ok = true;
};

// Steps: filter, compensate the constellation offset, round half away from
// zero, reduce mod sqrt_m, then solve a * s == r over the ring.
DecodeResult if_decode(const ReceivedVector& rv, const IfEquations& eq, const Constellation& c);

// Inverse of an integer matrix over Z_{sqrt_m} (sqrt_m a power of two);
// entries of the result lie in [0, sqrt_m).  Exists iff det is odd.
IntMatrix invert_mod_2k(const IntMatrix& a, std::size_t sqrt_m);

// Zero-forcing / linear MMSE baselines: filter, shift, round, clamp into the
// ring (no modulo wrap).
DecodeResult zf_decode(const ReceivedVector& rv, const RealMatrix& heff, const Constellation& c);
DecodeResult mmse_decode(const ReceivedVector& rv, const RealMatrix& heff, const Constellation& c,
                         double P, std::size_t nt);

// Exhaustive maximum likelihood over the codebook (built once per sweep).
struct MlCodebook {
  std::vector<std::vector<int>> symbols;  // lexicographically ascending
  std::vector<ComplexMatrix> codewords;   // gamma included
  std::size_t nt = 0, T = 0;
};

MlCodebook build_ml_codebook(const LinearDesign& d, const Constellation& c, double gamma);
DecodeResult ml_decode(const ComplexMatrix& y, const ComplexMatrix& h, const MlCodebook& cb,
                       double P);
DecodeResult ml_decode(const ComplexMatrix& y, const ComplexMatrix& h, const LinearDesign& d,
                       const Constellation& c, double P);

}  // namespace ifstbc

#endif
