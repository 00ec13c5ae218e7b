#ifndef JORDER_RANDOM_GEN_HPP_
#define JORDER_RANDOM_GEN_HPP_

#include <cstdint>
#include <random>

#include "jorder/hermitian.hpp"

namespace jorder {

// Deterministic substream derivation (two splitmix64 rounds), so that
// consecutive stream indices give decorrelated engines.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// mt19937_64 with hand-rolled uniform / gaussian / complex-gaussian helpers.
// std::uniform_real_distribution and friends are implementation-defined, and
// reports must be byte-identical across toolchains, so the mapping from raw
// engine output to doubles is pinned here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform();  // [0, 1), 53-bit resolution
  double uniform(double lo, double hi);
  double gaussian();  // Box-Muller, one fresh pair per call
  Complex cgaussian();
  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

Eigen::VectorXcd random_unit(Eigen::Index dim, Rng& rng);

// QR of a complex gaussian matrix with the R-diagonal phase fixed, which
// makes the distribution unitarily invariant.
Eigen::MatrixXcd haar_unitary(Eigen::Index dim, Rng& rng);

// Haar-random frame with eigenvalues drawn i.i.d. uniform from [lo, hi].
HermitianMatrix random_hermitian(Eigen::Index dim, double lo, double hi,
                                 Rng& rng);

}  // namespace jorder

#endif  // JORDER_RANDOM_GEN_HPP_
