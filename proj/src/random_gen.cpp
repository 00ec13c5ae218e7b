#include "jorder/random_gen.hpp"

#include <Eigen/QR>
#include <cmath>

namespace jorder {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed + 0x632be59bd9b4e019ULL) ^
                    splitmix64(stream));
}

double Rng::uniform() {
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::gaussian() {
  double u1 = 1.0 - uniform();  // (0, 1]
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

Complex Rng::cgaussian() {
  double re = gaussian();
  double im = gaussian();
  return Complex(re * 0.7071067811865475244, im * 0.7071067811865475244);
}

Eigen::VectorXcd random_unit(Eigen::Index dim, Rng& rng) {
  Eigen::VectorXcd v(dim);
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = rng.cgaussian();
    norm = v.norm();
  } while (norm < 1e-12);
  return v / norm;
}

Eigen::MatrixXcd haar_unitary(Eigen::Index dim, Rng& rng) {
  Eigen::MatrixXcd g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = rng.cgaussian();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    Complex d = r(i, i);
    double ad = std::abs(d);
    q.col(i) *= (ad > 0.0) ? d / ad : Complex(1.0, 0.0);
  }
  return q;
}

HermitianMatrix random_hermitian(Eigen::Index dim, double lo, double hi,
                                 Rng& rng) {
  Eigen::VectorXd vals(dim);
  for (Eigen::Index i = 0; i < dim; ++i) vals(i) = rng.uniform(lo, hi);
  Eigen::MatrixXcd u = haar_unitary(dim, rng);
  return HermitianMatrix::symmetrized(u * vals.cast<Complex>().asDiagonal() *
                                      u.adjoint());
}

}  // namespace jorder
