#ifndef JORDER_HERMITIAN_HPP_
#define JORDER_HERMITIAN_HPP_

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

#include "jorder/errors.hpp"
#include "jorder/scalar_function.hpp"
#include "jorder/tolerances.hpp"

namespace jorder {

using Complex = std::complex<double>;

// Largest singular value; works for arbitrary (not necessarily Hermitian)
// dense matrices.
double spectral_norm(const Eigen::MatrixXcd& m);

// A dense Hermitian matrix.  Construction either demands bitwise Hermiticity
// (file inputs) or symmetrizes (m + m^*)/2 (internally produced values, where
// roundoff is expected).
class HermitianMatrix {
 public:
  HermitianMatrix() : m_(0, 0) {}

  static HermitianMatrix from_exact(const Eigen::MatrixXcd& m);
  static HermitianMatrix symmetrized(const Eigen::MatrixXcd& m);
  static HermitianMatrix identity(Eigen::Index dim);
  static HermitianMatrix diagonal(const Eigen::VectorXd& d);

  Eigen::Index dim() const { return m_.rows(); }
  const Eigen::MatrixXcd& mat() const { return m_; }

  double operator_norm() const;  // max |eigenvalue|

 private:
  explicit HermitianMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {}
  Eigen::MatrixXcd m_;
};

// Eigenvalues ascending, eigenvector columns aligned with them.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd eigenvectors;
};

// Full eigendecomposition, validated: the frame must be unitary to
// orth_per_dim * dim and reconstruct m to recon_rel * (1 + ||m||).
SpectralDecomposition spectral(const HermitianMatrix& m,
                               const Tolerances& tol = {});

// An orthogonal projection, carried as an orthonormal basis of its range
// (dim x rank) together with the projector matrix itself.
class Projection {
 public:
  Projection() : basis_(0, 0) {}

  // Columns must be orthonormal within orth_per_dim * dim.
  static Projection from_basis(const Eigen::MatrixXcd& basis,
                               const Tolerances& tol = {});
  static Projection zero(Eigen::Index dim);
  static Projection identity(Eigen::Index dim);

  Eigen::Index dim() const { return basis_.rows(); }
  Eigen::Index rank() const { return basis_.cols(); }
  const Eigen::MatrixXcd& basis() const { return basis_; }
  const HermitianMatrix& matrix() const { return matrix_; }

  Projection complement() const;  // orthonormal basis of the orthocomplement

 private:
  Projection(Eigen::MatrixXcd basis, HermitianMatrix matrix)
      : basis_(std::move(basis)), matrix_(std::move(matrix)) {}
  Eigen::MatrixXcd basis_;
  HermitianMatrix matrix_;
};

// Functional calculus f(m) = V f(Lambda) V^*.  Every eigenvalue must lie in
// f's domain (closed endpoints forgive domain_abs-level excursions).
HermitianMatrix apply_function(const ScalarFunction& f,
                               const HermitianMatrix& m,
                               const Tolerances& tol = {});

// Smallest eigenvalue; m is accepted as positive semidefinite when
// psd_gap(m) >= -tol.psd_tol(||m||).
double psd_gap(const HermitianMatrix& m);

struct SpectralProjectionResult {
  Projection projection;
  // Set when some eigenvalue sits within cluster_tol of a or b, i.e. the
  // half-open window [a, b) cut through a numerical eigenvalue cluster.
  bool near_boundary;
};

// Spectral projection onto eigenvalues in [a, b).
SpectralProjectionResult spectral_projection(const HermitianMatrix& m,
                                             double a, double b,
                                             const Tolerances& tol = {});

// Compression W^* m W onto the range of p, expressed in p's basis (rank x rank).
HermitianMatrix compress(const HermitianMatrix& m, const Projection& p);

// (P m^{-1} P)^{-1} on the range of p, again rank x rank in p's basis.
// Requires m positive definite; throws OrderError otherwise.
HermitianMatrix compressed_inverse(const HermitianMatrix& m,
                                   const Projection& p,
                                   const Tolerances& tol = {});

// Residual of the block-inverse identity
//   (P m^{-1} P)^{-1} = P m P - P m Q (Q m Q)^{-1} Q m P,   Q = 1 - P,
// evaluated on the range of p.  Small residuals certify the compression code.
double block_inverse_residual(const HermitianMatrix& m, const Projection& p,
                              const Tolerances& tol = {});

// True when the eigenvalue-zero subspaces of x and y coincide: same dimension
// and projectors within proj_abs.  Eigenvalues within cluster_tol of zero
// count as zero.
bool kernel_match(const HermitianMatrix& x, const HermitianMatrix& y,
                  const Tolerances& tol = {});

}  // namespace jorder

#endif  // JORDER_HERMITIAN_HPP_
