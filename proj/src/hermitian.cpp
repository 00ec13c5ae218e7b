#include "jorder/hermitian.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

namespace jorder {

double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

HermitianMatrix HermitianMatrix::from_exact(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols())
    throw PreconditionError("matrix must be square, got " +
                            std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (m(i, i).imag() != 0.0)
      throw PreconditionError("diagonal entry (" + std::to_string(i) + "," +
                              std::to_string(i) + ") has nonzero imaginary part");
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      if (m(i, j) != std::conj(m(j, i)))
        throw PreconditionError("entries (" + std::to_string(i) + "," +
                                std::to_string(j) + ") and (" +
                                std::to_string(j) + "," + std::to_string(i) +
                                ") are not conjugate");
    }
  }
  return HermitianMatrix(m);
}

HermitianMatrix HermitianMatrix::symmetrized(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols())
    throw PreconditionError("matrix must be square, got " +
                            std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
  return HermitianMatrix(0.5 * (m + m.adjoint()));
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
  return HermitianMatrix(Eigen::MatrixXcd::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::diagonal(const Eigen::VectorXd& d) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d.size(), d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) m(i, i) = d(i);
  return HermitianMatrix(std::move(m));
}

double HermitianMatrix::operator_norm() const {
  if (dim() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw DecompositionError("eigensolver failed while computing operator norm");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

SpectralDecomposition spectral(const HermitianMatrix& m, const Tolerances& tol) {
  const Eigen::Index n = m.dim();
  if (n == 0) return {Eigen::VectorXd(0), Eigen::MatrixXcd(0, 0)};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.mat());
  if (es.info() != Eigen::Success)
    throw DecompositionError("eigensolver failed to converge");
  SpectralDecomposition d{es.eigenvalues(), es.eigenvectors()};

  double orth = (d.eigenvectors.adjoint() * d.eigenvectors -
                 Eigen::MatrixXcd::Identity(n, n))
                    .cwiseAbs()
                    .maxCoeff();
  if (orth > tol.orth_per_dim * static_cast<double>(n))
    throw DecompositionError("eigenvector frame is not unitary (residual " +
                             std::to_string(orth) + ")");

  Eigen::MatrixXcd recon = d.eigenvectors *
                           d.eigenvalues.cast<Complex>().asDiagonal() *
                           d.eigenvectors.adjoint();
  double scale = d.eigenvalues.cwiseAbs().maxCoeff();
  double recon_err = spectral_norm(recon - m.mat());
  if (recon_err > tol.recon_tol(scale))
    throw DecompositionError("eigendecomposition does not reconstruct input (residual " +
                             std::to_string(recon_err) + ")");
  return d;
}

Projection Projection::from_basis(const Eigen::MatrixXcd& basis,
                                  const Tolerances& tol) {
  const Eigen::Index n = basis.rows();
  const Eigen::Index r = basis.cols();
  if (r > n)
    throw PreconditionError("projection basis has more columns than the space");
  if (r > 0) {
    double orth = (basis.adjoint() * basis - Eigen::MatrixXcd::Identity(r, r))
                      .cwiseAbs()
                      .maxCoeff();
    if (orth > tol.orth_per_dim * static_cast<double>(n))
      throw PreconditionError("projection basis is not orthonormal (residual " +
                              std::to_string(orth) + ")");
  }
  return Projection(basis, HermitianMatrix::symmetrized(basis * basis.adjoint()));
}

Projection Projection::zero(Eigen::Index dim) {
  return Projection(Eigen::MatrixXcd(dim, 0),
                    HermitianMatrix::symmetrized(Eigen::MatrixXcd::Zero(dim, dim)));
}

Projection Projection::identity(Eigen::Index dim) {
  return from_basis(Eigen::MatrixXcd::Identity(dim, dim));
}

Projection Projection::complement() const {
  const Eigen::Index n = dim();
  const Eigen::Index r = rank();
  if (r == 0) return identity(n);
  if (r == n) return zero(n);
  // Full unitary extending the basis: its trailing columns span the
  // orthocomplement exactly because the leading r columns span range(this).
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(basis_);
  Eigen::MatrixXcd q = qr.householderQ();
  return from_basis(q.rightCols(n - r));
}

HermitianMatrix apply_function(const ScalarFunction& f, const HermitianMatrix& m,
                               const Tolerances& tol) {
  SpectralDecomposition d = spectral(m, tol);
  Eigen::VectorXd vals(d.eigenvalues.size());
  for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i)
    vals(i) = f.eval(d.eigenvalues(i));  // DomainError if the spectrum escapes
  return HermitianMatrix::symmetrized(d.eigenvectors *
                                      vals.cast<Complex>().asDiagonal() *
                                      d.eigenvectors.adjoint());
}

double psd_gap(const HermitianMatrix& m) {
  if (m.dim() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.mat(),
                                                     Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw DecompositionError("eigensolver failed while computing psd gap");
  return es.eigenvalues().minCoeff();
}

SpectralProjectionResult spectral_projection(const HermitianMatrix& m, double a,
                                             double b, const Tolerances& tol) {
  if (!(a < b))
    throw PreconditionError("spectral window requires a < b");
  SpectralDecomposition d = spectral(m, tol);
  double scale = d.eigenvalues.size() ? d.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  double tau = tol.cluster_tol(scale);

  std::vector<Eigen::Index> picked;
  bool near_boundary = false;
  for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i) {
    double ev = d.eigenvalues(i);
    if (ev >= a && ev < b) picked.push_back(i);
    if (std::fabs(ev - a) <= tau || std::fabs(ev - b) <= tau)
      near_boundary = true;
  }
  if (picked.empty())
    return {Projection::zero(m.dim()), near_boundary};
  Eigen::MatrixXcd basis(m.dim(), static_cast<Eigen::Index>(picked.size()));
  for (std::size_t k = 0; k < picked.size(); ++k)
    basis.col(static_cast<Eigen::Index>(k)) = d.eigenvectors.col(picked[k]);
  return {Projection::from_basis(basis, tol), near_boundary};
}

HermitianMatrix compress(const HermitianMatrix& m, const Projection& p) {
  if (p.dim() != m.dim())
    throw PreconditionError("projection and matrix dimensions differ");
  const Eigen::MatrixXcd& w = p.basis();
  return HermitianMatrix::symmetrized(w.adjoint() * m.mat() * w);
}

HermitianMatrix compressed_inverse(const HermitianMatrix& m, const Projection& p,
                                   const Tolerances& tol) {
  if (p.dim() != m.dim())
    throw PreconditionError("projection and matrix dimensions differ");
  if (p.rank() == 0)
    throw PreconditionError("cannot invert a compression onto the zero space");
  double gap = psd_gap(m);
  if (gap <= tol.psd_tol(m.operator_norm()))
    throw OrderError("matrix must be positive definite for compressed inversion "
                     "(smallest eigenvalue " + std::to_string(gap) + ")");
  Eigen::LLT<Eigen::MatrixXcd> llt(m.mat());
  if (llt.info() != Eigen::Success)
    throw OrderError("Cholesky factorization failed; matrix is not positive definite");
  Eigen::MatrixXcd minv =
      llt.solve(Eigen::MatrixXcd::Identity(m.dim(), m.dim()));
  const Eigen::MatrixXcd& w = p.basis();
  Eigen::MatrixXcd core = w.adjoint() * minv * w;
  core = 0.5 * (core + core.adjoint());
  Eigen::LLT<Eigen::MatrixXcd> core_llt(core);
  if (core_llt.info() != Eigen::Success)
    throw OrderError("compressed inverse block is not positive definite");
  Eigen::MatrixXcd out =
      core_llt.solve(Eigen::MatrixXcd::Identity(p.rank(), p.rank()));
  return HermitianMatrix::symmetrized(out);
}

double block_inverse_residual(const HermitianMatrix& m, const Projection& p,
                              const Tolerances& tol) {
  if (p.rank() == 0) return 0.0;
  HermitianMatrix lhs = compressed_inverse(m, p, tol);
  const Eigen::MatrixXcd& w = p.basis();
  Eigen::MatrixXcd rhs = w.adjoint() * m.mat() * w;
  Projection comp = p.complement();
  if (comp.rank() > 0) {
    const Eigen::MatrixXcd& wq = comp.basis();
    Eigen::MatrixXcd mqq = wq.adjoint() * m.mat() * wq;
    mqq = 0.5 * (mqq + mqq.adjoint());
    Eigen::LLT<Eigen::MatrixXcd> llt(mqq);
    if (llt.info() != Eigen::Success)
      throw OrderError("complement block is not positive definite");
    Eigen::MatrixXcd cross = wq.adjoint() * m.mat() * w;
    rhs -= cross.adjoint() * llt.solve(cross);
  }
  return spectral_norm(lhs.mat() - rhs);
}

bool kernel_match(const HermitianMatrix& x, const HermitianMatrix& y,
                  const Tolerances& tol) {
  auto kernel_of = [&](const HermitianMatrix& m) {
    SpectralDecomposition d = spectral(m, tol);
    double scale = d.eigenvalues.size() ? d.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
    double tau = tol.cluster_tol(scale);
    std::vector<Eigen::Index> picked;
    for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i)
      if (std::fabs(d.eigenvalues(i)) <= tau) picked.push_back(i);
    Eigen::MatrixXcd basis(m.dim(), static_cast<Eigen::Index>(picked.size()));
    for (std::size_t k = 0; k < picked.size(); ++k)
      basis.col(static_cast<Eigen::Index>(k)) = d.eigenvectors.col(picked[k]);
    return Projection::from_basis(basis, tol);
  };
  if (x.dim() != y.dim())
    throw PreconditionError("kernel comparison requires equal dimensions");
  Projection kx = kernel_of(x);
  Projection ky = kernel_of(y);
  if (kx.rank() != ky.rank()) return false;
  if (kx.rank() == 0) return true;
  return spectral_norm(kx.matrix().mat() - ky.matrix().mat()) <= tol.proj_abs;
}

}  // namespace jorder
