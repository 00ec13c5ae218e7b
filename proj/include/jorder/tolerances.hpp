#ifndef JORDER_TOLERANCES_HPP_
#define JORDER_TOLERANCES_HPP_

namespace jorder {

// Numerical tolerances shared across the toolkit.  Relative tolerances are
// applied as  tol * (1 + scale)  where scale is an operator norm of the
// matrices involved, so that tiny and desk-sized problems are treated alike.
struct Tolerances {
  double psd_rel = 1e-9;         // Loewner comparisons: lambda_min >= -psd_rel*(1+norm)
  double cluster_rel = 1e-9;     // eigenvalue clustering / boundary collisions
  double recon_rel = 1e-10;      // eigendecomposition reconstruction residual
  double orth_per_dim = 1e-12;   // unitarity of eigenvector frames, per dimension
  double proj_abs = 1e-9;        // projector idempotency / containment residual
  double domain_abs = 1e-12;     // clamping slack at domain endpoints
  double norm_match_rel = 1e-8;  // norm agreement between peeling sides
  double equal_rel = 1e-7;       // operator equality ||X - Y||

  double psd_tol(double scale) const { return psd_rel * (1.0 + scale); }
  double cluster_tol(double scale) const { return cluster_rel * (1.0 + scale); }
  double recon_tol(double scale) const { return recon_rel * (1.0 + scale); }
  double norm_match_tol(double scale) const { return norm_match_rel * (1.0 + scale); }
  double equal_tol(double scale) const { return equal_rel * (1.0 + scale); }
};

}  // namespace jorder

#endif  // JORDER_TOLERANCES_HPP_
