#include "jorder/antisymmetry.hpp"

#include <algorithm>
#include <cmath>

namespace jorder {
namespace {

// Positivity shift: c = max(0, -min f over the joint spectral range) + 1.
// Monotone f attains its minimum at a range endpoint, so four evaluations
// suffice.
double positivity_shift(const ScalarFunction& f, const HermitianMatrix& x,
                        const HermitianMatrix& y, const Tolerances& tol) {
  auto range_of = [&](const HermitianMatrix& m) {
    SpectralDecomposition d = spectral(m, tol);
    return std::pair<double, double>(d.eigenvalues.minCoeff(),
                                     d.eigenvalues.maxCoeff());
  };
  auto [xlo, xhi] = range_of(x);
  auto [ylo, yhi] = range_of(y);
  double m = std::min(std::min(f.eval(xlo), f.eval(xhi)),
                      std::min(f.eval(ylo), f.eval(yhi)));
  return std::max(0.0, -m) + 1.0;
}

// One level of peeling with the already-shifted function fs = f + shift,
// which is >= 1 on both spectra.  The top eigenspace is read off the second
// side; all residuals are evaluated against the first.
PeelingStep peel_level(const ScalarFunction& fs, double shift,
                       const HermitianMatrix& xk, const HermitianMatrix& yk,
                       int level, const Tolerances& tol) {
  PeelingStep step;
  step.level = level;
  step.subspace_dim = xk.dim();

  HermitianMatrix fx = apply_function(fs, xk, tol);
  HermitianMatrix fy = apply_function(fs, yk, tol);
  SpectralDecomposition dx = spectral(fx, tol);
  SpectralDecomposition dy = spectral(fy, tol);
  double sx = dx.eigenvalues.maxCoeff();
  double sy = dy.eigenvalues.maxCoeff();
  step.norm_fx = sx - shift;
  step.norm_fy = sy - shift;
  step.norm_gap = std::fabs(sx - sy);

  // Q: everything within the top cluster of fs(Y_k); a degenerate top
  // eigenvalue yields rank > 1 and must be peeled as one block.
  double y_scale = dy.eigenvalues.cwiseAbs().maxCoeff();
  double tau_cluster = tol.cluster_tol(y_scale);
  std::vector<Eigen::Index> picked;
  for (Eigen::Index i = 0; i < dy.eigenvalues.size(); ++i)
    if (dy.eigenvalues(i) >= sy - tau_cluster) picked.push_back(i);
  Eigen::MatrixXcd basis(yk.dim(), static_cast<Eigen::Index>(picked.size()));
  for (std::size_t k = 0; k < picked.size(); ++k)
    basis.col(static_cast<Eigen::Index>(k)) = dy.eigenvectors.col(picked[k]);
  step.top_eigenspace = Projection::from_basis(basis, tol);
  const Eigen::MatrixXcd& qmat = step.top_eigenspace.matrix().mat();

  // (s - fs(X))^{1/2} Q: the square root exposes Q fs(X) Q = s Q with only a
  // square root of the working precision lost.
  Eigen::VectorXd root_vals(dx.eigenvalues.size());
  for (Eigen::Index i = 0; i < dx.eigenvalues.size(); ++i)
    root_vals(i) = std::sqrt(std::max(0.0, sx - dx.eigenvalues(i)));
  Eigen::MatrixXcd root = dx.eigenvectors *
                          root_vals.cast<Complex>().asDiagonal() *
                          dx.eigenvectors.adjoint();
  step.factorization_residual = spectral_norm(root * qmat);
  step.commutation_residual =
      spectral_norm(qmat * fx.mat() - fx.mat() * qmat);
  step.equality_residual = spectral_norm((xk.mat() - yk.mat()) * qmat);

  double tau_norm = tol.norm_match_tol(std::max(std::fabs(sx), std::fabs(sy)));
  double tau_fact = std::sqrt(tau_norm);
  double tau_comm = tau_fact * (1.0 + std::fabs(sx));
  double tau_eq =
      tol.equal_tol(xk.operator_norm() + yk.operator_norm());
  if (step.norm_gap > tau_norm)
    step.status = StepStatus::norm_mismatch;
  else if (step.factorization_residual > tau_fact ||
           step.commutation_residual > tau_comm ||
           step.equality_residual > tau_eq)
    step.status = StepStatus::tolerance_exceeded;
  else
    step.status = StepStatus::ok;
  return step;
}

double step_worst_residual(const PeelingStep& s) {
  return std::max({s.norm_gap, s.factorization_residual,
                   s.commutation_residual, s.equality_residual});
}

}  // namespace

PeelingStep peel_once(const ScalarFunction& f, const HermitianMatrix& x,
                      const HermitianMatrix& y, const Tolerances& tol) {
  if (f.concave())
    throw PreconditionError(
        "peeling runs on the convex >= form; negate a concave hypothesis "
        "first");
  double c = positivity_shift(f, x, y, tol);
  return peel_level(shift_by(f, c), c, x, y, 0, tol);
}

PeelingTrace decide_equal(const ScalarFunction& f, const HermitianMatrix& x,
                          const HermitianMatrix& y, Direction dir,
                          const PeelingOptions& opts) {
  if (x.dim() != y.dim())
    throw PreconditionError("equality decision requires equal dimensions");
  PeelingTrace trace;
  trace.seed = opts.relation.seed;
  trace.final_gap = spectral_norm(x.mat() - y.mat());

  auto [v1, v2] = dual_relation_check(f, x, y, dir, opts.relation);
  if (!v1.holds || !v2.holds) {
    trace.conclusion = PeelingConclusion::premise_violated;
    trace.violation = ViolationReport{!v1.holds ? 1 : 2, !v1.holds ? v1 : v2};
    return trace;
  }

  ScalarFunction fp =
      dir == Direction::concave_le ? negate(f) : f;  // convex >= form
  double c = positivity_shift(fp, x, y, opts.tol);
  ScalarFunction fs = shift_by(fp, c);
  trace.shift = c;

  HermitianMatrix xk = x;
  HermitianMatrix yk = y;
  for (int level = 0; xk.dim() > 0 && level <= x.dim(); ++level) {
    PeelingStep step = peel_level(fs, c, xk, yk, level, opts.tol);
    trace.steps.push_back(step);
    trace.max_residual = std::max(trace.max_residual, step_worst_residual(step));
    if (step.status == StepStatus::norm_mismatch) {
      // Norms of the two sides disagree: either a hidden premise violation
      // (hunt for it) or an accuracy failure.
      if (auto viol = find_violation(f, x, y, dir, opts.relation)) {
        trace.conclusion = PeelingConclusion::premise_violated;
        trace.violation = viol;
      } else {
        trace.conclusion = PeelingConclusion::tolerance_exceeded;
      }
      return trace;
    }
    if (step.status == StepStatus::tolerance_exceeded) {
      trace.conclusion = PeelingConclusion::tolerance_exceeded;
      return trace;
    }
    Projection comp = step.top_eigenspace.complement();
    if (comp.rank() == 0) break;
    xk = compress(xk, comp);
    yk = compress(yk, comp);
  }

  double tau_eq =
      opts.tol.equal_tol(x.operator_norm() + y.operator_norm());
  trace.conclusion = trace.final_gap <= tau_eq
                         ? PeelingConclusion::equal
                         : PeelingConclusion::tolerance_exceeded;
  return trace;
}

std::optional<ViolationReport> find_violation(const ScalarFunction& f,
                                              const HermitianMatrix& x,
                                              const HermitianMatrix& y,
                                              Direction dir,
                                              const RelationOptions& opts) {
  ScalarFunction h = normalized_concave(f, dir);
  struct Side {
    const HermitianMatrix* a;
    const HermitianMatrix* b;
    int ordering;
  };
  const Side sides[2] = {{&x, &y, 1}, {&y, &x, 2}};
  for (const Side& s : sides) {
    RelationVerdict v = check_relation_tangent(h, *s.a, *s.b, opts);
    if (!v.holds) {
      map_witness_to_f_terms(v, dir);
      return ViolationReport{s.ordering, v};
    }
  }
  for (const Side& s : sides) {
    RelationVerdict v = check_relation_sphere(h, *s.a, *s.b, opts);
    if (!v.holds) {
      map_witness_to_f_terms(v, dir);
      return ViolationReport{s.ordering, v};
    }
  }
  return std::nullopt;
}

}  // namespace jorder
