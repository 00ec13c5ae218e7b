#include "jorder/sandwich.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace jorder {
namespace {

constexpr int kPremiseGrid = 64;

void require_concave_increasing(const ScalarFunction& fn, const char* slot) {
  if (!fn.concave() || !fn.increasing())
    throw PreconditionError(std::string("the ") + slot +
                            " function must be concave increasing, got '" +
                            fn.name() + "'");
}

void require_positive(const HermitianMatrix& m, const char* slot,
                      const Tolerances& tol) {
  double gap = psd_gap(m);
  if (gap < -tol.psd_tol(m.operator_norm()))
    throw OrderError(std::string(slot) +
                     " must be positive semidefinite (smallest eigenvalue " +
                     std::to_string(gap) + ")");
}

Eigen::MatrixXcd with_identity_shift(const Eigen::MatrixXcd& m, double s) {
  Eigen::MatrixXcd out = m;
  out.diagonal().array() += s;
  return out;
}

// Most negative Loewner gaps of lower(l) <= f(Y) and f(Y) <= upper(l) over a
// lambda grid on [a, b], clamped to <= 0 so exact premises report zero.
std::pair<double, double> envelope_premise_residuals(
    const ScalarFunction& f, const ScalarFunction& g, const HermitianMatrix& x,
    const Eigen::MatrixXcd& fy, double a, double b, const Tolerances& tol) {
  Eigen::MatrixXcd gfx = apply_function(compose(g, f), x, tol).mat();
  double rho_lower = 0;
  double rho_upper = 0;
  for (int j = 0; j < kPremiseGrid; ++j) {
    double l = a + (b - a) * static_cast<double>(j) /
                       static_cast<double>(kPremiseGrid - 1);
    double fl = f.eval(l);
    double fpl = f.deriv1(l);
    double gp = g.deriv1(fl);
    double gfl = g.eval(fl);
    Eigen::MatrixXcd lower =
        with_identity_shift(gfx, fl * gp - gfl) / gp;
    Eigen::MatrixXcd upper =
        with_identity_shift(fpl * x.mat(), fl - l * fpl);
    rho_lower =
        std::min(rho_lower, psd_gap(HermitianMatrix::symmetrized(fy - lower)));
    rho_upper =
        std::min(rho_upper, psd_gap(HermitianMatrix::symmetrized(upper - fy)));
  }
  return {rho_lower, rho_upper};
}

}  // namespace

std::pair<RelationVerdict, RelationVerdict> check_sandwich(
    const ScalarFunction& f, const ScalarFunction& g, const HermitianMatrix& x,
    const HermitianMatrix& y, const RelationOptions& opts) {
  require_concave_increasing(f, "inner");
  require_concave_increasing(g, "outer");
  require_positive(x, "the first operator", opts.tol);
  require_positive(y, "the second operator", opts.tol);
  HermitianMatrix fx = apply_function(f, x, opts.tol);
  HermitianMatrix fy = apply_function(f, y, opts.tol);
  RelationVerdict left = check_relation_tangent(g, fx, fy, opts);
  RelationVerdict right = check_relation_tangent(f, y, x, opts);
  return {left, right};
}

std::pair<HermitianMatrix, HermitianMatrix> envelope_bounds(
    const ScalarFunction& f, const ScalarFunction& g, const HermitianMatrix& x,
    double lambda, const Tolerances& tol) {
  require_concave_increasing(f, "inner");
  require_concave_increasing(g, "outer");
  require_positive(x, "the operator", tol);
  if (!(lambda > 0))
    throw PreconditionError("the base point must be positive");
  double fl = f.eval(lambda);
  double fpl = f.deriv1(lambda);  // DomainError outside the open interior
  double gp = g.deriv1(fl);
  double gfl = g.eval(fl);
  Eigen::MatrixXcd gfx = apply_function(compose(g, f), x, tol).mat();
  HermitianMatrix lower = HermitianMatrix::symmetrized(
      with_identity_shift(gfx, fl * gp - gfl) / gp);
  HermitianMatrix upper = HermitianMatrix::symmetrized(
      with_identity_shift(fpl * x.mat(), fl - lambda * fpl));
  return {lower, upper};
}

SandwichConstants::SandwichConstants(const ScalarFunction& f,
                                     const ScalarFunction& g, double a,
                                     double b, int grid)
    : f_(f), g_(g), a_(a), b_(b), grid_(std::max(2, grid)) {
  require_concave_increasing(f, "inner");
  require_concave_increasing(g, "outer");
  if (!(0 < a && a < b))
    throw PreconditionError("constants require 0 < a < b");

  // Curvature defect of the composed envelope and the raw lower chord,
  // maximized / minimized over the box grid.
  auto at = [&](int i) {
    return a_ + (b_ - a_) * static_cast<double>(i) /
                    static_cast<double>(grid_ - 1);
  };
  double c_max = 0.0;
  double q_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_; ++i) {
    double l = at(i);
    double fl = f_.eval(l);
    double gp_l = g_.deriv1(fl);
    for (int j = 0; j < grid_; ++j) {
      double t = at(j);
      double ft = f_.eval(t);
      double fpt = f_.deriv1(t);
      double num = g_.deriv2(ft) * fpt * fpt + g_.deriv1(ft) * f_.deriv2(t);
      c_max = std::max(c_max, -num / (2.0 * gp_l));
      double q0 = (g_.eval(ft) + fl * gp_l - g_.eval(fl)) / gp_l;
      q_min = std::min(q_min, q0);
    }
  }
  c_raw_ = std::max(0.0, c_max);
  c_ = c_raw_ * 1.05 + 1e-12;
  alpha_raw_ = std::max(0.0, 1.0 - q_min);
  alpha_ = alpha_raw_ + 1e-9;

  // Defining grid inequalities, revalidated with the padded constants.
  for (int i = 0; i < grid_; ++i) {
    double l = at(i);
    double gp_l = g_.deriv1(f_.eval(l));
    for (int j = 0; j < grid_; ++j) {
      double t = at(j);
      double ft = f_.eval(t);
      double fpt = f_.deriv1(t);
      double num = g_.deriv2(ft) * fpt * fpt + g_.deriv1(ft) * f_.deriv2(t);
      if (!(2.0 * c_ + num / gp_l > 0))
        throw PreconditionError(
            "curvature constant failed to dominate the envelope defect");
      if (lower_value(l, t) + alpha_ < 1.0 - 1e-12)
        throw PreconditionError("alpha failed to lift the lower chord to 1");
    }
  }
}

void SandwichConstants::check_box(double lambda, double t) const {
  double slack = 1e-12 * (1.0 + std::max(std::fabs(a_), std::fabs(b_)));
  if (lambda < a_ - slack || lambda > b_ + slack || t < a_ - slack ||
      t > b_ + slack)
    throw PreconditionError("(lambda, t) escapes the constants box");
}

double SandwichConstants::upper_value(double lambda, double t) const {
  check_box(lambda, t);
  double fpl = f_.deriv1(lambda);
  return fpl * t - lambda * fpl + f_.eval(lambda);
}

double SandwichConstants::lower_value(double lambda, double t) const {
  check_box(lambda, t);
  double fl = f_.eval(lambda);
  double gp = g_.deriv1(fl);
  return (g_.eval(f_.eval(t)) + fl * gp - g_.eval(fl)) / gp;
}

double SandwichConstants::quadratic_gap(double lambda, double t) const {
  double d = t - lambda;
  return c_ * d * d - (upper_value(lambda, t) - lower_value(lambda, t));
}

double SandwichConstants::inverse_quadratic_gap(double lambda, double t) const {
  double p = upper_value(lambda, t) + alpha_;
  double q = lower_value(lambda, t) + alpha_;
  if (p < 1.0 - 1e-9 || q < 1.0 - 1e-9)
    throw OrderError("constants invalid: envelope values not lifted above 1");
  double d = t - lambda;
  return c_ * d * d - (1.0 / q - 1.0 / p);
}

BoundAudit audit_bounds(const ScalarFunction& f, const ScalarFunction& g,
                        const HermitianMatrix& x, const HermitianMatrix& y,
                        const SandwichConstants& cs, const Projection& p,
                        double lambda, const Tolerances& tol) {
  if (x.dim() != y.dim() || p.dim() != x.dim())
    throw PreconditionError("audit requires matching dimensions");
  double slack_box = 1e-12 * (1.0 + std::fabs(cs.b()));
  if (lambda < cs.a() - slack_box || lambda > cs.b() + slack_box)
    throw PreconditionError("base point escapes [a, b]");
  Projection window =
      spectral_projection(x, cs.a(), cs.b(), tol).projection;
  double containment = spectral_norm(window.matrix().mat() * p.matrix().mat() -
                                     p.matrix().mat());
  if (containment > tol.proj_abs)
    throw PreconditionError(
        "projection is not dominated by the spectral window of [a, b)");

  HermitianMatrix fx = apply_function(f, x, tol);
  HermitianMatrix fy = apply_function(f, y, tol);
  const double alpha = cs.alpha();
  const double c = cs.c();

  BoundAudit audit;
  std::tie(audit.rho_lower, audit.rho_upper) =
      envelope_premise_residuals(f, g, x, fy.mat(), cs.a(), cs.b(), tol);
  double fy_norm = fy.operator_norm();
  audit.slack_multiplier = static_cast<double>(x.dim()) *
                           (1.0 + fy_norm + alpha) * (1.0 + fy_norm + alpha);
  audit.slack = audit.slack_multiplier *
                std::max(0.0, -std::min(audit.rho_lower, audit.rho_upper));
  double accept = audit.slack + tol.psd_tol(fy_norm + alpha);

  const Eigen::MatrixXcd& pm = p.matrix().mat();
  Eigen::MatrixXcd fxa = with_identity_shift(fx.mat(), alpha);
  Eigen::MatrixXcd fya = with_identity_shift(fy.mat(), alpha);
  double defect = spectral_norm(x.mat() * pm - lambda * pm);

  audit.projector_bound.lhs = spectral_norm(fxa * pm - pm * fya * pm);
  audit.projector_bound.rhs = c * defect * defect;
  audit.projector_bound.pass =
      audit.projector_bound.lhs <= audit.projector_bound.rhs + accept;

  double fb = f.eval(cs.b()) + alpha;
  audit.inverse_bound.rhs = (1.0 + fb * fb) * c * defect * defect;
  if (p.rank() > 0) {
    HermitianMatrix fya_h = HermitianMatrix::symmetrized(fya);
    audit.inverse_bound.lhs = spectral_norm(
        compress(fya_h, p).mat() - compressed_inverse(fya_h, p, tol).mat());
  } else {
    audit.inverse_bound.lhs = 0.0;
  }
  audit.inverse_bound.pass =
      audit.inverse_bound.lhs <= audit.inverse_bound.rhs + accept;
  return audit;
}

PartitionScheme build_partition(const HermitianMatrix& x, double a, double b,
                                int n, const Tolerances& tol) {
  if (!(a < b)) throw PreconditionError("partition requires a < b");
  if (n < 1) throw PreconditionError("partition requires n >= 1");
  SpectralDecomposition d = spectral(x, tol);
  double scale =
      d.eigenvalues.size() ? d.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  double tau = tol.cluster_tol(scale);

  PartitionScheme part;
  part.a = a;
  part.b = b;
  part.n = n;
  const double w = (b - a) / n;
  part.cuts.resize(n + 1);
  for (int i = 0; i <= n; ++i) part.cuts[i] = a + w * i;
  part.lambdas.resize(n);
  for (int i = 0; i < n; ++i) part.lambdas[i] = a + w * i;

  // Nudge any cut that lands on an eigenvalue cluster, keeping the
  // float-compare side assignment but making it robust.
  for (double& cut : part.cuts) {
    bool below = false, above = false;
    for (Eigen::Index k = 0; k < d.eigenvalues.size(); ++k) {
      if (std::fabs(d.eigenvalues(k) - cut) <= tau)
        (d.eigenvalues(k) < cut ? below : above) = true;
    }
    if (below || above) part.near_boundary = true;
    if (below && !above)
      cut += 10.0 * tau;
    else if (above && !below)
      cut -= 10.0 * tau;
  }

  std::vector<Eigen::Index> window_cols;
  for (int i = 1; i <= n; ++i) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index k = 0; k < d.eigenvalues.size(); ++k) {
      double ev = d.eigenvalues(k);
      if (ev >= part.cuts[i - 1] && ev < part.cuts[i]) cols.push_back(k);
    }
    if (cols.empty()) {
      part.skipped.push_back(i - 1);
      part.cells.push_back(Projection::zero(x.dim()));
      continue;
    }
    Eigen::MatrixXcd basis(x.dim(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k)
      basis.col(static_cast<Eigen::Index>(k)) = d.eigenvectors.col(cols[k]);
    part.cells.push_back(Projection::from_basis(basis, tol));
    window_cols.insert(window_cols.end(), cols.begin(), cols.end());
  }
  if (window_cols.empty()) {
    part.window = Projection::zero(x.dim());
  } else {
    Eigen::MatrixXcd basis(x.dim(),
                           static_cast<Eigen::Index>(window_cols.size()));
    for (std::size_t k = 0; k < window_cols.size(); ++k)
      basis.col(static_cast<Eigen::Index>(k)) =
          d.eigenvectors.col(window_cols[k]);
    part.window = Projection::from_basis(basis, tol);
  }
  return part;
}

DiscretizationReport discretize(const ScalarFunction& f, const ScalarFunction& g,
                                const HermitianMatrix& x, const HermitianMatrix& y,
                                double a, double b, int n,
                                const Tolerances& tol) {
  require_concave_increasing(f, "inner");
  require_concave_increasing(g, "outer");
  if (!(a > 0)) throw PreconditionError("the spectral floor requires a > 0");
  if (!(a < b)) throw PreconditionError("discretization requires a < b");
  if (n < 1) throw PreconditionError("discretization requires n >= 1");
  require_positive(x, "the first operator", tol);
  require_positive(y, "the second operator", tol);
  double xnorm = x.operator_norm();
  double ynorm = y.operator_norm();
  if (!(xnorm < b && ynorm < b))
    throw PreconditionError(
        "b must exceed both operator norms (got b = " + std::to_string(b) +
        ", norms " + std::to_string(xnorm) + ", " + std::to_string(ynorm) +
        ")");

  SandwichConstants cs(f, g, a, b);
  PartitionScheme part = build_partition(x, a, b, n, tol);

  DiscretizationReport rep;
  rep.n = n;
  rep.a = a;
  rep.b = b;
  rep.c = cs.c();
  rep.alpha = cs.alpha();
  rep.near_boundary = part.near_boundary;
  rep.skipped_cells = part.skipped;

  HermitianMatrix fx = apply_function(f, x, tol);
  HermitianMatrix fy = apply_function(f, y, tol);
  std::tie(rep.rho_lower, rep.rho_upper) =
      envelope_premise_residuals(f, g, x, fy.mat(), a, b, tol);
  double fy_norm = fy.operator_norm();
  const double alpha = cs.alpha();
  const double c = cs.c();
  rep.slack_multiplier = static_cast<double>(x.dim()) *
                         (1.0 + fy_norm + alpha) * (1.0 + fy_norm + alpha);
  rep.slack = rep.slack_multiplier *
              std::max(0.0, -std::min(rep.rho_lower, rep.rho_upper));
  double accept = rep.slack + tol.psd_tol(fy_norm + alpha);

  Eigen::MatrixXcd fxa = with_identity_shift(fx.mat(), alpha);
  Eigen::MatrixXcd fya = with_identity_shift(fy.mat(), alpha);
  HermitianMatrix fya_h = HermitianMatrix::symmetrized(fya);
  double fb = f.eval(b) + alpha;

  const Eigen::Index dim = x.dim();
  Eigen::MatrixXcd sum3 = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd sum4 = Eigen::MatrixXcd::Zero(dim, dim);
  rep.bound1 = {0.0, 0.0, true};
  rep.bound2 = {0.0, 0.0, true};
  bool first_cell = true;
  for (int i = 0; i < n; ++i) {
    const Projection& cell = part.cells[static_cast<std::size_t>(i)];
    if (cell.rank() == 0) continue;
    const Eigen::MatrixXcd& pm = cell.matrix().mat();
    double lam = part.lambdas[static_cast<std::size_t>(i)];
    double defect = spectral_norm(x.mat() * pm - lam * pm);

    double lhs1 = spectral_norm(fxa * pm - pm * fya * pm);
    double rhs1 = c * defect * defect;
    double lhs2 = spectral_norm(compress(fya_h, cell).mat() -
                                compressed_inverse(fya_h, cell, tol).mat());
    double rhs2 = (1.0 + fb * fb) * c * defect * defect;
    if (first_cell || lhs1 - rhs1 > rep.bound1.lhs - rep.bound1.rhs)
      rep.bound1 = {lhs1, rhs1, rep.bound1.pass};
    if (first_cell || lhs2 - rhs2 > rep.bound2.lhs - rep.bound2.rhs)
      rep.bound2 = {lhs2, rhs2, rep.bound2.pass};
    rep.bound1.pass = rep.bound1.pass && lhs1 <= rhs1 + accept;
    rep.bound2.pass = rep.bound2.pass && lhs2 <= rhs2 + accept;
    first_cell = false;

    sum3 += fxa * pm - pm * fya * pm;
    sum4 += fya * pm - pm * fya * pm;  // (1 - P_i) (f(Y)+a) P_i
  }

  rep.bound3.lhs = spectral_norm(sum3);
  rep.bound3.rhs = c * (b - a) * (b - a) / (static_cast<double>(n) * n);
  rep.bound3.pass = rep.bound3.lhs <= rep.bound3.rhs + accept;

  rep.bound4.lhs = spectral_norm(sum4);
  rep.bound4.rhs =
      std::sqrt(fb * (1.0 + fb * fb) * c * (b - a) * (b - a) / n);
  rep.bound4.pass = rep.bound4.lhs <= rep.bound4.rhs + accept;

  const Eigen::MatrixXcd& wm = part.window.matrix().mat();
  rep.final_bound.lhs = spectral_norm(fx.mat() * wm - fy.mat() * wm);
  rep.final_bound.rhs = rep.bound3.rhs + rep.bound4.rhs;
  rep.final_bound.pass = rep.final_bound.lhs <= rep.final_bound.rhs + accept;

  rep.kernels_match = kernel_match(x, y, tol);
  rep.pass = rep.bound1.pass && rep.bound2.pass && rep.bound3.pass &&
             rep.bound4.pass && rep.final_bound.pass;
  return rep;
}

double sqrt_pair_gap_ratio(double t, double lambda) {
  if (!(t > 0) || !(lambda > 0))
    throw PreconditionError("the ratio requires t > 0 and lambda > 0");
  if (t == lambda)
    throw PreconditionError("the ratio is undefined at t = lambda");
  double width = t / (2.0 * std::sqrt(lambda)) + 1.5 * std::sqrt(lambda) -
                 2.0 * std::pow(lambda, 0.25) * std::pow(t, 0.25);
  double d = t - lambda;
  return width / (d * d);
}

std::pair<HermitianMatrix, double> sqrt_pair_minorant(const HermitianMatrix& x,
                                                      double lambda) {
  if (!(lambda > 0)) throw PreconditionError("the base point must be positive");
  Tolerances tol;
  require_positive(x, "the operator", tol);
  HermitianMatrix rootx = apply_function(builtin_function("sqrt"), x, tol);
  Eigen::MatrixXcd m = 2.0 * std::sqrt(lambda) * rootx.mat();
  m.diagonal().array() -= lambda;
  HermitianMatrix out = HermitianMatrix::symmetrized(m);
  return {out, psd_gap(out)};
}

}  // namespace jorder
