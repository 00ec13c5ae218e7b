#include "jorder/relation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "jorder/minimize.hpp"
#include "jorder/random_gen.hpp"

namespace jorder {
namespace {

constexpr double kDerivNudgeRel = 1e-12;
// Local grid minima within this of the global one all get refined.
constexpr double kRefineThreshold = 1e-6;
constexpr double kGradTol = 1e-10;

double min_eigenvalue(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw DecompositionError("eigensolver failed inside the tangent scan");
  return es.eigenvalues().minCoeff();
}

struct RelationContext {
  Eigen::MatrixXcd ha;  // h(A)
  Eigen::MatrixXcd b;
  Eigen::Index dim = 0;
  double b_lo = 0, b_hi = 0;      // spectral range of B
  double win_lo = 0, win_hi = 0;  // lambda window: range of B inside the
                                  // derivative window of h
  double tolerance = 0;           // shared accept threshold
};

RelationContext make_context(const ScalarFunction& h, const HermitianMatrix& a,
                             const HermitianMatrix& b, const Tolerances& tol) {
  if (a.dim() != b.dim())
    throw PreconditionError("relation requires matrices of equal dimension");
  if (a.dim() == 0)
    throw PreconditionError("relation requires dimension >= 1");
  RelationContext ctx;
  ctx.ha = apply_function(h, a, tol).mat();
  ctx.b = b.mat();
  ctx.dim = a.dim();
  SpectralDecomposition db = spectral(b, tol);
  ctx.b_lo = db.eigenvalues.minCoeff();
  ctx.b_hi = db.eigenvalues.maxCoeff();
  // h(<Bv,v>) must be defined on the whole numerical range of B.
  double slack = tol.domain_abs *
                 (1.0 + std::max(std::fabs(ctx.b_lo), std::fabs(ctx.b_hi)));
  if (!h.domain().admits_eval(ctx.b_lo, slack) ||
      !h.domain().admits_eval(ctx.b_hi, slack))
    throw DomainError(
        "numerical range of the second operator escapes the domain of '" +
        h.name() + "'");
  auto [dlo, dhi] = h.domain().deriv_window(kDerivNudgeRel);
  ctx.win_lo = std::max(ctx.b_lo, dlo);
  ctx.win_hi = std::min(ctx.b_hi, dhi);
  if (ctx.win_lo > ctx.win_hi) {
    // The whole range hugs a domain endpoint; scan the single admissible
    // point next to it.
    double mid = std::clamp(0.5 * (ctx.b_lo + ctx.b_hi), dlo, dhi);
    ctx.win_lo = ctx.win_hi = mid;
  }
  double href =
      std::max(std::fabs(h.eval(ctx.b_lo)), std::fabs(h.eval(ctx.b_hi)));
  ctx.tolerance = tol.psd_rel * (1.0 + spectral_norm(ctx.ha) + href);
  return ctx;
}

double quad_form(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& v) {
  return std::real((v.adjoint() * (m * v))(0));
}

// The tangent of h at lambda applied to B, minus h(A); its smallest
// eigenvalue is the Loewner gap of the comparison at this base point.  The
// combination stays exactly Hermitian in floating point (real scalar times
// Hermitian, plus real diagonal), so no re-symmetrization is needed.
double gap_at(const ScalarFunction& h, const RelationContext& ctx,
              double lambda) {
  TangentLine t = tangent(h, lambda);
  Eigen::MatrixXcd g = t.slope * ctx.b - ctx.ha;
  g.diagonal().array() += t.intercept;
  return min_eigenvalue(g);
}

double phi_value(const RelationContext& ctx, const ScalarFunction& h,
                 const Eigen::VectorXcd& v) {
  return h.eval(quad_form(ctx.b, v)) - quad_form(ctx.ha, v);
}

Witness make_witness(const RelationContext& ctx, const ScalarFunction& h,
                     const Eigen::VectorXcd& v) {
  return Witness{v, quad_form(ctx.ha, v), h.eval(quad_form(ctx.b, v))};
}

struct DescentResult {
  Eigen::VectorXcd xi;
  double value;
};

// Projected gradient descent of phi on the unit sphere with Armijo
// backtracking.  The returned point is the best ever visited, which matters
// when the minimum sits where the gradient cannot vanish (domain boundary).
DescentResult sphere_descent(const RelationContext& ctx,
                             const ScalarFunction& h, Eigen::VectorXcd xi,
                             int max_iters, double dlo, double dhi) {
  double cur = phi_value(ctx, h, xi);
  Eigen::VectorXcd best_xi = xi;
  double best = cur;
  double step = 1.0;
  for (int it = 0; it < max_iters; ++it) {
    double bq = std::clamp(quad_form(ctx.b, xi), dlo, dhi);
    Eigen::VectorXcd grad = 2.0 * (h.deriv1(bq) * (ctx.b * xi) - ctx.ha * xi);
    Eigen::VectorXcd gt = grad - xi * (xi.adjoint() * grad)(0);
    double gn = gt.norm();
    if (gn <= kGradTol) break;
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt) {
      Eigen::VectorXcd cand = xi - step * gt;
      cand.normalize();
      double val = phi_value(ctx, h, cand);
      if (val <= cur - 1e-4 * step * gn * gn) {
        xi = cand;
        cur = val;
        if (val < best) {
          best = val;
          best_xi = xi;
        }
        step = std::min(step * 1.5, 1.0e3);
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return {best_xi, best};
}

void require_concave(const ScalarFunction& h, const char* what) {
  if (!h.concave())
    throw PreconditionError(std::string(what) +
                            " requires a concave function, got '" + h.name() +
                            "'");
}

}  // namespace

double tangent_gap(const ScalarFunction& h, const HermitianMatrix& a,
                   const HermitianMatrix& b, double lambda,
                   const Tolerances& tol) {
  require_concave(h, "tangent comparison");
  RelationContext ctx = make_context(h, a, b, tol);
  return gap_at(h, ctx, lambda);
}

double relation_tolerance(const ScalarFunction& h, const HermitianMatrix& a,
                          const HermitianMatrix& b, const Tolerances& tol) {
  return make_context(h, a, b, tol).tolerance;
}

RelationVerdict check_relation_tangent(const ScalarFunction& h,
                                       const HermitianMatrix& a,
                                       const HermitianMatrix& b,
                                       const RelationOptions& opts) {
  require_concave(h, "tangent method");
  RelationContext ctx = make_context(h, a, b, opts.tol);
  auto gap = [&](double l) { return gap_at(h, ctx, l); };

  std::vector<double> ls, gs;
  if (ctx.win_lo == ctx.win_hi) {
    ls.push_back(ctx.win_lo);
    gs.push_back(gap(ctx.win_lo));
  } else {
    int n = std::max(2, opts.lambda_grid);
    ls.resize(n);
    gs.resize(n);
    for (int i = 0; i < n; ++i) {
      double t = static_cast<double>(i) / static_cast<double>(n - 1);
      ls[i] = ctx.win_lo + t * (ctx.win_hi - ctx.win_lo);
      gs[i] = gap(ls[i]);
    }
  }

  int imin = 0;
  for (int i = 1; i < static_cast<int>(gs.size()); ++i)
    if (gs[i] < gs[imin]) imin = i;
  double best_l = ls[imin];
  double best_g = gs[imin];

  if (ls.size() > 1) {
    double xtol = 1e-10 * (1.0 + std::max(std::fabs(ctx.win_lo),
                                          std::fabs(ctx.win_hi)));
    int count = static_cast<int>(ls.size());
    for (int i = 0; i < count; ++i) {
      bool local_min = (i == 0 || gs[i] <= gs[i - 1]) &&
                       (i + 1 == count || gs[i] <= gs[i + 1]);
      if (!local_min || gs[i] > gs[imin] + kRefineThreshold) continue;
      auto [lx, lg] = golden_minimize(gap, ls[std::max(0, i - 1)],
                                      ls[std::min(count - 1, i + 1)], xtol);
      if (lg < best_g) {
        best_g = lg;
        best_l = lx;
      }
    }
  }

  RelationVerdict v;
  v.method = Method::tangent;
  v.margin = best_g;
  v.lambda_star = best_l;
  v.seed = opts.seed;
  v.holds = best_g >= -ctx.tolerance;
  if (!v.holds) {
    // The most violated eigenvector already certifies the failure, since
    // h(<Bv,v>) <= T(<Bv,v>) pointwise; a short descent can only sharpen it.
    TangentLine t = tangent(h, best_l);
    Eigen::MatrixXcd g = t.slope * ctx.b - ctx.ha;
    g.diagonal().array() += t.intercept;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
    if (es.info() != Eigen::Success)
      throw DecompositionError("eigensolver failed extracting a witness");
    Eigen::VectorXcd xi = es.eigenvectors().col(0);
    auto [dlo, dhi] = h.domain().deriv_window(kDerivNudgeRel);
    DescentResult polished =
        sphere_descent(ctx, h, xi, opts.max_iters, dlo, dhi);
    Eigen::VectorXcd wxi =
        polished.value < phi_value(ctx, h, xi) ? polished.xi : xi;
    v.witness = make_witness(ctx, h, wxi);
  }
  return v;
}

RelationVerdict check_relation_sphere(const ScalarFunction& h,
                                      const HermitianMatrix& a,
                                      const HermitianMatrix& b,
                                      const RelationOptions& opts) {
  RelationContext ctx = make_context(h, a, b, opts.tol);
  auto [dlo, dhi] = h.domain().deriv_window(kDerivNudgeRel);
  int restarts = std::max(1, opts.restarts);
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXcd best_xi;
  for (int r = 0; r < restarts; ++r) {
    Rng rng(mix_seed(opts.seed, static_cast<std::uint64_t>(r)));
    Eigen::VectorXcd xi0 = random_unit(ctx.dim, rng);
    DescentResult res = sphere_descent(ctx, h, xi0, opts.max_iters, dlo, dhi);
    if (res.value < best) {
      best = res.value;
      best_xi = res.xi;
    }
  }
  RelationVerdict v;
  v.method = Method::sphere;
  v.margin = best;
  v.restarts = restarts;
  v.seed = opts.seed;
  v.holds = best >= -ctx.tolerance;
  if (!v.holds) v.witness = make_witness(ctx, h, best_xi);
  return v;
}

ScalarFunction normalized_concave(const ScalarFunction& f, Direction dir) {
  if (dir == Direction::concave_le && !f.concave())
    throw PreconditionError(
        "concave-le direction requires a concave function, got '" + f.name() +
        "'");
  if (dir == Direction::convex_ge && f.concave())
    throw PreconditionError(
        "convex-ge direction requires a convex function, got '" + f.name() +
        "'");
  return dir == Direction::concave_le ? f : negate(f);
}

void map_witness_to_f_terms(RelationVerdict& v, Direction dir) {
  if (dir == Direction::convex_ge && v.witness) {
    v.witness->lhs = -v.witness->lhs;
    v.witness->rhs = -v.witness->rhs;
  }
}

std::pair<RelationVerdict, RelationVerdict> dual_relation_check(
    const ScalarFunction& f, const HermitianMatrix& x, const HermitianMatrix& y,
    Direction dir, const RelationOptions& opts) {
  ScalarFunction h = normalized_concave(f, dir);
  RelationVerdict v1 = check_relation_tangent(h, x, y, opts);
  RelationVerdict v2 = check_relation_tangent(h, y, x, opts);
  map_witness_to_f_terms(v1, dir);
  map_witness_to_f_terms(v2, dir);
  return {v1, v2};
}

}  // namespace jorder
