#ifndef JORDER_SANDWICH_HPP_
#define JORDER_SANDWICH_HPP_

#include <utility>
#include <vector>

#include "jorder/relation.hpp"

namespace jorder {

// Both halves of the composed hypothesis
//   <(g.f)(X)v,v> <= g(<f(Y)v,v>) <= (g.f)(<Xv,v>)
// as relation checks: left with h=g on (f(X), f(Y)), right with h=f on (Y, X).
// Requires concave increasing f, g and positive X, Y.
std::pair<RelationVerdict, RelationVerdict> check_sandwich(
    const ScalarFunction& f, const ScalarFunction& g, const HermitianMatrix& x,
    const HermitianMatrix& y, const RelationOptions& opts = {});

// The two-sided operator envelope around f(Y) induced by the hypothesis,
// anchored at base point lambda:
//   [(g.f)(X) + (f(l)g'(f(l)) - g(f(l))) I] / g'(f(l))  <=  f(Y)
//   f(Y)  <=  f'(l) X + (f(l) - l f'(l)) I.
// Returns (lower, upper).
std::pair<HermitianMatrix, HermitianMatrix> envelope_bounds(
    const ScalarFunction& f, const ScalarFunction& g, const HermitianMatrix& x,
    double lambda, const Tolerances& tol = {});

// Certified constants for the quadratic envelope estimates on the box
// [a,b]^2: c dominates the curvature defect of the scalar envelope width and
// alpha lifts the lower envelope to >= 1 so it can be inverted.  Both come
// from a grid maximization with a safety margin, and the defining grid
// inequalities are re-validated at construction.
class SandwichConstants {
 public:
  SandwichConstants(const ScalarFunction& f, const ScalarFunction& g, double a,
                    double b, int grid = 200);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double alpha() const { return alpha_; }
  double c_raw() const { return c_raw_; }
  double alpha_raw() const { return alpha_raw_; }
  int grid() const { return grid_; }
  const ScalarFunction& f() const { return f_; }
  const ScalarFunction& g() const { return g_; }

  // Scalar envelope values at (lambda, t) in the box.
  double upper_value(double lambda, double t) const;  // tangent of f at lambda
  double lower_value(double lambda, double t) const;  // composed lower chord

  // c (t-l)^2 - (upper - lower); nonnegative under valid constants.
  double quadratic_gap(double lambda, double t) const;

  // c (t-l)^2 - (1/q - 1/p) with p = upper + alpha, q = lower + alpha;
  // both p and q must have been lifted to >= 1 by alpha.
  double inverse_quadratic_gap(double lambda, double t) const;

 private:
  void check_box(double lambda, double t) const;

  ScalarFunction f_;
  ScalarFunction g_;
  double a_, b_, c_, alpha_, c_raw_, alpha_raw_;
  int grid_;
};

struct BoundCheck {
  double lhs = 0;
  double rhs = 0;
  bool pass = true;
};

// Residuals and the two single-projection bounds:
//   (1) ||(f(X)+a)P - P(f(Y)+a)P||            <= c ||XP - lP||^2
//   (2) ||P(f(Y)+a)P - (P(f(Y)+a)^{-1}P)^{-1}|| <= (1+(f(b)+a)^2) c ||XP - lP||^2
// rho_lower / rho_upper are the most negative Loewner gaps of the envelope
// premises over a 64-point lambda grid, clamped to <= 0; failing premises
// widen the acceptance band by K * max(0, -rho).
struct BoundAudit {
  double rho_lower = 0;
  double rho_upper = 0;
  double slack_multiplier = 0;  // K = dim * (1 + ||f(Y)|| + alpha)^2
  double slack = 0;
  BoundCheck projector_bound;
  BoundCheck inverse_bound;
};

BoundAudit audit_bounds(const ScalarFunction& f, const ScalarFunction& g,
                        const HermitianMatrix& x, const HermitianMatrix& y,
                        const SandwichConstants& cs, const Projection& p,
                        double lambda, const Tolerances& tol = {});

// Spectral partition of X over [a, b) into n equal cells.  lambdas are the
// ideal left endpoints; cuts may be nudged off eigenvalue collisions so the
// half-open assignment is numerically stable.
struct PartitionScheme {
  double a = 0;
  double b = 0;
  int n = 0;
  std::vector<double> lambdas;
  std::vector<double> cuts;
  std::vector<Projection> cells;
  std::vector<int> skipped;  // indices of rank-0 cells
  Projection window;         // sum of the cells = spectral window of [a, b)
  bool near_boundary = false;
};

PartitionScheme build_partition(const HermitianMatrix& x, double a, double b,
                                int n, const Tolerances& tol = {});

struct DiscretizationReport {
  int n = 0;
  double a = 0;
  double b = 0;
  double c = 0;
  double alpha = 0;
  double rho_lower = 0;
  double rho_upper = 0;
  double slack_multiplier = 0;
  double slack = 0;
  BoundCheck bound1;       // worst cell of (1)
  BoundCheck bound2;       // worst cell of (2)
  BoundCheck bound3;       // summed projector bound, rhs c(b-a)^2/n^2
  BoundCheck bound4;       // cross terms, rhs sqrt((f(b)+a)(1+(f(b)+a)^2)c(b-a)^2/n)
  BoundCheck final_bound;  // ||f(X)w - f(Y)w|| vs rhs3 + rhs4
  bool kernels_match = false;
  bool near_boundary = false;
  std::vector<int> skipped_cells;
  bool pass = false;
};

DiscretizationReport discretize(const ScalarFunction& f, const ScalarFunction& g,
                                const HermitianMatrix& x, const HermitianMatrix& y,
                                double a, double b, int n,
                                const Tolerances& tol = {});

// Width of the sqrt/sqrt scalar envelope divided by its quadratic target:
//   [t/(2 sqrt(l)) + 3 sqrt(l)/2 - 2 l^{1/4} t^{1/4}] / (t - l)^2.
// Unbounded as l -> 0, which is why the quadratic estimate needs a spectral
// floor a > 0.
double sqrt_pair_gap_ratio(double t, double lambda);

// The explicit minorant 2 (l X)^{1/2} - l I for the sqrt/sqrt pair, together
// with its smallest eigenvalue; it loses positivity once l exceeds the scale
// of X, so it cannot substitute for the spectral floor.
std::pair<HermitianMatrix, double> sqrt_pair_minorant(const HermitianMatrix& x,
                                                      double lambda);

}  // namespace jorder

#endif  // JORDER_SANDWICH_HPP_
