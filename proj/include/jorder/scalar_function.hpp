#ifndef JORDER_SCALAR_FUNCTION_HPP_
#define JORDER_SCALAR_FUNCTION_HPP_

#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jorder/errors.hpp"

namespace jorder {

// Monotonicity is strict throughout: every function the toolkit accepts is
// either strictly increasing or strictly decreasing on its domain.
enum class Monotonicity { increasing, decreasing };

// Curvature is weak: affine functions carry the concave tag so they can ride
// along with the concave machinery (their second derivative vanishes).
enum class Curvature { concave, convex };

// Interval of validity.  eval() may touch a closed endpoint; first and second
// derivatives exist only on the open interior.
struct FunctionDomain {
  double lo;
  double hi;
  bool lo_closed;
  bool hi_closed;

  static FunctionDomain all();
  static FunctionDomain from(double lo, bool lo_closed);

  // Snaps t onto a closed endpoint when it lies within `slack` outside of it;
  // throws DomainError when t is genuinely out of range.
  double clamp_eval(double t, double slack) const;
  bool admits_eval(double t, double slack) const;
  bool admits_deriv(double t) const;  // strict interior only

  // [lo', hi'] on which derivative evaluation is safe, obtained by nudging
  // finite endpoints inward by nudge_rel * (1 + |endpoint|).
  std::pair<double, double> deriv_window(double nudge_rel) const;
};

// A C^2 scalar function together with the metadata the order-theoretic
// routines dispatch on.  Values are computed through stored callables, so
// composites and negations stay first-class citizens.
class ScalarFunction {
 public:
  using Fn = std::function<double(double)>;

  ScalarFunction(std::string name, FunctionDomain domain, Monotonicity mono,
                 Curvature curv, Fn eval, Fn d1, Fn d2);

  // All three throw DomainError outside their window; eval() forgives
  // roundoff-level excursions past a closed endpoint by clamping.
  double eval(double t) const;
  double deriv1(double t) const;
  double deriv2(double t) const;

  const std::string& name() const { return name_; }
  const FunctionDomain& domain() const { return domain_; }
  Monotonicity monotonicity() const { return mono_; }
  Curvature curvature() const { return curv_; }
  bool increasing() const { return mono_ == Monotonicity::increasing; }
  bool concave() const { return curv_ == Curvature::concave; }

 private:
  std::string name_;
  FunctionDomain domain_;
  Monotonicity mono_;
  Curvature curv_;
  Fn eval_;
  Fn d1_;
  Fn d2_;
};

// Built-in families: sqrt, log1p, square (no parameters), pow:p with
// p in (0,1) or (1,inf), affine:a,b with a != 0.
ScalarFunction builtin_function(const std::string& name,
                                const std::vector<double>& params = {});

// Mini-language: `name[:p1[,p2]]`, `neg(expr)`, `compose(outer,inner)`.
// Examples: "sqrt", "pow:0.3", "affine:2,1", "compose(sqrt,sqrt)",
// "neg(square)".  Whitespace is not accepted.
ScalarFunction parse_function(std::string_view spec);

// Composition outer(inner(.)).  Requires an increasing outer and matching
// curvatures (concave@concave -> concave, convex@convex -> convex); any other
// combination throws UnsupportedComposition.  The domain is the part of
// inner's domain whose image stays inside outer's domain.
ScalarFunction compose(const ScalarFunction& outer, const ScalarFunction& inner);

// Pointwise negation; flips monotonicity and curvature.
ScalarFunction negate(const ScalarFunction& f);

// f + c with unchanged metadata.  Used to normalize signs before peeling.
ScalarFunction shift_by(const ScalarFunction& f, double c);

// First-order expansion h(base) + slope*(t - base) stored in slope/intercept
// form; for concave h it majorizes h, for convex h it minorizes.
struct TangentLine {
  double base;
  double slope;
  double intercept;

  double operator()(double t) const { return slope * t + intercept; }
};

TangentLine tangent(const ScalarFunction& h, double lambda);

}  // namespace jorder

#endif  // JORDER_SCALAR_FUNCTION_HPP_
