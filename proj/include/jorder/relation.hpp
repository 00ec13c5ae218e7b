#ifndef JORDER_RELATION_HPP_
#define JORDER_RELATION_HPP_

#include <cstdint>
#include <optional>
#include <utility>

#include "jorder/hermitian.hpp"
#include "jorder/scalar_function.hpp"
#include "jorder/tolerances.hpp"

namespace jorder {

// Which scalar inequality is being asserted between the two operators:
// concave f with <= on the first slot, or convex f with >=.
enum class Direction { concave_le, convex_ge };

enum class Method { tangent, sphere };

struct RelationOptions {
  int lambda_grid = 512;  // coarse scan resolution for the tangent method
  int restarts = 64;      // random restarts for the sphere method
  int max_iters = 500;    // projected-gradient iterations per restart
  std::uint64_t seed = 0;
  Tolerances tol{};
};

struct Witness {
  Eigen::VectorXcd vector;  // unit vector
  double lhs;               // <h(A) v, v>
  double rhs;               // h(<B v, v>)
};

struct RelationVerdict {
  bool holds = true;
  double margin = 0.0;
  Method method = Method::tangent;
  std::optional<double> lambda_star;  // tangent method only
  int restarts = 0;                   // sphere method only
  std::uint64_t seed = 0;
  std::optional<Witness> witness;
};

// Loewner gap of the tangent comparison at a single base point:
//   lambda_min( h'(l) B + (h(l) - l h'(l)) I - h(A) ).
// For concave h the relation <h(A)v,v> <= h(<Bv,v>) over all unit v is
// equivalent to this gap being >= 0 for every l in the numerical range of B,
// because h is the lower envelope of its tangent lines.
double tangent_gap(const ScalarFunction& h, const HermitianMatrix& a,
                   const HermitianMatrix& b, double lambda,
                   const Tolerances& tol = {});

// Acceptance threshold shared by both methods so their verdicts agree:
// psd_rel * (1 + ||h(A)|| + max |h| over the spectral range of B).
double relation_tolerance(const ScalarFunction& h, const HermitianMatrix& a,
                          const HermitianMatrix& b, const Tolerances& tol = {});

// Exhaustive method: coarse scan of the tangent gap over the numerical range
// of B followed by golden-section refinement of every near-minimal bracket.
// Requires concave h.
RelationVerdict check_relation_tangent(const ScalarFunction& h,
                                       const HermitianMatrix& a,
                                       const HermitianMatrix& b,
                                       const RelationOptions& opts = {});

// Oracle method: projected-gradient descent of
//   phi(v) = h(<Bv,v>) - <h(A)v,v>
// on the unit sphere with deterministic random restarts.  Works for any h.
RelationVerdict check_relation_sphere(const ScalarFunction& h,
                                      const HermitianMatrix& a,
                                      const HermitianMatrix& b,
                                      const RelationOptions& opts = {});

// Validates the (curvature, direction) pairing and returns the concave
// comparison function: f itself for concave_le, -f for convex_ge.
ScalarFunction normalized_concave(const ScalarFunction& f, Direction dir);

// Rewrites a verdict's witness from normalized concave terms back to the
// caller's f terms (sign flip when dir is convex_ge).
void map_witness_to_f_terms(RelationVerdict& v, Direction dir);

// Both orderings of the hypothesis pair: first <f(X)v,v> vs f(<Yv,v>), then
// the same with X and Y swapped.  The concave machinery always sees a concave
// function; for convex_ge the comparison runs on -f and witnesses are mapped
// back to f terms.
std::pair<RelationVerdict, RelationVerdict> dual_relation_check(
    const ScalarFunction& f, const HermitianMatrix& x, const HermitianMatrix& y,
    Direction dir, const RelationOptions& opts = {});

}  // namespace jorder

#endif  // JORDER_RELATION_HPP_
