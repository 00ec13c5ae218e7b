#ifndef JORDER_ANTISYMMETRY_HPP_
#define JORDER_ANTISYMMETRY_HPP_

#include <optional>
#include <vector>

#include "jorder/relation.hpp"

namespace jorder {

enum class StepStatus { ok, norm_mismatch, tolerance_exceeded };

// One level of the top-eigenspace peeling argument.  With both vector-state
// inequalities assumed, the shifted convex image must attain equal norms on
// both sides, the top eigenspace Q of the second side must reduce the first,
// and the originals must agree on Q; the residuals quantify each claim.
struct PeelingStep {
  int level = 0;
  Eigen::Index subspace_dim = 0;
  double norm_fx = 0;  // top value of f on this level's first compression
  double norm_fy = 0;
  double norm_gap = 0;
  double factorization_residual = 0;  // ||(s - f(X))^{1/2} Q||
  double commutation_residual = 0;    // ||[Q, f(X)]||
  double equality_residual = 0;       // ||(X - Y) Q||
  StepStatus status = StepStatus::ok;
  Projection top_eigenspace;  // Q, on the level's basis
};

enum class PeelingConclusion { equal, premise_violated, tolerance_exceeded };

struct ViolationReport {
  int ordering = 0;  // 1: first slot as given, 2: operators swapped
  RelationVerdict verdict;
};

struct PeelingTrace {
  PeelingConclusion conclusion = PeelingConclusion::tolerance_exceeded;
  double shift = 0;      // positivity shift added to the convex image
  double final_gap = 0;  // ||X - Y||
  double max_residual = 0;
  std::uint64_t seed = 0;
  std::vector<PeelingStep> steps;
  std::optional<ViolationReport> violation;
};

struct PeelingOptions {
  RelationOptions relation{};
  Tolerances tol{};
};

// A single peel of the top eigenspace, on f as given (f must be convex: the
// >= hypothesis direction).  The shift is chosen internally from the joint
// spectral range.
PeelingStep peel_once(const ScalarFunction& f, const HermitianMatrix& x,
                      const HermitianMatrix& y, const Tolerances& tol = {});

// Full decision procedure: check both vector-state inequalities, then peel
// top eigenspaces until the space is exhausted, and conclude X = Y, a
// violated premise (with witness), or a tolerance failure.  concave_le
// hypotheses are negated into the convex >= form first.
PeelingTrace decide_equal(const ScalarFunction& f, const HermitianMatrix& x,
                          const HermitianMatrix& y, Direction dir,
                          const PeelingOptions& opts = {});

// Hunts for a concrete unit-vector violation of either ordering: tangent
// method first (exhaustive for concave comparisons), then sphere descent.
std::optional<ViolationReport> find_violation(const ScalarFunction& f,
                                              const HermitianMatrix& x,
                                              const HermitianMatrix& y,
                                              Direction dir,
                                              const RelationOptions& opts = {});

}  // namespace jorder

#endif  // JORDER_ANTISYMMETRY_HPP_
