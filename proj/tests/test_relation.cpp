#include <cmath>

#include "doctest.h"
#include "jorder/random_gen.hpp"
#include "jorder/relation.hpp"

using namespace jorder;

namespace {

HermitianMatrix scalar(double v) {
  Eigen::VectorXd d(1);
  d << v;
  return HermitianMatrix::diagonal(d);
}

HermitianMatrix diag2(double a, double b) {
  Eigen::VectorXd d(2);
  d << a, b;
  return HermitianMatrix::diagonal(d);
}

}  // namespace

TEST_CASE("tangent gap on scalar pairs") {
  ScalarFunction h = parse_function("sqrt");
  // A = 4, B = 1, base 1: 0.5*1 + 0.5 - 2 = -1.
  CHECK(tangent_gap(h, scalar(4), scalar(1), 1.0) ==
        doctest::Approx(-1.0).epsilon(1e-12));
  // A = 1, B = 4, base 4: 0.25*4 + 1 - 1 = 1.
  CHECK(tangent_gap(h, scalar(1), scalar(4), 4.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tangent method on the scalar violation") {
  ScalarFunction h = parse_function("sqrt");
  RelationVerdict v = check_relation_tangent(h, scalar(4), scalar(1));
  CHECK_FALSE(v.holds);
  CHECK(v.margin == doctest::Approx(-1.0).epsilon(1e-6));
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->lhs == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(v.witness->rhs == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(v.witness->vector(0)) == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(v.lambda_star.has_value());
  CHECK(*v.lambda_star == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("sphere method agrees on the scalar violation") {
  ScalarFunction h = parse_function("sqrt");
  RelationVerdict v = check_relation_sphere(h, scalar(4), scalar(1));
  CHECK_FALSE(v.holds);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->lhs == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(v.witness->rhs == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("identical operators satisfy the relation") {
  ScalarFunction h = parse_function("sqrt");
  Rng rng(mix_seed(11, 0));
  for (int trial = 0; trial < 8; ++trial) {
    const Eigen::Index dim = 1 + static_cast<Eigen::Index>(rng.uniform() * 5);
    HermitianMatrix a = random_hermitian(dim, 0.5, 10.0, rng);
    RelationVerdict vt = check_relation_tangent(h, a, a);
    RelationVerdict vs = check_relation_sphere(h, a, a);
    CHECK(vt.holds);
    CHECK(vs.holds);
    CHECK(vt.margin >= -relation_tolerance(h, a, a));
  }
}

TEST_CASE("methods agree on independent random pairs") {
  Rng rng(mix_seed(13, 0));
  for (const char* spec : {"sqrt", "pow:0.3", "log1p"}) {
    ScalarFunction h = parse_function(spec);
    for (int trial = 0; trial < 12; ++trial) {
      const Eigen::Index dim = 1 + static_cast<Eigen::Index>(rng.uniform() * 4);
      HermitianMatrix a = random_hermitian(dim, 0.5, 10.0, rng);
      HermitianMatrix b = random_hermitian(dim, 0.5, 10.0, rng);
      RelationOptions opts;
      opts.seed = mix_seed(13, static_cast<std::uint64_t>(trial) + 100);
      RelationVerdict vt = check_relation_tangent(h, a, b, opts);
      RelationVerdict vs = check_relation_sphere(h, a, b, opts);
      CHECK(vt.holds == vs.holds);
      if (!vt.holds) {
        REQUIRE(vt.witness.has_value());
        // The witness certifies the violation by direct evaluation.
        CHECK(vt.witness->lhs > vt.witness->rhs);
      }
    }
  }
}

TEST_CASE("witness quadratic form matches its reported values") {
  ScalarFunction h = parse_function("sqrt");
  HermitianMatrix a = diag2(9, 1);
  HermitianMatrix b = diag2(1, 9);
  RelationVerdict v = check_relation_tangent(h, a, b);
  CHECK_FALSE(v.holds);
  REQUIRE(v.witness.has_value());
  const Eigen::VectorXcd& xi = v.witness->vector;
  CHECK(std::abs(xi.norm() - 1.0) < 1e-10);
  HermitianMatrix ha = apply_function(h, a);
  const double lhs = (xi.adjoint() * ha.mat() * xi)(0).real();
  const double rhs = h.eval((xi.adjoint() * b.mat() * xi)(0).real());
  CHECK(lhs == doctest::Approx(v.witness->lhs).epsilon(1e-10));
  CHECK(rhs == doctest::Approx(v.witness->rhs).epsilon(1e-10));
  CHECK(lhs > rhs);
}

TEST_CASE("dual check splits the orderings") {
  ScalarFunction f = parse_function("sqrt");
  HermitianMatrix x = diag2(1, 2);
  HermitianMatrix y = diag2(1, 3);
  auto [first, second] = dual_relation_check(f, x, y, Direction::concave_le);
  CHECK(first.holds);
  CHECK_FALSE(second.holds);
  REQUIRE(second.witness.has_value());
  // The violation concentrates on the second eigenvector.
  CHECK(std::abs(second.witness->vector(1)) >
        std::abs(second.witness->vector(0)));
  CHECK(second.witness->lhs == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));
  CHECK(second.witness->rhs == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("convex direction negates into the concave machinery") {
  ScalarFunction f = parse_function("square");
  HermitianMatrix x = diag2(1, 2);
  auto [first, second] = dual_relation_check(f, x, x, Direction::convex_ge);
  CHECK(first.holds);
  CHECK(second.holds);
  CHECK_THROWS_AS(dual_relation_check(f, x, x, Direction::concave_le),
                  PreconditionError);
  CHECK_THROWS_AS(
      dual_relation_check(parse_function("sqrt"), x, x, Direction::convex_ge),
      PreconditionError);
}

TEST_CASE("convex violation maps the witness back to f terms") {
  ScalarFunction f = parse_function("square");
  // <f(X)v,v> >= f(<Yv,v>) fails for X = 1, Y = 2: 1 < 4.
  auto [first, second] =
      dual_relation_check(f, scalar(1), scalar(2), Direction::convex_ge);
  CHECK_FALSE(first.holds);
  REQUIRE(first.witness.has_value());
  CHECK(first.witness->lhs == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(first.witness->rhs == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(first.witness->lhs < first.witness->rhs);
  // Swapped ordering holds: <f(Y)v,v> = 4 >= f(<Xv,v>) = 1.
  CHECK(second.holds);
}

TEST_CASE("relation rejects mismatched dimensions") {
  ScalarFunction h = parse_function("sqrt");
  CHECK_THROWS_AS(check_relation_tangent(h, scalar(1), diag2(1, 2)),
                  PreconditionError);
}

TEST_CASE("relation rejects spectra outside the function domain") {
  ScalarFunction h = parse_function("sqrt");
  CHECK_THROWS_AS(check_relation_tangent(h, diag2(-1, 1), diag2(1, 2)),
                  DomainError);
}
