// Acceptance gate: one line per criterion, PASS/FAIL, nonzero exit when any
// criterion fails.  Runs against the library directly except for the last
// criterion, which shells out to the command-line binary.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "jorder/antisymmetry.hpp"
#include "jorder/io.hpp"
#include "jorder/random_gen.hpp"
#include "jorder/sandwich.hpp"

using namespace jorder;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", idx,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void guarded(int idx, const std::string& name,
             const std::function<std::pair<bool, std::string>()>& body) {
  try {
    auto [pass, detail] = body();
    report(idx, name, pass, detail);
  } catch (const std::exception& e) {
    report(idx, name, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

HermitianMatrix shift_up(const HermitianMatrix& m, double s) {
  Eigen::MatrixXcd t = m.mat();
  for (Eigen::Index i = 0; i < t.rows(); ++i) t(i, i) += s;
  return HermitianMatrix::from_exact(t);
}

// Agreement suite: equal / dominated / independent pairs in rotation.
std::pair<bool, std::string> method_agreement() {
  const std::vector<ScalarFunction> funcs = {parse_function("sqrt"),
                                             parse_function("pow:0.3"),
                                             parse_function("log1p")};
  const auto start = std::chrono::steady_clock::now();
  int agreed = 0;
  const int total = 200;
  for (int i = 0; i < total; ++i) {
    Rng rng(mix_seed(0, 0xA00000000ULL + i));
    const Eigen::Index dim = 1 + static_cast<Eigen::Index>(rng.uniform() * 6);
    HermitianMatrix a = random_hermitian(dim, 0.5, 10.0, rng);
    HermitianMatrix b;
    switch (i % 3) {
      case 0:
        b = a;
        break;
      case 1:
        b = shift_up(a, rng.uniform(0.25, 1.0));
        break;
      default:
        b = random_hermitian(dim, 0.5, 10.0, rng);
    }
    const ScalarFunction& h = funcs[static_cast<std::size_t>(i / 3) % 3];
    RelationOptions opts;
    opts.seed = mix_seed(0, 0xB00000000ULL + i);
    const RelationVerdict vt = check_relation_tangent(h, a, b, opts);
    const RelationVerdict vs = check_relation_sphere(h, a, b, opts);
    if (vt.holds == vs.holds) ++agreed;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  const bool pass = agreed == total && secs < 60.0;
  return {pass, std::to_string(agreed) + "/" + std::to_string(total) +
                    " agreed in " + fmt(secs) + " s"};
}

std::pair<bool, std::string> equality_and_violations() {
  const ScalarFunction square = parse_function("square");
  const ScalarFunction sqrt_f = parse_function("sqrt");
  int equal_ok = 0;
  for (int i = 0; i < 100; ++i) {
    Rng rng(mix_seed(0, 0xC00000000ULL + i));
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng.uniform() * 5);
    HermitianMatrix x = random_hermitian(dim, 0.5, 10.0, rng);
    const bool convex = (i % 2) == 0;
    PeelingOptions opts;
    opts.relation.seed = mix_seed(0, 0xC10000000ULL + i);
    const PeelingTrace t =
        decide_equal(convex ? square : sqrt_f, x, x,
                     convex ? Direction::convex_ge : Direction::concave_le,
                     opts);
    if (t.conclusion == PeelingConclusion::equal) ++equal_ok;
  }

  int witness_ok = 0;
  const Tolerances tol;
  for (int i = 0; i < 100; ++i) {
    Rng rng(mix_seed(0, 0xD00000000ULL + i));
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng.uniform() * 5);
    HermitianMatrix x = random_hermitian(dim, 0.5, 10.0, rng);
    HermitianMatrix y = random_hermitian(dim, 0.5, 10.0, rng);
    for (int tries = 0;
         spectral_norm(x.mat() - y.mat()) < 0.1 && tries < 32; ++tries)
      y = random_hermitian(dim, 0.5, 10.0, rng);
    if (spectral_norm(x.mat() - y.mat()) < 0.1) y = shift_up(y, 0.15);

    RelationOptions opts;
    opts.seed = mix_seed(0, 0xD10000000ULL + i);
    const auto hit = find_violation(sqrt_f, x, y, Direction::concave_le, opts);
    if (!hit || !hit->verdict.witness) continue;
    const Witness& w = *hit->verdict.witness;
    const HermitianMatrix& a = hit->ordering == 1 ? x : y;
    const HermitianMatrix& b = hit->ordering == 1 ? y : x;
    const HermitianMatrix ha = apply_function(sqrt_f, a);
    const double lhs = (w.vector.adjoint() * ha.mat() * w.vector)(0).real();
    const double bq = (w.vector.adjoint() * b.mat() * w.vector)(0).real();
    const double rhs = std::sqrt(bq);
    const bool unit = std::abs(w.vector.norm() - 1.0) < 1e-9;
    if (unit && lhs - rhs > tol.psd_tol(ha.operator_norm())) ++witness_ok;
  }

  const bool pass = equal_ok == 100 && witness_ok == 100;
  return {pass, std::to_string(equal_ok) + "/100 certified equal, " +
                    std::to_string(witness_ok) + "/100 verified witnesses"};
}

std::pair<bool, std::string> envelope_sweeps() {
  const ScalarFunction f = parse_function("sqrt");
  SandwichConstants cs(f, f, 1.0, 16.0);
  const int n = 100;
  double min_q = 1e300, min_i = 1e300;
  for (int i = 0; i <= n; ++i) {
    const double lambda = 1.0 + 15.0 * i / n;
    for (int j = 0; j <= n; ++j) {
      const double t = 1.0 + 15.0 * j / n;
      min_q = std::min(min_q, cs.quadratic_gap(lambda, t));
      min_i = std::min(min_i, cs.inverse_quadratic_gap(lambda, t));
    }
  }
  const bool grid_ok = min_q >= -1e-12 && min_i >= -1e-12;
  const bool c_ok = std::abs(cs.c_raw() / 0.375 - 1.0) <= 0.10;
  return {grid_ok && c_ok, "min gaps " + fmt(min_q) + " / " + fmt(min_i) +
                               ", c_raw " + fmt(cs.c_raw())};
}

std::pair<bool, std::string> block_inverse_identity() {
  int ok = 0;
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    Rng rng(mix_seed(0, 0xE00000000ULL + i));
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng.uniform() * 7);
    HermitianMatrix m = random_hermitian(dim, 0.5, 10.0, rng);
    const Eigen::Index rank =
        1 + static_cast<Eigen::Index>(rng.uniform() * (dim - 1));
    Projection p =
        Projection::from_basis(haar_unitary(dim, rng).leftCols(rank));
    const double res = block_inverse_residual(m, p);
    const double cap = 1e-10 * (1.0 + m.operator_norm());
    worst = std::max(worst, res / cap);
    if (res <= cap) ++ok;
  }
  return {ok == 100,
          std::to_string(ok) + "/100, worst residual ratio " + fmt(worst)};
}

std::pair<bool, std::string> partition_audit_decay() {
  const ScalarFunction f = parse_function("sqrt");
  int all_pass = 0;
  bool ratios_ok = true;
  double ratio_lo = 1e300, ratio_hi = 0;
  for (int i = 0; i < 20; ++i) {
    Rng rng(mix_seed(0, 0xF00000000ULL + i));
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng.uniform() * 5);
    HermitianMatrix x = random_hermitian(dim, 1.0, 16.0, rng);
    const double b = x.operator_norm() + 1.0;
    bool every_n = true;
    double rhs4 = 0, rhs256 = 0;
    for (int n = 2; n <= 256; n *= 2) {
      const DiscretizationReport rep = discretize(f, f, x, x, 0.5, b, n);
      every_n = every_n && rep.pass;
      if (n == 4) rhs4 = rep.final_bound.rhs;
      if (n == 256) rhs256 = rep.final_bound.rhs;
    }
    if (every_n) ++all_pass;
    const double ratio = rhs4 / rhs256;
    ratio_lo = std::min(ratio_lo, ratio);
    ratio_hi = std::max(ratio_hi, ratio);
    if (!(ratio > 6.0 && ratio < 10.0)) ratios_ok = false;
  }
  return {all_pass == 20 && ratios_ok,
          std::to_string(all_pass) + "/20 full sweeps passed, decay ratios in [" +
              fmt(ratio_lo) + ", " + fmt(ratio_hi) + "]"};
}

std::pair<bool, std::string> spectral_floor_blowup() {
  double prev = 0;
  bool increasing = true;
  for (double lambda = 1e-2; lambda > 0.5e-8; lambda /= 10.0) {
    const double r = sqrt_pair_gap_ratio(1.0, lambda);
    if (r <= prev) increasing = false;
    prev = r;
  }
  const double at7 = sqrt_pair_gap_ratio(1.0, 1e-7);
  return {increasing && at7 > 1e3,
          std::string(increasing ? "monotone" : "not monotone") +
              ", ratio at 1e-7 is " + fmt(at7)};
}

std::pair<bool, std::string> kernel_mismatch() {
  Rng rng(mix_seed(0, 77));
  const Eigen::MatrixXcd u = haar_unitary(3, rng);
  Eigen::Vector3d dx(0.0, 1.0, 2.0), dy(0.01, 1.0, 2.0);
  const HermitianMatrix x = HermitianMatrix::symmetrized(
      u * dx.cast<Complex>().asDiagonal() * u.adjoint());
  const HermitianMatrix y = HermitianMatrix::symmetrized(
      u * dy.cast<Complex>().asDiagonal() * u.adjoint());
  const bool mismatch = !kernel_match(x, y);
  const ScalarFunction f = parse_function("sqrt");
  auto [left, right] = check_sandwich(f, f, x, y);
  if (right.holds || !right.witness)
    return {false, "right inequality did not produce a witness"};
  const Eigen::VectorXcd kernel_dir = u.col(0);
  const double overlap = std::norm(kernel_dir.dot(right.witness->vector));
  return {mismatch && overlap >= 0.99,
          std::string(mismatch ? "kernels differ" : "kernels matched") +
              ", witness overlap " + fmt(overlap)};
}

std::pair<bool, std::string> deterministic_fuzz() {
  std::filesystem::create_directories("acc_scratch");
  auto invoke = [](const std::string& tag) -> int {
    const std::string cmd = std::string(JORDER_CLI_PATH) +
                            " fuzz --count 200 --seed 0 --out acc_scratch/" +
                            tag + ".json --dump-dir acc_scratch/dumps" +
                            " > acc_scratch/" + tag + ".log 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  const int c1 = invoke("f1");
  const int c2 = invoke("f2");
  if (c1 != 0 || c2 != 0)
    return {false, "exit codes " + std::to_string(c1) + " and " +
                       std::to_string(c2)};
  const std::string b1 = read_text_file("acc_scratch/f1.json");
  const std::string b2 = read_text_file("acc_scratch/f2.json");
  return {b1 == b2 && !b1.empty(),
          b1 == b2 ? "two runs byte-identical (" +
                         std::to_string(b1.size()) + " bytes)"
                   : "outputs differ"};
}

}  // namespace

int main() {
  guarded(1, "method agreement on random pairs", method_agreement);
  guarded(2, "equality certification and violation hunting",
          equality_and_violations);
  guarded(3, "envelope gap sweeps and certified constant", envelope_sweeps);
  guarded(4, "block inverse identity residuals", block_inverse_identity);
  guarded(5, "partition audit pass and decay rate", partition_audit_decay);
  guarded(6, "spectral floor blow-up of the gap ratio", spectral_floor_blowup);
  guarded(7, "kernel mismatch detection with witness", kernel_mismatch);
  guarded(8, "deterministic seeded fuzz output", deterministic_fuzz);
  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
