#include <cstdint>
#include <cstdio>
#include <charconv>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "jorder/antisymmetry.hpp"
#include "jorder/fuzz.hpp"
#include "jorder/io.hpp"
#include "jorder/relation.hpp"
#include "jorder/sandwich.hpp"
#include "jorder/version.hpp"

namespace {

using jorder::Json;

// Exit codes: 0 analysis ok, 1 usage or data error, 2 relation or premise
// violated, 3 tolerance exceeded / numerics inconclusive.
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kViolated = 2;
constexpr int kInconclusive = 3;

struct CommonOpts {
  std::string out;
  std::uint64_t seed = 0;
  jorder::Tolerances tol{};
  int restarts = 64;
  int lambda_grid = 512;
  int max_iters = 500;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--out", c.out, "write the report to this file instead of stdout");
  cmd->add_option("--seed", c.seed, "seed for randomized searches")
      ->capture_default_str();
  cmd->add_option("--restarts", c.restarts, "sphere-search restarts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--grid", c.lambda_grid, "tangent scan resolution")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-iters", c.max_iters, "descent iterations per restart")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--tol-psd", c.tol.psd_rel, "relative positive-gap tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol-cluster", c.tol.cluster_rel,
                  "eigenvalue clustering tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol-proj", c.tol.proj_abs,
                  "projection comparison tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol-norm-match", c.tol.norm_match_rel,
                  "norm equality tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol-equal", c.tol.equal_rel, "final equality tolerance")
      ->check(CLI::PositiveNumber);
}

jorder::RelationOptions relation_opts(const CommonOpts& c) {
  jorder::RelationOptions o;
  o.lambda_grid = c.lambda_grid;
  o.restarts = c.restarts;
  o.max_iters = c.max_iters;
  o.seed = c.seed;
  o.tol = c.tol;
  return o;
}

jorder::Direction parse_direction(const std::string& s) {
  if (s == "concave-le") return jorder::Direction::concave_le;
  if (s == "convex-ge") return jorder::Direction::convex_ge;
  throw jorder::ParseError("direction must be concave-le or convex-ge, got '" +
                           s + "'");
}

void emit(const CommonOpts& c, const std::string& text) {
  if (c.out.empty())
    std::fputs(text.c_str(), stdout);
  else
    jorder::write_text_file(c.out, text);
}

std::string csv_preamble(std::uint64_t seed) {
  return std::string("# version ") + jorder::kVersion + "\n# seed " +
         std::to_string(seed) + "\n";
}

void print_witness(const char* label, const jorder::RelationVerdict& v) {
  std::printf("%s violated: margin %s", label,
              jorder::format_double17(v.margin).c_str());
  if (v.witness) {
    std::printf(", witness lhs %s > rhs %s, vector [",
                jorder::format_double17(v.witness->lhs).c_str(),
                jorder::format_double17(v.witness->rhs).c_str());
    for (Eigen::Index i = 0; i < v.witness->vector.size(); ++i) {
      if (i) std::printf(", ");
      std::printf("(%.6g, %.6g)", v.witness->vector(i).real(),
                  v.witness->vector(i).imag());
    }
    std::printf("]");
  }
  std::printf("\n");
}

struct CheckArgs {
  std::string x, y, f = "sqrt", dir;
  bool one_sided = false;
  std::string format = "json";
  CommonOpts common;
};

int run_check(const CheckArgs& a) {
  const jorder::ScalarFunction f = jorder::parse_function(a.f);
  const jorder::Direction dir = parse_direction(a.dir);
  const jorder::HermitianMatrix x = jorder::load_matrix(a.x);
  const jorder::HermitianMatrix y = jorder::load_matrix(a.y);
  const jorder::RelationOptions opts = relation_opts(a.common);

  Json rep = Json::object();
  rep["version"] = jorder::kVersion;
  rep["seed"] = a.common.seed;
  rep["f"] = a.f;
  rep["direction"] = a.dir;

  bool holds = false;
  std::vector<std::pair<const char*, jorder::RelationVerdict>> shown;
  if (a.one_sided) {
    const jorder::ScalarFunction h = jorder::normalized_concave(f, dir);
    jorder::RelationVerdict vt = jorder::check_relation_tangent(h, x, y, opts);
    jorder::RelationVerdict vs = jorder::check_relation_sphere(h, x, y, opts);
    jorder::map_witness_to_f_terms(vt, dir);
    jorder::map_witness_to_f_terms(vs, dir);
    rep["tangent"] = jorder::verdict_to_json(vt);
    rep["sphere"] = jorder::verdict_to_json(vs);
    holds = vt.holds;
    shown.emplace_back("tangent", std::move(vt));
    shown.emplace_back("sphere", std::move(vs));
  } else {
    auto [v1, v2] = jorder::dual_relation_check(f, x, y, dir, opts);
    rep["left"] = jorder::verdict_to_json(v1);
    rep["right"] = jorder::verdict_to_json(v2);
    holds = v1.holds && v2.holds;
    shown.emplace_back("left ordering", std::move(v1));
    shown.emplace_back("right ordering", std::move(v2));
  }
  rep["holds"] = holds;

  if (a.format == "pretty") {
    std::printf("relation (%s, f = %s): %s\n", a.dir.c_str(), a.f.c_str(),
                holds ? "holds" : "violated");
    for (const auto& [label, v] : shown)
      std::printf("  %s: margin %s (%s)\n", label,
                  jorder::format_double17(v.margin).c_str(),
                  v.holds ? "ok" : "violated");
  } else {
    emit(a.common, jorder::dump_json17(rep));
  }
  for (const auto& [label, v] : shown)
    if (!v.holds) print_witness(label, v);
  return holds ? kOk : kViolated;
}

struct DecideArgs {
  std::string x, y, f = "square", dir;
  CommonOpts common;
};

void print_trace_table(const jorder::PeelingTrace& t) {
  std::printf("conclusion: %s\n", jorder::conclusion_name(t.conclusion));
  std::printf("shift %.6g, final gap %.6g, max residual %.6g, seed %llu\n",
              t.shift, t.final_gap, t.max_residual,
              static_cast<unsigned long long>(t.seed));
  std::printf("%-5s %-4s %-12s %-12s %-10s %-10s %-10s %-10s %s\n", "level",
              "dim", "norm_fx", "norm_fy", "gap", "fact", "comm", "eq",
              "status");
  for (const jorder::PeelingStep& s : t.steps)
    std::printf("%-5d %-4lld %-12.6g %-12.6g %-10.3g %-10.3g %-10.3g %-10.3g %s\n",
                s.level, static_cast<long long>(s.subspace_dim), s.norm_fx,
                s.norm_fy, s.norm_gap, s.factorization_residual,
                s.commutation_residual, s.equality_residual,
                jorder::step_status_name(s.status));
  if (t.violation) {
    std::printf("premise witness in ordering %d:\n", t.violation->ordering);
    print_witness("  relation", t.violation->verdict);
  }
}

int run_decide_equal(const DecideArgs& a) {
  const jorder::ScalarFunction f = jorder::parse_function(a.f);
  const jorder::Direction dir = parse_direction(a.dir);
  const jorder::HermitianMatrix x = jorder::load_matrix(a.x);
  const jorder::HermitianMatrix y = jorder::load_matrix(a.y);

  jorder::PeelingOptions opts;
  opts.relation = relation_opts(a.common);
  opts.tol = a.common.tol;
  const jorder::PeelingTrace trace = jorder::decide_equal(f, x, y, dir, opts);

  print_trace_table(trace);

  Json rep = Json::object();
  rep["version"] = jorder::kVersion;
  rep["seed"] = a.common.seed;
  rep["f"] = a.f;
  rep["direction"] = a.dir;
  rep["trace"] = jorder::trace_to_json(trace);
  emit(a.common, jorder::dump_json17(rep));

  switch (trace.conclusion) {
    case jorder::PeelingConclusion::equal:
      return kOk;
    case jorder::PeelingConclusion::premise_violated:
      return kViolated;
    default:
      return kInconclusive;
  }
}

struct SandwichArgs {
  std::string x, y, f = "sqrt", g = "sqrt";
  std::string format = "json";
  CommonOpts common;
};

int run_sandwich(const SandwichArgs& a) {
  const jorder::ScalarFunction f = jorder::parse_function(a.f);
  const jorder::ScalarFunction g = jorder::parse_function(a.g);
  const jorder::HermitianMatrix x = jorder::load_matrix(a.x);
  const jorder::HermitianMatrix y = jorder::load_matrix(a.y);
  const jorder::RelationOptions opts = relation_opts(a.common);

  auto [left, right] = jorder::check_sandwich(f, g, x, y, opts);
  const bool kernels = jorder::kernel_match(x, y, a.common.tol);
  const bool holds = left.holds && right.holds && kernels;

  Json rep = Json::object();
  rep["version"] = jorder::kVersion;
  rep["seed"] = a.common.seed;
  rep["f"] = a.f;
  rep["g"] = a.g;
  rep["left"] = jorder::verdict_to_json(left);
  rep["right"] = jorder::verdict_to_json(right);
  rep["kernel_match"] = kernels;
  rep["holds"] = holds;

  if (a.format == "pretty") {
    std::printf("sandwich (f = %s, g = %s): %s\n", a.f.c_str(), a.g.c_str(),
                holds ? "holds" : "violated");
    std::printf("  left: margin %s (%s)\n",
                jorder::format_double17(left.margin).c_str(),
                left.holds ? "ok" : "violated");
    std::printf("  right: margin %s (%s)\n",
                jorder::format_double17(right.margin).c_str(),
                right.holds ? "ok" : "violated");
    std::printf("  kernel projections %s\n", kernels ? "match" : "differ");
  } else {
    emit(a.common, jorder::dump_json17(rep));
  }
  if (!left.holds) print_witness("left", left);
  if (!right.holds) print_witness("right", right);
  if (!kernels && left.holds && right.holds)
    std::printf("kernel projections differ\n");
  return holds ? kOk : kViolated;
}

struct DiscretizeArgs {
  std::string x, y, f = "sqrt", g = "sqrt";
  double a = 0.5;
  double b = 0;
  int n = 0;
  std::vector<int> n_list;
  std::string format = "csv";
  CommonOpts common;
};

int run_discretize(const DiscretizeArgs& a) {
  const jorder::ScalarFunction f = jorder::parse_function(a.f);
  const jorder::ScalarFunction g = jorder::parse_function(a.g);
  const jorder::HermitianMatrix x = jorder::load_matrix(a.x);
  const jorder::HermitianMatrix y = jorder::load_matrix(a.y);

  std::vector<int> ns = a.n_list;
  if (ns.empty() && a.n >= 1) ns.push_back(a.n);
  if (ns.empty())
    throw jorder::ParseError("discretize needs --n or --n-list");
  for (int n : ns)
    if (n < 1)
      throw jorder::ParseError("partition sizes must be >= 1, got " +
                               std::to_string(n));

  std::vector<jorder::DiscretizationReport> reports;
  reports.reserve(ns.size());
  bool all_pass = true;
  for (int n : ns) {
    reports.push_back(jorder::discretize(f, g, x, y, a.a, a.b, n, a.common.tol));
    all_pass = all_pass && reports.back().pass;
  }

  if (a.format == "json") {
    Json rep = Json::object();
    rep["version"] = jorder::kVersion;
    rep["seed"] = a.common.seed;
    rep["f"] = a.f;
    rep["g"] = a.g;
    rep["a"] = a.a;
    rep["b"] = a.b;
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(jorder::discretization_to_json(r));
    rep["reports"] = arr;
    rep["pass"] = all_pass;
    emit(a.common, jorder::dump_json17(rep));
  } else {
    std::string csv = csv_preamble(a.common.seed);
    csv += jorder::discretization_csv_header();
    csv += '\n';
    for (const auto& r : reports) {
      csv += jorder::discretization_csv_row(r);
      csv += '\n';
    }
    emit(a.common, csv);
  }
  return all_pass ? kOk : kInconclusive;
}

struct Remark36Args {
  double t = 1.0;
  std::vector<double> lambdas;
  std::string minorant;  // matrix path switches to minorant mode
  double lambda = 1.0;
  CommonOpts common;
};

int run_remark36(const Remark36Args& a) {
  if (!a.minorant.empty()) {
    const jorder::HermitianMatrix x = jorder::load_matrix(a.minorant);
    auto [m, gap] = jorder::sqrt_pair_minorant(x, a.lambda);
    Json rep = Json::object();
    rep["version"] = jorder::kVersion;
    rep["seed"] = a.common.seed;
    rep["lambda"] = a.lambda;
    rep["gap"] = gap;
    rep["positive"] = gap >= 0;
    rep["matrix"] = jorder::matrix_to_json(m);
    emit(a.common, jorder::dump_json17(rep));
    return kOk;
  }
  if (a.lambdas.empty())
    throw jorder::ParseError(
        "remark36 needs --lambdas (ratio sweep) or --minorant (matrix mode)");
  std::string csv = csv_preamble(a.common.seed);
  csv += "lambda,t,ratio\n";
  for (double l : a.lambdas) {
    const double ratio = jorder::sqrt_pair_gap_ratio(a.t, l);
    csv += jorder::format_double17(l);
    csv += ',';
    csv += jorder::format_double17(a.t);
    csv += ',';
    csv += jorder::format_double17(ratio);
    csv += '\n';
  }
  emit(a.common, csv);
  return kOk;
}

struct FuzzArgs {
  int count = 200;
  std::string dims = "2..6";
  double spec_lo = 0.5;
  double spec_hi = 10.0;
  std::vector<std::string> functions;
  std::string dump_dir = "fuzz_cases";
  CommonOpts common;
};

std::pair<int, int> parse_dims(const std::string& s) {
  const auto pos = s.find("..");
  int lo = 0, hi = 0;
  if (pos != std::string::npos) {
    const char* b = s.data();
    auto r1 = std::from_chars(b, b + pos, lo);
    auto r2 = std::from_chars(b + pos + 2, b + s.size(), hi);
    if (r1.ec == std::errc{} && r2.ec == std::errc{} && r1.ptr == b + pos &&
        r2.ptr == b + s.size())
      return {lo, hi};
  }
  throw jorder::ParseError("dims must look like 2..6, got '" + s + "'");
}

int run_fuzz(const FuzzArgs& a) {
  jorder::FuzzConfig cfg;
  cfg.count = a.count;
  std::tie(cfg.dim_lo, cfg.dim_hi) = parse_dims(a.dims);
  cfg.spec_lo = a.spec_lo;
  cfg.spec_hi = a.spec_hi;
  cfg.seed = a.common.seed;
  cfg.restarts = a.common.restarts;
  if (!a.functions.empty()) cfg.functions = a.functions;
  cfg.dump_dir = a.dump_dir;

  const jorder::FuzzOutcome outcome = jorder::run_fuzz(cfg);
  emit(a.common, jorder::dump_json17(outcome.report));
  return outcome.pass ? kOk : kViolated;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "operator order toolkit: vector-state inequality checks, the equality "
      "decision procedure, and two-sided envelope audits"};
  app.require_subcommand(1);

  CheckArgs check;
  CLI::App* c_check = app.add_subcommand(
      "check", "verify the vector-state inequality for a pair of matrices");
  c_check->add_option("x", check.x, "first matrix file")->required();
  c_check->add_option("y", check.y, "second matrix file")->required();
  c_check->add_option("--f", check.f, "scalar function spec")
      ->capture_default_str();
  c_check->add_option("--dir", check.dir, "concave-le or convex-ge")
      ->required();
  c_check->add_flag("--one-sided", check.one_sided,
                    "check only the given ordering, with both methods");
  c_check->add_option("--format", check.format, "json or pretty")
      ->check(CLI::IsMember({"json", "pretty"}))
      ->capture_default_str();
  add_common(c_check, check.common);

  DecideArgs decide;
  CLI::App* c_decide = app.add_subcommand(
      "decide-equal",
      "decide X = Y from the dual vector-state inequalities by peeling");
  c_decide->add_option("x", decide.x, "first matrix file")->required();
  c_decide->add_option("y", decide.y, "second matrix file")->required();
  c_decide->add_option("--f", decide.f, "scalar function spec")
      ->capture_default_str();
  c_decide->add_option("--dir", decide.dir, "concave-le or convex-ge")
      ->required();
  add_common(c_decide, decide.common);

  SandwichArgs sandwich;
  CLI::App* c_sandwich = app.add_subcommand(
      "sandwich", "check the composed two-sided hypothesis and kernel match");
  c_sandwich->add_option("x", sandwich.x, "first matrix file")->required();
  c_sandwich->add_option("y", sandwich.y, "second matrix file")->required();
  c_sandwich->add_option("--f", sandwich.f, "inner scalar function")
      ->capture_default_str();
  c_sandwich->add_option("--g", sandwich.g, "outer scalar function")
      ->capture_default_str();
  c_sandwich->add_option("--format", sandwich.format, "json or pretty")
      ->check(CLI::IsMember({"json", "pretty"}))
      ->capture_default_str();
  add_common(c_sandwich, sandwich.common);

  DiscretizeArgs disc;
  CLI::App* c_disc = app.add_subcommand(
      "discretize",
      "audit the partitioned envelope bounds over a sweep of cell counts");
  c_disc->add_option("x", disc.x, "first matrix file")->required();
  c_disc->add_option("y", disc.y, "second matrix file")->required();
  c_disc->add_option("--f", disc.f, "inner scalar function")
      ->capture_default_str();
  c_disc->add_option("--g", disc.g, "outer scalar function")
      ->capture_default_str();
  c_disc->add_option("--a", disc.a, "left spectral endpoint (must be > 0)")
      ->capture_default_str();
  c_disc->add_option("--b", disc.b, "right spectral endpoint (> both norms)")
      ->required();
  c_disc->add_option("--n", disc.n, "single partition size");
  c_disc->add_option("--n-list", disc.n_list, "comma-separated partition sizes")
      ->delimiter(',');
  c_disc->add_option("--format", disc.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  add_common(c_disc, disc.common);

  Remark36Args rem;
  CLI::App* c_rem = app.add_subcommand(
      "remark36",
      "spectral-floor diagnostics: envelope-to-quadratic ratio sweep, or the "
      "explicit square-root minorant of a matrix");
  c_rem->add_option("--t", rem.t, "evaluation point for the ratio sweep")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_rem->add_option("--lambdas", rem.lambdas,
                    "comma-separated base points for the ratio sweep")
      ->delimiter(',');
  c_rem->add_option("--minorant", rem.minorant,
                    "matrix file: emit 2 sqrt(lambda X) - lambda I and its "
                    "smallest eigenvalue");
  c_rem->add_option("--lambda", rem.lambda, "base point for the minorant")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(c_rem, rem.common);

  FuzzArgs fuzz;
  CLI::App* c_fuzz = app.add_subcommand(
      "fuzz", "seeded property suites: method agreement and violation hunting");
  c_fuzz->add_option("--count", fuzz.count, "cases per suite")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  c_fuzz->add_option("--dims", fuzz.dims, "dimension range, e.g. 2..6")
      ->capture_default_str();
  c_fuzz->add_option("--spec-lo", fuzz.spec_lo, "spectrum box lower edge")
      ->capture_default_str();
  c_fuzz->add_option("--spec-hi", fuzz.spec_hi, "spectrum box upper edge")
      ->capture_default_str();
  c_fuzz->add_option("--functions", fuzz.functions,
                     "comma-separated scalar function specs")
      ->delimiter(',');
  c_fuzz->add_option("--dump-dir", fuzz.dump_dir,
                     "directory for failing-case dumps")
      ->capture_default_str();
  add_common(c_fuzz, fuzz.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*c_check) return run_check(check);
    if (*c_decide) return run_decide_equal(decide);
    if (*c_sandwich) return run_sandwich(sandwich);
    if (*c_disc) return run_discretize(disc);
    if (*c_rem) return run_remark36(rem);
    if (*c_fuzz) return run_fuzz(fuzz);
  } catch (const jorder::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }
  return kUsage;
}
