#include "jorder/fuzz.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jorder/antisymmetry.hpp"
#include "jorder/random_gen.hpp"
#include "jorder/relation.hpp"
#include "jorder/version.hpp"

namespace jorder {
namespace {

// Stream offsets keep generation and the sphere searches of the two suites
// on non-overlapping substreams of the master seed.
constexpr std::uint64_t kAgreementGen = 0x100000000ULL;
constexpr std::uint64_t kAgreementSearch = 0x200000000ULL;
constexpr std::uint64_t kContraGen = 0x300000000ULL;
constexpr std::uint64_t kContraSearch = 0x400000000ULL;

const char* kind_name(int kind) {
  switch (kind) {
    case 0:
      return "equal";
    case 1:
      return "dominated";
    default:
      return "independent";
  }
}

Eigen::Index pick_dim(const FuzzConfig& cfg, Rng& rng) {
  const int span = cfg.dim_hi - cfg.dim_lo + 1;
  int d = cfg.dim_lo + static_cast<int>(rng.uniform() * span);
  if (d > cfg.dim_hi) d = cfg.dim_hi;
  return d;
}

HermitianMatrix shift_up(const HermitianMatrix& m, double s) {
  Eigen::MatrixXcd shifted = m.mat();
  shifted.diagonal().array() += s;
  return HermitianMatrix::from_exact(shifted);
}

struct CaseDumper {
  explicit CaseDumper(const FuzzConfig& c) : cfg(c) {}

  std::string dump(const std::string& name, const HermitianMatrix& m) {
    if (!dir_ready) {
      std::filesystem::create_directories(cfg.dump_dir);
      dir_ready = true;
    }
    std::string path = cfg.dump_dir + "/" + name;
    save_matrix(m, path);
    return path;
  }

  const FuzzConfig& cfg;
  bool dir_ready = false;
};

}  // namespace

FuzzOutcome run_fuzz(const FuzzConfig& cfg) {
  if (cfg.count < 0) throw ParseError("fuzz count must be >= 0");
  if (cfg.dim_lo < 1 || cfg.dim_hi < cfg.dim_lo)
    throw ParseError("fuzz dimension range must satisfy 1 <= lo <= hi");
  if (!(cfg.spec_lo < cfg.spec_hi))
    throw ParseError("fuzz spectrum box must satisfy lo < hi");
  if (cfg.functions.empty())
    throw ParseError("fuzz needs at least one function spec");

  std::vector<ScalarFunction> funcs;
  funcs.reserve(cfg.functions.size());
  for (const std::string& s : cfg.functions) funcs.push_back(parse_function(s));
  const ScalarFunction contra_f = parse_function("sqrt");

  CaseDumper dumper(cfg);

  int holds = 0, violated = 0, disagreements = 0, engineered = 0;
  Json agreement_failures = Json::array();

  for (int i = 0; i < cfg.count; ++i) {
    Rng rng(mix_seed(cfg.seed, kAgreementGen + static_cast<std::uint64_t>(i)));
    const int kind = i % 3;
    const std::size_t fidx = (static_cast<std::size_t>(i) / 3) % funcs.size();
    const ScalarFunction& h = funcs[fidx];
    const Eigen::Index dim = pick_dim(cfg, rng);

    HermitianMatrix a = random_hermitian(dim, cfg.spec_lo, cfg.spec_hi, rng);
    HermitianMatrix b;
    if (kind == 0) {
      b = a;
    } else if (kind == 1) {
      // An upward shift in the second slot keeps the relation valid for any
      // increasing h: h(<Bv,v>) = h(<Av,v> + s) >= h(<Av,v>).
      b = shift_up(a, rng.uniform(0.25, 1.0));
    } else {
      b = random_hermitian(dim, cfg.spec_lo, cfg.spec_hi, rng);
    }

    RelationOptions opts;
    opts.restarts = cfg.restarts;
    opts.seed =
        mix_seed(cfg.seed, kAgreementSearch + static_cast<std::uint64_t>(i));

    RelationVerdict vt = check_relation_tangent(h, a, b, opts);
    RelationVerdict vs = check_relation_sphere(h, a, b, opts);

    if (vt.holds)
      ++holds;
    else
      ++violated;
    const bool disagree = vt.holds != vs.holds;
    const bool engineered_broken = kind != 2 && (!vt.holds || !vs.holds);
    if (disagree) ++disagreements;
    if (engineered_broken) ++engineered;
    if (disagree || engineered_broken) {
      const std::string stem = "agreement_" + std::to_string(i);
      const std::string pa = dumper.dump(stem + "_A.json", a);
      const std::string pb = dumper.dump(stem + "_B.json", b);
      Json f = Json::object();
      f["index"] = i;
      f["kind"] = kind_name(kind);
      f["function"] = cfg.functions[fidx];
      f["dim"] = static_cast<std::int64_t>(dim);
      f["tangent"] = verdict_to_json(vt);
      f["sphere"] = verdict_to_json(vs);
      f["a"] = matrix_to_json(a);
      f["b"] = matrix_to_json(b);
      f["files"] = Json::array({pa, pb});
      f["repro"] = "jorder check --one-sided --f " + cfg.functions[fidx] +
                   " --dir concave-le --seed " + std::to_string(opts.seed) +
                   " " + pa + " " + pb;
      agreement_failures.push_back(f);
    }
  }

  int found = 0, missed = 0;
  Json contra_failures = Json::array();

  for (int j = 0; j < cfg.count; ++j) {
    Rng rng(mix_seed(cfg.seed, kContraGen + static_cast<std::uint64_t>(j)));
    const Eigen::Index dim = pick_dim(cfg, rng);
    HermitianMatrix x = random_hermitian(dim, cfg.spec_lo, cfg.spec_hi, rng);
    HermitianMatrix y = x;
    double sep = 0;
    for (int attempt = 0; attempt < 32 && sep < 0.1; ++attempt) {
      y = random_hermitian(dim, cfg.spec_lo, cfg.spec_hi, rng);
      sep = spectral_norm(x.mat() - y.mat());
    }
    if (sep < 0.1) {
      // Last resort for tiny boxes; the shift stays inside the sqrt domain.
      y = shift_up(y, 0.15);
      sep = spectral_norm(x.mat() - y.mat());
    }

    RelationOptions opts;
    opts.restarts = cfg.restarts;
    opts.seed =
        mix_seed(cfg.seed, kContraSearch + static_cast<std::uint64_t>(j));

    std::optional<ViolationReport> hit =
        find_violation(contra_f, x, y, Direction::concave_le, opts);
    const bool ok = hit.has_value() && hit->verdict.witness.has_value() &&
                    hit->verdict.witness->lhs > hit->verdict.witness->rhs;
    if (ok) {
      ++found;
    } else {
      ++missed;
      const std::string stem = "contrapositive_" + std::to_string(j);
      const std::string px = dumper.dump(stem + "_X.json", x);
      const std::string py = dumper.dump(stem + "_Y.json", y);
      Json f = Json::object();
      f["index"] = j;
      f["dim"] = static_cast<std::int64_t>(dim);
      f["separation"] = sep;
      if (hit) {
        f["ordering"] = hit->ordering;
        f["verdict"] = verdict_to_json(hit->verdict);
      }
      f["x"] = matrix_to_json(x);
      f["y"] = matrix_to_json(y);
      f["files"] = Json::array({px, py});
      f["repro"] = "jorder decide-equal --f sqrt --dir concave-le --seed " +
                   std::to_string(opts.seed) + " " + px + " " + py;
      contra_failures.push_back(f);
    }
  }

  Json report = Json::object();
  report["version"] = kVersion;
  report["seed"] = cfg.seed;
  Json jc = Json::object();
  jc["count"] = cfg.count;
  jc["dim_lo"] = cfg.dim_lo;
  jc["dim_hi"] = cfg.dim_hi;
  jc["spectrum_lo"] = cfg.spec_lo;
  jc["spectrum_hi"] = cfg.spec_hi;
  jc["restarts"] = cfg.restarts;
  Json jfuncs = Json::array();
  for (const std::string& s : cfg.functions) jfuncs.push_back(s);
  jc["functions"] = jfuncs;
  jc["dump_dir"] = cfg.dump_dir;
  report["config"] = jc;

  Json ja = Json::object();
  ja["cases"] = cfg.count;
  ja["holds"] = holds;
  ja["violated"] = violated;
  ja["disagreements"] = disagreements;
  ja["engineered_failures"] = engineered;
  ja["failures"] = agreement_failures;
  report["agreement"] = ja;

  Json jk = Json::object();
  jk["cases"] = cfg.count;
  jk["found"] = found;
  jk["missed"] = missed;
  jk["failures"] = contra_failures;
  report["contrapositive"] = jk;

  FuzzOutcome out;
  out.pass = disagreements == 0 && engineered == 0 && missed == 0;
  report["pass"] = out.pass;
  out.report = std::move(report);
  return out;
}

}  // namespace jorder
