// End-to-end tests against the installed command-line binary.  Each case
// shells out, captures stdout/stderr, and checks the exit-code contract:
// 0 ok, 1 usage or data error, 2 violated, 3 tolerance exceeded.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "jorder/io.hpp"

using namespace jorder;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

const std::string& scratch() {
  static const std::string dir = [] {
    std::filesystem::create_directories("cli_scratch");
    return std::string("cli_scratch");
  }();
  return dir;
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string out = scratch() + "/stdout_" + std::to_string(counter);
  const std::string err = scratch() + "/stderr_" + std::to_string(counter);
  ++counter;
  const std::string cmd =
      std::string(JORDER_CLI_PATH) + " " + args + " > " + out + " 2> " + err;
  RunResult r;
  const int status = std::system(cmd.c_str());
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_text_file(out);
  r.err = read_text_file(err);
  return r;
}

std::string write_diag(const std::string& name,
                       std::initializer_list<double> vals) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double v : vals) d(i++) = v;
  const std::string path = scratch() + "/" + name;
  save_matrix(HermitianMatrix::diagonal(d), path);
  return path;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("check: identical operators satisfy the relation") {
  Eigen::MatrixXcd m(2, 2);
  m << 2.0, 0.5, 0.5, 1.0;
  const std::string p = scratch() + "/pair22.json";
  save_matrix(HermitianMatrix::from_exact(m), p);
  RunResult r = run_cli("check --f sqrt --dir concave-le " + p + " " + p);
  CHECK(r.code == 0);
  CHECK(contains(r.out, "\"version\": \"0.1.0\""));
  CHECK(contains(r.out, "\"seed\": 0"));
  CHECK(contains(r.out, "\"holds\": true"));
  CHECK(contains(r.out, "\"left\""));
  CHECK(contains(r.out, "\"right\""));
}

TEST_CASE("check: a scalar violation exits 2 with a witness") {
  const std::string x = write_diag("x4.json", {4.0});
  const std::string y = write_diag("y1.json", {1.0});
  RunResult r = run_cli("check --f sqrt --dir concave-le " + x + " " + y);
  CHECK(r.code == 2);
  CHECK(contains(r.out, "\"holds\": false"));
  CHECK(contains(r.out, "violated: margin"));

  RunResult one =
      run_cli("check --one-sided --f sqrt --dir concave-le " + x + " " + y);
  CHECK(one.code == 2);
  CHECK(contains(one.out, "\"tangent\""));
  CHECK(contains(one.out, "\"sphere\""));

  RunResult pretty = run_cli("check --format pretty --f sqrt --dir concave-le " +
                             x + " " + y);
  CHECK(pretty.code == 2);
  CHECK(contains(pretty.out, "violated"));
}

TEST_CASE("check: usage and data errors exit 1") {
  const std::string x = write_diag("u1.json", {1.0});
  CHECK(run_cli("check --f pow:1 --dir concave-le " + x + " " + x).code == 1);
  CHECK(run_cli("check --f sqrt --dir sideways " + x + " " + x).code == 1);
  CHECK(run_cli("check --f sqrt --dir concave-le " + x + " " + scratch() +
                "/missing.json")
            .code == 1);
  CHECK(run_cli("check --f sqrt " + x + " " + x).code == 1);  // --dir required
  RunResult r = run_cli("check --f pow:1 --dir concave-le " + x + " " + x);
  CHECK(contains(r.err, "error:"));
}

TEST_CASE("decide-equal: equality, violation, and bad input") {
  const std::string d = write_diag("d123.json", {1.0, 2.0, 3.0});
  const std::string dp = write_diag("d123p.json", {1.0, 2.0, 3.01});
  const std::string one = write_diag("one.json", {1.0});

  RunResult eq = run_cli("decide-equal --f square --dir convex-ge " + d + " " + d);
  CHECK(eq.code == 0);
  CHECK(contains(eq.out, "conclusion: EQUAL"));
  CHECK(contains(eq.out, "\"conclusion\": \"EQUAL\""));

  RunResult viol =
      run_cli("decide-equal --f square --dir convex-ge " + d + " " + dp);
  CHECK(viol.code == 2);
  CHECK(contains(viol.out, "PREMISE_VIOLATED"));
  CHECK(contains(viol.out, "premise witness"));

  CHECK(run_cli("decide-equal --f square --dir convex-ge " + d + " " + one)
            .code == 1);
}

TEST_CASE("sandwich: equality passes, kernel perturbation fails") {
  const std::string x = write_diag("s124.json", {1.0, 2.0, 4.0});
  RunResult ok = run_cli("sandwich " + x + " " + x);
  CHECK(ok.code == 0);
  CHECK(contains(ok.out, "\"kernel_match\": true"));
  CHECK(contains(ok.out, "\"holds\": true"));

  const std::string k0 = write_diag("k0.json", {0.0, 1.0, 2.0});
  const std::string k1 = write_diag("k1.json", {0.01, 1.0, 2.0});
  RunResult bad = run_cli("sandwich " + k0 + " " + k1);
  CHECK(bad.code == 2);
  CHECK(contains(bad.out, "\"kernel_match\": false"));
  CHECK(contains(bad.out, "\"holds\": false"));
}

TEST_CASE("discretize: csv sweep, json mode, and the spectral floor") {
  const std::string x = write_diag("disc.json", {1.0, 2.0, 4.0});
  RunResult csv =
      run_cli("discretize --a 0.5 --b 10 --n-list 2,4,8 " + x + " " + x);
  CHECK(csv.code == 0);
  CHECK(contains(csv.out, "# version 0.1.0\n# seed 0\n"));
  CHECK(contains(csv.out,
                 "n,rho_lower,rho_upper,b3_lhs,b3_rhs,b4_lhs,b4_rhs,"
                 "final_lhs,final_rhs,pass"));
  int data_rows = 0, passes = 0;
  std::size_t pos = 0;
  while (pos < csv.out.size()) {
    std::size_t nl = csv.out.find('\n', pos);
    if (nl == std::string::npos) nl = csv.out.size();
    const std::string line = csv.out.substr(pos, nl - pos);
    if (!line.empty() && line[0] != '#' && line[0] != 'n') {
      ++data_rows;
      if (line.size() >= 2 && line.substr(line.size() - 2) == ",1") ++passes;
    }
    pos = nl + 1;
  }
  CHECK(data_rows == 3);
  CHECK(passes == 3);

  RunResult js =
      run_cli("discretize --format json --a 0.5 --b 10 --n 4 " + x + " " + x);
  CHECK(js.code == 0);
  CHECK(contains(js.out, "\"reports\""));
  CHECK(contains(js.out, "\"pass\": true"));

  RunResult floor = run_cli("discretize --a 0 --b 10 --n 4 " + x + " " + x);
  CHECK(floor.code == 1);
  CHECK(contains(floor.err, "spectral floor"));

  CHECK(run_cli("discretize --a 0.5 --b 10 " + x + " " + x).code == 1);
  CHECK(run_cli("discretize --a 0.5 --b 2 --n 4 " + x + " " + x).code == 1);
}

TEST_CASE("remark36: ratio sweep and minorant mode") {
  RunResult sweep = run_cli("remark36 --lambdas 0.25,0.01");
  CHECK(sweep.code == 0);
  CHECK(contains(sweep.out, "lambda,t,ratio"));
  CHECK(contains(sweep.out, "0.25,1,0.59"));
  CHECK(contains(sweep.out, "0.01,1,4.609"));

  const std::string one = write_diag("m1.json", {1.0});
  RunResult minorant = run_cli("remark36 --minorant " + one + " --lambda 9");
  CHECK(minorant.code == 0);
  CHECK(contains(minorant.out, "\"gap\": -3"));
  CHECK(contains(minorant.out, "\"positive\": false"));

  CHECK(run_cli("remark36").code == 1);
}

TEST_CASE("fuzz: seeded runs are byte-identical") {
  const std::string out1 = scratch() + "/fuzz1.json";
  const std::string out2 = scratch() + "/fuzz2.json";
  const std::string base = "fuzz --count 4 --seed 0 --dims 2..4 --dump-dir " +
                           scratch() + "/fuzz_dumps --out ";
  RunResult r1 = run_cli(base + out1);
  RunResult r2 = run_cli(base + out2);
  CHECK(r1.code == 0);
  CHECK(r2.code == 0);
  const std::string b1 = read_text_file(out1);
  CHECK(b1 == read_text_file(out2));
  CHECK(contains(b1, "\"version\": \"0.1.0\""));
  CHECK(contains(b1, "\"pass\": true"));

  RunResult seeded = run_cli(
      "fuzz --count 2 --seed 7 --dims 2..3 --dump-dir " + scratch() +
      "/fuzz_dumps");
  CHECK(seeded.code == 0);
  CHECK(contains(seeded.out, "\"seed\": 7"));
}

TEST_CASE("top-level usage errors") {
  CHECK(run_cli("").code == 1);
  CHECK(run_cli("frobnicate").code == 1);
  CHECK(run_cli("--help").code == 0);
}
