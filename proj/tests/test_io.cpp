#include <cstdio>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "jorder/io.hpp"
#include "jorder/random_gen.hpp"

using namespace jorder;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) {
    path = (std::filesystem::temp_directory_path() / name).string();
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("doubles print with 17 significant digits") {
  CHECK(format_double17(0.1) == "0.10000000000000001");
  CHECK(format_double17(1.0) == "1");
  CHECK(format_double17(-2.5) == "-2.5");
  CHECK(format_double17(0.0) == "0");
  // Round trip: the printed form parses back to the same bits.
  const double v = 3.141592653589793;
  CHECK(std::stod(format_double17(v)) == v);
  CHECK(format_double17(std::nan("")) == "null");
  CHECK(format_double17(1.0 / 0.0) == "null");
}

TEST_CASE("printer is ordered, indented, and escaped") {
  Json j;
  j["zeta"] = 1.5;
  j["alpha"] = Json::array({1, 2.25});
  j["text"] = "a\"b\\c\nd";
  const std::string s = dump_json17(j);
  CHECK(s ==
        "{\n"
        "  \"zeta\": 1.5,\n"
        "  \"alpha\": [\n"
        "    1,\n"
        "    2.25\n"
        "  ],\n"
        "  \"text\": \"a\\\"b\\\\c\\nd\"\n"
        "}\n");
  CHECK(dump_json17(Json::object()) == "{}\n");
  CHECK(dump_json17(Json::array()) == "[]\n");
  Json leaf = 0.1;
  CHECK(dump_json17(leaf) == "0.10000000000000001\n");
}

TEST_CASE("matrix files round-trip bitwise") {
  Rng rng(mix_seed(7, 0));
  HermitianMatrix m = random_hermitian(4, -2.0, 5.0, rng);
  TempFile f("jorder_io_roundtrip.json");
  save_matrix(m, f.path);
  HermitianMatrix back = load_matrix(f.path);
  REQUIRE(back.dim() == 4);
  CHECK(back.mat() == m.mat());
  // Serialization itself is stable: writing the reloaded matrix gives
  // identical bytes.
  CHECK(dump_json17(matrix_to_json(back)) == dump_json17(matrix_to_json(m)));
}

TEST_CASE("matrix parsing rejects malformed input") {
  CHECK_THROWS_AS(matrix_from_json(Json::parse("[1,2]")), ParseError);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"entries": []})")),
                  ParseError);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"dim": 0, "entries": []})")),
                  ParseError);
  CHECK_THROWS_AS(
      matrix_from_json(Json::parse(R"({"dim": 2, "entries": [[1,0]]})")),
      ParseError);
  CHECK_THROWS_AS(
      matrix_from_json(Json::parse(
          R"({"dim": 1, "entries": [[1,0,0]]})")),
      ParseError);
  CHECK_THROWS_AS(
      matrix_from_json(Json::parse(R"({"dim": 1, "entries": [["x",0]]})")),
      ParseError);
  // Hermiticity is enforced on files: off-diagonal entries must be exact
  // conjugates and the diagonal exactly real.
  CHECK_THROWS_AS(
      matrix_from_json(Json::parse(
          R"({"dim": 2, "entries": [[0,0],[1,0],[0,0],[0,0]]})")),
      PreconditionError);
  CHECK_THROWS_AS(
      matrix_from_json(Json::parse(R"({"dim": 1, "entries": [[0,1]]})")),
      PreconditionError);
  Json good = Json::parse(R"({"dim": 2, "entries":
      [[2,0],[1,-0.5],[1,0.5],[3,0]]})");
  HermitianMatrix m = matrix_from_json(good);
  CHECK(m.mat()(0, 1) == Complex(1, -0.5));
}

TEST_CASE("load reports the offending path") {
  auto message_of = [](const std::string& path) -> std::string {
    try {
      load_matrix(path);
    } catch (const ParseError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message_of("/nonexistent/jorder.json")
            .find("/nonexistent/jorder.json") != std::string::npos);
  TempFile f("jorder_io_garbage.json");
  write_text_file(f.path, "{not json");
  CHECK_THROWS_AS(load_matrix(f.path), ParseError);
  // Structural errors below the JSON layer are rethrown as parse failures
  // tagged with the path.
  TempFile g("jorder_io_nonherm.json");
  write_text_file(g.path, R"({"dim": 1, "entries": [[0,1]]})");
  CHECK(message_of(g.path).find(g.path) != std::string::npos);
}

TEST_CASE("verdict serialization carries conditional fields") {
  RelationVerdict v;
  v.holds = true;
  v.margin = 0.25;
  v.method = Method::tangent;
  v.lambda_star = 2.0;
  v.seed = 9;
  Json j = verdict_to_json(v);
  CHECK(j["holds"] == true);
  CHECK(j["margin"] == 0.25);
  CHECK(j["lambda_star"] == 2.0);
  CHECK(j["method"] == "tangent");
  CHECK(j["seed"] == 9);
  CHECK(!j.contains("witness"));
  CHECK(!j.contains("restarts"));

  RelationVerdict s;
  s.holds = false;
  s.method = Method::sphere;
  s.restarts = 16;
  Witness w;
  w.vector = Eigen::VectorXcd::Unit(2, 1);
  w.lhs = 2.0;
  w.rhs = 1.0;
  s.witness = w;
  Json js = verdict_to_json(s);
  CHECK(js["method"] == "sphere");
  CHECK(js["restarts"] == 16);
  CHECK(!js.contains("lambda_star"));
  REQUIRE(js.contains("witness"));
  CHECK(js["witness"]["lhs"] == 2.0);
  CHECK(js["witness"]["rhs"] == 1.0);
  CHECK(js["witness"]["vector"].size() == 2);
  CHECK(js["witness"]["vector"][1][0] == 1.0);
}

TEST_CASE("csv layout is pinned") {
  CHECK(discretization_csv_header() ==
        "n,rho_lower,rho_upper,b3_lhs,b3_rhs,b4_lhs,b4_rhs,final_lhs,"
        "final_rhs,pass");
  DiscretizationReport r;
  r.n = 8;
  r.rho_lower = 0.0;
  r.rho_upper = -0.5;
  r.bound3 = {0.25, 1.0, true};
  r.bound4 = {0.5, 2.0, true};
  r.final_bound = {0.75, 3.0, true};
  r.pass = false;
  CHECK(discretization_csv_row(r) == "8,0,-0.5,0.25,1,0.5,2,0.75,3,0");
  r.pass = true;
  CHECK(discretization_csv_row(r) == "8,0,-0.5,0.25,1,0.5,2,0.75,3,1");
}

TEST_CASE("enum names") {
  CHECK(std::string(conclusion_name(PeelingConclusion::equal)) == "EQUAL");
  CHECK(std::string(conclusion_name(PeelingConclusion::premise_violated)) ==
        "PREMISE_VIOLATED");
  CHECK(std::string(conclusion_name(PeelingConclusion::tolerance_exceeded)) ==
        "TOLERANCE_EXCEEDED");
  CHECK(std::string(step_status_name(StepStatus::ok)) == "ok");
  CHECK(std::string(method_name(Method::sphere)) == "sphere");
}

TEST_CASE("trace serialization names every column") {
  HermitianMatrix x = HermitianMatrix::diagonal(Eigen::Vector2d(1.0, 2.0));
  PeelingTrace t = decide_equal(parse_function("square"), x, x,
                                Direction::convex_ge);
  Json j = trace_to_json(t);
  CHECK(j["conclusion"] == "EQUAL");
  CHECK(j["seed"] == 0);
  REQUIRE(j["steps"].size() == t.steps.size());
  const Json& s0 = j["steps"][0];
  for (const char* key :
       {"level", "dim", "norm_fx", "norm_fy", "norm_gap",
        "factorization_residual", "commutation_residual", "equality_residual",
        "status", "rank"}) {
    CHECK(s0.contains(key));
  }
  CHECK(!j.contains("violated_ordering"));
}

TEST_CASE("file helpers push bytes through unchanged") {
  TempFile f("jorder_io_bytes.txt");
  const std::string payload = "line1\nline2\n";
  write_text_file(f.path, payload);
  CHECK(read_text_file(f.path) == payload);
}
