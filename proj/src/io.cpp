#include "jorder/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace jorder {
namespace {

void escape_into(const std::string& s, std::string& out) {
  out += '"';
  for (char ch : s) {
    switch (ch) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\r':
        out += "\\r";
        break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
}

void dump_rec(const Json& j, std::string& out, int depth) {
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      const std::string pad(2 * (depth + 1), ' ');
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        escape_into(it.key(), out);
        out += ": ";
        dump_rec(it.value(), out, depth + 1);
      }
      out += '\n';
      out.append(2 * depth, ' ');
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      const std::string pad(2 * (depth + 1), ' ');
      bool first = true;
      for (const Json& e : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        dump_rec(e, out, depth + 1);
      }
      out += '\n';
      out.append(2 * depth, ' ');
      out += ']';
      return;
    }
    case Json::value_t::string:
      escape_into(j.get_ref<const std::string&>(), out);
      return;
    case Json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case Json::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      return;
    case Json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      return;
    case Json::value_t::number_float:
      out += format_double17(j.get<double>());
      return;
    default:
      out += "null";
      return;
  }
}

Json bound_to_json(const BoundCheck& b) {
  Json j = Json::object();
  j["lhs"] = b.lhs;
  j["rhs"] = b.rhs;
  j["pass"] = b.pass;
  return j;
}

}  // namespace

std::string format_double17(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string dump_json17(const Json& j) {
  std::string out;
  dump_rec(j, out, 0);
  out += '\n';
  return out;
}

Json matrix_to_json(const HermitianMatrix& m) {
  Json j = Json::object();
  j["dim"] = static_cast<std::int64_t>(m.dim());
  Json entries = Json::array();
  for (Eigen::Index i = 0; i < m.dim(); ++i) {
    for (Eigen::Index k = 0; k < m.dim(); ++k) {
      Json cell = Json::array();
      cell.push_back(m.mat()(i, k).real());
      cell.push_back(m.mat()(i, k).imag());
      entries.push_back(cell);
    }
  }
  j["entries"] = entries;
  return j;
}

HermitianMatrix matrix_from_json(const Json& j) {
  if (!j.is_object())
    throw ParseError("matrix document must be a JSON object");
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw ParseError("matrix document needs an integer 'dim'");
  std::int64_t dim = j["dim"].get<std::int64_t>();
  if (dim < 1 || dim > 4096)
    throw ParseError("matrix dimension must be in [1, 4096], got " +
                     std::to_string(dim));
  if (!j.contains("entries") || !j["entries"].is_array())
    throw ParseError("matrix document needs an 'entries' array");
  const Json& e = j["entries"];
  if (static_cast<std::int64_t>(e.size()) != dim * dim)
    throw ParseError("expected " + std::to_string(dim * dim) +
                     " entries, got " + std::to_string(e.size()));
  Eigen::MatrixXcd m(dim, dim);
  for (std::int64_t k = 0; k < dim * dim; ++k) {
    const Json& cell = e[static_cast<std::size_t>(k)];
    if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
        !cell[1].is_number())
      throw ParseError("entry " + std::to_string(k) +
                       " must be a [re, im] pair of numbers");
    m(k / dim, k % dim) =
        Complex(cell[0].get<double>(), cell[1].get<double>());
  }
  return HermitianMatrix::from_exact(m);
}

HermitianMatrix load_matrix(const std::string& path) {
  std::string text = read_text_file(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  try {
    return matrix_from_json(j);
  } catch (const Error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_matrix(const HermitianMatrix& m, const std::string& path) {
  write_text_file(path, dump_json17(matrix_to_json(m)));
}

Json vector_to_json(const Eigen::VectorXcd& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    Json cell = Json::array();
    cell.push_back(v(i).real());
    cell.push_back(v(i).imag());
    arr.push_back(cell);
  }
  return arr;
}

Json verdict_to_json(const RelationVerdict& v) {
  Json j = Json::object();
  j["holds"] = v.holds;
  j["margin"] = v.margin;
  if (v.lambda_star) j["lambda_star"] = *v.lambda_star;
  if (v.witness) {
    Json w = Json::object();
    w["vector"] = vector_to_json(v.witness->vector);
    w["lhs"] = v.witness->lhs;
    w["rhs"] = v.witness->rhs;
    j["witness"] = w;
  }
  j["method"] = method_name(v.method);
  if (v.method == Method::sphere) j["restarts"] = v.restarts;
  j["seed"] = v.seed;
  return j;
}

Json trace_to_json(const PeelingTrace& t) {
  Json j = Json::object();
  j["conclusion"] = conclusion_name(t.conclusion);
  j["shift"] = t.shift;
  j["final_gap"] = t.final_gap;
  j["max_residual"] = t.max_residual;
  j["seed"] = t.seed;
  Json steps = Json::array();
  for (const PeelingStep& s : t.steps) {
    Json e = Json::object();
    e["level"] = s.level;
    e["dim"] = static_cast<std::int64_t>(s.subspace_dim);
    e["norm_fx"] = s.norm_fx;
    e["norm_fy"] = s.norm_fy;
    e["norm_gap"] = s.norm_gap;
    e["factorization_residual"] = s.factorization_residual;
    e["commutation_residual"] = s.commutation_residual;
    e["equality_residual"] = s.equality_residual;
    e["status"] = step_status_name(s.status);
    e["rank"] = static_cast<std::int64_t>(s.top_eigenspace.rank());
    e["projection"] = matrix_to_json(s.top_eigenspace.matrix());
    steps.push_back(e);
  }
  j["steps"] = steps;
  if (t.violation) {
    j["violated_ordering"] = t.violation->ordering;
    j["violation"] = verdict_to_json(t.violation->verdict);
  }
  return j;
}

Json audit_to_json(const BoundAudit& a) {
  Json j = Json::object();
  j["rho_lower"] = a.rho_lower;
  j["rho_upper"] = a.rho_upper;
  j["slack_multiplier"] = a.slack_multiplier;
  j["slack"] = a.slack;
  j["bound1"] = bound_to_json(a.projector_bound);
  j["bound2"] = bound_to_json(a.inverse_bound);
  return j;
}

Json discretization_to_json(const DiscretizationReport& r) {
  Json j = Json::object();
  j["n"] = r.n;
  j["a"] = r.a;
  j["b"] = r.b;
  j["c"] = r.c;
  j["alpha"] = r.alpha;
  j["rho_lower"] = r.rho_lower;
  j["rho_upper"] = r.rho_upper;
  j["slack_multiplier"] = r.slack_multiplier;
  j["slack"] = r.slack;
  j["bound1"] = bound_to_json(r.bound1);
  j["bound2"] = bound_to_json(r.bound2);
  j["bound3"] = bound_to_json(r.bound3);
  j["bound4"] = bound_to_json(r.bound4);
  j["final"] = bound_to_json(r.final_bound);
  j["kernel_match"] = r.kernels_match;
  j["near_boundary"] = r.near_boundary;
  Json skipped = Json::array();
  for (int i : r.skipped_cells) skipped.push_back(i);
  j["skipped_cells"] = skipped;
  j["pass"] = r.pass;
  return j;
}

std::string discretization_csv_header() {
  return "n,rho_lower,rho_upper,b3_lhs,b3_rhs,b4_lhs,b4_rhs,final_lhs,"
         "final_rhs,pass";
}

std::string discretization_csv_row(const DiscretizationReport& r) {
  std::string row = std::to_string(r.n);
  for (double v : {r.rho_lower, r.rho_upper, r.bound3.lhs, r.bound3.rhs,
                   r.bound4.lhs, r.bound4.rhs, r.final_bound.lhs,
                   r.final_bound.rhs}) {
    row += ',';
    row += format_double17(v);
  }
  row += ',';
  row += r.pass ? '1' : '0';
  return row;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
  if (!out) throw Error("short write to '" + path + "'");
}

const char* conclusion_name(PeelingConclusion c) {
  switch (c) {
    case PeelingConclusion::equal:
      return "EQUAL";
    case PeelingConclusion::premise_violated:
      return "PREMISE_VIOLATED";
    default:
      return "TOLERANCE_EXCEEDED";
  }
}

const char* step_status_name(StepStatus s) {
  switch (s) {
    case StepStatus::ok:
      return "ok";
    case StepStatus::norm_mismatch:
      return "norm_mismatch";
    default:
      return "tolerance_exceeded";
  }
}

const char* method_name(Method m) {
  return m == Method::tangent ? "tangent" : "sphere";
}

}  // namespace jorder
