#ifndef JORDER_IO_HPP_
#define JORDER_IO_HPP_

#include <string>

#include "json.hpp"
#include "jorder/antisymmetry.hpp"
#include "jorder/relation.hpp"
#include "jorder/sandwich.hpp"

namespace jorder {

using Json = nlohmann::ordered_json;

// 17 significant digits round-trips any double exactly.
std::string format_double17(double v);

// Deterministic printer: fixed two-space indentation, insertion-order keys,
// every float through format_double17.  The library printer uses
// shortest-round-trip formatting, which is not pinned across toolchains, and
// reports must be byte-identical.
std::string dump_json17(const Json& j);

Json matrix_to_json(const HermitianMatrix& m);
HermitianMatrix matrix_from_json(const Json& j);
HermitianMatrix load_matrix(const std::string& path);
void save_matrix(const HermitianMatrix& m, const std::string& path);

Json vector_to_json(const Eigen::VectorXcd& v);
Json verdict_to_json(const RelationVerdict& v);
Json trace_to_json(const PeelingTrace& t);
Json audit_to_json(const BoundAudit& a);
Json discretization_to_json(const DiscretizationReport& r);

std::string discretization_csv_header();
std::string discretization_csv_row(const DiscretizationReport& r);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

const char* conclusion_name(PeelingConclusion c);
const char* step_status_name(StepStatus s);
const char* method_name(Method m);

}  // namespace jorder

#endif  // JORDER_IO_HPP_
