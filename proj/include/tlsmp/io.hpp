#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "tlsmp/context.hpp"
#include "tlsmp/matrix.hpp"
#include "tlsmp/oracle.hpp"
#include "tlsmp/problems.hpp"
#include "tlsmp/rqi.hpp"

namespace tlsmp {

// Dense text: a header line "rows cols" followed by one row per line.
// MatrixMarket files (array or coordinate, real, general) are recognised by
// their "%%MatrixMarket" banner. Throws std::runtime_error on malformed input.
Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::string& path);
// A vector is a matrix with one column (or one row).
Vector read_vector_file(const std::string& path);

void write_matrix(std::ostream& out, const Matrix& a);
void write_matrix_file(const std::string& path, const Matrix& a);
void write_vector_file(const std::string& path, const Vector& v);

// %.17g, which round-trips every double.
std::string format_double(double x);

// <prefix>_A.txt, <prefix>_b.txt and <prefix>.json.
void save_problem(const std::string& prefix, const TlsProblem& p, const nlohmann::json& extra = {});
TlsProblem load_problem(const std::string& prefix);

// `variant` adds a leading column when nonempty.
void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace,
                     const std::string& variant = {}, bool header = true);

nlohmann::json to_json(const std::vector<TraceEntry>& trace);
nlohmann::json to_json(const FlopCounter& flops);
nlohmann::json to_json(const RoundingEvents& events);
nlohmann::json to_json(const PrecisionConstraintReport& rep);
nlohmann::json to_json(const RqiResult& res);
nlohmann::json to_json(const RqiOptions& opts);

// Reads the fields present in `j` into `opts`; unknown keys are an error.
void apply_json(const nlohmann::json& j, RqiOptions& opts);

Preconditioning preconditioning_by_name(const std::string& name);
StopRule stop_rule_by_name(const std::string& name);
std::string_view preconditioning_name(Preconditioning p);
std::string_view stop_rule_name(StopRule s);
std::string_view breakdown_name(PcgBreakdown b);

} // namespace tlsmp
