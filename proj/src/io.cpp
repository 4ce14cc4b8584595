#include "tlsmp/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tlsmp {

using nlohmann::json;

namespace {

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

[[noreturn]] void malformed(const std::string& what)
{
    throw std::runtime_error("malformed matrix file: " + what);
}

// Next line that is neither empty nor a comment.
bool next_data_line(std::istream& in, std::string& line)
{
    while (std::getline(in, line)) {
        const auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '%' || line[pos] == '#') continue;
        return true;
    }
    return false;
}

Matrix read_matrix_market(std::istream& in, const std::string& banner)
{
    std::istringstream bs(lower(banner));
    std::string tag, object, layout, field, symmetry;
    bs >> tag >> object >> layout >> field >> symmetry;
    if (object != "matrix") malformed("MatrixMarket object must be 'matrix'");
    if (field != "real" && field != "integer" && field != "double")
        malformed("MatrixMarket field '" + field + "' not supported");
    if (symmetry != "general" && symmetry != "symmetric")
        malformed("MatrixMarket symmetry '" + symmetry + "' not supported");
    const bool symmetric = symmetry == "symmetric";

    std::string line;
    if (!next_data_line(in, line)) malformed("missing size line");
    std::istringstream size(line);
    std::size_t rows = 0, cols = 0, nnz = 0;
    if (!(size >> rows >> cols)) malformed("bad size line");
    Matrix a(rows, cols);

    if (layout == "array") {
        // Column-major; symmetric storage lists the lower triangle only.
        for (std::size_t j = 0; j < cols; ++j) {
            for (std::size_t i = symmetric ? j : 0; i < rows; ++i) {
                if (!next_data_line(in, line)) malformed("too few entries");
                std::istringstream es(line);
                double v;
                if (!(es >> v)) malformed("bad entry");
                a(i, j) = v;
                if (symmetric) a(j, i) = v;
            }
        }
    } else if (layout == "coordinate") {
        if (!(size >> nnz)) malformed("coordinate size line needs an entry count");
        for (std::size_t k = 0; k < nnz; ++k) {
            if (!next_data_line(in, line)) malformed("too few entries");
            std::istringstream es(line);
            std::size_t i, j;
            double v;
            if (!(es >> i >> j >> v) || i < 1 || j < 1 || i > rows || j > cols)
                malformed("bad coordinate entry");
            a(i - 1, j - 1) = v;
            if (symmetric) a(j - 1, i - 1) = v;
        }
    } else {
        malformed("MatrixMarket layout '" + layout + "' not supported");
    }
    return a;
}

Matrix read_dense(std::istream& in, const std::string& first)
{
    std::istringstream size(first);
    std::size_t rows = 0, cols = 0;
    if (!(size >> rows >> cols)) malformed("expected 'rows cols' header");
    Matrix a(rows, cols);
    std::string line;
    for (std::size_t i = 0; i < rows; ++i) {
        if (!next_data_line(in, line)) malformed("expected " + std::to_string(rows) + " rows");
        std::istringstream rs(line);
        for (std::size_t j = 0; j < cols; ++j)
            if (!(rs >> a(i, j))) malformed("row " + std::to_string(i + 1) + " is short");
    }
    return a;
}

} // namespace

std::string format_double(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Matrix read_matrix(std::istream& in)
{
    std::string line;
    // The banner itself starts with '%', so look at the raw first line.
    while (std::getline(in, line)) {
        if (line.rfind("%%MatrixMarket", 0) == 0) return read_matrix_market(in, line);
        const auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '%' || line[pos] == '#') continue;
        return read_dense(in, line);
    }
    malformed("empty input");
}

Matrix read_matrix_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_matrix(in);
}

Vector read_vector_file(const std::string& path)
{
    const Matrix m = read_matrix_file(path);
    if (m.cols() != 1 && m.rows() != 1)
        throw std::runtime_error(path + ": expected a vector, got " + std::to_string(m.rows()) +
                                 " x " + std::to_string(m.cols()));
    return m.values();
}

void write_matrix(std::ostream& out, const Matrix& a)
{
    out << a.rows() << ' ' << a.cols() << '\n';
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out << (j ? " " : "") << format_double(a(i, j));
        out << '\n';
    }
}

void write_matrix_file(const std::string& path, const Matrix& a)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_matrix(out, a);
}

void write_vector_file(const std::string& path, const Vector& v)
{
    write_matrix_file(path, Matrix::column(v));
}

void save_problem(const std::string& prefix, const TlsProblem& p, const json& extra)
{
    write_matrix_file(prefix + "_A.txt", p.a);
    write_vector_file(prefix + "_b.txt", p.b);
    json side = {{"label", p.label},   {"seed", p.seed},       {"epsilon", p.epsilon},
                 {"m", p.a.rows()},    {"n", p.a.cols()},      {"params", p.params}};
    if (p.x_true) side["x_true"] = *p.x_true;
    for (const auto& [k, v] : extra.items()) side[k] = v;
    std::ofstream out(prefix + ".json");
    if (!out) throw std::runtime_error("cannot write " + prefix + ".json");
    out << side.dump(2) << '\n';
}

TlsProblem load_problem(const std::string& prefix)
{
    TlsProblem p;
    p.a = read_matrix_file(prefix + "_A.txt");
    p.b = read_vector_file(prefix + "_b.txt");
    if (p.b.size() != p.a.rows())
        throw std::runtime_error(prefix + ": b has " + std::to_string(p.b.size()) +
                                 " entries, A has " + std::to_string(p.a.rows()) + " rows");
    p.label = std::filesystem::path(prefix).filename().string();
    std::ifstream side(prefix + ".json");
    if (side) {
        const json j = json::parse(side);
        p.label = j.value("label", p.label);
        p.seed = j.value("seed", std::uint64_t{0});
        p.epsilon = j.value("epsilon", 0.0);
        if (j.contains("params")) p.params = j["params"].get<std::map<std::string, double>>();
        if (j.contains("x_true")) p.x_true = j["x_true"].get<Vector>();
    }
    return p;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace,
                     const std::string& variant, bool header)
{
    const std::string lead = variant.empty() ? "" : variant + ",";
    if (header) out << (variant.empty() ? "" : "variant,") << "k,sigma2,psi,rerrx,rerrs,inner1,inner2\n";
    for (const TraceEntry& e : trace)
        out << lead << e.k << ',' << format_double(e.sigma2) << ',' << format_double(e.psi) << ','
            << format_double(e.rerrx) << ',' << format_double(e.rerrs) << ',' << e.inner1 << ','
            << e.inner2 << '\n';
}

json to_json(const std::vector<TraceEntry>& trace)
{
    json arr = json::array();
    for (const TraceEntry& e : trace)
        arr.push_back({{"k", e.k},
                       {"sigma2", e.sigma2},
                       {"psi", e.psi},
                       {"rerrx", e.rerrx},
                       {"rerrs", e.rerrs},
                       {"inner1", e.inner1},
                       {"inner2", e.inner2}});
    return arr;
}

json to_json(const FlopCounter& flops)
{
    json by_format = json::object();
    json by_kernel = json::object();
    for (const auto& [key, ops] : flops.entries()) {
        const std::string& fmt = key.second;
        const std::string kernel(kernel_name(key.first));
        by_format[fmt] = by_format.value(fmt, 0.0) + ops;
        by_kernel[fmt][kernel] = ops;
    }
    return {{"total", flops.total()}, {"by_format", by_format}, {"by_kernel", by_kernel}};
}

json to_json(const RoundingEvents& events)
{
    return {{"overflow", events.overflow},
            {"underflow", events.underflow},
            {"division_by_zero", events.division_by_zero}};
}

json to_json(const PrecisionConstraintReport& rep)
{
    json formats = json::array();
    for (const FormatAssessment& f : rep.formats)
        formats.push_back({{"format", f.format},
                           {"unit_roundoff", f.unit_roundoff},
                           {"gamma", f.gamma},
                           {"delta_bound", f.delta_bound},
                           {"delta_heuristic", f.delta_heuristic},
                           {"interval", {f.interval.lower, f.interval.upper}},
                           {"interval_heuristic", {f.interval_heuristic.lower, f.interval_heuristic.upper}},
                           {"positive_definite_guaranteed", f.interval.positive_definite_guaranteed()},
                           {"positive_definite_heuristic",
                            f.interval_heuristic.positive_definite_guaranteed()},
                           {"satisfies_heuristic", f.satisfies_heuristic},
                           {"satisfies_rhs", f.satisfies_rhs}});
    json j = {{"c", rep.c},
              {"m", rep.m},
              {"n", rep.n},
              {"kappa_a", rep.kappa_a},
              {"kappa_f", rep.kappa_f},
              {"gap_ratio_sq", rep.gap_ratio_sq},
              {"lambda_min_h", rep.lambda_min_h},
              {"bound_qr_det", rep.bound_qr_det},
              {"bound_qr_prob", rep.bound_qr_prob},
              {"bound_heuristic", rep.bound_heuristic},
              {"bound_rhs", rep.bound_rhs},
              {"bound_chol", rep.bound_chol},
              {"bound_chol_scaled", rep.bound_chol_scaled},
              {"formats", formats}};
    j["recommended"] = rep.recommended ? json(*rep.recommended) : json("none");
    return j;
}

std::string_view preconditioning_name(Preconditioning p)
{
    return p == Preconditioning::qr ? "qr" : "cholesky";
}

std::string_view stop_rule_name(StopRule s) { return s == StopRule::strict ? "strict" : "weak"; }

std::string_view breakdown_name(PcgBreakdown b)
{
    switch (b) {
    case PcgBreakdown::none: return "none";
    case PcgBreakdown::zero_delta: return "zero_delta";
    case PcgBreakdown::nonpositive_delta: return "nonpositive_delta";
    }
    return "unknown";
}

Preconditioning preconditioning_by_name(const std::string& name)
{
    if (name == "qr") return Preconditioning::qr;
    if (name == "cholesky" || name == "cholesky_scaled") return Preconditioning::cholesky_scaled;
    throw std::invalid_argument("unknown preconditioner '" + name + "' (expected qr or cholesky)");
}

StopRule stop_rule_by_name(const std::string& name)
{
    if (name == "strict") return StopRule::strict;
    if (name == "weak") return StopRule::weak;
    throw std::invalid_argument("unknown stop rule '" + name + "' (expected strict or weak)");
}

json to_json(const RqiResult& res)
{
    json j = {{"termination_reason", std::string(termination_name(res.reason))},
              {"outer_iterations", res.outer_iterations},
              {"returned_k", res.returned_k},
              {"sigma2_final", res.sigma2},
              {"x_final", res.x},
              {"flops", to_json(res.flops)},
              {"rounding_events", to_json(res.events)}};
    const auto it = std::find_if(res.trace.begin(), res.trace.end(),
                                 [&](const TraceEntry& e) { return e.k == res.returned_k; });
    if (it != res.trace.end()) {
        j["final_rerrx"] = it->rerrx;
        j["final_rerrs"] = it->rerrs;
        j["final_psi"] = it->psi;
    }
    if (res.breakdown)
        j["breakdown"] = {{"k", res.breakdown->k},
                          {"solve", res.breakdown->solve},
                          {"kind", std::string(breakdown_name(res.breakdown->kind))},
                          {"delta", res.breakdown->delta}};
    return j;
}

json to_json(const RqiOptions& opts)
{
    json j = {{"u", opts.precisions.u.name},
              {"up", opts.precisions.up.name},
              {"uq", opts.precisions.uq.name},
              {"precond", std::string(preconditioning_name(opts.preconditioner))},
              {"stop", std::string(stop_rule_name(opts.stop_rule))},
              {"max_outer", opts.max_outer}};
    j["exact_outer"] = opts.exact_outer ? json(*opts.exact_outer) : json(nullptr);
    j["rhs_scale_exponent"] =
        opts.rhs_scale_exponent ? json(*opts.rhs_scale_exponent) : json(nullptr);
    return j;
}

void apply_json(const json& j, RqiOptions& opts)
{
    if (!j.is_object()) throw std::invalid_argument("solver config must be a JSON object");
    for (const auto& [key, v] : j.items()) {
        if (key == "u") opts.precisions.u = format_by_name(v.get<std::string>());
        else if (key == "up") opts.precisions.up = format_by_name(v.get<std::string>());
        else if (key == "uq") opts.precisions.uq = format_by_name(v.get<std::string>());
        else if (key == "precond") opts.preconditioner = preconditioning_by_name(v.get<std::string>());
        else if (key == "stop") opts.stop_rule = stop_rule_by_name(v.get<std::string>());
        else if (key == "max_outer") opts.max_outer = v.get<int>();
        else if (key == "exact_outer") {
            if (v.is_null()) opts.exact_outer.reset();
            else opts.exact_outer = v.get<int>();
        } else if (key == "rhs_scale_exponent") {
            if (v.is_null()) opts.rhs_scale_exponent.reset();
            else opts.rhs_scale_exponent = v.get<int>();
        } else {
            throw std::invalid_argument("unknown solver config key '" + key + "'");
        }
    }
}

} // namespace tlsmp
