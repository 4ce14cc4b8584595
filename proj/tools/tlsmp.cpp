// tlsmp: generate TLS test problems, solve them with mixed precision RQI,
// evaluate factorization precision constraints and sweep the cost model.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tlsmp/errors.hpp"
#include "tlsmp/io.hpp"
#include "tlsmp/oracle.hpp"
#include "tlsmp/perfmodel.hpp"
#include "tlsmp/problems.hpp"
#include "tlsmp/rqi.hpp"

using nlohmann::json;
using namespace tlsmp;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised after outputs are written when the run itself reports a numerical
// failure, e.g. an inner breakdown.
struct SolverFailure : std::runtime_error {
    json detail;
    SolverFailure(const std::string& msg, json d) : std::runtime_error(msg), detail(std::move(d)) {}
};

int report(const std::string& kind, const std::string& message, int code, json detail = {})
{
    json j = {{"error", kind}, {"message", message}, {"exit_code", code}};
    if (!detail.is_null()) j["detail"] = std::move(detail);
    std::cerr << j.dump() << '\n';
    return code;
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    return out;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
    std::string name;
    std::uint64_t seed = 1;
    std::string out;
    std::map<std::string, double> params;
};

void cmd_generate(const GenerateArgs& g)
{
    const TlsProblem p = generate(g.name, g.params, g.seed);
    const OracleResult o = tls_solve_exact(p.a, p.b); // rejects non-unique instances

    json extra = {{"kappa_a", o.kappa_a},
                  {"kappa_f", o.kappa_f},
                  {"kappa_tls", o.kappa_tls},
                  {"sigma_min", o.sigma_min()},
                  {"sigma_prime_n", o.sigma_prime_n()},
                  {"consistent", o.consistent},
                  {"x_tls", o.x_tls}};
    if (p.epsilon != 0.0) {
        // Same seed, no perturbation: the matrix before noise is added.
        auto base_params = g.params;
        base_params[g.name == "toeplitz" ? "scale" : "eps"] = 0.0;
        const TlsProblem base = generate(g.name, base_params, g.seed);
        const SvdResult s = jacobi_svd(base.a);
        extra["kappa_a_unperturbed"] =
            s.sigma.back() > 0.0 ? json(s.sigma.front() / s.sigma.back()) : json("inf");
    }
    save_problem(g.out, p, extra);
    std::cout << json({{"prefix", g.out}, {"m", p.a.rows()}, {"n", p.a.cols()}, {"kappa_a", o.kappa_a}})
                     .dump()
              << '\n';
}

// ---------------------------------------------------------------------------

struct SolveFlags {
    std::string problem;
    std::string out;
    std::string config;
    std::string u, up, uq, precond, stop;
    int max_outer = 0;
    int exact_outer = -1;
    int rhs_scale = 0;
};

struct ResolvedSolve {
    std::string problem;
    std::string out;
    RqiOptions opts;
};

ResolvedSolve resolve(const SolveFlags& f, CLI::App& app)
{
    ResolvedSolve r;
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) throw UsageError("cannot open config " + f.config);
        json cfg;
        try {
            cfg = json::parse(in);
        } catch (const json::exception& e) {
            throw UsageError("config " + f.config + ": " + e.what());
        }
        r.problem = cfg.value("problem", "");
        r.out = cfg.value("out", "");
        if (cfg.contains("solver")) apply_json(cfg["solver"], r.opts);
    }
    auto given = [&](const char* name) { return app.count(name) > 0; };
    if (given("--problem")) r.problem = f.problem;
    if (given("--out")) r.out = f.out;
    if (given("--u")) r.opts.precisions.u = format_by_name(f.u);
    if (given("--up")) r.opts.precisions.up = format_by_name(f.up);
    if (given("--uq")) r.opts.precisions.uq = format_by_name(f.uq);
    if (given("--precond")) r.opts.preconditioner = preconditioning_by_name(f.precond);
    if (given("--stop")) r.opts.stop_rule = stop_rule_by_name(f.stop);
    if (given("--max-outer")) r.opts.max_outer = f.max_outer;
    if (given("--exact-outer")) r.opts.exact_outer = f.exact_outer;
    if (given("--rhs-scale")) r.opts.rhs_scale_exponent = f.rhs_scale;
    if (r.problem.empty()) throw UsageError("no problem given (--problem or config 'problem')");
    if (r.out.empty()) r.out = r.problem;
    r.opts.precisions.validate();
    return r;
}

json run_summary(const TlsProblem& p, const RqiOptions& opts, const OracleResult& o,
                 const RqiResult& res)
{
    json j = to_json(res);
    j["config"] = to_json(opts);
    j["problem"] = {{"label", p.label}, {"m", p.a.rows()}, {"n", p.a.cols()}, {"seed", p.seed}};
    j["oracle"] = {{"sigma_min", o.sigma_min()},
                   {"sigma_prime_n", o.sigma_prime_n()},
                   {"kappa_a", o.kappa_a},
                   {"kappa_tls", o.kappa_tls}};
    return j;
}

void cmd_solve(const ResolvedSolve& s)
{
    const TlsProblem p = load_problem(s.problem);
    const OracleResult o = tls_solve_exact(p.a, p.b);
    const RqiResult res = rqi_pcgtls_mp(p, s.opts, o);

    {
        auto out = open_out(s.out + "_trace.csv");
        write_trace_csv(out, res.trace);
    }
    json summary = run_summary(p, s.opts, o, res);
    summary["constraints"] = to_json(evaluate_uq_constraints(p.a, o));
    open_out(s.out + "_summary.json") << summary.dump(2) << '\n';

    std::cout << json({{"termination_reason", summary["termination_reason"]},
                       {"outer_iterations", res.outer_iterations},
                       {"final_rerrx", summary.value("final_rerrx", 0.0)}})
                     .dump()
              << '\n';
    if (res.reason == Termination::pcg_breakdown)
        throw SolverFailure("inner PCGTLS breakdown", summary["breakdown"]);
}

// ---------------------------------------------------------------------------

struct Variant {
    std::string name;
    PrecisionConfig precisions;
    std::optional<Preconditioning> precond;
};

Variant parse_variant(const std::string& spec)
{
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
        throw UsageError("variant '" + spec + "' must look like NAME=u,up,uq[,precond]");
    Variant v;
    v.name = spec.substr(0, eq);
    std::vector<std::string> parts;
    std::stringstream ss(spec.substr(eq + 1));
    for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
    if (parts.size() != 3 && parts.size() != 4)
        throw UsageError("variant '" + spec + "' must list three formats and an optional preconditioner");
    v.precisions = {format_by_name(parts[0]), format_by_name(parts[1]), format_by_name(parts[2])};
    v.precisions.validate();
    if (parts.size() == 4) v.precond = preconditioning_by_name(parts[3]);
    return v;
}

void cmd_compare(const ResolvedSolve& base, const std::vector<std::string>& specs)
{
    if (specs.empty()) throw UsageError("compare needs at least one --variant");
    std::vector<Variant> variants;
    for (const auto& s : specs) variants.push_back(parse_variant(s));

    const TlsProblem p = load_problem(base.problem);
    const OracleResult o = tls_solve_exact(p.a, p.b);

    auto csv = open_out(base.out + "_compare.csv");
    json summary = json::object();
    bool first = true;
    for (const Variant& v : variants) {
        RqiOptions opts = base.opts;
        opts.precisions = v.precisions;
        if (v.precond) opts.preconditioner = *v.precond;
        const RqiResult res = rqi_pcgtls_mp(p, opts, o);
        write_trace_csv(csv, res.trace, v.name, first);
        first = false;
        summary[v.name] = run_summary(p, opts, o, res);
    }
    open_out(base.out + "_compare.json") << summary.dump(2) << '\n';

    json brief = json::object();
    for (const auto& [name, s] : summary.items())
        brief[name] = {{"termination_reason", s["termination_reason"]},
                       {"outer_iterations", s["outer_iterations"]},
                       {"final_rerrx", s.value("final_rerrx", 0.0)}};
    std::cout << brief.dump() << '\n';
}

// ---------------------------------------------------------------------------

void cmd_constraints(const std::string& problem, double c, const std::string& out)
{
    const TlsProblem p = load_problem(problem);
    const json rep = to_json(evaluate_uq_constraints(p.a, p.b, c));
    if (out.empty()) {
        std::cout << rep.dump(2) << '\n';
    } else {
        open_out(out) << rep.dump(2) << '\n';
    }
}

// ---------------------------------------------------------------------------

struct PerfArgs {
    std::int64_t m_min = 10, m_max = 1000000, n_min = 10, n_max = 1000000;
    int points = 20;
    std::vector<std::int64_t> r{2000};
    double c = 1.0, c_p = 0.5, c_q = 0.25;
    std::string out;
};

void cmd_perf(const PerfArgs& a)
{
    const CostConstants mixed{a.c, a.c_p, a.c_q};
    mixed.validate();
    const auto ms = log_space(a.m_min, a.m_max, a.points);
    const auto ns = log_space(a.n_min, a.n_max, a.points);

    std::ostringstream csv;
    csv << "m,n,r,speedup\n";
    for (std::int64_t r : a.r)
        for (const GridCell& cell : speedup_grid(ms, ns, r, mixed))
            csv << cell.m << ',' << cell.n << ',' << cell.r << ',' << format_double(cell.speedup) << '\n';
    if (a.out.empty()) {
        std::cout << csv.str();
    } else {
        open_out(a.out) << csv.str();
    }
}

void add_solver_flags(CLI::App* cmd, SolveFlags& f)
{
    cmd->add_option("--problem", f.problem, "problem prefix (<prefix>_A.txt, <prefix>_b.txt)");
    cmd->add_option("--out", f.out, "output prefix (default: the problem prefix)");
    cmd->add_option("--config", f.config, "JSON config; flags take precedence");
    cmd->add_option("--u", f.u, "working precision (fp16, fp32, fp64)");
    cmd->add_option("--up", f.up, "PCGTLS precision");
    cmd->add_option("--uq", f.uq, "factorization precision");
    cmd->add_option("--precond", f.precond, "qr or cholesky");
    cmd->add_option("--stop", f.stop, "strict or weak");
    cmd->add_option("--max-outer", f.max_outer, "outer iteration cap")->check(CLI::PositiveNumber);
    cmd->add_option("--exact-outer", f.exact_outer,
                    "run exactly this many outer iterations, ignoring the psi rule")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--rhs-scale", f.rhs_scale,
                    "scale inner right-hand sides to about 2^E before rounding into u_p");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Mixed precision Rayleigh quotient iteration for total least squares"};
    app.require_subcommand(1);

    GenerateArgs gen;
    double g_m = 0, g_n = 0, g_eps = 0, g_delta = 0, g_omega = 0, g_alpha = 0, g_scale = 0;
    auto* generate_cmd = app.add_subcommand("generate", "write a test problem to files");
    generate_cmd->add_option("generator", gen.name, "random, delta, bjorck, toeplitz or vanhuffel")
        ->required();
    generate_cmd->add_option("--m", g_m, "rows");
    generate_cmd->add_option("--n", g_n, "columns (rows for toeplitz and vanhuffel)");
    generate_cmd->add_option("--eps", g_eps, "perturbation size");
    generate_cmd->add_option("--delta", g_delta, "delta for the delta problem");
    generate_cmd->add_option("--omega", g_omega, "Toeplitz band half width");
    generate_cmd->add_option("--alpha", g_alpha, "Toeplitz Gaussian width");
    generate_cmd->add_option("--scale", g_scale, "Toeplitz perturbation scale");
    generate_cmd->add_option("--seed", gen.seed, "RNG seed");
    generate_cmd->add_option("--out", gen.out, "output prefix")->required();

    SolveFlags solve_flags;
    auto* solve_cmd = app.add_subcommand("solve", "run RQI-PCGTLS on a problem");
    add_solver_flags(solve_cmd, solve_flags);

    SolveFlags compare_flags;
    std::vector<std::string> variants;
    auto* compare_cmd = app.add_subcommand("compare", "run several precision variants side by side");
    add_solver_flags(compare_cmd, compare_flags);
    compare_cmd->add_option("--variant", variants, "NAME=u,up,uq[,precond]; repeatable");

    std::string c_problem, c_out;
    double c_const = 1.0;
    auto* constraints_cmd = app.add_subcommand("constraints", "factorization precision bounds");
    constraints_cmd->add_option("--problem", c_problem, "problem prefix")->required();
    constraints_cmd->add_option("--c", c_const, "constant in the bounds")->check(CLI::PositiveNumber);
    constraints_cmd->add_option("--out", c_out, "JSON output file (default stdout)");

    PerfArgs perf;
    auto* perf_cmd = app.add_subcommand("perf", "modelled speedup over a log-spaced grid");
    perf_cmd->add_option("--m-min", perf.m_min)->check(CLI::PositiveNumber);
    perf_cmd->add_option("--m-max", perf.m_max)->check(CLI::PositiveNumber);
    perf_cmd->add_option("--n-min", perf.n_min)->check(CLI::PositiveNumber);
    perf_cmd->add_option("--n-max", perf.n_max)->check(CLI::PositiveNumber);
    perf_cmd->add_option("--points", perf.points, "grid points per axis")->check(CLI::PositiveNumber);
    perf_cmd->add_option("--r", perf.r, "outer iteration counts; repeatable");
    perf_cmd->add_option("--c", perf.c);
    perf_cmd->add_option("--cp", perf.c_p);
    perf_cmd->add_option("--cq", perf.c_q);
    perf_cmd->add_option("--out", perf.out, "CSV output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report("usage", e.what(), kExitUsage);
    }

    try {
        if (*generate_cmd) {
            const std::pair<const char*, double*> keys[] = {
                {"--m", &g_m},         {"--n", &g_n},         {"--eps", &g_eps}, {"--delta", &g_delta},
                {"--omega", &g_omega}, {"--alpha", &g_alpha}, {"--scale", &g_scale}};
            for (const auto& [flag, value] : keys)
                if (generate_cmd->count(flag)) gen.params[flag + 2] = *value;
            cmd_generate(gen);
        } else if (*solve_cmd) {
            cmd_solve(resolve(solve_flags, *solve_cmd));
        } else if (*compare_cmd) {
            cmd_compare(resolve(compare_flags, *compare_cmd), variants);
        } else if (*constraints_cmd) {
            cmd_constraints(c_problem, c_const, c_out);
        } else if (*perf_cmd) {
            cmd_perf(perf);
        }
    } catch (const SolverFailure& e) {
        return report("pcg_breakdown", e.what(), kExitNumerical, e.detail);
    } catch (const NumericalError& e) {
        return report("numerical", e.what(), kExitNumerical);
    } catch (const UsageError& e) {
        return report("usage", e.what(), kExitUsage);
    } catch (const std::invalid_argument& e) {
        return report("usage", e.what(), kExitUsage);
    } catch (const std::exception& e) {
        return report("io", e.what(), kExitUsage);
    }
    return 0;
}
