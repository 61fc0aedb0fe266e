// cbi: conservative confidence bounds on probability of failure on demand
// under doubts about test independence.
//
// Subcommands: assess, sweep, cutpoints, gdump, simulate, oracle-check.
// Exit codes: 0 ok, 1 usage/config error, 2 prior-knowledge (PK4) violation,
// 3 numerical non-convergence or failed oracle suite.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cbi/config.hpp"
#include "cbi/engine.hpp"
#include "cbi/errors.hpp"
#include "cbi/oracles.hpp"

namespace {

// CSV cell formatting: '.' decimal always (C locale), scientific notation
// below 1e-4 so tiny bounds keep their significant digits.
std::string cell(double v) {
    char buf[48];
    if (v == 0.0) return "0";
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::abs(v) < 1e-4) {
        std::snprintf(buf, sizeof buf, "%.12e", v);
    } else {
        std::snprintf(buf, sizeof buf, "%.12g", v);
    }
    return buf;
}

std::string cell(std::int64_t v) { return std::to_string(v); }

// "beta:alpha:beta" or "piecewise:k0,k1,...:d0,d1,..."
cbi::Prior parse_prior_spec(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() == 3 && parts[0] == "beta")
        return cbi::Prior::beta(std::stod(parts[1]), std::stod(parts[2]));
    if (parts.size() == 3 && parts[0] == "piecewise") {
        auto nums = [](const std::string& s) {
            std::vector<double> out;
            std::stringstream inner(s);
            std::string tok;
            while (std::getline(inner, tok, ',')) out.push_back(std::stod(tok));
            return out;
        };
        return cbi::Prior::piecewise(nums(parts[1]), nums(parts[2]));
    }
    throw CLI::ValidationError(
        "--prior", "expected beta:ALPHA:BETA or piecewise:K0,K1,..:D0,D1,.. (got '" + spec + "')");
}

struct CommonArgs {
    std::string prior_spec;
    std::optional<nlohmann::json> prior_record;
    double b = 1e-4;
    std::int64_t n = 10000;
    double phi1 = 0.0;
    double phi2 = 0.0;
    double eps = 1e-10;
    std::uint64_t seed = 0;
    std::string out;
    std::string config_path;

    cbi::Prior prior() const {
        if (!prior_spec.empty()) return parse_prior_spec(prior_spec);
        if (prior_record) return cbi::prior_from_json(*prior_record);
        return cbi::Prior::beta(1, 10000);
    }
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file; flags override its values");
    cmd->add_option("--prior", args.prior_spec,
                    "prior spec: beta:ALPHA:BETA or piecewise:KNOTS:DENSITIES");
    cmd->add_option("--b", args.b, "pfd bound to claim (0 < b < 1/2)");
    cmd->add_option("--n", args.n, "number of failure-free demands observed");
    cmd->add_option("--phi1", args.phi1, "doubt mass on negative dependence (lambda=0 side)");
    cmd->add_option("--phi2", args.phi2, "doubt mass on positive dependence (lambda=1 side)");
    cmd->add_option("--eps", args.eps, "cut-point mass tolerance");
    cmd->add_option("--seed", args.seed, "RNG seed for simulation subcommands");
    cmd->add_option("--out", args.out, "output file (default: standard output)");

    // Merge config-file values after parsing: a field from the file applies
    // only where the matching flag was not given, so flags always win.
    cmd->parse_complete_callback([cmd, &args]() {
        if (args.config_path.empty()) return;
        std::ifstream in(args.config_path);
        if (!in) throw CLI::ValidationError("--config", "cannot open " + args.config_path);
        nlohmann::json cfg;
        in >> cfg;
        const auto given = [cmd](const char* name) { return cmd->count(name) > 0; };
        if (cfg.contains("prior") && !given("--prior")) args.prior_record = cfg["prior"];
        if (cfg.contains("b") && !given("--b")) args.b = cfg["b"].get<double>();
        if (cfg.contains("n") && !given("--n")) args.n = cfg["n"].get<std::int64_t>();
        if (cfg.contains("phi1") && !given("--phi1")) args.phi1 = cfg["phi1"].get<double>();
        if (cfg.contains("phi2") && !given("--phi2")) args.phi2 = cfg["phi2"].get<double>();
        if (cfg.contains("eps") && !given("--eps")) args.eps = cfg["eps"].get<double>();
        if (cfg.contains("seed") && !given("--seed"))
            args.seed = cfg["seed"].get<std::uint64_t>();
        if (cfg.contains("out") && !given("--out")) args.out = cfg["out"].get<std::string>();
    });
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw CLI::ValidationError("--out", "cannot open " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

const char* kRowHeader =
    "prior,b,n,phi1,phi2,eps,conservative_confidence,iid_confidence,log_q,"
    "c1_low,c2_low,c1_high,c2_high,case_id,mass_residual_low,mass_residual_high,"
    "g_residual_low,g_residual_high,quadrature_error,status";

std::string inputs_prefix(const cbi::Prior& prior, double b, std::int64_t n, double phi1,
                          double phi2, double eps) {
    return prior.describe() + "," + cell(b) + "," + cell(n) + "," + cell(phi1) + "," +
           cell(phi2) + "," + cell(eps);
}

std::string result_row(const cbi::Prior& prior, double b, std::int64_t n, double phi1,
                       double phi2, double eps, const cbi::ConfidenceResult& r) {
    const auto& cp = r.cutpoints;
    return inputs_prefix(prior, b, n, phi1, phi2, eps) + "," +
           cell(r.conservative_confidence) + "," + cell(r.iid_confidence) + "," +
           cell(r.log_q) + "," + cell(cp.c1_low) + "," + cell(cp.c2_low) + "," +
           cell(cp.c1_high) + "," + cell(cp.c2_high) + "," + std::to_string(cp.case_id) + "," +
           cell(cp.mass_residual_low) + "," + cell(cp.mass_residual_high) + "," +
           cell(cp.g_residual_low) + "," + cell(cp.g_residual_high) + "," +
           cell(r.quadrature_error) + ",ok";
}

std::string error_row(const cbi::Prior& prior, double b, std::int64_t n, double phi1,
                      double phi2, double eps, const std::string& status) {
    return inputs_prefix(prior, b, n, phi1, phi2, eps) + ",,,,,,,,,,,,," + status;
}

int run_assess(const CommonArgs& args, bool iid_only) {
    const cbi::Prior prior = args.prior();
    Output out(args.out);
    if (iid_only) {
        out.stream() << "prior,b,n,iid_confidence\n"
                     << prior.describe() << "," << cell(args.b) << "," << cell(args.n) << ","
                     << cell(cbi::iid_posterior(prior, args.b, args.n)) << "\n";
        return 0;
    }
    if (args.n < 2) {
        std::cerr << "assess: n must be >= 2 for the dependent-chain analysis; "
                     "rerun with --iid-only for the classical posterior\n";
        return 1;
    }
    const cbi::AssessmentProblem problem{args.b, args.n, prior, args.phi1, args.phi2};
    problem.validate();
    const auto r = cbi::conservative_confidence(problem, args.eps);
    out.stream() << kRowHeader << "\n"
                 << result_row(prior, args.b, args.n, args.phi1, args.phi2, args.eps, r) << "\n";
    return 0;
}

std::vector<double> parse_values(const std::string& values, const std::string& log_range) {
    std::vector<double> out;
    if (!values.empty()) {
        std::stringstream ss(values);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    } else if (!log_range.empty()) {
        double lo, hi;
        int count;
        if (std::sscanf(log_range.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 2 ||
            lo <= 0 || hi <= lo)
            throw CLI::ValidationError("--log-range", "expected LO:HI:COUNT with 0<LO<HI");
        for (int i = 0; i < count; ++i)
            out.push_back(std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) *
                                                              i / (count - 1)));
    }
    if (out.empty())
        throw CLI::ValidationError("sweep", "provide --values or --log-range");
    return out;
}

int run_sweep(const CommonArgs& args, const std::string& axis, const std::string& values,
              const std::string& log_range) {
    const cbi::Prior base_prior = args.prior();
    Output out(args.out);
    out.stream() << kRowHeader << "\n";

    struct Point {
        cbi::Prior prior;
        double b;
        std::int64_t n;
        double phi1, phi2;
    };
    std::vector<Point> points;
    if (axis == "prior") {
        // Axis values are prior specs separated by ';' in --values.
        std::stringstream ss(values);
        std::string tok;
        while (std::getline(ss, tok, ';'))
            points.push_back({parse_prior_spec(tok), args.b, args.n, args.phi1, args.phi2});
        if (points.empty())
            throw CLI::ValidationError("sweep", "axis=prior needs --values spec1;spec2;..");
    } else {
        for (double v : parse_values(values, log_range)) {
            Point p{base_prior, args.b, args.n, args.phi1, args.phi2};
            if (axis == "n")
                p.n = static_cast<std::int64_t>(std::llround(v));
            else if (axis == "phi1")
                p.phi1 = v;
            else if (axis == "phi2")
                p.phi2 = v;
            else
                throw CLI::ValidationError("--axis", "one of n, phi1, phi2, prior");
            points.push_back(std::move(p));
        }
    }

    // Fan out; rows are collected in axis order, failures flagged per row.
    std::vector<std::future<std::string>> rows;
    rows.reserve(points.size());
    for (const Point& pt : points) {
        rows.push_back(std::async(std::launch::async, [pt, &args]() -> std::string {
            try {
                const cbi::AssessmentProblem problem{pt.b, pt.n, pt.prior, pt.phi1, pt.phi2};
                problem.validate();
                const auto r = cbi::conservative_confidence(problem, args.eps);
                return result_row(pt.prior, pt.b, pt.n, pt.phi1, pt.phi2, args.eps, r);
            } catch (const cbi::pk4_violation&) {
                return error_row(pt.prior, pt.b, pt.n, pt.phi1, pt.phi2, args.eps,
                                 "pk4_violation");
            } catch (const cbi::convergence_error&) {
                return error_row(pt.prior, pt.b, pt.n, pt.phi1, pt.phi2, args.eps,
                                 "non_convergence");
            } catch (const std::exception&) {
                return error_row(pt.prior, pt.b, pt.n, pt.phi1, pt.phi2, args.eps, "error");
            }
        }));
    }
    for (auto& row : rows) out.stream() << row.get() << "\n";
    return 0;
}

int run_cutpoints(const CommonArgs& args, const std::string& values,
                  const std::string& log_range) {
    const cbi::Prior prior = args.prior();
    Output out(args.out);
    out.stream() << "prior,b,n,phi1,phi2,eps,x_l,x_u,c1_low,c2_low,c1_high,c2_high,case_id,"
                    "mass_residual_low,mass_residual_high,g_residual_low,g_residual_high\n";
    std::vector<double> ns;
    if (values.empty() && log_range.empty())
        ns.push_back(static_cast<double>(args.n));
    else
        ns = parse_values(values, log_range);
    for (double nv : ns) {
        const auto n = static_cast<std::int64_t>(std::llround(nv));
        const cbi::GFunctionContext ctx{n};
        const auto cp = cbi::solve_cutpoints(prior, ctx, args.b, args.phi1, args.phi2, args.eps);
        out.stream() << inputs_prefix(prior, args.b, n, args.phi1, args.phi2, args.eps) << ","
                     << cell(cbi::argmax_g_lower(ctx)) << "," << cell(cbi::argmax_g_upper(ctx))
                     << "," << cell(cp.c1_low) << "," << cell(cp.c2_low) << ","
                     << cell(cp.c1_high) << "," << cell(cp.c2_high) << "," << cp.case_id << ","
                     << cell(cp.mass_residual_low) << "," << cell(cp.mass_residual_high) << ","
                     << cell(cp.g_residual_low) << "," << cell(cp.g_residual_high) << "\n";
    }
    return 0;
}

int run_gdump(const CommonArgs& args, int points) {
    if (points < 2) throw CLI::ValidationError("--points", "need at least 2");
    const cbi::GFunctionContext ctx{args.n};
    Output out(args.out);
    out.stream() << "n,x,g_lower,g_upper\n";
    for (int i = 0; i <= points; ++i) {
        const double x = static_cast<double>(i) / points;
        const double gl = x <= 0.5 ? cbi::g_lower(ctx, x) : 0.0;
        out.stream() << args.n << "," << cell(x) << "," << cell(gl) << ","
                     << cell(cbi::g_upper(ctx, x)) << "\n";
    }
    return 0;
}

int run_simulate(const CommonArgs& args, double x, double lambda, int runs) {
    Output out(args.out);
    out.stream() << "seed,x,lambda,n,failures,outcomes\n";
    for (int r = 0; r < runs; ++r) {
        const std::uint64_t sub = runs == 1 ? args.seed
                                            : cbi::split_seed(args.seed,
                                                              static_cast<std::uint64_t>(r));
        const auto chain = cbi::simulate_chain({x, lambda}, args.n, sub);
        int fails = 0;
        for (auto t : chain.trials) fails += t;
        out.stream() << sub << "," << cell(x) << "," << cell(lambda) << "," << args.n << ","
                     << fails << "," << chain.to_line() << "\n";
    }
    return 0;
}

int run_oracle_check(const CommonArgs& args) {
    Output out(args.out);
    std::ostream& os = out.stream();
    int failed = 0;
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        os << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
        if (!ok) ++failed;
    };

    // Conjugate closed form vs quadrature for the shipped Beta priors.
    {
        double worst = 0.0;
        for (auto [alpha, beta] : {std::pair{2.0, 20000.0}, {1.0, 10000.0}, {0.1, 1000.0}}) {
            for (std::int64_t n : {0, 1, 1000, 100000}) {
                const double quad = cbi::iid_posterior(cbi::Prior::beta(alpha, beta), 1e-4, n);
                const double exact = cbi::beta_conjugate_posterior({alpha, beta}, 1e-4, n);
                worst = std::max(worst, std::abs(quad - exact) / exact);
            }
        }
        report("conjugacy", worst <= 1e-8, "max rel gap " + cell(worst));
    }

    // Grid infimum vs the analytic worst case, with refinement.
    {
        const cbi::Prior p = cbi::Prior::beta(2, 5);
        const double analytic =
            cbi::conservative_confidence({0.2, 20, p, 0.1, 0.1}).conservative_confidence;
        double prev = 1.0;
        bool ok = true;
        std::string gaps;
        for (int strips : {100, 200, 400}) {
            const double g =
                cbi::grid_infimum(p, 0.2, 20, 0.1, 0.1, cbi::GridSpec{strips}).confidence;
            const double gap = g - analytic;
            ok = ok && gap > -1e-9 && gap < prev;
            prev = gap;
            gaps += cell(gap) + " ";
        }
        ok = ok && std::abs(prev) / analytic <= 0.02;
        report("grid-infimum", ok, "gaps at 100/200/400 strips: " + gaps);
    }

    // Monte Carlo lattice vs the closed-form chain likelihood.
    {
        bool ok = true;
        double worst_sigma = 0.0;
        for (double x : {0.1, 0.3, 0.5}) {
            for (double lambda : {0.0, 0.5, 0.9}) {
                if (!cbi::in_region(x, lambda)) continue;
                for (std::int64_t n : {2, 5, 10}) {
                    const double exact = cbi::likelihood_ff({x, lambda}, n);
                    const auto mc = cbi::mc_likelihood({x, lambda}, n, 200000,
                                                       args.seed ? args.seed : 7);
                    const double se = std::max(mc.std_error, 1e-4);
                    worst_sigma = std::max(worst_sigma, std::abs(mc.estimate - exact) / se);
                }
            }
        }
        ok = worst_sigma <= 3.0;
        report("mc-likelihood", ok, "worst deviation " + cell(worst_sigma) + " sigma");
    }

    os << (failed == 0 ? "all oracle suites passed\n" : "oracle suites FAILED\n");
    return failed == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conservative Bayesian confidence in a pfd bound after failure-free testing,\n"
                 "without assuming the tests were independent."};
    app.require_subcommand(1);

    CommonArgs assess_args, sweep_args, cut_args, gdump_args, sim_args, oracle_args;

    auto* assess = app.add_subcommand("assess", "single assessment, CSV row on stdout");
    add_common_options(assess, assess_args);
    bool iid_only = false;
    assess->add_flag("--iid-only", iid_only, "classical i.i.d. posterior only (allows n < 2)");

    auto* sweep = app.add_subcommand("sweep", "sweep one axis, CSV per value");
    add_common_options(sweep, sweep_args);
    std::string sweep_axis = "n", sweep_values, sweep_log_range;
    sweep->add_option("--axis", sweep_axis, "n, phi1, phi2 or prior");
    sweep->add_option("--values", sweep_values, "comma-separated axis values");
    sweep->add_option("--log-range", sweep_log_range, "LO:HI:COUNT log-spaced axis values");

    auto* cut = app.add_subcommand("cutpoints", "worst-case prior cut-points over n");
    add_common_options(cut, cut_args);
    std::string cut_values, cut_log_range;
    cut->add_option("--values", cut_values, "comma-separated n values");
    cut->add_option("--log-range", cut_log_range, "LO:HI:COUNT log-spaced n values");

    auto* gdump = app.add_subcommand("gdump", "dump the g_l/g_u likelihood-difference curves");
    add_common_options(gdump, gdump_args);
    int gdump_points = 512;
    gdump->add_option("--points", gdump_points, "grid resolution");

    auto* sim = app.add_subcommand("simulate", "simulate dependent demand chains");
    add_common_options(sim, sim_args);
    double sim_x = 0.3, sim_lambda = 0.3;
    int sim_runs = 1;
    sim->add_option("--x", sim_x, "pfd");
    sim->add_option("--lambda", sim_lambda, "P(failure follows failure)");
    sim->add_option("--runs", sim_runs, "number of chains");

    auto* oracle = app.add_subcommand("oracle-check", "run the independent oracle suites");
    add_common_options(oracle, oracle_args);

    try {
        app.parse(argc, argv);
        if (*assess) return run_assess(assess_args, iid_only);
        if (*sweep) return run_sweep(sweep_args, sweep_axis, sweep_values, sweep_log_range);
        if (*cut) return run_cutpoints(cut_args, cut_values, cut_log_range);
        if (*gdump) return run_gdump(gdump_args, gdump_points);
        if (*sim) return run_simulate(sim_args, sim_x, sim_lambda, sim_runs);
        if (*oracle) return run_oracle_check(oracle_args);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage problems map to exit 1
    } catch (const cbi::pk4_violation& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const cbi::convergence_error& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
