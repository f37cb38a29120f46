// polyclust: zeros of high-degree polynomials, clustering certificates and
// Monte Carlo experiments.
//
// Exit codes: 0 success, 1 certificate violated or not certifiable, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "polyclust/polyclust.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace polyclust;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_violation = 1;
constexpr int exit_usage = 2;

enum class LogLevel { quiet, info, debug };
LogLevel g_log_level = LogLevel::info;

void log_info(const std::string& msg)
{
    if (g_log_level != LogLevel::quiet)
        std::cerr << msg << '\n';
}

void log_debug(const std::string& msg)
{
    if (g_log_level == LogLevel::debug)
        std::cerr << msg << '\n';
}

std::string read_input(const std::string& path)
{
    if (path == "-") {
        return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    }
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw error(errc::io_error, "cannot read " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json parse_json(const std::string& text, const std::string& what)
{
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw error(errc::invalid_argument, what + " is not valid JSON: " + e.what());
    }
}

// Writes body to out_dir/name, or to stdout when out_dir is empty.
void emit(const std::string& out_dir, const std::string& name, const std::string& body)
{
    if (out_dir.empty()) {
        std::cout << body;
        return;
    }
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    const auto path = fs::path(out_dir) / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << body))
        throw error(errc::io_error, "cannot write " + path.string());
    log_info("wrote " + path.string());
}

std::size_t default_workers()
{
    if (const char* env = std::getenv("POLYCLUST_WORKERS")) {
        try {
            const auto v = std::stoul(env);
            if (v > 0)
                return v;
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

struct SolverFlags {
    int max_iterations = 200;
    double residual_tol = 1e-10;
    std::string seed_radius = "geometric-mean";

    void add(CLI::App* cmd)
    {
        cmd->add_option("--max-iterations", max_iterations, "Aberth sweep limit")->check(CLI::PositiveNumber);
        cmd->add_option("--residual-tol", residual_tol, "normalized residual accepted as converged")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--seed-radius", seed_radius, "starting circles")
            ->check(CLI::IsMember({"geometric-mean", "cauchy-bound"}));
    }

    SolveOptions options() const
    {
        SolveOptions o;
        o.max_iterations = max_iterations;
        o.residual_tol = residual_tol;
        o.seed_radius_mode = seed_radius == "cauchy-bound" ? SeedRadius::cauchy_bound : SeedRadius::geometric_mean;
        return o;
    }
};

// Polynomial from --input, or sampled from --model/--n/--seed/--trial.
struct PolySource {
    std::string input;
    std::string model;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;

    void add(CLI::App* cmd)
    {
        auto* in = cmd->add_option("--input,-i", input, "polynomial JSON file ('-' for stdin)");
        auto* m = cmd->add_option("--model", model, "sampler variant name or model JSON");
        cmd->add_option("--n", n, "degree when sampling")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", seed, "sampler seed");
        cmd->add_option("--trial", trial, "sampler trial index");
        in->excludes(m);
    }

    Polynomial get() const
    {
        if (!model.empty()) {
            if (n == 0)
                throw error(errc::invalid_argument, "--n is required with --model");
            return sample_polynomial(io::parse_model(model), n, seed, trial);
        }
        return io::polynomial_from_json(parse_json(read_input(input.empty() ? "-" : input), "polynomial"));
    }
};

int cmd_roots(const PolySource& src, const SolverFlags& solver, const std::string& out_dir)
{
    const auto p = src.get();
    const auto rs = find_roots(p, solver.options());
    log_debug("iterations " + std::to_string(rs.iterations));
    emit(out_dir, "roots.json", io::to_json(rs).dump() + "\n");
    if (!rs.converged)
        log_info("warning: root solver did not converge");
    return rs.converged ? exit_ok : exit_violation;
}

int cmd_count(const PolySource& src, const SolverFlags& solver, const std::vector<double>& rho_grid,
              std::size_t sectors, const std::string& out_dir)
{
    const auto p = src.get();
    const auto rs = find_roots(p, solver.options());
    std::ostringstream ann;
    ann << "rho,inner,annulus,outer\n";
    for (double rho : rho_grid) {
        const auto c = count_annulus(rs, rho);
        ann << detail::num(rho) << ',' << c.inner << ',' << c.annulus << ',' << c.outer << '\n';
    }
    std::ostringstream sec;
    sec << "theta,phi,count\n";
    for (std::size_t j = 0; j < sectors; ++j) {
        const double t = sector_boundary(j, sectors), f = sector_boundary(j + 1, sectors);
        sec << detail::num(t) << ',' << detail::num(f) << ',' << count_sector(rs, t, f).count << '\n';
    }
    if (out_dir.empty()) {
        std::cout << ann.str() << '\n' << sec.str();
    } else {
        emit(out_dir, "annulus_counts.csv", ann.str());
        emit(out_dir, "sector_counts.csv", sec.str());
    }
    return rs.converged ? exit_ok : exit_violation;
}

int cmd_certify(const PolySource& src, const SolverFlags& solver, const std::vector<double>& rho_grid,
                std::size_t sector_grid, double et_constant, int jensen_nodes, bool csv, const std::string& out_dir)
{
    const auto p = src.get();
    const auto rs = find_roots(p, solver.options());
    if (!rs.converged) {
        log_info("root solver did not converge; refusing to certify");
        return exit_violation;
    }
    const auto h = log_height(p);
    bool all = true;

    json annulus = json::array();
    std::ostringstream table;
    table << "kind,rho,theta,phi,lhs,rhs,satisfied\n";
    for (double rho : rho_grid) {
        const auto c = certify_annulus(p, rs, rho);
        const auto [sum, floor] = minorization_check(rs, rho);
        auto jc = io::to_json(c);
        jc["minorization"] = {sum, floor};
        annulus.push_back(jc);
        all = all && c.satisfied && sum >= floor;
        table << "annulus," << detail::num(rho) << ",,," << detail::num(c.lhs_total) << ','
              << detail::num(c.rhs_total) << ',' << (c.satisfied ? "true" : "false") << '\n';
    }
    json sectors = json::array();
    for (const auto& [theta, phi] : sector_pairs(sector_grid)) {
        const auto d = certify_sector(p, rs, theta, phi, et_constant);
        sectors.push_back(io::to_json(d));
        all = all && d.satisfied;
        table << "sector,," << detail::num(theta) << ',' << detail::num(phi) << ',' << detail::num(d.discrepancy)
              << ',' << detail::num(d.bound) << ',' << (d.satisfied ? "true" : "false") << '\n';
    }
    const auto jensen = jensen_residual(p, rs, jensen_nodes);

    json bundle = {{"degree", p.degree()},
                   {"log_height", io::to_json(h)},
                   {"converged", rs.converged},
                   {"max_residual", *std::max_element(rs.residuals.begin(), rs.residuals.end())},
                   {"et_constant", et_constant},
                   {"annulus", annulus},
                   {"sectors", sectors},
                   {"jensen", io::to_json(jensen)},
                   {"all_satisfied", all}};

    if (out_dir.empty()) {
        std::cout << (csv ? table.str() : bundle.dump(2) + "\n");
    } else {
        emit(out_dir, "certificate.json", bundle.dump(2) + "\n");
        emit(out_dir, "certificate.csv", table.str());
    }
    if (!all)
        log_info("CERTIFICATE VIOLATION: a clustering inequality failed on computed roots");
    return all ? exit_ok : exit_violation;
}

int cmd_sample(const std::string& model, std::size_t n, std::uint64_t seed, std::uint64_t trial,
               const std::string& out_dir)
{
    const auto p = sample_polynomial(io::parse_model(model), n, seed, trial);
    emit(out_dir, "polynomial.json", io::to_json(p).dump() + "\n");
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Zeros of high-degree polynomials: roots, clustering certificates, Monte Carlo experiments"};
    app.set_version_flag("--version", std::string("polyclust ") + POLYCLUST_VERSION + " (" + __VERSION__ + ")");
    app.require_subcommand(1);
    std::string log_level = "info";
    app.add_option("--log-level", log_level, "diagnostics on stderr")
        ->check(CLI::IsMember({"quiet", "info", "debug"}));

    SolverFlags solver;
    std::string out_dir;

    auto* roots = app.add_subcommand("roots", "compute all zeros; writes RootSet JSON");
    PolySource roots_src;
    roots_src.add(roots);
    solver.add(roots);
    roots->add_option("--out-dir", out_dir, "write roots.json here instead of stdout");

    auto* count = app.add_subcommand("count", "annulus and sector counts as CSV");
    PolySource count_src;
    count_src.add(count);
    solver.add(count);
    std::vector<double> count_rhos = default_rho_grid();
    std::size_t count_sectors = 8;
    count->add_option("--rho-grid", count_rhos, "comma-separated rho values")->delimiter(',');
    count->add_option("--sectors", count_sectors, "number of equal sectors")->check(CLI::PositiveNumber);
    count->add_option("--out-dir", out_dir, "write CSV files here instead of stdout");

    auto* certify = app.add_subcommand("certify", "certify annulus, Erdos-Turan and Jensen checks");
    PolySource cert_src;
    cert_src.add(certify);
    solver.add(certify);
    std::vector<double> cert_rhos = default_rho_grid();
    std::size_t cert_sectors = 12;
    double et_constant = default_et_constant;
    int jensen_nodes = default_jensen_nodes;
    bool cert_csv = false;
    certify->add_option("--rho-grid", cert_rhos, "comma-separated rho values")->delimiter(',');
    certify->add_option("--sector-grid", cert_sectors, "sectors [2pi i/m, 2pi j/m) for all i < j")
        ->check(CLI::PositiveNumber);
    certify->add_option("--et-constant", et_constant, "constant C in disc^2 <= C L_N / N")
        ->check(CLI::PositiveNumber);
    certify->add_option("--jensen-nodes", jensen_nodes, "quadrature nodes")->check(CLI::Range(64, 1 << 24));
    certify->add_flag("--csv", cert_csv, "print the CSV summary instead of JSON");
    certify->add_option("--out-dir", out_dir, "write certificate.json and certificate.csv here");

    auto* sample = app.add_subcommand("sample", "draw one random polynomial; writes Polynomial JSON");
    std::string sample_model;
    std::size_t sample_n = 0;
    std::uint64_t sample_seed = 0, sample_trial = 0;
    sample->add_option("--model", sample_model, "variant name or model JSON")->required();
    sample->add_option("--n", sample_n, "degree")->required()->check(CLI::PositiveNumber);
    sample->add_option("--seed", sample_seed, "seed");
    sample->add_option("--trial", sample_trial, "trial index");
    sample->add_option("--out-dir", out_dir, "write polynomial.json here instead of stdout");

    auto* experiment = app.add_subcommand("experiment", "Monte Carlo clustering experiment");
    std::string config_path, exp_model = "rademacher", alpha = "log_squared";
    std::vector<std::size_t> degrees{100};
    std::size_t trials = 10, workers = default_workers(), exp_sectors = 8;
    std::uint64_t exp_seed = 0;
    double exp_et = default_et_constant;
    int exp_jensen = default_jensen_nodes;
    auto* cfg_opt = experiment->add_option("--config", config_path, "experiment config JSON");
    auto* model_opt = experiment->add_option("--model", exp_model, "variant name or model JSON");
    auto* deg_opt = experiment->add_option("--degrees", degrees, "comma-separated degrees")->delimiter(',');
    auto* trials_opt = experiment->add_option("--trials", trials, "trials per degree")->check(CLI::PositiveNumber);
    auto* alpha_opt = experiment->add_option("--alpha", alpha, "alpha_N schedule")
                          ->check(CLI::IsMember({"log_squared", "sqrt_height", "fixed_rho"}));
    auto* seed_opt = experiment->add_option("--seed", exp_seed, "seed");
    auto* workers_opt = experiment->add_option("--workers", workers, "worker threads (env POLYCLUST_WORKERS)")
                            ->check(CLI::PositiveNumber);
    auto* sec_opt = experiment->add_option("--sector-grid", exp_sectors, "equal sectors for frequencies")
                        ->check(CLI::PositiveNumber);
    auto* et_opt = experiment->add_option("--et-constant", exp_et, "Erdos-Turan constant")->check(CLI::PositiveNumber);
    auto* jn_opt = experiment->add_option("--jensen-nodes", exp_jensen, "Jensen quadrature nodes (0 disables)");
    experiment->add_option("--out-dir", out_dir, "output directory")->required();
    for (auto* o : {model_opt, deg_opt, trials_opt, alpha_opt, seed_opt, sec_opt, et_opt, jn_opt})
        o->excludes(cfg_opt);

    auto* st = app.add_subcommand("selftest", "run the embedded fixture suite");
    int fault_iterations = 0;
    st->add_option("--inject-solver-fault", fault_iterations, "cap solver sweeps (negative-path check)")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }
    g_log_level = log_level == "quiet" ? LogLevel::quiet : log_level == "debug" ? LogLevel::debug : LogLevel::info;

    try {
        if (*roots)
            return cmd_roots(roots_src, solver, out_dir);
        if (*count)
            return cmd_count(count_src, solver, count_rhos, count_sectors, out_dir);
        if (*certify)
            return cmd_certify(cert_src, solver, cert_rhos, cert_sectors, et_constant, jensen_nodes, cert_csv, out_dir);
        if (*sample)
            return cmd_sample(sample_model, sample_n, sample_seed, sample_trial, out_dir);
        if (*st) {
            SelftestHooks hooks;
            hooks.max_iterations_override = fault_iterations;
            return selftest(std::cout, hooks) ? exit_ok : exit_violation;
        }
        if (*experiment) {
            ExperimentConfig cfg;
            if (!config_path.empty()) {
                cfg = config_from_json(parse_json(read_input(config_path), "config"));
            } else {
                cfg.model = io::parse_model(exp_model);
                cfg.degrees = degrees;
                cfg.trials = trials;
                cfg.alpha = parse_schedule(alpha);
                cfg.seed = exp_seed;
                cfg.sector_grid = exp_sectors;
                cfg.et_constant = exp_et;
                cfg.jensen_nodes = exp_jensen;
            }
            if (workers_opt->count() > 0 || config_path.empty())
                cfg.workers = workers;
            validate(cfg);
            const auto res = run_experiment(cfg);
            emit_report(res, out_dir);
            std::cout << summary_csv(res);
            const double rate = res.pass_rate();
            if (rate != 1.0)
                log_info("CERTIFICATE VIOLATION: pass rate " + detail::num(rate));
            return rate == 1.0 ? exit_ok : exit_violation;
        }
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == errc::unconverged_roots ? exit_violation : exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
