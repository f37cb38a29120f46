#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "polyclust/error.hpp"
#include "polyclust/experiments.hpp"
#include "polyclust/io.hpp"

namespace polyclust {

inline std::string schedule_name(AlphaSchedule s)
{
    switch (s) {
    case AlphaSchedule::log_squared: return "log_squared";
    case AlphaSchedule::sqrt_height: return "sqrt_height";
    case AlphaSchedule::fixed_rho: return "fixed_rho";
    }
    return "unknown";
}

inline AlphaSchedule parse_schedule(const std::string& name)
{
    if (name == "log_squared")
        return AlphaSchedule::log_squared;
    if (name == "sqrt_height")
        return AlphaSchedule::sqrt_height;
    if (name == "fixed_rho")
        return AlphaSchedule::fixed_rho;
    throw error(errc::bad_schedule, "unknown alpha schedule '" + name + "'");
}

namespace detail {

inline std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw error(errc::io_error, "cannot open " + path.string() + " for writing");
    return out;
}

inline void finish(std::ofstream& out, const std::filesystem::path& path)
{
    out.flush();
    if (!out)
        throw error(errc::io_error, "write to " + path.string() + " failed");
}

} // namespace detail

/// One trials.jsonl record.
inline nlohmann::json trial_to_json(const TrialRecord& r)
{
    nlohmann::json j = {{"degree", r.degree},
                        {"trial", r.trial},
                        {"seed", r.seed},
                        {"L_N", r.log_height},
                        {"converged", r.converged},
                        {"iterations", r.iterations},
                        {"max_residual", r.max_residual}};
    if (!r.converged)
        return j;
    j["alpha"] = r.alpha;
    j["rho"] = r.rho;
    j["counts"] = {{"inner", r.at_alpha.inner},
                   {"annulus", r.at_alpha.annulus},
                   {"outer", r.at_alpha.outer},
                   {"annulus_curve", r.annulus_curve},
                   {"sectors", r.sector_counts}};
    j["deficit"] = r.deficit;
    j["trial_bound"] = r.trial_bound;
    j["disc_sup"] = r.disc_sup;
    j["certificates"] = {{"annulus", r.annulus_certified},
                         {"sector", r.sector_certified},
                         {"minorization", r.minorization_ok}};
    if (std::isfinite(r.jensen_residual))
        j["jensen"] = {{"residual", r.jensen_residual}, {"root_on_circle", r.jensen_root_on_circle}};
    return j;
}

inline std::string trials_jsonl(const ExperimentResult& res)
{
    std::string out;
    for (const auto& r : res.trials) {
        out += trial_to_json(r).dump();
        out += '\n';
    }
    return out;
}

inline std::string summary_csv(const ExperimentResult& res)
{
    const auto m = res.config.sector_grid;
    std::ostringstream os;
    os << "degree,trials,converged,unconverged,alpha,rho,mean_L_N,mean_L_N_over_N,std_L_N_over_N,"
          "mean_nu_frac,mean_deficit,max_deficit,certified_bound,disc_sup_mean,disc_sup_max,pass_rate";
    for (std::size_t j = 0; j < m; ++j)
        os << ",sector_freq_" << j;
    os << '\n';
    for (const auto& d : res.degrees) {
        using detail::num;
        os << d.degree << ',' << d.trials << ',' << d.converged << ',' << d.unconverged << ',' << num(d.alpha)
           << ',' << num(d.rho) << ',' << num(d.mean_height) << ',' << num(d.mean_height_over_n) << ','
           << num(d.std_height_over_n) << ',' << num(d.mean_nu_frac) << ',' << num(d.mean_deficit) << ','
           << num(d.max_deficit) << ',' << num(d.certified_bound) << ',' << num(d.disc_sup_mean) << ','
           << num(d.disc_sup_max) << ',' << num(d.pass_rate);
        for (double f : d.sector_freq)
            os << ',' << num(f);
        os << '\n';
    }
    return os.str();
}

/// Roots as markers plus the unit circle and the annulus 1 - rho <= |z| <= 1/(1 - rho).
inline std::string roots_svg(std::span<const complex> roots, double rho)
{
    constexpr double size = 600.0;
    const double outer = 1.0 / (1.0 - rho);
    const double view = std::max(1.5, 1.15 * outer);
    const double scale = 0.5 * size / view;
    auto x = [&](double re) { return 0.5 * size + scale * re; };
    auto y = [&](double im) { return 0.5 * size - scale * im; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
       << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    auto ring = [&](const char* cls, double r, const char* stroke, const char* dash) {
        os << "<circle class=\"" << cls << "\" cx=\"" << x(0) << "\" cy=\"" << y(0) << "\" r=\""
           << detail::num(scale * r) << "\" fill=\"none\" stroke=\"" << stroke << "\"";
        if (*dash)
            os << " stroke-dasharray=\"" << dash << "\"";
        os << "/>\n";
    };
    ring("annulus-inner", 1.0 - rho, "#d62728", "4 3");
    ring("annulus-outer", outer, "#d62728", "4 3");
    ring("unit-circle", 1.0, "#7f7f7f", "");
    for (const auto& z : roots)
        os << "<circle class=\"root\" cx=\"" << detail::num(x(z.real())) << "\" cy=\"" << detail::num(y(z.imag()))
           << "\" r=\"2\" fill=\"#1f77b4\"/>\n";
    os << "</svg>\n";
    return os.str();
}

/**
 * Writes summary.csv, trials.jsonl, hist_modulus.csv, hist_arg.csv,
 * markov.csv and clustering_curve.csv into dir, plus roots_sample.svg when
 * at least one trial ran.
 */
inline void emit_report(const ExperimentResult& res, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw error(errc::io_error, "cannot create " + dir.string() + ": " + ec.message());

    auto write = [&](const char* name, const std::string& body) {
        const auto path = dir / name;
        auto out = detail::open_out(path);
        out << body;
        detail::finish(out, path);
    };
    using detail::num;

    write("summary.csv", summary_csv(res));
    write("trials.jsonl", trials_jsonl(res));

    std::ostringstream mod;
    mod << "degree,bin_lo,bin_hi,count,mass\n";
    std::ostringstream arg;
    arg << "degree,bin,theta,phi,count,mass\n";
    std::ostringstream markov;
    markov << "degree,eps,empirical,se,bound\n";
    std::ostringstream curve;
    curve << "degree,rho,mean_nu_frac\n";
    const auto bins = res.config.modulus_bins;
    const auto m = res.config.sector_grid;
    for (const auto& d : res.degrees) {
        const double total = static_cast<double>(d.converged * d.degree);
        const auto mass = [&](std::size_t c) { return total > 0 ? static_cast<double>(c) / total : 0.0; };
        for (std::size_t b = 0; b < d.modulus_hist.size(); ++b) {
            const double lo = 2.0 * static_cast<double>(b) / static_cast<double>(bins);
            const double hi = b == bins ? INFINITY : 2.0 * static_cast<double>(b + 1) / static_cast<double>(bins);
            mod << d.degree << ',' << num(lo) << ',' << (b == bins ? std::string("inf") : num(hi)) << ','
                << d.modulus_hist[b] << ',' << num(mass(d.modulus_hist[b])) << '\n';
        }
        for (std::size_t j = 0; j < d.arg_hist.size(); ++j)
            arg << d.degree << ',' << j << ',' << num(sector_boundary(j, m)) << ',' << num(sector_boundary(j + 1, m))
                << ',' << d.arg_hist[j] << ',' << num(mass(d.arg_hist[j])) << '\n';
        for (const auto& row : d.markov)
            markov << d.degree << ',' << num(row.eps) << ',' << num(row.empirical) << ',' << num(row.se) << ','
                   << num(row.bound) << '\n';
        for (std::size_t g = 0; g < d.clustering_curve.size(); ++g)
            curve << d.degree << ',' << num(res.config.rho_grid[g]) << ',' << num(d.clustering_curve[g]) << '\n';
    }
    write("hist_modulus.csv", mod.str());
    write("hist_arg.csv", arg.str());
    write("markov.csv", markov.str());
    write("clustering_curve.csv", curve.str());

    if (!res.sample_roots.empty())
        write("roots_sample.svg", roots_svg(res.sample_roots, res.sample_rho));
}

// --- config files ------------------------------------------------------------

inline ExperimentConfig config_from_json(const nlohmann::json& j)
{
    ExperimentConfig cfg;
    try {
        if (j.contains("model"))
            cfg.model = j.at("model").is_string() ? io::parse_model(j.at("model").get<std::string>())
                                                  : io::model_from_json(j.at("model"));
        if (j.contains("degrees"))
            cfg.degrees = j.at("degrees").get<std::vector<std::size_t>>();
        cfg.trials = j.value("trials", cfg.trials);
        if (j.contains("alpha_schedule"))
            cfg.alpha = parse_schedule(j.at("alpha_schedule").get<std::string>());
        if (j.contains("alpha"))
            cfg.alpha = parse_schedule(j.at("alpha").get<std::string>());
        cfg.fixed_rho = j.value("fixed_rho", cfg.fixed_rho);
        cfg.sector_grid = j.value("sector_grid", cfg.sector_grid);
        cfg.et_grid = j.value("et_grid", cfg.et_grid);
        cfg.et_constant = j.value("et_constant", cfg.et_constant);
        if (j.contains("rho_grid"))
            cfg.rho_grid = j.at("rho_grid").get<std::vector<double>>();
        if (j.contains("markov_eps"))
            cfg.markov_eps = j.at("markov_eps").get<std::vector<double>>();
        cfg.residual_slack = j.value("residual_slack", cfg.residual_slack);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.jensen_nodes = j.value("jensen_nodes", cfg.jensen_nodes);
        cfg.workers = j.value("workers", cfg.workers);
        cfg.modulus_bins = j.value("modulus_bins", cfg.modulus_bins);
        cfg.solve.max_iterations = j.value("max_iterations", cfg.solve.max_iterations);
        cfg.solve.residual_tol = j.value("residual_tol", cfg.solve.residual_tol);
    } catch (const nlohmann::json::exception& e) {
        throw error(errc::invalid_argument, std::string("bad experiment config: ") + e.what());
    }
    validate(cfg);
    return cfg;
}

} // namespace polyclust
