#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>
#include <vector>

#include "polyclust/bounds.hpp"
#include "polyclust/counting.hpp"
#include "polyclust/error.hpp"
#include "polyclust/polynomial.hpp"
#include "polyclust/rootfind.hpp"
#include "polyclust/samplers.hpp"

namespace polyclust {

enum class AlphaSchedule {
    log_squared, // (log N)^2
    sqrt_height, // N min{1, sqrt(mean L_N / N)}
    fixed_rho,   // rho N
};

/// Width parameter alpha_N; the annulus is then taken at rho = alpha_N / N.
inline double alpha_of(AlphaSchedule schedule, std::size_t n, double mean_height, double fixed_rho = 0.1)
{
    if (n < 2)
        throw error(errc::bad_schedule, "alpha_N needs N >= 2");
    const auto dn = static_cast<double>(n);
    double alpha = 0.0;
    switch (schedule) {
    case AlphaSchedule::log_squared: {
        const double l = std::log(dn);
        alpha = l * l;
        break;
    }
    case AlphaSchedule::sqrt_height:
        if (!(mean_height >= std::numbers::ln2))
            throw error(errc::bad_schedule, "mean L_N must be at least log 2");
        alpha = dn * std::min(1.0, std::sqrt(mean_height / dn));
        break;
    case AlphaSchedule::fixed_rho:
        if (!(fixed_rho > 0.0 && fixed_rho < 1.0))
            throw error(errc::bad_schedule, "fixed rho must lie in (0, 1)");
        alpha = fixed_rho * dn;
        break;
    }
    if (!(alpha > 0.0))
        throw error(errc::bad_schedule, "schedule produced a nonpositive alpha_N");
    return std::min(alpha, dn);
}

struct ExperimentConfig {
    CoefficientModel model = Rademacher{};
    std::vector<std::size_t> degrees{100};
    std::size_t trials = 10;
    AlphaSchedule alpha = AlphaSchedule::log_squared;
    double fixed_rho = 0.1;
    std::size_t sector_grid = 8;       // m equal sectors for frequencies / histograms
    std::size_t et_grid = 12;          // Erdos-Turan certificate over all [2pi i/12, 2pi j/12)
    double et_constant = default_et_constant;
    std::vector<double> rho_grid = default_rho_grid();
    std::vector<double> markov_eps{0.01, 0.02, 0.05, 0.1, 0.2, 0.5};
    double residual_slack = default_residual_slack;
    std::uint64_t seed = 0;
    int jensen_nodes = default_jensen_nodes; // 0 disables the per-trial Jensen check
    std::size_t workers = 1;
    std::size_t modulus_bins = 40;           // over [0, 2), plus one overflow bin
    SolveOptions solve{};
};

inline void validate(const ExperimentConfig& cfg)
{
    validate(cfg.model);
    if (cfg.degrees.empty())
        throw error(errc::invalid_argument, "need at least one degree");
    for (auto n : cfg.degrees)
        if (n < 2)
            throw error(errc::invalid_argument, "degrees must be >= 2");
    if (cfg.trials < 1)
        throw error(errc::invalid_argument, "trials must be >= 1");
    if (cfg.sector_grid < 1 || cfg.et_grid < 1)
        throw error(errc::invalid_argument, "sector grids need at least one sector");
    if (!(cfg.et_constant > 0.0))
        throw error(errc::invalid_argument, "Erdos-Turan constant must be positive");
    for (double r : cfg.rho_grid)
        check_rho(r);
    for (double e : cfg.markov_eps)
        if (!(e > 0.0))
            throw error(errc::invalid_argument, "Markov thresholds must be positive");
    if (cfg.jensen_nodes != 0 && cfg.jensen_nodes < 64)
        throw error(errc::invalid_argument, "jensen_nodes must be 0 or >= 64");
    if (cfg.workers < 1)
        throw error(errc::invalid_argument, "workers must be >= 1");
    if (cfg.modulus_bins < 1)
        throw error(errc::invalid_argument, "modulus_bins must be >= 1");
}

struct TrialRecord {
    std::size_t degree = 0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    double log_height = 0.0;
    bool converged = false;
    int iterations = 0;
    double max_residual = 0.0;

    // filled only for converged trials
    double alpha = 0.0;
    double rho = 0.0;
    AnnulusCount at_alpha;
    double deficit = 0.0;       // 1 - nu_N(rho) / N
    double trial_bound = 0.0;   // 2 L_N / (rho N)
    std::vector<std::size_t> annulus_curve; // nu_N(rho) over cfg.rho_grid
    std::vector<std::size_t> sector_counts; // m equal sectors
    double disc_sup = 0.0;                  // max discrepancy over the Erdos-Turan grid
    bool annulus_certified = false;
    bool sector_certified = false;
    bool minorization_ok = false;
    double jensen_residual = std::numeric_limits<double>::quiet_NaN();
    bool jensen_root_on_circle = false;
    std::vector<std::size_t> modulus_hist;

    bool certified() const noexcept { return annulus_certified && sector_certified && minorization_ok; }
};

struct MarkovRow {
    double eps = 0.0;
    double empirical = 0.0; // P{1 - nu/N > eps}
    double se = 0.0;        // binomial standard error of empirical
    double bound = 0.0;     // mean(2 L_N / (rho N)) / eps
};

struct DegreeSummary {
    std::size_t degree = 0;
    std::size_t trials = 0;
    std::size_t converged = 0;
    std::size_t unconverged = 0;
    double alpha = 0.0;
    double rho = 0.0;
    double mean_height = 0.0;          // over converged trials
    double mean_height_over_n = 0.0;
    double std_height_over_n = 0.0;
    double mean_nu_frac = 0.0;         // mean nu_N(rho)/N
    double mean_deficit = 0.0;
    double max_deficit = 0.0;
    double certified_bound = 0.0;      // 2 mean(L_N) / alpha_N
    double disc_sup_mean = 0.0;
    double disc_sup_max = 0.0;
    double pass_rate = 1.0;            // certified / converged
    std::vector<double> sector_freq;   // mean count_j / N per equal sector
    std::vector<double> clustering_curve; // mean nu_N(rho)/N over cfg.rho_grid
    std::vector<MarkovRow> markov;
    std::vector<std::size_t> modulus_hist;
    std::vector<std::size_t> arg_hist;
    double max_jensen_residual = 0.0;  // over trials without roots on the circle
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<DegreeSummary> degrees;
    std::vector<TrialRecord> trials; // degree-major, trial index order
    // one trial kept whole for plotting
    std::vector<complex> sample_roots;
    double sample_rho = 0.0;

    double pass_rate() const noexcept
    {
        std::size_t conv = 0, ok = 0;
        for (const auto& t : trials) {
            conv += t.converged;
            ok += t.converged && t.certified();
        }
        return conv == 0 ? 1.0 : static_cast<double>(ok) / static_cast<double>(conv);
    }
};

/// Replaces the sampler: polynomial for (degree, trial).
using PolynomialSource = std::function<Polynomial(std::size_t, std::size_t)>;

namespace detail {

inline TrialRecord evaluate_trial(const Polynomial& p, const ExperimentConfig& cfg, double alpha,
                                  std::size_t trial, RootSet* keep_roots)
{
    const std::size_t n = p.degree();
    const auto dn = static_cast<double>(n);
    TrialRecord r;
    r.degree = n;
    r.trial = trial;
    r.seed = cfg.seed;
    r.log_height = log_height(p).value;

    SolveOptions opts = cfg.solve;
    auto rs = find_roots(p, opts);
    r.converged = rs.converged;
    r.iterations = rs.iterations;
    r.max_residual = *std::max_element(rs.residuals.begin(), rs.residuals.end());
    if (keep_roots)
        *keep_roots = rs;
    if (!rs.converged)
        return r;

    r.alpha = alpha;
    r.rho = alpha / dn;
    // alpha = N gives rho = 1, outside the open range; the annulus is then all of C \ {0}
    const double rho = std::min(r.rho, std::nextafter(1.0, 0.0));
    const auto at = certify_annulus(p, rs, rho, cfg.residual_slack);
    r.at_alpha = at.counts;
    r.deficit = at.lhs_total;
    r.trial_bound = at.rhs_total;

    bool annulus_ok = at.satisfied;
    bool minor_ok = true;
    r.annulus_curve.reserve(cfg.rho_grid.size());
    for (double g : cfg.rho_grid) {
        const auto c = certify_annulus(p, rs, g, cfg.residual_slack);
        annulus_ok = annulus_ok && c.satisfied;
        r.annulus_curve.push_back(c.counts.annulus);
        const auto [sum, floor] = minorization_check(rs, g);
        minor_ok = minor_ok && sum >= floor;
    }
    r.annulus_certified = annulus_ok;
    r.minorization_ok = minor_ok;

    bool sector_ok = true;
    for (const auto& [theta, phi] : sector_pairs(cfg.et_grid)) {
        const auto d = certify_sector(p, rs, theta, phi, cfg.et_constant);
        sector_ok = sector_ok && d.satisfied;
        r.disc_sup = std::max(r.disc_sup, d.discrepancy);
    }
    r.sector_certified = sector_ok;
    r.sector_counts = equal_sector_counts(rs.roots, cfg.sector_grid);

    if (cfg.jensen_nodes > 0) {
        const auto j = jensen_residual(p, rs, cfg.jensen_nodes);
        r.jensen_residual = j.residual;
        r.jensen_root_on_circle = j.status == JensenStatus::root_on_circle;
    }

    r.modulus_hist.assign(cfg.modulus_bins + 1, 0);
    const double width = 2.0 / static_cast<double>(cfg.modulus_bins);
    for (const auto& z : rs.roots) {
        const double m = std::abs(z);
        const auto bin = m >= 2.0 ? cfg.modulus_bins : std::min(static_cast<std::size_t>(m / width), cfg.modulus_bins - 1);
        ++r.modulus_hist[bin];
    }
    return r;
}

inline DegreeSummary summarize(std::size_t n, double alpha, const ExperimentConfig& cfg,
                               std::span<const TrialRecord> recs)
{
    DegreeSummary s;
    s.degree = n;
    s.alpha = alpha;
    s.rho = alpha / static_cast<double>(n);
    s.trials = recs.size();
    s.sector_freq.assign(cfg.sector_grid, 0.0);
    s.arg_hist.assign(cfg.sector_grid, 0);
    s.modulus_hist.assign(cfg.modulus_bins + 1, 0);
    s.clustering_curve.assign(cfg.rho_grid.size(), 0.0);

    const auto dn = static_cast<double>(n);
    double sum_h = 0.0, sum_h2 = 0.0, sum_nu = 0.0, sum_def = 0.0, sum_disc = 0.0, sum_tb = 0.0;
    std::size_t certified = 0;
    for (const auto& r : recs) {
        if (!r.converged) {
            ++s.unconverged;
            continue;
        }
        ++s.converged;
        certified += r.certified();
        const double hn = r.log_height / dn;
        sum_h += r.log_height;
        sum_h2 += hn * hn;
        sum_nu += static_cast<double>(r.at_alpha.annulus) / dn;
        sum_def += r.deficit;
        sum_tb += r.trial_bound;
        s.max_deficit = std::max(s.max_deficit, r.deficit);
        sum_disc += r.disc_sup;
        s.disc_sup_max = std::max(s.disc_sup_max, r.disc_sup);
        for (std::size_t j = 0; j < cfg.sector_grid; ++j) {
            s.sector_freq[j] += static_cast<double>(r.sector_counts[j]) / dn;
            s.arg_hist[j] += r.sector_counts[j];
        }
        for (std::size_t g = 0; g < cfg.rho_grid.size(); ++g)
            s.clustering_curve[g] += static_cast<double>(r.annulus_curve[g]) / dn;
        for (std::size_t b = 0; b < s.modulus_hist.size(); ++b)
            s.modulus_hist[b] += r.modulus_hist[b];
        if (!r.jensen_root_on_circle && std::isfinite(r.jensen_residual))
            s.max_jensen_residual = std::max(s.max_jensen_residual, r.jensen_residual);
    }
    if (s.converged == 0)
        return s;

    const auto c = static_cast<double>(s.converged);
    s.mean_height = sum_h / c;
    s.mean_height_over_n = s.mean_height / dn;
    s.std_height_over_n = std::sqrt(std::max(0.0, sum_h2 / c - s.mean_height_over_n * s.mean_height_over_n));
    s.mean_nu_frac = sum_nu / c;
    s.mean_deficit = sum_def / c;
    s.certified_bound = 2.0 * s.mean_height / alpha;
    s.disc_sup_mean = sum_disc / c;
    s.pass_rate = static_cast<double>(certified) / c;
    for (auto& f : s.sector_freq)
        f /= c;
    for (auto& v : s.clustering_curve)
        v /= c;

    const double mean_trial_bound = sum_tb / c;
    for (double eps : cfg.markov_eps) {
        std::size_t above = 0;
        for (const auto& r : recs)
            above += r.converged && r.deficit > eps;
        MarkovRow row;
        row.eps = eps;
        row.empirical = static_cast<double>(above) / c;
        row.se = std::sqrt(row.empirical * (1.0 - row.empirical) / c);
        row.bound = mean_trial_bound / eps;
        s.markov.push_back(row);
    }
    return s;
}

/// Runs task(i) for i in [0, count) on a bounded pool; rethrows the first failure.
inline void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& task)
{
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i)
            task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        task(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure)
                            failure = std::current_exception();
                        next = count;
                    }
                }
            });
        }
    }
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace detail

/**
 * Monte Carlo over cfg.degrees x cfg.trials.
 *
 * Trials are solved on cfg.workers threads; every record is stored at its
 * trial index and summaries are built in index order, so the result does not
 * depend on the worker count. Unconverged trials are counted but excluded
 * from every mean.
 */
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, const PolynomialSource& source = {})
{
    validate(cfg);
    ExperimentResult res;
    res.config = cfg;

    auto make = [&](std::size_t n, std::size_t t) {
        return source ? source(n, t) : sample_polynomial(cfg.model, n, cfg.seed, t);
    };

    for (std::size_t di = 0; di < cfg.degrees.size(); ++di) {
        const std::size_t n = cfg.degrees[di];
        double alpha = 0.0;
        if (cfg.alpha == AlphaSchedule::sqrt_height) {
            double sum = 0.0;
            for (std::size_t t = 0; t < cfg.trials; ++t)
                sum += log_height(make(n, t)).value;
            alpha = alpha_of(cfg.alpha, n, sum / static_cast<double>(cfg.trials), cfg.fixed_rho);
        } else {
            alpha = alpha_of(cfg.alpha, n, std::numbers::ln2, cfg.fixed_rho);
        }

        const bool keep = di + 1 == cfg.degrees.size();
        RootSet kept;
        std::vector<TrialRecord> recs(cfg.trials);
        detail::parallel_for(cfg.trials, cfg.workers, [&](std::size_t t) {
            recs[t] = detail::evaluate_trial(make(n, t), cfg, alpha, t, keep && t == 0 ? &kept : nullptr);
        });
        res.degrees.push_back(detail::summarize(n, alpha, cfg, recs));
        if (keep) {
            res.sample_roots = kept.roots;
            res.sample_rho = alpha / static_cast<double>(n);
        }
        res.trials.insert(res.trials.end(), std::make_move_iterator(recs.begin()),
                          std::make_move_iterator(recs.end()));
    }
    return res;
}

// --- brute-force oracle ------------------------------------------------------------

/// Exact expectations for Rademacher(1/2) by enumerating all 2^(N+1) sign vectors.
struct ExactExpectation {
    std::size_t degree = 0;
    std::uint64_t denominator = 0;                 // N * 2^(N+1)
    std::vector<std::uint64_t> annulus_numerators; // sum of nu_N(rho) per rho
    std::vector<std::uint64_t> sector_numerators;  // sum of nu_N(theta, phi) per sector
    std::size_t unconverged = 0;

    double annulus(std::size_t i) const
    {
        return static_cast<double>(annulus_numerators[i]) / static_cast<double>(denominator);
    }
    double sector(std::size_t i) const
    {
        return static_cast<double>(sector_numerators[i]) / static_cast<double>(denominator);
    }
};

inline constexpr std::size_t max_enumeration_degree = 12;

/// Sign vector with index bit k set -> a_k = +1, clear -> a_k = -1.
inline Polynomial sign_polynomial(std::size_t n, std::uint64_t bits)
{
    std::vector<complex> c(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        c[k] = (bits >> k) & 1u ? 1.0 : -1.0;
    return make_polynomial(std::move(c));
}

inline ExactExpectation exhaustive_expectation(std::size_t n, std::span<const double> rhos,
                                               std::span<const std::pair<double, double>> sectors,
                                               const SolveOptions& opts = {})
{
    if (n > max_enumeration_degree)
        throw error(errc::degree_too_large_for_enumeration, "enumeration is limited to N <= 12");
    if (n < 1)
        throw error(errc::degree_too_small, "degree must be at least 1");
    for (double r : rhos)
        check_rho(r);
    for (const auto& [t, p] : sectors)
        check_sector(t, p);

    ExactExpectation e;
    e.degree = n;
    const std::uint64_t count = std::uint64_t{1} << (n + 1);
    e.denominator = static_cast<std::uint64_t>(n) * count;
    e.annulus_numerators.assign(rhos.size(), 0);
    e.sector_numerators.assign(sectors.size(), 0);
    for (std::uint64_t bits = 0; bits < count; ++bits) {
        const auto rs = find_roots(sign_polynomial(n, bits), opts);
        e.unconverged += !rs.converged;
        for (std::size_t i = 0; i < rhos.size(); ++i)
            e.annulus_numerators[i] += count_annulus(rs, rhos[i]).annulus;
        for (std::size_t i = 0; i < sectors.size(); ++i)
            e.sector_numerators[i] += count_sector(rs, sectors[i].first, sectors[i].second).count;
    }
    return e;
}

/// Single (rho, sector) form.
inline ExactExpectation exhaustive_expectation(std::size_t n, double rho, double theta, double phi,
                                               const SolveOptions& opts = {})
{
    const double rhos[] = {rho};
    const std::pair<double, double> sectors[] = {{theta, phi}};
    return exhaustive_expectation(n, rhos, sectors, opts);
}

} // namespace polyclust
