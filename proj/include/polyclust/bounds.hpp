#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "polyclust/counting.hpp"
#include "polyclust/error.hpp"
#include "polyclust/polynomial.hpp"
#include "polyclust/rootfind.hpp"

namespace polyclust {

/// Default Erdos-Turan constant in the squared form disc^2 <= C L_N / N.
inline constexpr double default_et_constant = 16.0;
/// Absorbs root-solver backward error when asserting exact inequalities.
inline constexpr double default_residual_slack = 1e-9;
inline constexpr int default_jensen_nodes = 4096;

/**
 * L_N = log sum|a_k| - (1/2) log|a_0| - (1/2) log|a_N|.
 *
 * The raw logs are kept for reporting. value is computed from coefficient
 * ratios |a_k| / max|a_k|, which makes it invariant under a_k -> lambda a_k
 * to rounding.
 */
struct LogHeight {
    double l1_log = 0.0;
    double log_a0 = 0.0;
    double log_aN = 0.0;
    double value = 0.0;

    // scale-free pieces: log sum|a_k| - log|a_0| and log sum|a_k| - log|a_N|
    double inner_excess = 0.0;
    double outer_excess = 0.0;
};

inline LogHeight log_height(const Polynomial& p)
{
    const double scale = max_abs_coefficient(p);
    double rel_sum = 0.0;
    for (const auto& a : p.coeffs())
        rel_sum += std::abs(a) / scale;
    const double rel_l1 = std::log(rel_sum);
    const double rel_a0 = std::log(std::abs(p.constant()) / scale);
    const double rel_aN = std::log(std::abs(p.leading()) / scale);

    LogHeight h;
    h.l1_log = std::log(coefficient_l1(p));
    h.log_a0 = std::log(std::abs(p.constant()));
    h.log_aN = std::log(std::abs(p.leading()));
    h.inner_excess = rel_l1 - rel_a0;
    h.outer_excess = rel_l1 - rel_aN;
    // the exact value is >= log 2 (sum|a_k| >= |a_0| + |a_N| >= 2 sqrt|a_0 a_N|);
    // the clamp only removes rounding below that floor
    h.value = std::max(rel_l1 - 0.5 * rel_a0 - 0.5 * rel_aN, std::numbers::ln2);
    return h;
}

struct ClusterCertificate {
    double rho = 0.0;
    AnnulusCount counts;
    double lhs_inner = 0.0; // inner / N
    double rhs_inner = 0.0; // (log sum|a_k| - log|a_0|) / (N rho)
    double lhs_outer = 0.0; // outer / N
    double rhs_outer = 0.0; // (log sum|a_k| - log|a_N|) / (N rho)
    double lhs_total = 0.0; // 1 - annulus / N
    double rhs_total = 0.0; // 2 L_N / (N rho)
    double slack = default_residual_slack;
    bool satisfied = false;
};

struct DiscrepancyRecord {
    double theta = 0.0;
    double phi = 0.0;
    std::size_t count = 0;
    double discrepancy = 0.0; // |count/N - (phi - theta)/2pi|
    double bound = 0.0;       // sqrt(C L_N / N)
    double C = default_et_constant;
    bool satisfied = false;
};

inline void require_converged(const Polynomial& p, const RootSet& rs)
{
    if (rs.roots.size() != p.degree())
        throw error(errc::mismatched_degree, "root count differs from polynomial degree");
    if (!rs.converged)
        throw error(errc::unconverged_roots, "refusing to certify an unconverged root set");
}

/// Inner, outer and complementary annulus inequalities at one rho.
inline ClusterCertificate certify_annulus(const Polynomial& p, const RootSet& rs, double rho,
                                          double slack = default_residual_slack)
{
    check_rho(rho);
    require_converged(p, rs);
    const auto h = log_height(p);
    const auto n = static_cast<double>(p.degree());

    ClusterCertificate c;
    c.rho = rho;
    c.slack = slack;
    c.counts = count_annulus(rs, rho);
    c.lhs_inner = static_cast<double>(c.counts.inner) / n;
    c.lhs_outer = static_cast<double>(c.counts.outer) / n;
    c.lhs_total = 1.0 - static_cast<double>(c.counts.annulus) / n;
    c.rhs_inner = h.inner_excess / (n * rho);
    c.rhs_outer = h.outer_excess / (n * rho);
    c.rhs_total = 2.0 * h.value / (n * rho);
    c.satisfied = c.lhs_inner <= c.rhs_inner + slack && c.lhs_outer <= c.rhs_outer + slack &&
                  c.lhs_total <= c.rhs_total + slack;
    return c;
}

inline DiscrepancyRecord certify_sector(const Polynomial& p, const RootSet& rs, double theta,
                                        double phi, double C = default_et_constant)
{
    check_sector(theta, phi);
    if (!(C > 0.0))
        throw error(errc::invalid_argument, "Erdos-Turan constant must be positive");
    require_converged(p, rs);
    const auto h = log_height(p);
    const auto n = static_cast<double>(p.degree());

    DiscrepancyRecord d;
    d.theta = theta;
    d.phi = phi;
    d.C = C;
    d.count = count_sector(rs, theta, phi).count;
    d.discrepancy = std::abs(static_cast<double>(d.count) / n - (phi - theta) / two_pi);
    d.bound = std::sqrt(C * h.value / n);
    d.satisfied = d.discrepancy * d.discrepancy <= C * h.value / n;
    return d;
}

/// rho in {0.01, 0.02, ..., 0.5}.
inline std::vector<double> default_rho_grid()
{
    std::vector<double> g;
    for (int i = 1; i <= 50; ++i)
        g.push_back(i / 100.0);
    return g;
}

/// All sectors [2pi i/m, 2pi j/m) with 0 <= i < j <= m.
inline std::vector<std::pair<double, double>> sector_pairs(std::size_t m)
{
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j <= m; ++j)
            out.emplace_back(sector_boundary(i, m), sector_boundary(j, m));
    return out;
}

enum class JensenStatus { ok, root_on_circle };

struct JensenCheck {
    double quadrature_lhs = 0.0; // mean of log|P(e^{i phi})| minus log|P(0)|
    double root_sum_rhs = 0.0;   // sum over |z| < 1 of log(1/|z|)
    double residual = 0.0;
    JensenStatus status = JensenStatus::ok;
};

/**
 * Jensen's formula checked numerically.
 *
 * The circle integral uses the trapezoidal rule on the shifted grid
 * phi_j = 2pi (j + 1/2) / nodes. Shifting keeps nodes off roots of unity,
 * which would otherwise be hit exactly by polynomials like Z^N - 1.
 */
inline JensenCheck jensen_residual(const Polynomial& p, const RootSet& rs,
                                   int nodes = default_jensen_nodes)
{
    if (nodes < 64)
        throw error(errc::invalid_argument, "Jensen quadrature needs at least 64 nodes");
    if (rs.roots.size() != p.degree())
        throw error(errc::mismatched_degree, "root count differs from polynomial degree");

    const double scale = max_abs_coefficient(p);
    std::vector<complex> c(p.coeffs().begin(), p.coeffs().end());
    for (auto& a : c)
        a /= scale;

    double acc = 0.0;
    for (int j = 0; j < nodes; ++j) {
        const double angle = two_pi * (j + 0.5) / nodes;
        const complex z = std::polar(1.0, angle);
        complex v = c.back();
        for (std::size_t k = c.size() - 1; k-- > 0;)
            v = v * z + c[k];
        acc += std::log(std::abs(v));
    }

    JensenCheck out;
    out.quadrature_lhs = acc / nodes - std::log(std::abs(c.front()));
    for (const auto& z : rs.roots) {
        const double r = std::abs(z);
        if (r < 1.0)
            out.root_sum_rhs -= std::log(r);
        if (std::abs(r - 1.0) < 1e-6)
            out.status = JensenStatus::root_on_circle;
    }
    out.residual = std::abs(out.quadrature_lhs - out.root_sum_rhs);
    return out;
}

/// (sum over |z| < 1 - rho of log(1/|z|), rho * inner count); first >= second.
inline std::pair<double, double> minorization_check(std::span<const complex> roots, double rho)
{
    check_rho(rho);
    double sum = 0.0;
    std::size_t inner = 0;
    for (const auto& z : roots) {
        const double r = std::abs(z);
        if (r < 1.0 - rho) {
            sum -= std::log(r);
            ++inner;
        }
    }
    return {sum, rho * static_cast<double>(inner)};
}

inline std::pair<double, double> minorization_check(const RootSet& rs, double rho)
{
    return minorization_check(std::span<const complex>(rs.roots), rho);
}

} // namespace polyclust
