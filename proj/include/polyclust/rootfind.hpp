#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "polyclust/error.hpp"
#include "polyclust/polynomial.hpp"

namespace polyclust {

enum class SeedRadius {
    cauchy_bound,   // one circle of radius 1 + max |a_k / a_N|
    geometric_mean, // one circle per Newton-polygon edge, radius (|a_i| / |a_j|)^(1/(j-i))
};

struct SolveOptions {
    int max_iterations = 200;
    double residual_tol = 1e-10;
    SeedRadius seed_radius_mode = SeedRadius::geometric_mean;
    std::uint64_t perturbation_seed = 0;
};

struct RootSet {
    std::vector<complex> roots;
    std::vector<double> residuals;
    int iterations = 0;
    bool converged = false;

    std::size_t size() const noexcept { return roots.size(); }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// uniform in [-1, 1)
inline double signed_unit(std::uint64_t seed, std::uint64_t index) noexcept
{
    const auto bits = splitmix64(seed ^ splitmix64(index)) >> 11;
    return 2.0 * static_cast<double>(bits) * 0x1.0p-53 - 1.0;
}

/// Coefficients normalized to max |a_k| = 1 plus their moduli, shared by the
/// Newton step and the residual test.
class NormalizedPoly {
public:
    explicit NormalizedPoly(const Polynomial& p)
    {
        const double scale = max_abs_coefficient(p);
        if (!std::isfinite(scale) || !all_finite(p))
            throw error(errc::non_finite_coefficient, "coefficients must be finite");
        coeffs_.reserve(p.coeffs().size());
        moduli_.reserve(p.coeffs().size());
        for (const auto& a : p.coeffs()) {
            coeffs_.push_back(a / scale);
            moduli_.push_back(std::abs(coeffs_.back()));
        }
        for (const auto& a : coeffs_)
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
                throw error(errc::non_finite_coefficient, "coefficient overflow after normalization");
        l1_ = 0.0;
        for (double m : moduli_)
            l1_ += m;
    }

    std::size_t degree() const noexcept { return coeffs_.size() - 1; }
    const std::vector<complex>& coeffs() const noexcept { return coeffs_; }
    const std::vector<double>& moduli() const noexcept { return moduli_; }
    double l1() const noexcept { return l1_; }

    struct Step {
        complex ratio;      // P(z) / P'(z)
        double value_abs;   // |P(z)| / max(1, |z|)^N
        double error_bound; // rounding-level bound on value_abs
    };

    /// Newton ratio evaluated without overflow: for |z| > 1 the reversed
    /// polynomial is evaluated at 1/z instead.
    Step newton(complex z) const noexcept
    {
        const std::size_t n = degree();
        if (std::abs(z) <= 1.0) {
            complex p = coeffs_[n];
            complex dp{};
            double e = moduli_[n];
            const double az = std::abs(z);
            for (std::size_t k = n; k-- > 0;) {
                dp = dp * z + p;
                p = p * z + coeffs_[k];
                e = e * az + moduli_[k];
            }
            return {dp == complex{} ? complex{} : p / dp, std::abs(p), e};
        }
        const complex w = 1.0 / z;
        const double aw = std::abs(w);
        complex q = coeffs_[0];
        complex dq{};
        double e = moduli_[0];
        for (std::size_t k = 1; k <= n; ++k) {
            dq = dq * w + q;
            q = q * w + coeffs_[k];
            e = e * aw + moduli_[k];
        }
        // P/P' = z / (N - w Q'(w) / Q(w))
        complex ratio{};
        if (q != complex{})
            ratio = z / (static_cast<double>(n) - w * dq / q);
        return {ratio, std::abs(q), e};
    }

    /// |P(z)| / (sum |a_k| * max(1, |z|)^N).
    double normalized_residual(complex z) const noexcept
    {
        const std::size_t n = degree();
        if (std::abs(z) <= 1.0) {
            complex p = coeffs_[n];
            for (std::size_t k = n; k-- > 0;)
                p = p * z + coeffs_[k];
            return std::abs(p) / l1_;
        }
        const complex w = 1.0 / z;
        complex q = coeffs_[0];
        for (std::size_t k = 1; k <= n; ++k)
            q = q * w + coeffs_[k];
        return std::abs(q) / l1_;
    }

private:
    std::vector<complex> coeffs_;
    std::vector<double> moduli_;
    double l1_ = 0.0;
};

struct Ring {
    double radius;
    std::size_t count;
};

// Upper convex hull of (k, log|a_k|); each edge (i, j) contributes j - i
// starting points on the circle of radius (|a_i| / |a_j|)^(1/(j-i)).
inline std::vector<Ring> newton_polygon_rings(const std::vector<double>& moduli)
{
    std::vector<std::size_t> hull;
    auto height = [&](std::size_t k) { return std::log(moduli[k]); };
    for (std::size_t k = 0; k < moduli.size(); ++k) {
        if (moduli[k] == 0.0)
            continue;
        while (hull.size() >= 2) {
            const auto a = hull[hull.size() - 2];
            const auto b = hull.back();
            const double cross = (static_cast<double>(b - a)) * (height(k) - height(a)) -
                                 (static_cast<double>(k - a)) * (height(b) - height(a));
            if (cross >= 0.0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(k);
    }
    std::vector<Ring> rings;
    for (std::size_t e = 1; e < hull.size(); ++e) {
        const auto i = hull[e - 1];
        const auto j = hull[e];
        const auto span = static_cast<double>(j - i);
        rings.push_back({std::exp((height(i) - height(j)) / span), j - i});
    }
    return rings;
}

inline std::vector<complex> initial_guesses(const NormalizedPoly& np, const SolveOptions& opts)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    // fractional part of the golden ratio, in radians; keeps the start
    // configuration away from the real axis symmetry
    constexpr double offset = 0.6180339887498949;
    const std::size_t n = np.degree();

    std::vector<Ring> rings;
    if (opts.seed_radius_mode == SeedRadius::cauchy_bound) {
        double m = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            m = std::max(m, np.moduli()[k]);
        rings.push_back({1.0 + m / np.moduli()[n], n});
    } else {
        rings = newton_polygon_rings(np.moduli());
    }

    std::vector<complex> z;
    z.reserve(n);
    std::size_t index = 0;
    for (std::size_t r = 0; r < rings.size(); ++r) {
        const auto& ring = rings[r];
        const double step = two_pi / static_cast<double>(ring.count);
        for (std::size_t m = 0; m < ring.count; ++m, ++index) {
            const double jitter_r = 1.0 + 1e-3 * signed_unit(opts.perturbation_seed, 2 * index);
            const double jitter_a = 1e-3 * signed_unit(opts.perturbation_seed, 2 * index + 1);
            const double angle = step * static_cast<double>(m) + offset * static_cast<double>(r + 1) + jitter_a;
            z.push_back(std::polar(ring.radius * jitter_r, angle));
        }
    }
    return z;
}

} // namespace detail

/// |P(z_i)| / (sum |a_k| * max(1, |z_i|)^N) for every root in rs.
inline std::vector<double> certify_roots(const Polynomial& p, const RootSet& rs)
{
    if (rs.roots.size() != p.degree())
        throw error(errc::mismatched_degree, "root count differs from polynomial degree");
    const detail::NormalizedPoly np(p);
    std::vector<double> out;
    out.reserve(rs.roots.size());
    for (const auto& z : rs.roots)
        out.push_back(np.normalized_residual(z));
    return out;
}

/**
 * All N zeros by Aberth-Ehrlich simultaneous iteration (Gauss-Seidel sweep).
 *
 * A root stops moving once |P(z)| is at rounding level or its correction is
 * below machine precision. The returned RootSet always holds N iterates;
 * converged is false when some residual exceeds opts.residual_tol.
 */
inline RootSet find_roots(const Polynomial& p, const SolveOptions& opts = {})
{
    if (opts.max_iterations < 1)
        throw error(errc::invalid_argument, "max_iterations must be >= 1");
    if (!(opts.residual_tol > 0.0))
        throw error(errc::invalid_argument, "residual_tol must be positive");

    const detail::NormalizedPoly np(p);
    const std::size_t n = np.degree();
    constexpr double eps = std::numeric_limits<double>::epsilon();

    RootSet rs;
    if (n == 1) {
        rs.roots = {-np.coeffs()[0] / np.coeffs()[1]};
        rs.iterations = 0;
    } else {
        std::vector<complex> z = detail::initial_guesses(np, opts);
        std::vector<char> done(n, 0);
        std::size_t remaining = n;
        const double rounding = 4.0 * eps * static_cast<double>(n + 1);

        int it = 0;
        while (remaining > 0 && it < opts.max_iterations) {
            ++it;
            for (std::size_t i = 0; i < n; ++i) {
                if (done[i])
                    continue;
                const auto step = np.newton(z[i]);
                const bool at_rounding_level = step.value_abs <= rounding * step.error_bound;
                if (step.ratio == complex{}) {
                    done[i] = 1;
                    --remaining;
                    continue;
                }
                double sr = 0.0, si = 0.0;
                const double xr = z[i].real(), xi = z[i].imag();
                for (std::size_t j = 0; j < n; ++j) {
                    if (j == i)
                        continue;
                    const double dr = xr - z[j].real();
                    const double di = xi - z[j].imag();
                    const double inv = 1.0 / (dr * dr + di * di);
                    sr += dr * inv;
                    si -= di * inv;
                }
                const complex denom = 1.0 - step.ratio * complex(sr, si);
                const complex delta = step.ratio / denom;
                if (std::isfinite(delta.real()) && std::isfinite(delta.imag()))
                    z[i] -= delta;
                if (at_rounding_level || std::abs(delta) <= 2.0 * eps * std::abs(z[i])) {
                    done[i] = 1;
                    --remaining;
                }
            }
        }
        rs.roots = std::move(z);
        rs.iterations = it;
    }

    rs.residuals.reserve(n);
    for (const auto& z : rs.roots)
        rs.residuals.push_back(np.normalized_residual(z));
    rs.converged = std::all_of(rs.residuals.begin(), rs.residuals.end(),
                               [&](double r) { return r <= opts.residual_tol; });
    return rs;
}

} // namespace polyclust
