#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "polyclust/error.hpp"
#include "polyclust/polynomial.hpp"
#include "polyclust/rng.hpp"

namespace polyclust {

// --- coefficient models -----------------------------------------------------

/// a_{N,k} Cauchy with scale N(k+1).
struct CauchyScaled {};

/// a_{N,k} uniform on {+-1, ..., +-N}.
struct SignedUniformInt {};

/// a_k = +1 with probability p, -1 otherwise.
struct Rademacher {
    double p = 0.5;
};

/// a_k half-Cauchy on (0, inf) with scale max(k, 1)^(-sigma).
struct PositiveCauchy {
    double sigma = 1.0;
};

enum class ScalarDist { normal, uniform, log_normal, complex_normal };

/// One named scalar law applied i.i.d. to every coefficient.
/// normal(a = mean, b = sd), uniform(a = lo, b = hi), log_normal(a = mu, b = sigma),
/// complex_normal(a unused, b = sd; real and imaginary parts each sd/sqrt 2).
struct IIDGeneric {
    ScalarDist dist = ScalarDist::normal;
    double a = 0.0;
    double b = 1.0;
};

enum class ScaleKind { fixed, log10_uniform };

/// Shared multiplier: fixed value, or 10^U with U uniform on [lo, hi].
struct ScaleDist {
    ScaleKind kind = ScaleKind::fixed;
    double value = 1.0;
    double lo = 0.0;
    double hi = 0.0;
};

struct CommonScale;

using CoefficientModel =
    std::variant<CauchyScaled, SignedUniformInt, Rademacher, PositiveCauchy, IIDGeneric, CommonScale>;

/// Whole coefficient vector of base multiplied by one random lambda != 0.
struct CommonScale {
    std::shared_ptr<const CoefficientModel> base;
    ScaleDist scale;
};

inline CoefficientModel common_scale(CoefficientModel base, ScaleDist scale)
{
    return CommonScale{std::make_shared<const CoefficientModel>(std::move(base)), scale};
}

inline std::string variant_name(const CoefficientModel& m)
{
    constexpr const char* names[] = {"cauchy_scaled",   "signed_uniform_int", "rademacher",
                                     "positive_cauchy", "iid_generic",        "common_scale"};
    return names[m.index()];
}

inline void validate(const CoefficientModel& model)
{
    auto bad = [](const char* what) { throw error(errc::bad_model_parameters, what); };
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Rademacher>) {
                if (!(m.p > 0.0 && m.p < 1.0))
                    bad("rademacher p must lie in (0, 1)");
            } else if constexpr (std::is_same_v<T, PositiveCauchy>) {
                if (!(m.sigma > 0.0) || !std::isfinite(m.sigma))
                    bad("positive_cauchy sigma must be positive");
            } else if constexpr (std::is_same_v<T, IIDGeneric>) {
                if (!std::isfinite(m.a) || !std::isfinite(m.b))
                    bad("iid_generic parameters must be finite");
                if (m.dist == ScalarDist::uniform ? !(m.a < m.b) : !(m.b > 0.0))
                    bad("iid_generic needs lo < hi or a positive spread");
            } else if constexpr (std::is_same_v<T, CommonScale>) {
                if (!m.base)
                    bad("common_scale needs a base model");
                validate(*m.base);
                if (m.scale.kind == ScaleKind::fixed && !(m.scale.value != 0.0 && std::isfinite(m.scale.value)))
                    bad("common_scale fixed value must be finite and nonzero");
                if (m.scale.kind == ScaleKind::log10_uniform &&
                    !(m.scale.lo <= m.scale.hi && std::isfinite(m.scale.lo) && std::isfinite(m.scale.hi)))
                    bad("common_scale log10_uniform needs finite lo <= hi");
            }
        },
        model);
}

namespace detail {

inline constexpr std::uint32_t common_scale_index = 0xFFFFFFFFu;
inline constexpr int max_endpoint_redraws = 64;

inline double standard_normal(CounterStream& s) noexcept
{
    const double u1 = s.uniform_open();
    const double u2 = s.uniform_open();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline complex draw_scalar(const IIDGeneric& m, CounterStream& s)
{
    switch (m.dist) {
    case ScalarDist::normal: return m.a + m.b * standard_normal(s);
    case ScalarDist::uniform: return m.a + (m.b - m.a) * s.uniform_open();
    case ScalarDist::log_normal: return std::exp(m.a + m.b * standard_normal(s));
    case ScalarDist::complex_normal: {
        const double re = standard_normal(s);
        const double im = standard_normal(s);
        return complex(re, im) * (m.b / std::numbers::sqrt2);
    }
    }
    return {};
}

inline double positive_cauchy_scale(double sigma, std::size_t k) noexcept
{
    return std::pow(static_cast<double>(std::max<std::size_t>(k, 1)), -sigma);
}

inline complex draw_coefficient(const CoefficientModel& model, std::size_t n, std::size_t k, CounterStream& s)
{
    return std::visit(
        [&](const auto& m) -> complex {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, CauchyScaled>) {
                const double scale = static_cast<double>(n) * static_cast<double>(k + 1);
                return scale * std::tan(std::numbers::pi * (s.uniform_open() - 0.5));
            } else if constexpr (std::is_same_v<T, SignedUniformInt>) {
                const auto mag = static_cast<double>(1 + s.below(n));
                return s.below(2) == 0 ? mag : -mag;
            } else if constexpr (std::is_same_v<T, Rademacher>) {
                return s.uniform_open() < m.p ? 1.0 : -1.0;
            } else if constexpr (std::is_same_v<T, PositiveCauchy>) {
                return positive_cauchy_scale(m.sigma, k) * std::tan(0.5 * std::numbers::pi * s.uniform_open());
            } else if constexpr (std::is_same_v<T, IIDGeneric>) {
                return draw_scalar(m, s);
            } else {
                return draw_coefficient(*m.base, n, k, s);
            }
        },
        model);
}

inline double draw_scale(const ScaleDist& d, CounterStream& s) noexcept
{
    if (d.kind == ScaleKind::fixed)
        return d.value;
    return std::pow(10.0, d.lo + (d.hi - d.lo) * s.uniform_open());
}

inline const CoefficientModel& innermost_base(const CoefficientModel& m)
{
    if (const auto* cs = std::get_if<CommonScale>(&m))
        return innermost_base(*cs->base);
    return m;
}

} // namespace detail

/**
 * Coefficients a_0..a_N of one random polynomial.
 *
 * Coefficient k is drawn from the stream keyed by (seed, N, k, trial), so the
 * result is a pure function of the arguments. An endpoint that comes out as
 * exactly zero is redrawn from the same stream.
 */
inline Polynomial sample_polynomial(const CoefficientModel& model, std::size_t n, std::uint64_t seed,
                                    std::uint64_t trial)
{
    if (n < 1)
        throw error(errc::degree_too_small, "degree must be at least 1");
    validate(model);
    const auto deg = static_cast<std::uint32_t>(n);
    const auto tr = static_cast<std::uint32_t>(trial);

    std::vector<complex> c(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        CounterStream s(seed, deg, static_cast<std::uint32_t>(k), tr);
        c[k] = detail::draw_coefficient(model, n, k, s);
        if (k == 0 || k == n) {
            int redraws = 0;
            while (c[k] == complex{}) {
                if (++redraws > detail::max_endpoint_redraws)
                    throw error(errc::bad_model_parameters, "model keeps producing zero endpoint coefficients");
                c[k] = detail::draw_coefficient(model, n, k, s);
            }
        }
    }

    // nested common scales multiply
    const CoefficientModel* m = &model;
    std::uint32_t level = 0;
    while (const auto* cs = std::get_if<CommonScale>(m)) {
        CounterStream s(seed, deg, detail::common_scale_index - level, tr);
        const double lambda = detail::draw_scale(cs->scale, s);
        for (auto& a : c)
            a *= lambda;
        m = cs->base.get();
        ++level;
    }
    return make_polynomial(std::move(c));
}

// --- moments -----------------------------------------------------------------

/// E|a_{N,k}|^s for the Cauchy law with scale N(k+1), 0 <= s < 1.
inline double cauchy_fractional_moment(std::size_t n, std::size_t k, double s)
{
    if (s < 0.0)
        throw error(errc::invalid_argument, "moment order must be nonnegative");
    if (s >= 1.0)
        throw error(errc::moment_diverges, "Cauchy moments of order >= 1 are infinite");
    const double scale = static_cast<double>(n) * static_cast<double>(k + 1);
    return std::pow(scale, s) * std::tgamma(0.5 + 0.5 * s) * std::tgamma(0.5 - 0.5 * s) / std::numbers::pi;
}

struct MomentDiagnostics {
    double s = 0.0;
    double t = 0.0;
    std::vector<double> lambda_k;    // E|a_k|^s
    std::vector<double> xi_k;        // E|a_k|^(-t)
    std::vector<double> lambda_se;   // Monte Carlo standard errors (0 for closed forms)
    std::vector<double> xi_se;
    double growth_rate_lambda = 0.0; // max over k >= N/2 of lambda_k^(1/k)
    double growth_rate_xi = 0.0;
    bool closed_form = false;
};

namespace detail {

// E|X|^q for a Cauchy (or half-Cauchy) law of the given scale, |q| < 1.
inline double cauchy_abs_moment(double scale, double q) noexcept
{
    return std::pow(scale, q) / std::cos(0.5 * std::numbers::pi * q);
}

// Whether E|a|^(-t) is infinite because the law puts positive density (or an
// atom) at the origin.
inline bool negative_moment_diverges(const CoefficientModel& m, double t)
{
    const auto& base = innermost_base(m);
    if (std::holds_alternative<CauchyScaled>(base) || std::holds_alternative<PositiveCauchy>(base))
        return t >= 1.0;
    if (const auto* g = std::get_if<IIDGeneric>(&base)) {
        switch (g->dist) {
        case ScalarDist::normal: return t >= 1.0;
        case ScalarDist::uniform: return t >= 1.0 && g->a <= 0.0 && g->b >= 0.0;
        case ScalarDist::log_normal: return false;
        case ScalarDist::complex_normal: return t >= 2.0;
        }
    }
    return false;
}

inline bool positive_moment_diverges(const CoefficientModel& m, double s)
{
    const auto& base = innermost_base(m);
    if (std::holds_alternative<CauchyScaled>(base) || std::holds_alternative<PositiveCauchy>(base))
        return s >= 1.0;
    return false;
}

inline double kth_root_growth(const std::vector<double>& v)
{
    const std::size_t n = v.size() - 1;
    double g = 0.0;
    for (std::size_t k = std::max<std::size_t>(1, (n + 1) / 2); k <= n; ++k)
        g = std::max(g, std::pow(v[k], 1.0 / static_cast<double>(k)));
    return g;
}

inline constexpr std::uint64_t moment_seed = 0x6d6f6d656e7473ULL;

} // namespace detail

/**
 * lambda_k = E|a_k|^s and xi_k = E|a_k|^(-t) for k = 0..N.
 *
 * Closed forms are used for the Cauchy variants, Rademacher and
 * SignedUniformInt; other models fall back to Monte Carlo with mc_samples
 * draws per coefficient.
 */
inline MomentDiagnostics moment_diagnostics(const CoefficientModel& model, std::size_t n, double s, double t,
                                            std::size_t mc_samples)
{
    validate(model);
    if (n < 1)
        throw error(errc::degree_too_small, "degree must be at least 1");
    if (!(s > 0.0) || !(t > 0.0))
        throw error(errc::invalid_argument, "moment orders must be positive");
    if (detail::positive_moment_diverges(model, s))
        throw error(errc::moment_diverges, "E|a|^s is infinite for this model");
    if (detail::negative_moment_diverges(model, t))
        throw error(errc::moment_diverges, "E|a|^-t is infinite for this model");

    MomentDiagnostics d;
    d.s = s;
    d.t = t;
    d.lambda_k.resize(n + 1);
    d.xi_k.resize(n + 1);
    d.lambda_se.assign(n + 1, 0.0);
    d.xi_se.assign(n + 1, 0.0);

    const bool closed = std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, CauchyScaled>) {
                for (std::size_t k = 0; k <= n; ++k) {
                    const double scale = static_cast<double>(n) * static_cast<double>(k + 1);
                    d.lambda_k[k] = detail::cauchy_abs_moment(scale, s);
                    d.xi_k[k] = detail::cauchy_abs_moment(scale, -t);
                }
                return true;
            } else if constexpr (std::is_same_v<T, PositiveCauchy>) {
                for (std::size_t k = 0; k <= n; ++k) {
                    const double scale = detail::positive_cauchy_scale(m.sigma, k);
                    d.lambda_k[k] = detail::cauchy_abs_moment(scale, s);
                    d.xi_k[k] = detail::cauchy_abs_moment(scale, -t);
                }
                return true;
            } else if constexpr (std::is_same_v<T, Rademacher>) {
                std::fill(d.lambda_k.begin(), d.lambda_k.end(), 1.0);
                std::fill(d.xi_k.begin(), d.xi_k.end(), 1.0);
                return true;
            } else if constexpr (std::is_same_v<T, SignedUniformInt>) {
                double ls = 0.0, xs = 0.0;
                for (std::size_t v = 1; v <= n; ++v) {
                    ls += std::pow(static_cast<double>(v), s);
                    xs += std::pow(static_cast<double>(v), -t);
                }
                std::fill(d.lambda_k.begin(), d.lambda_k.end(), ls / static_cast<double>(n));
                std::fill(d.xi_k.begin(), d.xi_k.end(), xs / static_cast<double>(n));
                return true;
            } else {
                return false;
            }
        },
        model);

    if (!closed) {
        if (mc_samples < 1000)
            throw error(errc::invalid_argument, "Monte Carlo moments need at least 1000 samples");
        const double m = static_cast<double>(mc_samples);
        std::vector<double> ls(n + 1, 0.0), ls2(n + 1, 0.0), xs(n + 1, 0.0), xs2(n + 1, 0.0);
        for (std::size_t i = 0; i < mc_samples; ++i) {
            const auto p = sample_polynomial(model, n, detail::moment_seed, i);
            for (std::size_t k = 0; k <= n; ++k) {
                const double r = std::abs(p[k]);
                const double a = std::pow(r, s);
                const double b = std::pow(r, -t);
                ls[k] += a;
                ls2[k] += a * a;
                xs[k] += b;
                xs2[k] += b * b;
            }
        }
        for (std::size_t k = 0; k <= n; ++k) {
            d.lambda_k[k] = ls[k] / m;
            d.xi_k[k] = xs[k] / m;
            d.lambda_se[k] = std::sqrt(std::max(0.0, ls2[k] / m - d.lambda_k[k] * d.lambda_k[k]) / m);
            d.xi_se[k] = std::sqrt(std::max(0.0, xs2[k] / m - d.xi_k[k] * d.xi_k[k]) / m);
        }
    }
    d.closed_form = closed;
    d.growth_rate_lambda = detail::kth_root_growth(d.lambda_k);
    d.growth_rate_xi = detail::kth_root_growth(d.xi_k);
    return d;
}

struct ConcavityCheck {
    double lhs = 0.0;    // Monte Carlo E[log sum |a_k|]
    double lhs_se = 0.0;
    double rhs = 0.0;    // (1/s) log sum lambda_k
};

/// E[log sum|a_k|] <= (1/s) log sum E|a_k|^s for 0 < s <= 1.
inline ConcavityCheck concavity_bound_check(const CoefficientModel& model, std::size_t n, double s,
                                            std::size_t mc_samples, std::uint64_t seed = 0)
{
    if (!(s > 0.0 && s <= 1.0))
        throw error(errc::invalid_argument, "concavity check needs 0 < s <= 1");
    if (mc_samples < 2)
        throw error(errc::invalid_argument, "need at least two Monte Carlo samples");
    // t only matters for the (unused) negative moments; pick an order that is
    // finite for every shipped model
    const auto diag = moment_diagnostics(model, n, s, 0.5, std::max<std::size_t>(mc_samples, 1000));

    ConcavityCheck c;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < mc_samples; ++i) {
        const double v = std::log(coefficient_l1(sample_polynomial(model, n, seed, i)));
        sum += v;
        sum2 += v * v;
    }
    const double m = static_cast<double>(mc_samples);
    c.lhs = sum / m;
    c.lhs_se = std::sqrt(std::max(0.0, sum2 / m - c.lhs * c.lhs) / (m - 1.0));
    double lam = 0.0;
    for (double v : diag.lambda_k)
        lam += v;
    c.rhs = std::log(lam) / s;
    return c;
}

} // namespace polyclust
