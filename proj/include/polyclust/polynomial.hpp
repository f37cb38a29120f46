#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "polyclust/error.hpp"

namespace polyclust {

using complex = std::complex<double>;

/**
 * Dense complex polynomial a_0 + a_1 Z + ... + a_N Z^N.
 *
 * Coefficients are stored in ascending power order. Both endpoint
 * coefficients are nonzero, so the degree is structural (size - 1) and the
 * origin is never a zero.
 */
class Polynomial {
public:
    std::span<const complex> coeffs() const noexcept { return coeffs_; }
    std::size_t degree() const noexcept { return coeffs_.size() - 1; }
    const complex& operator[](std::size_t k) const noexcept { return coeffs_[k]; }

    const complex& leading() const noexcept { return coeffs_.back(); }
    const complex& constant() const noexcept { return coeffs_.front(); }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    explicit Polynomial(std::vector<complex> coeffs) : coeffs_(std::move(coeffs)) {}

    friend Polynomial make_polynomial(std::vector<complex> coeffs);

    std::vector<complex> coeffs_;
};

inline Polynomial make_polynomial(std::vector<complex> coeffs)
{
    if (coeffs.size() < 2)
        throw error(errc::degree_too_small, "need at least two coefficients");
    if (coeffs.front() == complex{} || coeffs.back() == complex{})
        throw error(errc::zero_endpoint_coefficient, "a_0 and a_N must both be nonzero");
    return Polynomial(std::move(coeffs));
}

inline Polynomial make_polynomial(std::span<const complex> coeffs)
{
    return make_polynomial(std::vector<complex>(coeffs.begin(), coeffs.end()));
}

inline Polynomial make_polynomial(std::initializer_list<complex> coeffs)
{
    return make_polynomial(std::vector<complex>(coeffs));
}

/// Horner evaluation of sum a_k z^k.
inline complex evaluate(const Polynomial& p, complex z) noexcept
{
    auto c = p.coeffs();
    complex acc = c.back();
    for (std::size_t k = c.size() - 1; k-- > 0;)
        acc = acc * z + c[k];
    return acc;
}

/// Z^N P(1/Z): coefficients in reverse order. Zeros map z -> 1/z.
inline Polynomial reverse(const Polynomial& p)
{
    auto c = p.coeffs();
    return make_polynomial(std::vector<complex>(c.rbegin(), c.rend()));
}

/// sum |a_k|, the trivial bound on max |P| over the unit circle.
inline double coefficient_l1(const Polynomial& p) noexcept
{
    double s = 0.0;
    for (const auto& a : p.coeffs())
        s += std::abs(a);
    return s;
}

inline double max_abs_coefficient(const Polynomial& p) noexcept
{
    double m = 0.0;
    for (const auto& a : p.coeffs())
        m = std::max(m, std::abs(a));
    return m;
}

/// a_k -> lambda a_k. Zeros are unchanged.
inline Polynomial scaled(const Polynomial& p, complex lambda)
{
    std::vector<complex> c(p.coeffs().begin(), p.coeffs().end());
    for (auto& a : c)
        a *= lambda;
    return make_polynomial(std::move(c));
}

inline bool all_finite(const Polynomial& p) noexcept
{
    return std::all_of(p.coeffs().begin(), p.coeffs().end(), [](const complex& a) {
        return std::isfinite(a.real()) && std::isfinite(a.imag());
    });
}

} // namespace polyclust
