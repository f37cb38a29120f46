#pragma once

#include <algorithm>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include "polyclust/polynomial.hpp"

namespace testing {

using polyclust::complex;

/// Greedy nearest-neighbour pairing; max distance between matched points.
inline double pairing_distance(std::vector<complex> got, const std::vector<complex>& want)
{
    if (got.size() != want.size())
        return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const auto& w : want) {
        auto best = std::min_element(got.begin(), got.end(), [&](const complex& a, const complex& b) {
            return std::abs(a - w) < std::abs(b - w);
        });
        worst = std::max(worst, std::abs(*best - w));
        got.erase(best);
    }
    return worst;
}

/// Coefficients of prod (Z - r) in ascending order.
inline std::vector<complex> from_roots(const std::vector<complex>& roots, complex lead = 1.0)
{
    std::vector<complex> c{lead};
    for (const auto& r : roots) {
        std::vector<complex> next(c.size() + 1);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= r * c[k];
        }
        c = std::move(next);
    }
    return c;
}

inline std::vector<complex> random_coeffs(std::mt19937_64& rng, std::size_t n)
{
    std::normal_distribution<double> g;
    std::vector<complex> c(n + 1);
    for (auto& a : c)
        a = {g(rng), g(rng)};
    return c;
}

inline std::vector<complex> sign_coeffs(std::mt19937_64& rng, std::size_t n)
{
    std::bernoulli_distribution b;
    std::vector<complex> c(n + 1);
    for (auto& a : c)
        a = b(rng) ? 1.0 : -1.0;
    return c;
}

} // namespace testing
