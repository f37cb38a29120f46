#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>
#include <algorithm>

#include "polyclust/error.hpp"
#include "polyclust/polynomial.hpp"
#include "polyclust/rootfind.hpp"

namespace polyclust {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct AnnulusCount {
    double rho = 0.0;
    std::size_t inner = 0;   // |z| < 1 - rho
    std::size_t outer = 0;   // |z| > 1 / (1 - rho)
    std::size_t annulus = 0; // 1 - rho <= |z| <= 1 / (1 - rho)

    std::size_t total() const noexcept { return inner + outer + annulus; }
};

struct SectorCount {
    double theta = 0.0;
    double phi = 0.0;
    std::size_t count = 0; // theta <= arg z < phi
};

/// Argument in [0, 2pi), with arg of a positive real equal to 0.
inline double arg_2pi(complex z) noexcept
{
    double a = std::arg(z);
    if (a < 0.0) {
        a += two_pi;
        // -tiny + 2pi rounds to 2pi; the true angle is still below 2pi
        if (a >= two_pi)
            a = std::nextafter(two_pi, 0.0);
    }
    return a;
}

inline void check_rho(double rho)
{
    if (!(rho > 0.0 && rho < 1.0))
        throw error(errc::rho_out_of_range, "rho must lie in (0, 1)");
}

inline void check_sector(double theta, double phi)
{
    if (!(theta >= 0.0 && theta < phi && phi <= two_pi))
        throw error(errc::bad_sector, "need 0 <= theta < phi <= 2pi");
}

inline AnnulusCount count_annulus(std::span<const complex> roots, double rho)
{
    check_rho(rho);
    const double lo = 1.0 - rho;
    const double hi = 1.0 / (1.0 - rho);
    AnnulusCount c{.rho = rho};
    for (const auto& z : roots) {
        const double r = std::abs(z);
        if (r < lo)
            ++c.inner;
        else if (r > hi)
            ++c.outer;
        else
            ++c.annulus;
    }
    return c;
}

inline AnnulusCount count_annulus(const RootSet& rs, double rho)
{
    return count_annulus(std::span<const complex>(rs.roots), rho);
}

inline SectorCount count_sector(std::span<const complex> roots, double theta, double phi)
{
    check_sector(theta, phi);
    SectorCount c{.theta = theta, .phi = phi};
    for (const auto& z : roots) {
        const double a = arg_2pi(z);
        if (a >= theta && a < phi)
            ++c.count;
    }
    return c;
}

inline SectorCount count_sector(const RootSet& rs, double theta, double phi)
{
    return count_sector(std::span<const complex>(rs.roots), theta, phi);
}

/// Boundary 2pi j/m of the m-sector grid; every grid user goes through here
/// so that sector membership is decided identically everywhere.
inline double sector_boundary(std::size_t j, std::size_t m) noexcept
{
    return j >= m ? two_pi : two_pi * static_cast<double>(j) / static_cast<double>(m);
}

/// Counts for the m equal sectors [2pi j/m, 2pi (j+1)/m).
inline std::vector<std::size_t> equal_sector_counts(std::span<const complex> roots, std::size_t m)
{
    if (m == 0)
        throw error(errc::bad_sector, "sector grid needs at least one sector");
    std::vector<std::size_t> counts(m, 0);
    for (const auto& z : roots) {
        const double a = arg_2pi(z);
        auto j = std::min(static_cast<std::size_t>(a / two_pi * static_cast<double>(m)), m - 1);
        while (j + 1 < m && a >= sector_boundary(j + 1, m))
            ++j;
        while (j > 0 && a < sector_boundary(j, m))
            --j;
        ++counts[j];
    }
    return counts;
}

} // namespace polyclust
