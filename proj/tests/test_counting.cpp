#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <numeric>
#include <random>

#include "polyclust/counting.hpp"
#include "test_support.hpp"

using namespace polyclust;
constexpr double pi = std::numbers::pi;

namespace {

// exact roots of Z^4 - 1 with args 0, pi/2, pi, 3pi/2
const std::vector<complex> quartic{1.0, complex(0.0, 1.0), -1.0, complex(0.0, -1.0)};

bool throws_code(auto&& f, errc code)
{
    try {
        f();
    } catch (const error& e) {
        return e.code() == code;
    }
    return false;
}

} // namespace

TEST_CASE("count_annulus", "[counting]")
{
    const auto a = count_annulus(quartic, 0.5);
    CHECK(a.inner == 0);
    CHECK(a.annulus == 4);
    CHECK(a.outer == 0);

    // 1 - rho = 0.5, 1/(1 - rho) = 2
    const auto b = count_annulus(std::vector<complex>{0.3, 5.0}, 0.5);
    CHECK(b.inner == 1);
    CHECK(b.annulus == 0);
    CHECK(b.outer == 1);

    // closed annulus: |z| = 1 - rho and |z| = 1/(1 - rho) are both inside
    const auto c = count_annulus(std::vector<complex>{0.5, complex(0.0, -2.0)}, 0.5);
    CHECK(c.inner == 0);
    CHECK(c.annulus == 2);
    CHECK(c.outer == 0);

    CHECK(throws_code([] { count_annulus(quartic, 0.0); }, errc::rho_out_of_range));
    CHECK(throws_code([] { count_annulus(quartic, 1.0); }, errc::rho_out_of_range));
    CHECK(throws_code([] { count_annulus(quartic, -0.2); }, errc::rho_out_of_range));
}

TEST_CASE("count_sector", "[counting]")
{
    CHECK(count_sector(quartic, 0.0, pi).count == 2);
    CHECK(count_sector(quartic, 0.0, 2.0 * pi).count == 4);
    CHECK(count_sector(quartic, pi / 2.0, pi).count == 1);

    CHECK(throws_code([] { count_sector(quartic, 1.0, 1.0); }, errc::bad_sector));
    CHECK(throws_code([] { count_sector(quartic, -0.1, 1.0); }, errc::bad_sector));
    CHECK(throws_code([] { count_sector(quartic, 0.0, 7.0); }, errc::bad_sector));
}

TEST_CASE("arg convention is [0, 2pi)", "[counting]")
{
    CHECK(arg_2pi(1.0) == 0.0);
    CHECK(arg_2pi(-1.0) == pi);
    CHECK_THAT(arg_2pi(complex(0.0, -1.0)), Catch::Matchers::WithinRel(1.5 * pi, 1e-15));
    // just below the positive real axis: must land in the last sector, not at 2pi
    const complex z(1.0, -1e-300);
    CHECK(arg_2pi(z) < 2.0 * pi);
    CHECK(count_sector(std::vector<complex>{z}, 0.0, 2.0 * pi).count == 1);
    CHECK(count_sector(std::vector<complex>{z}, pi, 2.0 * pi).count == 1);
}

TEST_CASE("counting properties", "[counting][property]")
{
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.0, 1.0);

    for (int rep = 0; rep < 200; ++rep) {
        std::vector<complex> roots(1 + rep % 40);
        for (auto& z : roots)
            z = std::polar(std::exp(0.5 * g(rng)), 2.0 * pi * u(rng));
        const auto n = roots.size();

        // partition over a random grid 0 = phi_0 < ... < phi_m = 2pi
        std::vector<double> cuts{0.0, 2.0 * pi};
        for (int i = 0; i < rep % 7; ++i)
            cuts.push_back(2.0 * pi * u(rng));
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        std::size_t total = 0;
        for (std::size_t j = 1; j < cuts.size(); ++j)
            total += count_sector(roots, cuts[j - 1], cuts[j]).count;
        CHECK(total == n);

        const auto eq = equal_sector_counts(roots, 1 + rep % 12);
        CHECK(std::accumulate(eq.begin(), eq.end(), std::size_t{0}) == n);
        for (std::size_t j = 0; j < eq.size(); ++j)
            CHECK(eq[j] == count_sector(roots, sector_boundary(j, eq.size()), sector_boundary(j + 1, eq.size())).count);

        std::size_t prev = 0;
        for (double rho = 0.05; rho < 1.0; rho += 0.05) {
            const auto a = count_annulus(roots, rho);
            CHECK(a.total() == n);
            CHECK(a.annulus >= prev);
            prev = a.annulus;
        }
    }
}

TEST_CASE("sector counts rotate with the roots", "[counting][property]")
{
    // one root in the middle of each selected cell of an m-grid
    const std::size_t m = 12;
    const double cell = 2.0 * pi / m;
    const std::vector<std::size_t> occupancy{3, 0, 1, 2, 0, 0, 5, 1, 0, 0, 2, 1};
    std::vector<complex> roots;
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t c = 0; c < occupancy[j]; ++c)
            roots.push_back(std::polar(1.0 + 0.1 * static_cast<double>(c), cell * (static_cast<double>(j) + 0.5)));

    for (std::size_t shift = 0; shift < m; ++shift) {
        std::vector<complex> rotated;
        for (const auto& z : roots)
            rotated.push_back(z * std::polar(1.0, cell * static_cast<double>(shift)));
        const auto counts = equal_sector_counts(rotated, m);
        for (std::size_t j = 0; j < m; ++j)
            CHECK(counts[(j + shift) % m] == occupancy[j]);
    }
}
