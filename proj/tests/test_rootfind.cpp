#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "polyclust/rootfind.hpp"
#include "test_support.hpp"

using namespace polyclust;
using testing::pairing_distance;

namespace {

Polynomial unity(std::size_t n)
{
    std::vector<complex> c(n + 1);
    c[0] = -1.0;
    c[n] = 1.0;
    return make_polynomial(c);
}

std::vector<complex> roots_of_unity(std::size_t n)
{
    std::vector<complex> r;
    for (std::size_t k = 0; k < n; ++k)
        r.push_back(std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n)));
    return r;
}

} // namespace

TEST_CASE("find_roots on small exact cases", "[rootfind]")
{
    SECTION("Z^2 - 1")
    {
        const auto rs = find_roots(make_polynomial({-1.0, 0.0, 1.0}));
        REQUIRE(rs.converged);
        CHECK(pairing_distance(rs.roots, {1.0, -1.0}) < 1e-15);
        for (double r : rs.residuals)
            CHECK(r < 1e-15);
    }
    SECTION("2Z^2 - 3Z + 1 against the quadratic formula")
    {
        const complex a = 2.0, b = -3.0, c = 1.0;
        const complex disc = std::sqrt(b * b - 4.0 * a * c);
        const std::vector<complex> oracle{(-b + disc) / (2.0 * a), (-b - disc) / (2.0 * a)};
        const auto rs = find_roots(make_polynomial({c, b, a}));
        REQUIRE(rs.converged);
        CHECK(pairing_distance(rs.roots, oracle) < 1e-14);
        CHECK(pairing_distance(rs.roots, {1.0, 0.5}) < 1e-14);
    }
    SECTION("Z^64 - 1 gives the 64th roots of unity")
    {
        const auto rs = find_roots(unity(64));
        REQUIRE(rs.converged);
        CHECK(rs.roots.size() == 64);
        CHECK(pairing_distance(rs.roots, roots_of_unity(64)) < 1e-12);
    }
    SECTION("degree one")
    {
        const auto rs = find_roots(make_polynomial({complex(1.0, 1.0), 2.0}));
        REQUIRE(rs.roots.size() == 1);
        CHECK(std::abs(rs.roots[0] - complex(-0.5, -0.5)) < 1e-16);
        CHECK(rs.converged);
    }
}

TEST_CASE("certify_roots residual definition", "[rootfind]")
{
    const auto p = make_polynomial({-1.0, 0.0, 1.0});
    RootSet exact{{1.0, -1.0}, {}, 0, true};
    for (double r : certify_roots(p, exact))
        CHECK(r == 0.0);

    // direct evaluation oracle: |P(z)| / (sum|a_k| max(1,|z|)^2)
    const double z = 1.0 + 1e-6;
    const double oracle = std::abs(z * z - 1.0) / (2.0 * z * z);
    RootSet perturbed{{z, -1.0}, {}, 0, true};
    const auto res = certify_roots(p, perturbed);
    CHECK_THAT(res[0], Catch::Matchers::WithinRel(oracle, 1e-9));
    CHECK_THAT(res[0], Catch::Matchers::WithinRel(1e-6, 1e-5));

    RootSet unity8{roots_of_unity(8), {}, 0, true};
    for (double r : certify_roots(unity(8), unity8))
        CHECK(r < 1e-14);

    RootSet wrong{{1.0}, {}, 0, true};
    CHECK_THROWS_MATCHES(certify_roots(p, wrong), error,
                         Catch::Matchers::Predicate<error>([](const error& e) { return e.code() == errc::mismatched_degree; }));
}

TEST_CASE("find_roots stores the certify_roots residuals", "[rootfind]")
{
    std::mt19937_64 rng(5);
    const auto p = make_polynomial(testing::random_coeffs(rng, 40));
    const auto rs = find_roots(p);
    CHECK(rs.residuals == certify_roots(p, rs));
}

TEST_CASE("find_roots error paths", "[rootfind]")
{
    const auto nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_MATCHES(find_roots(make_polynomial({1.0, nan, 1.0})), error,
                         Catch::Matchers::Predicate<error>([](const error& e) { return e.code() == errc::non_finite_coefficient; }));
    const auto big = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(find_roots(make_polynomial({1.0, big, 1.0})), error);

    SolveOptions bad;
    bad.max_iterations = 0;
    CHECK_THROWS_AS(find_roots(unity(4), bad), error);
    bad = {};
    bad.residual_tol = 0.0;
    CHECK_THROWS_AS(find_roots(unity(4), bad), error);
}

TEST_CASE("an iteration cap yields the best iterate with converged = false", "[rootfind]")
{
    SolveOptions opts;
    opts.max_iterations = 1;
    const auto rs = find_roots(unity(64), opts);
    CHECK(rs.roots.size() == 64);
    CHECK_FALSE(rs.converged);
    CHECK(rs.iterations == 1);
}

TEST_CASE("find_roots is deterministic and both seed modes converge", "[rootfind]")
{
    std::mt19937_64 rng(11);
    const auto p = make_polynomial(testing::sign_coeffs(rng, 100));
    const auto a = find_roots(p);
    const auto b = find_roots(p);
    CHECK(a.roots == b.roots);

    SolveOptions cauchy;
    cauchy.seed_radius_mode = SeedRadius::cauchy_bound;
    const auto c = find_roots(p, cauchy);
    REQUIRE(c.converged);
    CHECK(pairing_distance(c.roots, a.roots) < 1e-8);

    SolveOptions other_seed;
    other_seed.perturbation_seed = 99;
    const auto d = find_roots(p, other_seed);
    REQUIRE(d.converged);
    CHECK(pairing_distance(d.roots, a.roots) < 1e-8);
}

TEST_CASE("heavy-tailed coefficients spanning many magnitudes", "[rootfind]")
{
    // roots at 10^-3 .. 10^3: coefficients span ~30 orders of magnitude
    std::vector<complex> want;
    for (int k = 0; k < 10; ++k)
        want.push_back(std::polar(std::pow(10.0, -3.0 + 6.0 * k / 9.0), 0.3 + k));
    const auto p = make_polynomial(testing::from_roots(want));
    const auto rs = find_roots(p);
    REQUIRE(rs.converged);
    for (const auto& w : want) {
        double best = INFINITY;
        for (const auto& z : rs.roots)
            best = std::min(best, std::abs(z - w) / std::abs(w));
        CHECK(best < 1e-8);
    }
}

TEST_CASE("random +-1 polynomials: residuals and Vieta identities", "[rootfind][property]")
{
    std::mt19937_64 rng(424242);
    for (std::size_t n : {2, 7, 33, 128, 255, 512}) {
        for (int rep = 0; rep < 3; ++rep) {
            const auto p = make_polynomial(testing::sign_coeffs(rng, n));
            const auto rs = find_roots(p);
            REQUIRE(rs.converged);
            REQUIRE(rs.roots.size() == n);
            for (double r : rs.residuals)
                CHECK(r <= 1e-10);

            complex sum = 0.0, prod = 1.0;
            for (const auto& z : rs.roots) {
                sum += z;
                prod *= z;
            }
            const complex want_sum = -p[n - 1] / p[n];
            const complex want_prod = (n % 2 ? -1.0 : 1.0) * p[0] / p[n];
            CHECK(std::abs(sum - want_sum) <= 1e-8 * std::max(1.0, std::abs(want_sum)));
            CHECK(std::abs(prod - want_prod) <= 1e-8 * std::abs(want_prod));
        }
    }
}

TEST_CASE("zeros of the reversed polynomial are the reciprocals", "[rootfind][property]")
{
    std::mt19937_64 rng(77);
    int checked = 0;
    while (checked < 20) {
        const auto p = make_polynomial(testing::random_coeffs(rng, 5 + checked * 3));
        const auto rs = find_roots(p);
        REQUIRE(rs.converged);
        const bool near_origin =
            std::any_of(rs.roots.begin(), rs.roots.end(), [](const complex& z) { return std::abs(z) < 1e-3; });
        if (near_origin)
            continue;
        std::vector<complex> inv;
        for (const auto& z : rs.roots)
            inv.push_back(1.0 / z);
        const auto rr = find_roots(reverse(p));
        REQUIRE(rr.converged);
        CHECK(pairing_distance(rr.roots, inv) < 1e-8);
        ++checked;
    }
}
