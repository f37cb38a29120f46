#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "polyclust/bounds.hpp"
#include "polyclust/counting.hpp"
#include "polyclust/experiments.hpp"
#include "polyclust/rootfind.hpp"

namespace polyclust {

/// Fault injection for negative-path testing of the fixture suite.
struct SelftestHooks {
    int max_iterations_override = 0; // > 0 replaces SolveOptions::max_iterations
};

struct FixtureOutcome {
    std::string name;
    bool passed = false;
    std::string detail;
};

namespace detail {

inline std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

inline double max_pairing_error(std::vector<complex> got, std::vector<complex> want)
{
    double worst = 0.0;
    for (const auto& w : want) {
        auto best = got.begin();
        for (auto it = got.begin(); it != got.end(); ++it)
            if (std::abs(*it - w) < std::abs(*best - w))
                best = it;
        worst = std::max(worst, std::abs(*best - w));
        got.erase(best);
    }
    return worst;
}

} // namespace detail

inline std::vector<FixtureOutcome> run_fixtures(const SelftestHooks& hooks = {})
{
    SolveOptions opts;
    if (hooks.max_iterations_override > 0)
        opts.max_iterations = hooks.max_iterations_override;

    std::vector<FixtureOutcome> out;
    auto run = [&](const char* name, const std::function<FixtureOutcome()>& f) {
        FixtureOutcome o;
        try {
            o = f();
        } catch (const std::exception& e) {
            o.passed = false;
            o.detail = e.what();
        }
        o.name = name;
        out.push_back(o);
    };

    run("roots_of_unity_64", [&] {
        std::vector<complex> c(65);
        c[0] = -1.0;
        c[64] = 1.0;
        const auto rs = find_roots(make_polynomial(c), opts);
        std::vector<complex> want;
        for (int k = 0; k < 64; ++k)
            want.push_back(std::polar(1.0, two_pi * k / 64));
        const double err = detail::max_pairing_error(rs.roots, want);
        return FixtureOutcome{"", rs.converged && err < 1e-12, "max error " + detail::sci(err)};
    });

    run("quadratic_oracle", [&] {
        const auto rs = find_roots(make_polynomial({1.0, -3.0, 2.0}), opts);
        const double err = detail::max_pairing_error(rs.roots, {1.0, 0.5});
        return FixtureOutcome{"", rs.converged && err < 1e-12, "max error " + detail::sci(err)};
    });

    run("jensen_roots_inside", [&] {
        const auto p = make_polynomial({-1.0, 0.0, 4.0});
        const auto j = jensen_residual(p, find_roots(p, opts), 4096);
        const bool ok = j.residual < 1e-8 && std::abs(j.root_sum_rhs - 2.0 * std::numbers::ln2) < 1e-8;
        return FixtureOutcome{"", ok, "residual " + detail::sci(j.residual)};
    });

    run("jensen_roots_outside", [&] {
        const auto p = make_polynomial({6.0, -5.0, 1.0});
        const auto j = jensen_residual(p, find_roots(p, opts), 4096);
        return FixtureOutcome{"", j.residual < 1e-8 && j.root_sum_rhs == 0.0, "residual " + detail::sci(j.residual)};
    });

    run("annulus_certificate", [&] {
        std::vector<complex> c(65);
        c[0] = -1.0;
        c[64] = 1.0;
        const auto p = make_polynomial(c);
        const auto cert = certify_annulus(p, find_roots(p, opts), 0.1);
        const bool ok = cert.satisfied && cert.lhs_total == 0.0 &&
                        std::abs(cert.rhs_total - 2.0 * std::numbers::ln2 / 6.4) < 1e-12;
        return FixtureOutcome{"", ok, "rhs_total " + detail::sci(cert.rhs_total)};
    });

    run("enumeration_oracle_n8", [&] {
        const double rhos[] = {0.1, 0.3};
        const std::pair<double, double> sectors[] = {{0.0, two_pi}, {0.0, std::numbers::pi}};
        const auto e = exhaustive_expectation(8, rhos, sectors, opts);
        const bool ok = e.unconverged == 0 && e.sector_numerators[0] == e.denominator &&
                        e.annulus_numerators[0] <= e.annulus_numerators[1] &&
                        e.annulus_numerators[1] <= e.denominator;
        return FixtureOutcome{"", ok, "E[nu(0.3)]/N " + detail::sci(e.annulus(1))};
    });
    return out;
}

/// Prints one row per fixture; true iff all passed.
inline bool selftest(std::ostream& os, const SelftestHooks& hooks = {})
{
    const auto outcomes = run_fixtures(hooks);
    bool all = true;
    for (const auto& o : outcomes) {
        char line[160];
        std::snprintf(line, sizeof line, "%-24s %-4s  %s\n", o.name.c_str(), o.passed ? "PASS" : "FAIL",
                      o.detail.c_str());
        os << line;
        all = all && o.passed;
    }
    os << (all ? "all fixtures passed\n" : "fixture failures detected\n");
    return all;
}

} // namespace polyclust
