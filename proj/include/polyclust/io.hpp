#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "polyclust/bounds.hpp"
#include "polyclust/error.hpp"
#include "polyclust/polynomial.hpp"
#include "polyclust/rootfind.hpp"
#include "polyclust/samplers.hpp"

// JSON shapes shared by every CLI subcommand:
//   polynomial / root list : [[re, im], ...] in ascending power order
//   root set               : {"roots": [...], "residuals": [...], "converged": bool, "iterations": int}
//   model                  : {"variant": "<name>", ...params}

namespace polyclust::io {

using nlohmann::json;

inline json complex_list_to_json(std::span<const complex> values)
{
    json out = json::array();
    for (const auto& z : values)
        out.push_back({z.real(), z.imag()});
    return out;
}

inline std::vector<complex> complex_list_from_json(const json& j)
{
    if (!j.is_array())
        throw error(errc::invalid_argument, "expected an array of [re, im] pairs");
    std::vector<complex> out;
    out.reserve(j.size());
    for (const auto& e : j) {
        if (e.is_number()) {
            out.emplace_back(e.get<double>(), 0.0);
        } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
            out.emplace_back(e[0].get<double>(), e[1].get<double>());
        } else {
            throw error(errc::invalid_argument, "each entry must be [re, im]");
        }
    }
    return out;
}

inline json to_json(const Polynomial& p) { return complex_list_to_json(p.coeffs()); }

inline Polynomial polynomial_from_json(const json& j) { return make_polynomial(complex_list_from_json(j)); }

inline json to_json(const RootSet& rs)
{
    return {{"roots", complex_list_to_json(rs.roots)},
            {"residuals", rs.residuals},
            {"converged", rs.converged},
            {"iterations", rs.iterations}};
}

inline RootSet rootset_from_json(const json& j)
{
    RootSet rs;
    rs.roots = complex_list_from_json(j.at("roots"));
    rs.residuals = j.at("residuals").get<std::vector<double>>();
    rs.converged = j.at("converged").get<bool>();
    rs.iterations = j.value("iterations", 0);
    if (rs.residuals.size() != rs.roots.size())
        throw error(errc::invalid_argument, "residuals and roots differ in length");
    return rs;
}

// --- models -------------------------------------------------------------------

inline json to_json(const CoefficientModel& model);

inline json to_json(const ScaleDist& d)
{
    if (d.kind == ScaleKind::fixed)
        return {{"kind", "fixed"}, {"value", d.value}};
    return {{"kind", "log10_uniform"}, {"lo", d.lo}, {"hi", d.hi}};
}

inline json to_json(const CoefficientModel& model)
{
    json j = {{"variant", variant_name(model)}};
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Rademacher>) {
                j["p"] = m.p;
            } else if constexpr (std::is_same_v<T, PositiveCauchy>) {
                j["sigma"] = m.sigma;
            } else if constexpr (std::is_same_v<T, IIDGeneric>) {
                switch (m.dist) {
                case ScalarDist::normal: j.update({{"dist", "normal"}, {"mean", m.a}, {"sd", m.b}}); break;
                case ScalarDist::uniform: j.update({{"dist", "uniform"}, {"lo", m.a}, {"hi", m.b}}); break;
                case ScalarDist::log_normal: j.update({{"dist", "log_normal"}, {"mu", m.a}, {"sigma", m.b}}); break;
                case ScalarDist::complex_normal: j.update({{"dist", "complex_normal"}, {"sd", m.b}}); break;
                }
            } else if constexpr (std::is_same_v<T, CommonScale>) {
                j["base"] = to_json(*m.base);
                j["scale_dist"] = to_json(m.scale);
            }
        },
        model);
    return j;
}

inline ScaleDist scale_dist_from_json(const json& j)
{
    const auto kind = j.at("kind").get<std::string>();
    ScaleDist d;
    if (kind == "fixed") {
        d.kind = ScaleKind::fixed;
        d.value = j.at("value").get<double>();
    } else if (kind == "log10_uniform") {
        d.kind = ScaleKind::log10_uniform;
        d.lo = j.at("lo").get<double>();
        d.hi = j.at("hi").get<double>();
    } else {
        throw error(errc::bad_model_parameters, "unknown scale_dist kind '" + kind + "'");
    }
    return d;
}

inline CoefficientModel model_from_json(const json& j)
{
    try {
        const auto variant = j.at("variant").get<std::string>();
        CoefficientModel m;
        if (variant == "cauchy_scaled") {
            m = CauchyScaled{};
        } else if (variant == "signed_uniform_int") {
            m = SignedUniformInt{};
        } else if (variant == "rademacher") {
            m = Rademacher{j.value("p", 0.5)};
        } else if (variant == "positive_cauchy") {
            m = PositiveCauchy{j.value("sigma", 1.0)};
        } else if (variant == "iid_generic") {
            const auto dist = j.value("dist", std::string("normal"));
            if (dist == "normal")
                m = IIDGeneric{ScalarDist::normal, j.value("mean", 0.0), j.value("sd", 1.0)};
            else if (dist == "uniform")
                m = IIDGeneric{ScalarDist::uniform, j.value("lo", -1.0), j.value("hi", 1.0)};
            else if (dist == "log_normal")
                m = IIDGeneric{ScalarDist::log_normal, j.value("mu", 0.0), j.value("sigma", 1.0)};
            else if (dist == "complex_normal")
                m = IIDGeneric{ScalarDist::complex_normal, 0.0, j.value("sd", 1.0)};
            else
                throw error(errc::bad_model_parameters, "unknown iid_generic dist '" + dist + "'");
        } else if (variant == "common_scale") {
            const auto scale = j.contains("scale_dist") ? scale_dist_from_json(j.at("scale_dist"))
                                                        : ScaleDist{ScaleKind::log10_uniform, 1.0, -3.0, 3.0};
            m = common_scale(model_from_json(j.at("base")), scale);
        } else {
            throw error(errc::bad_model_parameters, "unknown model variant '" + variant + "'");
        }
        validate(m);
        return m;
    } catch (const json::exception& e) {
        throw error(errc::bad_model_parameters, e.what());
    }
}

/// Accepts either a bare variant name (default parameters) or a JSON object.
inline CoefficientModel parse_model(const std::string& text)
{
    if (!text.empty() && text.front() == '{')
        return model_from_json(json::parse(text));
    return model_from_json(json{{"variant", text}});
}

// --- certificates ---------------------------------------------------------------

inline json to_json(const LogHeight& h)
{
    return {{"l1_log", h.l1_log}, {"log_a0", h.log_a0}, {"log_aN", h.log_aN}, {"value", h.value}};
}

inline json to_json(const ClusterCertificate& c)
{
    return {{"rho", c.rho},
            {"inner", c.counts.inner},
            {"annulus", c.counts.annulus},
            {"outer", c.counts.outer},
            {"lhs_inner", c.lhs_inner},
            {"rhs_inner", c.rhs_inner},
            {"lhs_outer", c.lhs_outer},
            {"rhs_outer", c.rhs_outer},
            {"lhs_total", c.lhs_total},
            {"rhs_total", c.rhs_total},
            {"satisfied", c.satisfied}};
}

inline json to_json(const DiscrepancyRecord& d)
{
    return {{"theta", d.theta}, {"phi", d.phi},       {"count", d.count},        {"discrepancy", d.discrepancy},
            {"bound", d.bound}, {"C", d.C},           {"satisfied", d.satisfied}};
}

inline json to_json(const JensenCheck& j)
{
    return {{"quadrature_lhs", j.quadrature_lhs},
            {"root_sum_rhs", j.root_sum_rhs},
            {"residual", j.residual},
            {"status", j.status == JensenStatus::ok ? "ok" : "root_on_circle"}};
}

} // namespace polyclust::io
