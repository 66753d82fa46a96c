#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "dehn/twist.hpp"

namespace dehn::io {

using nlohmann::json;

inline json to_json(const GroupContext& ctx) { return {{"family", family_name(ctx.family())}, {"n", ctx.n()}}; }

inline GroupContext context_from_json(const json& j) {
    const std::string family = j.at("family").get<std::string>();
    const int n = j.at("n").get<int>();
    return GroupContext::parse(family + std::to_string(n));
}

inline json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from_json(const json& j, int n) {
    if (!j.is_array() || static_cast<int>(j.size()) != n) throw InvalidArgument("matrix must have " + std::to_string(n) + " rows");
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        const json& row = j[i];
        if (!row.is_array() || static_cast<int>(row.size()) != n) throw InvalidArgument("matrix row has wrong length");
        for (int k = 0; k < n; ++k) {
            const json& e = row[k];
            if (e.is_number()) {
                m(i, k) = e.get<double>();
            } else {
                if (!e.is_array() || e.size() != 2) throw InvalidArgument("matrix entries are [re, im] pairs");
                m(i, k) = cplx(e[0].get<double>(), e[1].get<double>());
            }
        }
    }
    return m;
}

inline json to_json(const GroupElement& g) { return {{"ctx", to_json(g.context())}, {"mat", matrix_to_json(g.matrix())}}; }

inline GroupElement element_from_json(const json& j) {
    const GroupContext ctx = context_from_json(j.at("ctx"));
    return GroupElement(ctx, matrix_from_json(j.at("mat"), ctx.n()));
}

inline json to_json(const Word& w) { return {{"genus", w.genus()}, {"letters", w.letters()}}; }

inline Word word_from_json(const json& j) {
    return Word::reduce(j.at("genus").get<int>(), j.at("letters").get<std::vector<int>>());
}

inline json to_json(const CurveId& c) {
    if (c.is_generator()) return {{"kind", "Gen"}, {"i", c.index()}};
    return {{"kind", "Sep"}, {"k", c.index()}};
}

inline CurveId curve_from_json(const json& j, int genus) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "Gen") return CurveId::gen(genus, j.at("i").get<int>());
    if (kind == "Sep") return CurveId::sep(genus, j.at("k").get<int>());
    throw InvalidArgument("unknown curve kind '" + kind + "'");
}

inline json to_json(const Representation& rho) {
    json images = json::array();
    for (const auto& g : rho.images()) images.push_back(matrix_to_json(g.matrix()));
    return {{"ctx", to_json(rho.context())}, {"genus", rho.genus()}, {"images", std::move(images)}};
}

/// Loads a representation; throws DefectTooLarge if the relation fails.
inline Representation representation_from_json(const json& j, const Tolerance& tol = {}) {
    const GroupContext ctx = context_from_json(j.at("ctx"));
    const int genus = j.at("genus").get<int>();
    const json& list = j.at("images");
    if (!list.is_array()) throw InvalidArgument("images must be an array");
    std::vector<GroupElement> images;
    for (const auto& m : list) images.emplace_back(ctx, matrix_from_json(m, ctx.n()));
    return Representation::make(ctx, genus, std::move(images), tol);
}

inline json to_json(const PseudoDegeneration& tau) {
    json factors = json::array();
    for (const auto& f : tau.factors()) factors.push_back({{"curve", to_json(f.curve)}, {"exp", f.exponent}});
    return {{"genus", tau.genus()},
            {"factors", std::move(factors)},
            {"side", tau.side() == SideConvention::C ? "C" : "C_inverse"}};
}

inline PseudoDegeneration pseudo_degeneration_from_json(const json& j) {
    const int genus = j.at("genus").get<int>();
    std::vector<TwistFactor> factors;
    for (const auto& f : j.at("factors")) factors.push_back({curve_from_json(f.at("curve"), genus), f.at("exp").get<int>()});
    SideConvention side = SideConvention::C;
    if (j.contains("side")) {
        const std::string s = j.at("side").get<std::string>();
        if (s == "C_inverse")
            side = SideConvention::CInverse;
        else if (s != "C")
            throw InvalidArgument("side must be \"C\" or \"C_inverse\"");
    }
    return {genus, std::move(factors), side};
}

inline json torsion_json(const std::optional<int>& order) { return order ? json(*order) : json(nullptr); }

inline json to_json(const ConjugacyWitness& w) { return {{"g", to_json(w.g)}, {"residual", w.residual}}; }

inline json to_json(const CurveValue& c) {
    return {{"curve", to_json(c.curve)},
            {"value", to_json(c.value)},
            {"torsion_order", torsion_json(c.torsion)},
            {"trivial", c.trivial}};
}

inline json to_json(const ExceptionalityReport& r) {
    json curves = json::array();
    for (const auto& c : r.curves) curves.push_back(to_json(c));
    return {{"fixed", r.fixed},
            {"witness", r.witness ? to_json(*r.witness) : json(nullptr)},
            {"realizable", r.realizability.realizable},
            {"simple", r.realizability.simple},
            {"curve_values", std::move(curves)},
            {"verdict", verdict_name(r.verdict)}};
}

inline json to_json(const ConjectureReport& r) {
    json curves = json::array();
    for (const auto& c : r.curves) curves.push_back(to_json(c));
    return {{"status", conjecture_status_name(r.status)},
            {"witness", r.witness ? to_json(*r.witness) : json(nullptr)},
            {"curve_values", std::move(curves)}};
}

}  // namespace dehn::io
