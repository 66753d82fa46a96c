#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "dehn/constructions.hpp"
#include "dehn/json.hpp"

namespace dehn {

using io::json;

struct RunConfig {
    GroupContext group{Family::SL, 2};
    std::vector<int> genera{1, 2, 3};
    std::uint64_t seed = 0;
    Tolerance tol{};
    int max_order = 200;
    int workers = 1;
    std::vector<int> lambda_orders{2, 3, 4, 6};
    std::vector<int> weyl_orders;  // empty: group default
    std::vector<cplx> s_values{cplx(3.0, 0.0), std::polar(1.0, 2.0 * std::numbers::pi / 5.0), cplx(-1.0, 0.0)};
    int samples = 1000;
    bool force_identity = false;
    bool central_lambda = false;
    std::vector<std::string> families;  // conjecture scan; empty: all, {"none"}: nothing
    int perturb_samples = 8;
    double perturb_scale = 0.3;

    void validate() const {
        tol.validate();
        for (int p : genera)
            if (p < 1) throw InvalidArgument("genus must be at least 1");
        if (max_order < 1) throw InvalidArgument("max-order must be at least 1");
        if (workers < 1) throw InvalidArgument("workers must be at least 1");
        if (samples < 0 || perturb_samples < 0) throw InvalidArgument("sample counts must be non-negative");
        for (int n : lambda_orders)
            if (n < 1) throw InvalidArgument("lambda orders must be positive");
        for (int n : weyl_orders)
            if (n < 1) throw InvalidArgument("Weyl orders must be positive");
    }

    std::vector<int> effective_weyl_orders() const {
        if (!weyl_orders.empty()) return weyl_orders;
        if (group.projective()) return {2, 3, 4};
        return {1, 2, 3, 4, 5};
    }
};

// ---------------------------------------------------------------------------
// Shared family builders

/// A constructed family member with the verdict its construction predicts.
struct Built {
    std::string id;
    json params;
    Representation rho;
    PseudoDegeneration tau;
    Verdict expected;
    bool exact = false;                     // tau(rho) = rho entry by entry
    std::optional<GroupElement> witness_h;  // predicted conjugator, if any
};

inline cplx root_of_unity(int n, int k = 1) { return std::polar(1.0, 2.0 * std::numbers::pi * k / n); }

/// Torsion element of exact order n: diag(z, 1/z) padded with ones, z a
/// primitive n-th root (2n-th for PGL). GL uses diag(z, 1, ...).
inline GroupElement diagonal_torsion(const GroupContext& ctx, int n) {
    std::vector<cplx> d(ctx.n(), 1.0);
    if (ctx.projective()) {
        d[0] = root_of_unity(2 * n);
        d[1] = 1.0 / d[0];
    } else if (ctx.family() == Family::GL) {
        d[0] = root_of_unity(n);
    } else {
        d[0] = root_of_unity(n);
        d[1] = 1.0 / d[0];
    }
    return diagonal(ctx, d);
}

inline Built build_thm4(const GroupContext& ctx, int p, int order, std::uint64_t seed, const Tolerance& tol) {
    const GroupElement lambda = diagonal_torsion(ctx, order);
    Rng rng(seed);
    const GroupElement h = p == 1 ? sample_centralizer(lambda, rng.next_seed(), tol) : haar_unitary(ctx, rng);
    auto inst = thm4_family(ctx, p, lambda, h, tol);
    const Verdict expected = order == 1 ? Verdict::InImagePossible : Verdict::Exceptional;
    return {"thm4", {{"genus", p}, {"order", order}}, std::move(inst.rho), std::move(inst.tau), expected, true, {}};
}

inline std::vector<int> first_indices(int n) {
    std::vector<int> out(n);
    for (int i = 0; i < n; ++i) out[i] = i + 1;
    return out;
}

inline std::optional<WeylFamily> weyl_family_for(const GroupContext& ctx) {
    if (ctx.projective()) return WeylFamily::PGL2;
    if (ctx.family() != Family::SL) return std::nullopt;
    return ctx.n() == 2 ? WeylFamily::SL2 : WeylFamily::GeneralDiagonal;
}

inline Built build_thm5_simple(const GroupContext& ctx, int p, int n, std::uint64_t seed, const Tolerance& tol) {
    const auto family = weyl_family_for(ctx);
    if (!family) throw InvalidArgument("no Weyl-equation family for " + ctx.name());
    const WeylTriple triple = solve_weyl_triple(ctx, n, *family, seed, tol);
    auto inst = thm5_simple_rep(triple, p, first_indices(n), tol);
    return {"thm5_simple", {{"genus", p}, {"n", n}}, std::move(inst.rho), std::move(inst.tau), Verdict::Exceptional,
            false, triple.h};
}

inline bool block_embeddable(const GroupContext& ctx) { return !ctx.projective(); }

inline Built build_thm5_separating(const GroupContext& ambient, int p, std::uint64_t seed, const Tolerance& tol) {
    const GroupContext sub(Family::SL, 2);
    const GroupElement lambda = GroupElement::trusted(sub, -Matrix::Identity(2, 2));
    auto inst = thm5_separating_family(sub, ambient, lambda, p, seed, tol);
    return {"thm5_separating", {{"genus", p}}, std::move(inst.rho), std::move(inst.tau), Verdict::Exceptional, true, {}};
}

inline Built build_thm5_dense(const GroupContext& ambient, int p, std::uint64_t seed, const Tolerance& tol) {
    const GroupContext sub(Family::SL, 2);
    const GroupElement lambda = GroupElement::trusted(sub, -Matrix::Identity(2, 2));
    auto inst = thm5_dense_rep(sub, ambient, lambda, p, seed, tol);
    return {"thm5_dense", {{"genus", p}}, std::move(inst.rho), std::move(inst.tau), Verdict::Exceptional, false, {}};
}

inline json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline Built build_sec6(int p, cplx s, const Tolerance& tol, FillerMode filler = FillerMode::Identity,
                        std::uint64_t seed = 0) {
    auto inst = sec6_family(p, s, filler, seed, tol);
    return {"sec6", {{"genus", p}, {"s", complex_json(s)}}, std::move(inst.rho), std::move(inst.tau),
            Verdict::PseudoOnly, false, inst.triple.k};
}

/// True when `h` conjugates tau(rho) to rho and the witness lies in
/// h times the centralizer of rho.
inline bool witness_in_coset(const ConjugacyWitness& witness, const GroupElement& h, const Representation& rho,
                             const PseudoDegeneration& tau, double limit = 1e-8) {
    const Representation moved = apply_pseudo_degeneration(rho, tau);
    if (!(detail::conjugation_residual(h, moved, rho) < limit)) return false;
    return detail::conjugation_residual(witness.g * h.inverse(), rho, rho) < limit;
}

// ---------------------------------------------------------------------------
// Parallel cells

using Cell = std::function<std::vector<json>()>;

/// Runs cells on `workers` threads; results come back in cell order.
inline std::vector<std::vector<json>> run_cells(const std::vector<Cell>& cells, int workers) {
    std::vector<std::vector<json>> results(cells.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) results[i] = cells[i]();
    };
    const int threads = std::max(1, std::min<int>(workers, static_cast<int>(cells.size())));
    if (threads == 1) {
        work();
        return results;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    return results;
}

inline std::vector<int> torsion_list(const std::vector<CurveValue>& curves) {
    std::vector<int> out;
    for (const auto& c : curves) out.push_back(c.torsion ? *c.torsion : -1);
    return out;
}

inline json torsion_json(const std::vector<CurveValue>& curves) {
    json out = json::array();
    for (const auto& c : curves) out.push_back(io::torsion_json(c.torsion));
    return out;
}

// ---------------------------------------------------------------------------
// verify

namespace detail {

inline bool exactly_equal(const Representation& a, const Representation& b, const Tolerance& tol) {
    for (std::size_t i = 0; i < a.images().size(); ++i)
        if (!group_equal(a.images()[i], b.images()[i], tol)) return false;
    return true;
}

inline json verify_record(const Built& b, const RunConfig& cfg) {
    const Tolerance& tol = cfg.tol;
    const double defect = relation_defect(b.rho);
    const Representation moved = apply_pseudo_degeneration(b.rho, b.tau);
    const double defect_change = std::abs(relation_defect(moved) - defect);
    const auto report = exceptional_certificate(b.rho, b.tau, tol, cfg.max_order);
    json rec{{"check", b.id},
             {"group", b.rho.context().name()},
             {"params", b.params},
             {"relation_defect", defect},
             {"twist_defect_change", defect_change},
             {"fixed", report.fixed},
             {"witness_residual", report.witness ? json(report.witness->residual) : json(nullptr)},
             {"realizable", report.realizability.realizable},
             {"simple", report.realizability.simple},
             {"verdict", verdict_name(report.verdict)},
             {"expected", verdict_name(b.expected)},
             {"torsion_orders", torsion_json(report.curves)}};
    bool pass = report.verdict == b.expected && defect < std::min(1e-10, tol.eq_tol) && defect_change < 1e-12;
    if (b.exact) {
        const bool exact = exactly_equal(moved, b.rho, tol);
        rec["exact"] = exact;
        pass = pass && exact;
    }
    if (b.witness_h && report.witness) {
        const bool coset = witness_in_coset(*report.witness, *b.witness_h, b.rho, b.tau);
        rec["witness_in_coset"] = coset;
        pass = pass && coset;
    }
    rec["pass"] = pass;
    return rec;
}

inline json error_record(const std::string& id, const json& params, const std::string& what) {
    return {{"check", id}, {"params", params}, {"error", what}, {"pass", false}};
}

inline Cell guarded(std::string id, json params, std::function<std::vector<json>()> body) {
    return [id = std::move(id), params = std::move(params), body = std::move(body)]() -> std::vector<json> {
        try {
            return body();
        } catch (const std::exception& e) {
            return {error_record(id, params, e.what())};
        }
    };
}

}  // namespace detail

/// One convention-audit line: does t^2 = s^-1 (and the literal t^2 = s)
/// satisfy the Weyl equation and W' membership?
inline json convention_audit_record(int n, const Tolerance& tol) {
    const GroupContext sl2(Family::SL, 2);
    const cplx s = n == 1 ? cplx(-1.0, 0.0) : root_of_unity(n);
    auto check = [&](SquareRootConvention conv) {
        const WeylTriple wt = weyl_triple_from_s(sl2, s, n, conv);
        const WTriple w = w_triple_from_s(sl2, s, conv);
        const double weyl = wt.weyl_residual();
        const double order = wt.order_residual();
        const double member = std::max(w.centralizer_residual(), w.commutator_residual());
        return json{{"weyl_residual", weyl},
                    {"order_residual", order},
                    {"w_membership_residual", member},
                    {"holds", weyl < tol.eq_tol && order < tol.eq_tol && member < tol.eq_tol}};
    };
    const json corrected = check(SquareRootConvention::InverseS);
    const json literal = check(SquareRootConvention::LiteralS);
    const bool s_squared_one = std::abs(s * s - 1.0) < 1e-12;
    const bool pass = corrected["holds"].get<bool>() && literal["holds"].get<bool>() == s_squared_one;
    return {{"check", "convention_audit"},
            {"params", {{"n", n}, {"s", complex_json(s)}}},
            {"t_squared_inverse_s", corrected},
            {"t_squared_s", literal},
            {"literal_expected_to_hold", s_squared_one},
            {"pass", pass}};
}

/// Exit codes: 0 all expectations met, 1 mismatch.
struct SuiteResult {
    std::vector<json> records;
    int passed = 0;
    int failed = 0;
    int exit_code() const { return failed == 0 ? 0 : 1; }
};

inline SuiteResult collect(const std::vector<std::vector<json>>& chunks) {
    SuiteResult r;
    for (const auto& chunk : chunks)
        for (const auto& rec : chunk) {
            r.records.push_back(rec);
            if (rec.contains("pass")) (rec["pass"].get<bool>() ? r.passed : r.failed)++;
        }
    return r;
}

/// Every construction applicable to cfg.group across cfg.genera.
inline SuiteResult verify_suite(const RunConfig& cfg) {
    cfg.validate();
    const GroupContext& ctx = cfg.group;
    std::vector<Cell> cells;
    std::uint64_t cell = 0;
    auto seed_of = [&] { return mix_seed(cfg.seed, ++cell); };

    for (int p : cfg.genera) {
        for (int order : cfg.lambda_orders) {
            const auto seed = seed_of();
            json params{{"genus", p}, {"order", order}};
            cells.push_back(detail::guarded("thm4", params, [=] {
                return std::vector<json>{detail::verify_record(build_thm4(ctx, p, order, seed, cfg.tol), cfg)};
            }));
        }
        if (weyl_family_for(ctx)) {
            for (int n : cfg.effective_weyl_orders()) {
                if (n > p) continue;
                if (ctx.projective() && n < 2) continue;
                const auto seed = seed_of();
                json params{{"genus", p}, {"n", n}};
                cells.push_back(detail::guarded("thm5_simple", params, [=] {
                    return std::vector<json>{detail::verify_record(build_thm5_simple(ctx, p, n, seed, cfg.tol), cfg)};
                }));
            }
        }
        if (block_embeddable(ctx) && p >= 2) {
            const auto seed = seed_of();
            cells.push_back(detail::guarded("thm5_separating", {{"genus", p}}, [=] {
                return std::vector<json>{detail::verify_record(build_thm5_separating(ctx, p, seed, cfg.tol), cfg)};
            }));
        }
        if (block_embeddable(ctx) && p >= 3) {
            const auto seed = seed_of();
            cells.push_back(detail::guarded("thm5_dense", {{"genus", p}}, [=] {
                Built b = build_thm5_dense(ctx, p, seed, cfg.tol);
                json rec = detail::verify_record(b, cfg);
                const auto density = density_heuristic(b.rho, cfg.tol);
                rec["density"] = density.label(ctx);
                return std::vector<json>{rec};
            }));
        }
        if (ctx == GroupContext(Family::SL, 2) && p >= 2) {
            for (cplx s : cfg.s_values) {
                json params{{"genus", p}, {"s", complex_json(s)}};
                cells.push_back(detail::guarded("sec6", params, [=] {
                    Built b = build_sec6(p, s, cfg.tol);
                    json rec = detail::verify_record(b, cfg);
                    rec["first_generator_torsion"] = io::torsion_json(torsion_order(b.rho.image(1), cfg.max_order, cfg.tol));
                    return std::vector<json>{rec};
                }));
            }
        }
    }
    for (int n = 1; n <= 5; ++n)
        cells.push_back(detail::guarded("convention_audit", {{"n", n}},
                                        [=] { return std::vector<json>{convention_audit_record(n, cfg.tol)}; }));
    return collect(run_cells(cells, cfg.workers));
}

// ---------------------------------------------------------------------------
// search

struct SearchResult {
    std::vector<json> records;
    json summary;
    int mismatches = 0;
    int exit_code() const { return mismatches == 0 ? 0 : 1; }
};

/// Torsion-anchored random families: lambda torsion (or forced), partner Haar
/// (or from the centralizer at genus 1), certified and binned.
inline SearchResult search_exceptional(const RunConfig& cfg, int genus, int lambda_max_order = 12) {
    cfg.validate();
    if (genus < 1) throw InvalidArgument("genus must be at least 1");
    if (cfg.force_identity && cfg.central_lambda)
        throw InvalidArgument("force-identity and central-lambda are exclusive");
    const GroupContext& ctx = cfg.group;
    std::vector<GroupElement> center;
    if (cfg.central_lambda) {
        for (const auto& z : structure_elements(ctx, StructureKind::Center, cfg.seed))
            if (!is_identity(z, cfg.tol) && torsion_order(z, lambda_max_order, cfg.tol)) center.push_back(z);
        if (center.empty()) throw InvalidArgument(ctx.name() + " has no nontrivial central torsion element");
    }
    std::vector<Cell> cells;
    for (int i = 0; i < cfg.samples; ++i) {
        const std::uint64_t seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(i) + 1);
        cells.push_back(detail::guarded("search", {{"sample", i}}, [=, &cfg] {
            Rng rng(seed);
            GroupElement lambda = GroupElement::identity(ctx);
            if (cfg.central_lambda) {
                lambda = center[static_cast<std::size_t>(rng.uniform_int(0, int(center.size()) - 1))];
            } else if (!cfg.force_identity) {
                do {
                    lambda = torsion_unitary(ctx, lambda_max_order, rng);
                } while (is_identity(lambda, cfg.tol));
            }
            const GroupElement h =
                genus == 1 ? sample_centralizer(lambda, rng.next_seed(), cfg.tol) : haar_unitary(ctx, rng);
            auto inst = thm4_family(ctx, genus, lambda, h, cfg.tol, lambda_max_order);
            const auto report = exceptional_certificate(inst.rho, inst.tau, cfg.tol, cfg.max_order);
            const auto density = density_heuristic(inst.rho, cfg.tol);
            const Verdict expected = cfg.force_identity ? Verdict::InImagePossible : Verdict::Exceptional;
            return std::vector<json>{{{"check", "search"},
                                      {"sample", i},
                                      {"group", ctx.name()},
                                      {"genus", genus},
                                      {"lambda_order", inst.tau.factors().front().exponent},
                                      {"verdict", verdict_name(report.verdict)},
                                      {"irreducible", density.irreducible},
                                      {"density", density.label(ctx)},
                                      {"witness_residual", report.witness ? json(report.witness->residual) : json(nullptr)},
                                      {"pass", report.verdict == expected}}};
        }));
    }
    SearchResult out;
    std::map<std::string, int> by_order, by_density, by_verdict;
    int exceptional = 0;
    for (auto& chunk : run_cells(cells, cfg.workers))
        for (auto& rec : chunk) {
            if (!rec["pass"].get<bool>()) ++out.mismatches;
            if (rec.contains("verdict")) {
                const std::string verdict = rec["verdict"].get<std::string>();
                if (verdict == "exceptional") ++exceptional;
                ++by_verdict[verdict];
                ++by_order[std::to_string(rec["lambda_order"].get<int>())];
                ++by_density[rec["density"].get<std::string>()];
            } else {
                ++by_verdict["error"];
            }
            out.records.push_back(std::move(rec));
        }
    out.summary = {{"check", "search_summary"},
                   {"group", ctx.name()},
                   {"genus", genus},
                   {"samples", cfg.samples},
                   {"exceptional", exceptional},
                   {"exceptional_fraction", cfg.samples ? double(exceptional) / cfg.samples : 0.0},
                   {"by_lambda_order", by_order},
                   {"by_density", by_density},
                   {"by_verdict", by_verdict},
                   {"mismatches", out.mismatches}};
    return out;
}

// ---------------------------------------------------------------------------
// conjecture scan

inline const std::vector<std::string>& conjecture_families() {
    static const std::vector<std::string> all{"thm4",       "thm5_simple", "thm5_separating", "thm5_dense",
                                              "sec6",       "perturb_thm4", "perturb_separating", "perturb_generic"};
    return all;
}

struct ScanResult {
    std::vector<json> records;
    json summary;
    int violations = 0;
    int errors = 0;
    int exit_code() const { return violations == 0 && errors == 0 ? 0 : 1; }
};

namespace detail {

inline json scan_record(const std::string& family, const json& params, const Representation& rho,
                        const PseudoDegeneration& tau, const RunConfig& cfg) {
    const auto report = conjecture_check(rho, tau, cfg.max_order, cfg.tol);
    std::string classification = conjecture_status_name(report.status);
    if (report.status == ConjectureStatus::NotRealizable) {
        classification = fixed_class_witness(rho, tau, cfg.tol) ? "pseudo_only" : "not_fixed_pseudo";
    }
    json rec{{"check", "conjecture"},
             {"family", family},
             {"group", rho.context().name()},
             {"params", params},
             {"status", conjecture_status_name(report.status)},
             {"classification", classification},
             {"witness_residual", report.witness ? json(report.witness->residual) : json(nullptr)},
             {"torsion_orders", torsion_json(report.curves)}};
    if (report.status == ConjectureStatus::ViolationCandidate) {
        rec["representation"] = io::to_json(rho);
        rec["pseudo_degeneration"] = io::to_json(tau);
        rec["report"] = io::to_json(report);
    }
    return rec;
}

}  // namespace detail

/// Conjecture check over the constructions and perturb-and-project samples.
inline ScanResult conjecture_scan(const RunConfig& cfg) {
    cfg.validate();
    const GroupContext& ctx = cfg.group;
    std::vector<std::string> families = cfg.families;
    if (families.empty()) families = conjecture_families();
    if (families.size() == 1 && families.front() == "none") families.clear();
    for (const auto& f : families)
        if (std::find(conjecture_families().begin(), conjecture_families().end(), f) == conjecture_families().end())
            throw InvalidArgument("unknown family '" + f + "'");

    const bool sl2 = ctx == GroupContext(Family::SL, 2);
    const GroupContext sub(Family::SL, 2);
    std::vector<Cell> cells;
    std::uint64_t cell = 0;
    for (const auto& family : families) {
        for (int p : cfg.genera) {
            auto add = [&](json params, std::function<std::vector<json>(std::uint64_t)> body) {
                const auto seed = mix_seed(cfg.seed, ++cell);
                cells.push_back(detail::guarded(family, params, [=] { return body(seed); }));
            };
            if (family == "thm4") {
                for (int order : cfg.lambda_orders)
                    add({{"genus", p}, {"order", order}}, [=](std::uint64_t seed) {
                        Built b = build_thm4(ctx, p, order, seed, cfg.tol);
                        return std::vector<json>{detail::scan_record(family, b.params, b.rho, b.tau, cfg)};
                    });
            } else if (family == "thm5_simple") {
                if (!weyl_family_for(ctx)) continue;
                for (int n : cfg.effective_weyl_orders()) {
                    if (n > p || (ctx.projective() && n < 2)) continue;
                    add({{"genus", p}, {"n", n}}, [=](std::uint64_t seed) {
                        Built b = build_thm5_simple(ctx, p, n, seed, cfg.tol);
                        return std::vector<json>{detail::scan_record(family, b.params, b.rho, b.tau, cfg)};
                    });
                }
            } else if (family == "thm5_separating") {
                if (!block_embeddable(ctx) || p < 2) continue;
                add({{"genus", p}}, [=](std::uint64_t seed) {
                    Built b = build_thm5_separating(ctx, p, seed, cfg.tol);
                    return std::vector<json>{detail::scan_record(family, b.params, b.rho, b.tau, cfg)};
                });
            } else if (family == "thm5_dense") {
                if (!block_embeddable(ctx) || p < 3) continue;
                add({{"genus", p}}, [=](std::uint64_t seed) {
                    Built b = build_thm5_dense(ctx, p, seed, cfg.tol);
                    return std::vector<json>{detail::scan_record(family, b.params, b.rho, b.tau, cfg)};
                });
            } else if (family == "sec6") {
                if (!sl2 || p < 2) continue;
                for (cplx s : cfg.s_values)
                    add({{"genus", p}, {"s", complex_json(s)}}, [=](std::uint64_t seed) {
                        Built b = build_sec6(p, s, cfg.tol, FillerMode::CentralizerSample, seed);
                        return std::vector<json>{detail::scan_record(family, b.params, b.rho, b.tau, cfg)};
                    });
            } else if (family == "perturb_thm4") {
                if (p < 2) continue;
                for (int i = 0; i < cfg.perturb_samples; ++i) {
                    const int order = cfg.lambda_orders.empty() ? 2 : cfg.lambda_orders[i % cfg.lambda_orders.size()];
                    add({{"genus", p}, {"sample", i}, {"order", order}}, [=](std::uint64_t seed) {
                        Built b = build_thm4(ctx, p, order, seed, cfg.tol);
                        Representation rho =
                            perturb_and_repair(b.rho, {1}, 2, cfg.perturb_scale, mix_seed(seed, 7), cfg.tol);
                        json params{{"genus", p}, {"sample", i}, {"order", order}};
                        return std::vector<json>{detail::scan_record(family, params, rho, b.tau, cfg)};
                    });
                }
            } else if (family == "perturb_separating") {
                if (!block_embeddable(ctx) || p < 2) continue;
                for (int i = 0; i < cfg.perturb_samples; ++i)
                    add({{"genus", p}, {"sample", i}}, [=](std::uint64_t seed) {
                        const GroupElement lambda = GroupElement::trusted(sub, -Matrix::Identity(2, 2));
                        auto inst = thm5_separating_family(sub, sub, lambda, p, seed, cfg.tol);
                        Representation rho = perturb_and_repair(inst.rho_sub, {1, p + 1}, 2, cfg.perturb_scale,
                                                                mix_seed(seed, 7), cfg.tol);
                        rho = embed_block(rho, ctx);
                        return std::vector<json>{
                            detail::scan_record(family, {{"genus", p}, {"sample", i}}, rho, inst.tau, cfg)};
                    });
            } else if (family == "perturb_generic") {
                for (int i = 0; i < cfg.perturb_samples; ++i)
                    add({{"genus", p}, {"sample", i}}, [=](std::uint64_t seed) {
                        Representation rho = random_representation(ctx, p, seed, true, cfg.tol);
                        PseudoDegeneration tau(p, {{CurveId::gen(p, 1), 1}});
                        return std::vector<json>{
                            detail::scan_record(family, {{"genus", p}, {"sample", i}}, rho, tau, cfg)};
                    });
            }
        }
    }
    ScanResult out;
    std::map<std::string, int> counts;
    for (auto& chunk : run_cells(cells, cfg.workers))
        for (auto& rec : chunk) {
            if (rec.contains("error")) {
                ++out.errors;
                ++counts["error"];
            } else {
                const std::string cls = rec["classification"].get<std::string>();
                ++counts[cls];
                if (cls == "violation_candidate") ++out.violations;
            }
            out.records.push_back(std::move(rec));
        }
    out.summary = {{"check", "conjecture_summary"},
                   {"group", ctx.name()},
                   {"records", out.records.size()},
                   {"counts", counts},
                   {"violation_candidates", out.violations}};
    return out;
}

}  // namespace dehn
