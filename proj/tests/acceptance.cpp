// Acceptance run: one PASS/FAIL line per criterion.
//
// Exit status is nonzero only for unexpected outcomes. Criterion 9 states an
// identity that does not hold; its failure is expected and reported as such,
// followed by a line checking the corrected identity.

#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "dehn/suite.hpp"
#include "oracles.hpp"

using namespace dehn;

namespace {

// Pinned tolerances.
constexpr double kDefect = 1e-10;
constexpr double kTwistChange = 1e-12;
constexpr double kWitness = 1e-8;
constexpr double kSolver = 1e-6;
constexpr double kIdentity = 1e-10;
constexpr int kMaxOrder = 200;

const GroupContext SL2(Family::SL, 2);
const GroupContext SL3(Family::SL, 3);
const GroupContext PGL2(Family::PGL, 2);

struct Outcome {
    bool pass;
    std::string detail;
};

struct Tally {
    int unexpected = 0;
    void report(int id, const std::string& name, const Outcome& o, bool expect_pass = true) {
        const char* tag = o.pass ? "PASS" : "FAIL";
        std::string note;
        if (!expect_pass) note = o.pass ? " (unexpected pass)" : " (expected failure: the stated identity is false)";
        std::printf("%s  criterion %d: %s: %s%s\n", tag, id, name.c_str(), o.detail.c_str(), note.c_str());
        std::fflush(stdout);
        if (o.pass != expect_pass) ++unexpected;
    }
    void info(const std::string& name, const Outcome& o) {
        std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++unexpected;
    }
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

const GroupElement& minus_one() {
    static const GroupElement m = GroupElement::trusted(SL2, -Matrix::Identity(2, 2));
    return m;
}

double max_image_distance(const Representation& a, const Representation& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.images().size(); ++i)
        worst = std::max(worst, group_distance(a.images()[i], b.images()[i]));
    return worst;
}

// Dimension of the commutant {X : X rho(A_i) = rho(A_i) X} in all matrices.
int commutant_dimension(const Representation& rho) {
    const int n = rho.context().n();
    const Matrix eye = Matrix::Identity(n, n);
    const Eigen::Index block = static_cast<Eigen::Index>(n) * n;
    Matrix stacked(block * static_cast<Eigen::Index>(rho.images().size()), block);
    for (std::size_t i = 0; i < rho.images().size(); ++i) {
        const Matrix a = det_one_representative(rho.images()[i]);
        stacked.middleRows(static_cast<Eigen::Index>(i) * block, block) =
            linalg::left_right_operator(eye, a) - linalg::left_right_operator(a, eye);
    }
    return static_cast<int>(block) - linalg::numerical_rank(stacked, 1e-7, 1.0);
}

std::vector<Eigen::MatrixXcd> matrices(const Representation& rho) {
    std::vector<Eigen::MatrixXcd> out;
    for (const auto& g : rho.images()) out.push_back(g.matrix());
    return out;
}

std::vector<int> first_n(int n) {
    std::vector<int> out;
    for (int i = 1; i <= n; ++i) out.push_back(i);
    return out;
}

// 1 ---------------------------------------------------------------------------
Outcome relation_preservation() {
    std::vector<FamilyInstance> all;
    for (int p = 1; p <= 3; ++p)
        for (int order : {2, 3, 5}) {
            Built b = build_thm4(SL2, p, order, mix_seed(1, p * 10 + order), {});
            all.push_back({b.rho, b.tau});
        }
    for (int p = 1; p <= 5; ++p)
        for (int n = 1; n <= p; ++n) {
            auto sl = thm5_simple_rep(solve_weyl_triple(SL2, n, WeylFamily::SL2), p, first_n(n));
            all.push_back(sl);
            if (n >= 2) all.push_back(thm5_simple_rep(solve_weyl_triple(PGL2, n, WeylFamily::PGL2), p, first_n(n)));
        }
    for (const auto& ambient : {SL2, SL3}) {
        for (int p = 2; p <= 3; ++p) {
            auto inst = thm5_separating_family(SL2, ambient, minus_one(), p, mix_seed(2, p));
            all.push_back({inst.rho, inst.tau});
        }
        for (int p = 3; p <= 4; ++p) {
            auto inst = thm5_dense_rep(SL2, ambient, minus_one(), p, mix_seed(3, p));
            all.push_back({inst.rho, inst.tau});
        }
    }
    for (cplx s : {cplx(3.0, 0.0), std::polar(1.0, 2.0 * std::numbers::pi / 5), cplx(-1.0, 0.0)})
        for (int p = 2; p <= 3; ++p) {
            auto inst = sec6_family(p, s);
            all.push_back({inst.rho, inst.tau});
        }
    double worst_defect = 0.0, worst_change = 0.0;
    for (const auto& f : all) {
        const double d = relation_defect(f.rho);
        worst_defect = std::max(worst_defect, d);
        worst_change = std::max(worst_change, std::abs(relation_defect(apply_pseudo_degeneration(f.rho, f.tau)) - d));
        for (const auto& c : registry_curves(f.rho.genus()))
            for (int m : {1, -1})
                worst_change = std::max(worst_change, std::abs(relation_defect(apply_twist(f.rho, c, m)) - d));
    }
    return {worst_defect < kDefect && worst_change < kTwistChange,
            fmt("%zu families, max defect %.2e, max twist change %.2e", all.size(), worst_defect, worst_change)};
}

// 2 ---------------------------------------------------------------------------
Outcome thm4_exact() {
    int checked = 0, failures = 0;
    double worst = 0.0;
    for (int n = 2; n <= 12; ++n)
        for (int p = 1; p <= 3; ++p) {
            Built b = build_thm4(SL2, p, n, mix_seed(4, n * 10 + p), {});
            const Representation moved = apply_twist(b.rho, CurveId::gen(p, 1), n);
            const double dist = max_image_distance(moved, b.rho);
            worst = std::max(worst, dist);
            const auto report = exceptional_certificate(b.rho, b.tau, {}, kMaxOrder);
            ++checked;
            if (!(dist < kIdentity) || report.verdict != Verdict::Exceptional || b.tau.factors()[0].exponent != n)
                ++failures;
        }
    // genus-one fiber over lambda: 50 centralizer partners
    int fiber_ok = 0, min_dim = 1000;
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        const int n = 2 + i % 11;
        const GroupElement lambda = diagonal_torsion(SL2, n);
        const GroupElement h = sample_centralizer(lambda, rng.next_seed());
        const auto inst = thm4_family(SL2, 1, lambda, h);
        const auto report = exceptional_certificate(inst.rho, inst.tau, {}, kMaxOrder);
        const int dim = tangent_dimension(inst.rho, {FixGenerator{1}});
        min_dim = std::min(min_dim, dim);
        if (report.verdict == Verdict::Exceptional && dim >= SL2.rank()) ++fiber_ok;
    }
    return {failures == 0 && fiber_ok == 50,
            fmt("%d (order, genus) cases exact to %.1e with exceptional verdict, %d failures; "
                "genus-1 fiber %d/50 certified, min tangent dim with a_1 fixed %d >= r = %d",
                checked, worst, failures, fiber_ok, min_dim, SL2.rank())};
}

// 3 ---------------------------------------------------------------------------
Outcome thm5_simple() {
    int cases = 0, failures = 0, projective_matches = 0;
    double worst = 0.0;
    std::string why;
    auto run = [&](const GroupContext& ctx, WeylFamily fam, int n, int p) {
        const WeylTriple triple = solve_weyl_triple(ctx, n, fam);
        const auto inst = thm5_simple_rep(triple, p, first_n(n));
        const auto w = fixed_class_witness(inst.rho, inst.tau);
        const auto real = is_realizable_as_degeneration(inst.tau);
        const auto conj = conjecture_check(inst.rho, inst.tau, kMaxOrder);
        ++cases;
        bool ok = w.has_value() && w->residual < kWitness && real.simple &&
                  conj.status == ConjectureStatus::Consistent;
        if (w) worst = std::max(worst, w->residual);
        for (const auto& c : conj.curves) ok = ok && c.torsion && (2 * n) % *c.torsion == 0;
        if (ok) {
            // witness = h up to the centralizer of rho; equal to h^{+-1}
            // projectively when that centralizer is scalar
            const GroupElement h = triple.h;
            bool h_valid = witness_in_coset(*w, h, inst.rho, inst.tau, kWitness) ||
                           witness_in_coset(*w, h.inverse(), inst.rho, inst.tau, kWitness);
            const auto pw = GroupElement::trusted(PGL2, w->g.matrix());
            const bool projective = group_equal(pw, GroupElement::trusted(PGL2, h.matrix()), {1e-8, 1e-7, 1e-8}) ||
                                    group_equal(pw, GroupElement::trusted(PGL2, h.inverse().matrix()), {1e-8, 1e-7, 1e-8});
            if (projective) ++projective_matches;
            const bool scalar_centralizer = commutant_dimension(inst.rho) == 1 && !ctx.projective();
            ok = h_valid && (!scalar_centralizer || projective);
        }
        if (!ok) {
            ++failures;
            why += " " + ctx.name() + "(n=" + std::to_string(n) + ",p=" + std::to_string(p) + ")";
        }
    };
    for (int p = 1; p <= 5; ++p)
        for (int n = 1; n <= p; ++n) {
            run(SL2, WeylFamily::SL2, n, p);
            if (n >= 2) run(PGL2, WeylFamily::PGL2, n, p);
        }
    return {failures == 0, fmt("%d cases, max witness residual %.2e, %d witnesses projectively h^{+-1}, failures:%s",
                               cases, worst, projective_matches, failures ? why.c_str() : " none")};
}

// 4 ---------------------------------------------------------------------------
Outcome thm5_separating() {
    int failures = 0;
    int dim_sl2 = -1, fd_sl2 = -1;
    std::string notes;
    for (const auto& ambient : {SL2, SL3})
        for (int p = 2; p <= 3; ++p) {
            const auto inst = thm5_separating_family(SL2, ambient, minus_one(), p, mix_seed(6, p));
            for (auto side : {SideConvention::C, SideConvention::CInverse}) {
                const PseudoDegeneration tau = inst.tau.with_side(side);
                if (!(max_image_distance(apply_pseudo_degeneration(inst.rho, tau), inst.rho) < kIdentity)) ++failures;
            }
            if (exceptional_certificate(inst.rho, inst.tau).verdict != Verdict::Exceptional) ++failures;
            if (ambient == SL2 && p == 2) {
                const GroupElement c = commutator(inst.rho.image(1), inst.rho.image(3));
                dim_sl2 = tangent_dimension(inst.rho, {FixCommutator{1, c}});
                fd_sl2 = oracle::fd_tangent_nullity(matrices(inst.rho), 2, {{}, {1}});
            }
        }
    const int bound = 2 * (2 - 1) * SL2.dimension();
    const bool ok = failures == 0 && dim_sl2 >= bound && dim_sl2 == fd_sl2;
    return {ok, fmt("exact fixedness under both side conventions (%d failures); constrained tangent dim %d "
                    "(bound %d, finite-difference oracle %d)",
                    failures, dim_sl2, bound, fd_sl2)};
}

// 5 ---------------------------------------------------------------------------
Outcome thm5_dense() {
    int failures = 0;
    std::string detail;
    for (const auto& ambient : {SL2, SL3})
        for (int p = 3; p <= 4; ++p) {
            const auto inst = thm5_dense_rep(SL2, ambient, minus_one(), p, mix_seed(7, p));
            const int cdim = lie_centralizer_dimension(inst.rho_sub);
            const auto density = density_heuristic(inst.rho_sub);
            const auto verdict = exceptional_certificate(inst.rho, inst.tau).verdict;
            const bool ok = cdim == SL2.center_dimension() && density.passed() && verdict == Verdict::Exceptional;
            if (!ok) ++failures;
            detail += fmt(" %s/p=%d: centralizer %d, %s, %s;", ambient.name().c_str(), p, cdim,
                          density.label(SL2), verdict_name(verdict).c_str());
        }
    return {failures == 0, detail.substr(1)};
}

// 6 ---------------------------------------------------------------------------
Outcome sec6() {
    int failures = 0;
    std::string detail;
    for (cplx s : {cplx(3.0, 0.0), std::polar(1.0, 2.0 * std::numbers::pi / 5), cplx(-1.0, 0.0)})
        for (int p = 2; p <= 3; ++p) {
            const auto inst = sec6_family(p, s);
            const auto report = exceptional_certificate(inst.rho, inst.tau, {}, kMaxOrder);
            const auto order = torsion_order(inst.rho.image(1), kMaxOrder);
            bool ok = report.witness && report.witness->residual < kWitness && !report.realizability.realizable &&
                      report.verdict == Verdict::PseudoOnly;
            if (s == cplx(3.0, 0.0)) {
                ok = ok && !order;
                if (p == 2)
                    detail += fmt("s=3: residual %.1e, realizable %s, %s, rho(A_1) order %s; ",
                                  report.witness ? report.witness->residual : -1.0,
                                  report.realizability.realizable ? "true" : "false",
                                  verdict_name(report.verdict).c_str(), order ? "finite" : "none");
            }
            if (!ok) ++failures;
        }
    detail += fmt("%d failures over s in {3, e^(2 pi i/5), -1}, p in {2,3}", failures);
    return {failures == 0, detail};
}

// 7 ---------------------------------------------------------------------------
Outcome conjugacy_oracle() {
    Rng rng(8);
    std::string detail;
    int failures = 0;
    double worst = 0.0;
    for (const auto& ctx : {SL2, SL3, PGL2}) {
        int ok = 0;
        for (int i = 0; i < 200; ++i) {
            const Representation rho = random_representation(ctx, 1 + i % 3, rng.next_seed());
            const GroupElement g = generic_element(ctx, rng);
            const auto w = conjugacy_witness(rho, conjugate(g, rho), {}, rng.next_seed());
            if (w && w->residual < kWitness) {
                ++ok;
                worst = std::max(worst, w->residual);
            }
        }
        failures += 200 - ok;
        detail += fmt("%s %d/200, ", ctx.name().c_str(), ok);
    }
    int none = 0, pairs = 0;
    while (pairs < 50) {
        const Representation a = random_representation(SL2, 2, rng.next_seed(), true);
        const Representation b = random_representation(SL2, 2, rng.next_seed(), true);
        if (!is_irreducible(a) || !is_irreducible(b)) continue;
        if (!(fingerprint_distance(character_fingerprint(a), character_fingerprint(b)) > 1e-6)) continue;
        ++pairs;
        if (!conjugacy_witness(a, b)) ++none;
    }
    detail += fmt("max residual %.2e; distinct-fingerprint irreducible pairs returning none %d/50", worst, none);
    return {failures == 0 && none == 50, detail};
}

// 8 ---------------------------------------------------------------------------
Outcome commutator_solvers() {
    Rng rng(9);
    int failures = 0;
    double worst = 0.0;
    auto attempt = [&](const GroupElement& target, const std::optional<GroupElement>& g) {
        try {
            const auto sol = solve_commutator(SL2, target, g, rng.next_seed());
            const double r = (commutator(sol.a, sol.b).matrix() - target.matrix()).norm();
            bool ok = r < kSolver;
            if (g) ok = ok && distance_to_identity(commutator(sol.b, *g)) < 1e-8;
            worst = std::max(worst, r);
            if (!ok) ++failures;
        } catch (const SolverFailed&) {
            ++failures;
        }
    };
    for (int i = 0; i < 100; ++i) attempt(haar_unitary(SL2, rng), std::nullopt);
    for (int i = 0; i < 50; ++i) {
        const GroupElement g = haar_unitary(SL2, rng);
        attempt(haar_unitary(SL2, rng), g);
    }
    return {failures == 0, fmt("100 unconstrained + 50 centralizer-constrained SU(2) targets, %d failures, "
                               "worst residual %.2e", failures, worst)};
}

// 9 ---------------------------------------------------------------------------
struct IdentityCounts {
    int product_total = 0, product_hold = 0;
    int equiv_total = 0, equiv_hold = 0;
};

IdentityCounts weyl_identities(bool literal) {
    IdentityCounts c;
    Rng rng(10);
    for (const auto& ctx : {SL2, SL3}) {
        for (const auto& w : structure_elements(ctx, StructureKind::Weyl))
            for (int i = 0; i < 100; ++i) {
                const GroupElement g = structure_elements(ctx, StructureKind::CartanSample, rng.next_seed())[0];
                const GroupElement wg = conjugate(w, g);
                for (int n = 1; n <= 8; ++n) {
                    const GroupElement lhs = commutator(g, w).pow(n);
                    const GroupElement rhs = literal ? g.pow(n) * wg.pow(n) : g.pow(n) * wg.pow(-n);
                    ++c.product_total;
                    if (group_distance(lhs, rhs) < kIdentity) ++c.product_hold;
                    const bool trivial = distance_to_identity(lhs) < kIdentity;
                    const bool side = literal ? group_distance(wg.pow(n), g.pow(-n)) < kIdentity
                                              : group_distance(wg.pow(n), g.pow(n)) < kIdentity;
                    ++c.equiv_total;
                    if (trivial == side) ++c.equiv_hold;
                }
            }
    }
    return c;
}

Outcome identities_literal() {
    const auto c = weyl_identities(true);
    return {c.product_hold == c.product_total && c.equiv_hold == c.equiv_total,
            fmt("C(g,w)^n = g^n (w.g)^n holds in %d/%d cases; C(g,w)^n = e <=> (w.g)^n = g^-n in %d/%d",
                c.product_hold, c.product_total, c.equiv_hold, c.equiv_total)};
}

Outcome identities_corrected() {
    const auto c = weyl_identities(false);
    return {c.product_hold == c.product_total && c.equiv_hold == c.equiv_total,
            fmt("C(g,w)^n = g^n (w.g)^-n holds in %d/%d cases; C(g,w)^n = e <=> (w.g)^n = g^n in %d/%d",
                c.product_hold, c.product_total, c.equiv_hold, c.equiv_total)};
}

// 10 --------------------------------------------------------------------------
Outcome convention_audit() {
    bool ok = true;
    std::string detail;
    for (int n = 1; n <= 5; ++n) {
        const json rec = convention_audit_record(n, {});
        const bool corrected = rec["t_squared_inverse_s"]["holds"].get<bool>();
        const bool literal = rec["t_squared_s"]["holds"].get<bool>();
        if (n >= 3) ok = ok && corrected && !literal;
        else ok = ok && corrected && literal;
        detail += fmt("n=%d: t^2=1/s %s, t^2=s %s; ", n, corrected ? "holds" : "fails", literal ? "holds" : "fails");
    }
    return {ok, detail.substr(0, detail.size() - 2)};
}

// 11 --------------------------------------------------------------------------
Outcome conjecture_scan_all() {
    int violations = 0, errors = 0, pseudo = 0, sec6_total = 0, consistent = 0, records = 0;
    for (const auto& ctx : {SL2, SL3, PGL2}) {
        RunConfig cfg;
        cfg.group = ctx;
        const auto result = conjecture_scan(cfg);
        violations += result.violations;
        errors += result.errors;
        records += static_cast<int>(result.records.size());
        for (const auto& r : result.records) {
            if (r["family"] == "sec6") {
                ++sec6_total;
                if (r["classification"] == "pseudo_only") ++pseudo;
            }
            if (r["classification"] == "consistent") ++consistent;
        }
    }
    return {violations == 0 && errors == 0 && pseudo == sec6_total && sec6_total > 0,
            fmt("%d records, %d consistent, %d violation candidates, %d errors, sec6 pseudo_only %d/%d",
                records, consistent, violations, errors, pseudo, sec6_total)};
}

Outcome guarded(const std::function<Outcome()>& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        return {false, std::string("exception: ") + e.what()};
    }
}

}  // namespace

int main() {
    Tally t;
    t.report(1, "relation preservation", guarded(relation_preservation));
    t.report(2, "torsion-anchored family fixed exactly", guarded(thm4_exact));
    t.report(3, "Weyl-equation family witness", guarded(thm5_simple));
    t.report(4, "separating-curve family", guarded(thm5_separating));
    t.report(5, "dense separating family", guarded(thm5_dense));
    t.report(6, "W family pseudo-degeneration", guarded(sec6));
    t.report(7, "conjugacy oracle", guarded(conjugacy_oracle));
    t.report(8, "commutator solvers", guarded(commutator_solvers));
    t.report(9, "Weyl commutator power identities (as stated)", guarded(identities_literal), false);
    t.info("criterion 9, corrected identities", guarded(identities_corrected));
    t.report(10, "square-root convention audit", guarded(convention_audit));
    t.report(11, "conjecture scan", guarded(conjecture_scan_all));
    std::printf("%d unexpected outcomes\n", t.unexpected);
    return t.unexpected == 0 ? 0 : 1;
}
