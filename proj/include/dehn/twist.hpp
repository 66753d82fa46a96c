#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dehn/representation.hpp"

namespace dehn {

/// Which power of the separating curve's image conjugates the far side.
enum class SideConvention { C, CInverse };

struct TwistFactor {
    CurveId curve;
    int exponent;
};

/// A product of twists along pairwise disjoint registry curves with nonzero
/// exponents, applied in list order.
class PseudoDegeneration {
public:
    PseudoDegeneration(int genus, std::vector<TwistFactor> factors, SideConvention side = SideConvention::C)
        : genus_(genus), factors_(std::move(factors)), side_(side) {
        if (genus < 1) throw InvalidArgument("genus must be at least 1");
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            if (factors_[i].exponent == 0) throw InvalidArgument("twist exponents must be nonzero");
            if (factors_[i].curve.genus() != genus) throw InvalidArgument("curve genus mismatch");
            for (std::size_t j = i + 1; j < factors_.size(); ++j)
                if (!curves_disjoint(factors_[i].curve, factors_[j].curve))
                    throw InvalidArgument("curves " + factors_[i].curve.label() + " and " +
                                          factors_[j].curve.label() + " are not disjoint");
        }
    }

    int genus() const noexcept { return genus_; }
    const std::vector<TwistFactor>& factors() const noexcept { return factors_; }
    SideConvention side() const noexcept { return side_; }

    PseudoDegeneration with_side(SideConvention side) const { return {genus_, factors_, side}; }
    PseudoDegeneration reversed() const {
        return {genus_, std::vector<TwistFactor>(factors_.rbegin(), factors_.rend()), side_};
    }

private:
    int genus_;
    std::vector<TwistFactor> factors_;
    SideConvention side_;
};

/// Twist along a registry curve, `exponent` times.
///
/// Gen(i), i <= p, replaces rho(A_{p+i}) by rho(A_{p+i}) rho(A_i)^-m;
/// Gen(p+i) replaces rho(A_i) by rho(A_i) rho(A_{p+i})^m;
/// Sep(k) conjugates the generators of handles k+1..p by B = rho(C)^(+-m).
inline Representation apply_twist(const Representation& rho, const CurveId& curve, int exponent,
                                  SideConvention side = SideConvention::C) {
    const int p = rho.genus();
    if (exponent == 0) throw InvalidArgument("twist exponent must be nonzero");
    if (curve.genus() != p) throw InvalidArgument("curve genus does not match representation");
    if (curve.is_generator()) {
        const int i = curve.index();
        if (i <= p) return rho.with_image(p + i, rho.image(p + i) * rho.image(i).pow(-exponent));
        return rho.with_image(i - p, rho.image(i - p) * rho.image(i).pow(exponent));
    }
    const GroupElement c = evaluate(rho, curve_word(curve));
    const GroupElement b = c.pow(side == SideConvention::C ? exponent : -exponent);
    const GroupElement b_inv = b.inverse();
    std::vector<GroupElement> out = rho.images();
    for (int handle = curve.index() + 1; handle <= p; ++handle) {
        out[handle - 1] = b * out[handle - 1] * b_inv;
        out[handle + p - 1] = b * out[handle + p - 1] * b_inv;
    }
    return Representation::trusted(rho.context(), p, std::move(out));
}

inline Representation apply_pseudo_degeneration(const Representation& rho, const PseudoDegeneration& tau) {
    if (tau.genus() != rho.genus()) throw InvalidArgument("pseudo-degeneration genus mismatch");
    Representation out = rho;
    for (const auto& f : tau.factors()) out = apply_twist(out, f.curve, f.exponent, tau.side());
    return out;
}

struct Realizability {
    bool realizable;  // every exponent positive: arises from a degeneration
    bool simple;      // every exponent equal to 1
};

inline Realizability is_realizable_as_degeneration(const PseudoDegeneration& tau) {
    bool positive = true;
    bool unit = true;
    for (const auto& f : tau.factors()) {
        positive = positive && f.exponent > 0;
        unit = unit && f.exponent == 1;
    }
    return {positive, positive && unit};
}

/// Conjugator taking tau(rho) back to rho, if the class of rho is fixed.
inline std::optional<ConjugacyWitness> fixed_class_witness(const Representation& rho, const PseudoDegeneration& tau,
                                                           const Tolerance& tol = {}, std::uint64_t seed = 0) {
    return conjugacy_witness(apply_pseudo_degeneration(rho, tau), rho, tol, seed);
}

struct CurveValue {
    CurveId curve;
    GroupElement value;
    std::optional<int> torsion;
    bool trivial;
};

inline std::vector<CurveValue> curve_values(const Representation& rho, const PseudoDegeneration& tau, int max_order,
                                            const Tolerance& tol) {
    std::vector<CurveValue> out;
    for (const auto& f : tau.factors()) {
        GroupElement v = evaluate(rho, curve_word(f.curve));
        const bool trivial = is_identity(v, tol);
        auto order = torsion_order(v, max_order, tol);
        out.push_back({f.curve, std::move(v), order, trivial});
    }
    return out;
}

enum class Verdict { Exceptional, InImagePossible, PseudoOnly, NotFixed };

inline std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Exceptional: return "exceptional";
        case Verdict::InImagePossible: return "in_image_possible";
        case Verdict::PseudoOnly: return "pseudo_only";
        case Verdict::NotFixed: return "not_fixed";
    }
    return "?";
}

struct ExceptionalityReport {
    bool fixed = false;
    std::optional<ConjugacyWitness> witness;
    Realizability realizability{false, false};
    std::vector<CurveValue> curves;
    Verdict verdict = Verdict::NotFixed;

    bool realizable() const { return realizability.realizable; }
};

/// Fixed class + realizable + some pinched curve with nontrivial image.
inline ExceptionalityReport exceptional_certificate(const Representation& rho, const PseudoDegeneration& tau,
                                                    const Tolerance& tol = {}, int max_order = 200) {
    ExceptionalityReport report;
    report.witness = fixed_class_witness(rho, tau, tol);
    report.fixed = report.witness.has_value();
    report.realizability = is_realizable_as_degeneration(tau);
    report.curves = curve_values(rho, tau, max_order, tol);
    bool nontrivial = false;
    for (const auto& c : report.curves) nontrivial = nontrivial || !c.trivial;
    if (!report.fixed)
        report.verdict = Verdict::NotFixed;
    else if (!nontrivial)
        report.verdict = Verdict::InImagePossible;
    else if (report.realizability.realizable)
        report.verdict = Verdict::Exceptional;
    else
        report.verdict = Verdict::PseudoOnly;
    return report;
}

enum class ConjectureStatus { Consistent, ViolationCandidate, NotFixed, NotRealizable };

inline std::string conjecture_status_name(ConjectureStatus s) {
    switch (s) {
        case ConjectureStatus::Consistent: return "consistent";
        case ConjectureStatus::ViolationCandidate: return "violation_candidate";
        case ConjectureStatus::NotFixed: return "precondition_not_fixed";
        case ConjectureStatus::NotRealizable: return "precondition_not_realizable";
    }
    return "?";
}

struct ConjectureReport {
    ConjectureStatus status = ConjectureStatus::NotFixed;
    std::optional<ConjugacyWitness> witness;
    std::vector<CurveValue> curves;
};

/// For a class fixed by a realizable tau, every pinched curve should map to a
/// torsion element. Failed preconditions are reported as their own statuses.
inline ConjectureReport conjecture_check(const Representation& rho, const PseudoDegeneration& tau, int max_order,
                                         const Tolerance& tol = {}) {
    ConjectureReport report;
    report.curves = curve_values(rho, tau, max_order, tol);
    if (!is_realizable_as_degeneration(tau).realizable) {
        report.status = ConjectureStatus::NotRealizable;
        return report;
    }
    report.witness = fixed_class_witness(rho, tau, tol);
    if (!report.witness) {
        report.status = ConjectureStatus::NotFixed;
        return report;
    }
    report.status = ConjectureStatus::Consistent;
    for (const auto& c : report.curves)
        if (!c.torsion) report.status = ConjectureStatus::ViolationCandidate;
    return report;
}

}  // namespace dehn
