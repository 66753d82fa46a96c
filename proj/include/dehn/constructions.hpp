#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dehn/commutator.hpp"
#include "dehn/representation.hpp"
#include "dehn/tangent.hpp"
#include "dehn/twist.hpp"

namespace dehn {

/// A representation paired with the pseudo-degeneration it is built for.
struct FamilyInstance {
    Representation rho;
    PseudoDegeneration tau;
};

// ---------------------------------------------------------------------------
// Embeddings and centralizers

/// Block embedding SL(m) -> SL(n) or GL(n), A -> diag(A, I).
inline GroupElement embed_block(const GroupElement& g, const GroupContext& ambient) {
    const int m = g.n();
    if (ambient.projective()) throw InvalidArgument("block embedding into PGL is not supported");
    if (ambient.n() < m) throw InvalidArgument("ambient group is smaller than the subgroup");
    if (g.context().projective()) throw InvalidArgument("cannot embed PGL elements as blocks");
    Matrix out = Matrix::Identity(ambient.n(), ambient.n());
    out.topLeftCorner(m, m) = g.matrix();
    return GroupElement::trusted(ambient, std::move(out));
}

inline Representation embed_block(const Representation& rho, const GroupContext& ambient) {
    if (rho.context() == ambient) return rho;
    std::vector<GroupElement> out;
    for (const auto& g : rho.images()) out.push_back(embed_block(g, ambient));
    return Representation::trusted(ambient, rho.genus(), std::move(out));
}

/// Random invertible element of the centralizer of g, drawn from the
/// commutant algebra {X : gX = Xg}.
inline GroupElement sample_centralizer(const GroupElement& g, std::uint64_t seed, const Tolerance& tol = {}) {
    const GroupContext& ctx = g.context();
    const int n = ctx.n();
    const Matrix a = det_one_representative(g);
    const Matrix eye = Matrix::Identity(n, n);
    const Matrix op = linalg::left_right_operator(a, eye) - linalg::left_right_operator(eye, a);
    const Matrix basis = linalg::nullspace(op, tol.rank_tol, a.norm());
    Rng rng(seed);
    for (int attempt = 0; attempt < 64; ++attempt) {
        Vector coeffs(basis.cols());
        for (Eigen::Index j = 0; j < coeffs.size(); ++j) coeffs(j) = rng.complex_normal();
        Matrix x = linalg::unvec(basis * coeffs, n);
        const cplx det = x.determinant();
        if (std::abs(det) < 1e-6 * std::pow(x.norm() / std::sqrt(double(n)), n)) continue;
        if (ctx.family() != Family::GL) x /= std::pow(det, 1.0 / n);
        return GroupElement::trusted(ctx, std::move(x));
    }
    throw SolverFailed("no invertible centralizer element found", 0.0);
}

// ---------------------------------------------------------------------------
// Torsion-anchored families

/// rho(A_1) = rho(A_{p+2}) = lambda, rho(A_2) = rho(A_{p+1}) = h, all other
/// generators trivial (p >= 2); (lambda, h) with h in the centralizer of lambda
/// for p = 1. The paired twist is tau_{A_1'}^n with n the order of lambda.
inline FamilyInstance thm4_family(const GroupContext& ctx, int genus, const GroupElement& lambda, const GroupElement& h,
                                  const Tolerance& tol = {}, int max_order = 1000) {
    if (genus < 1) throw InvalidArgument("genus must be at least 1");
    const auto order = torsion_order(lambda, max_order, tol);
    if (!order) throw InvalidArgument("lambda is not a torsion element");
    std::vector<GroupElement> images(2 * genus, GroupElement::identity(ctx));
    if (genus == 1) {
        if (!is_identity(commutator(lambda, h), tol))
            throw InvalidArgument("for genus 1, h must commute with lambda");
        images[0] = lambda;
        images[1] = h;
    } else {
        images[0] = lambda;
        images[genus + 1] = lambda;
        images[1] = h;
        images[genus] = h;
    }
    Representation rho = Representation::make(ctx, genus, std::move(images), tol);
    return {std::move(rho), PseudoDegeneration(genus, {{CurveId::gen(genus, 1), *order}})};
}

// ---------------------------------------------------------------------------
// Weyl-equation families

/// w, g, h with w.(hg) = h and C(g, w)^n = e, g != e.
struct WeylTriple {
    GroupElement w;
    GroupElement g;
    GroupElement h;
    int order_bound;

    /// Distance between w.(hg) and h.
    double weyl_residual() const { return group_distance(conjugate(w, h * g), h); }
    /// Distance between C(g, w)^n and e.
    double order_residual() const { return distance_to_identity(commutator(g, w).pow(order_bound)); }

    bool valid(const Tolerance& tol = {}) const {
        return weyl_residual() < tol.eq_tol && order_residual() < tol.eq_tol && !is_identity(g, tol);
    }
};

enum class WeylFamily { SL2, PGL2, GeneralDiagonal };

/// How h = diag(t, 1/t) is derived from s: t^2 = s^-1 satisfies the Weyl
/// equation for every admissible s; t^2 = s only when s^2 = 1.
enum class SquareRootConvention { InverseS, LiteralS };

/// g = diag(s, 1/s), w = [[0, 1], [-1, 0]], h = diag(t, 1/t). Not validated.
inline WeylTriple weyl_triple_from_s(const GroupContext& ctx, cplx s, int n,
                                     SquareRootConvention conv = SquareRootConvention::InverseS) {
    if (ctx.n() != 2) throw InvalidArgument("explicit Weyl triples are 2x2");
    const cplx t = std::sqrt(conv == SquareRootConvention::InverseS ? 1.0 / s : s);
    return {weyl_sl2(ctx), diagonal(ctx, {s, 1.0 / s}), diagonal(ctx, {t, 1.0 / t}), n};
}

namespace detail {

// Permutation pi with (w D w^-1)_jj = D_{pi(j)} for diagonal D.
inline std::vector<int> weyl_permutation(const GroupElement& w) {
    const int n = w.n();
    Matrix d = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) d(j, j) = double(j + 1);
    const Matrix c = w.matrix() * d * w.inverse().matrix();
    std::vector<int> pi(n);
    for (int j = 0; j < n; ++j) pi[j] = static_cast<int>(std::lround(c(j, j).real())) - 1;
    return pi;
}

inline WeylTriple general_diagonal_triple(const GroupContext& ctx, int n, std::uint64_t seed) {
    if (ctx.family() != Family::SL) throw InvalidArgument("general_diagonal Weyl triples are built in SL(m)");
    const int m = ctx.n();
    auto weyl = structure_elements(ctx, StructureKind::Weyl);
    weyl.erase(weyl.begin());  // identity permutation comes first
    Rng rng(seed);
    for (int attempt = 0; attempt < 256; ++attempt) {
        const GroupElement& w = weyl[static_cast<std::size_t>(rng.uniform_int(0, int(weyl.size()) - 1))];
        const auto pi = weyl_permutation(w);
        // gamma, eta: phases of g and h in units of 2 pi.
        std::vector<double> gamma(m, 0.0), eta(m, 0.0);
        std::vector<bool> seen(m, false);
        std::vector<std::vector<int>> cycles;
        for (int start = 0; start < m; ++start) {
            if (seen[start]) continue;
            std::vector<int> cycle;
            for (int j = start; !seen[j]; j = pi[j]) {
                seen[j] = true;
                cycle.push_back(j);
            }
            cycles.push_back(cycle);
        }
        for (const auto& cycle : cycles) {
            const int len = static_cast<int>(cycle.size());
            std::vector<int> steps(len);
            int total = 0;
            for (int t = 0; t < len; ++t) {
                steps[t] = rng.uniform_int(0, n - 1);
                total += steps[t];
            }
            const int q = rng.uniform_int(0, len - 1);
            const double c = (q - double(total) / n) / len;
            for (int t = 0; t < len; ++t) gamma[cycle[t]] = c + double(steps[t]) / n;
            // h_{j} = h_{pi(j)} g_{pi(j)}: walk the cycle forward.
            eta[cycle[0]] = rng.uniform();
            for (int t = 0; t + 1 < len; ++t) eta[cycle[t + 1]] = eta[cycle[t]] - gamma[cycle[t + 1]];
        }
        double eta_sum = 0.0;
        for (double e : eta) eta_sum += e;
        const auto& shift_cycle = cycles.front();
        for (int j : shift_cycle) eta[j] -= eta_sum / double(shift_cycle.size());

        std::vector<cplx> g_diag(m), h_diag(m);
        for (int j = 0; j < m; ++j) {
            g_diag[j] = std::polar(1.0, 2.0 * std::numbers::pi * gamma[j]);
            h_diag[j] = std::polar(1.0, 2.0 * std::numbers::pi * eta[j]);
        }
        WeylTriple triple{w, diagonal(ctx, g_diag), diagonal(ctx, h_diag), n};
        if (!is_identity(triple.g, Tolerance{1e-6, 1e-7, 1e-8})) return triple;
    }
    throw SolverFailed("could not draw a nontrivial diagonal Weyl triple", 0.0);
}

}  // namespace detail

/// Solves the Weyl equation w.(hg) = h, C(g, w)^n = e.
///
/// SL2: s = exp(2 pi i / n) (s = -1 when n = 1); PGL2: s = exp(pi i / n),
/// n >= 2. Both use t^2 = s^-1. GeneralDiagonal draws a random nontrivial
/// Weyl permutation of SL(m) and solves the phase equations cycle by cycle.
inline WeylTriple solve_weyl_triple(const GroupContext& ctx, int n, WeylFamily family, std::uint64_t seed = 0,
                                    const Tolerance& tol = {}) {
    if (n < 1) throw InvalidArgument("order bound must be at least 1");
    WeylTriple triple = [&] {
        switch (family) {
            case WeylFamily::SL2: {
                if (!(ctx == GroupContext(Family::SL, 2))) throw InvalidArgument("sl2 family needs SL(2)");
                const cplx s = n == 1 ? cplx(-1.0, 0.0) : std::polar(1.0, 2.0 * std::numbers::pi / n);
                return weyl_triple_from_s(ctx, s, n);
            }
            case WeylFamily::PGL2: {
                if (!(ctx == GroupContext(Family::PGL, 2))) throw InvalidArgument("pgl2 family needs PGL(2)");
                if (n < 2) throw InvalidArgument("PGL(2) needs s != +-1 with s^(2n) = 1, so n >= 2");
                return weyl_triple_from_s(ctx, std::polar(1.0, std::numbers::pi / n), n);
            }
            case WeylFamily::GeneralDiagonal: return detail::general_diagonal_triple(ctx, n, seed);
        }
        throw InvalidArgument("unknown Weyl family");
    }();
    if (!triple.valid(tol)) throw SolverFailed("Weyl triple failed validation", triple.weyl_residual());
    return triple;
}

/// rho(A_l) = g for l in indices, w for l = i + p, e otherwise; the paired
/// twist is the simple product of tau_{A_i'} over the indices.
inline FamilyInstance thm5_simple_rep(const WeylTriple& triple, int genus, std::vector<int> indices,
                                      const Tolerance& tol = {}) {
    std::sort(indices.begin(), indices.end());
    if (indices.empty()) throw InvalidArgument("need at least one index");
    if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
        throw InvalidArgument("indices must be distinct");
    if (indices.front() < 1 || indices.back() > genus) throw InvalidArgument("indices must lie in 1..p");
    const int n = static_cast<int>(indices.size());
    WeylTriple check = triple;
    check.order_bound = n;
    if (!check.valid(tol)) throw InvalidArgument("Weyl triple does not satisfy the equation for n = " + std::to_string(n));

    const GroupContext& ctx = triple.g.context();
    std::vector<GroupElement> images(2 * genus, GroupElement::identity(ctx));
    std::vector<TwistFactor> factors;
    for (int i : indices) {
        images[i - 1] = triple.g;
        images[i + genus - 1] = triple.w;
        factors.push_back({CurveId::gen(genus, i), 1});
    }
    Representation rho = Representation::make(ctx, genus, std::move(images), tol);
    return {std::move(rho), PseudoDegeneration(genus, std::move(factors))};
}

// ---------------------------------------------------------------------------
// Separating-curve families

namespace detail {

inline void require_central_torsion(const GroupElement& lambda, const Tolerance& tol) {
    const Matrix& m = lambda.matrix();
    const cplx c = m(0, 0);
    if ((m - c * Matrix::Identity(m.rows(), m.cols())).norm() > 1e-10 * m.norm())
        throw InvalidArgument("lambda must be central in G'");
    if (is_identity(lambda, tol)) throw InvalidArgument("lambda must be nontrivial");
    if (!torsion_order(lambda, 1000, tol)) throw InvalidArgument("lambda must be torsion");
}

}  // namespace detail

struct SeparatingInstance {
    Representation rho;       // in the ambient group
    Representation rho_sub;   // the same images in G'
    PseudoDegeneration tau;   // tau_{C'} for C = Sep(1)
};

/// C(a_1, a_{p+1}) = lambda and C(a_2, a_{p+2}) = lambda^-1 in the compact
/// form of G', remaining handles trivial; embedded block-wise into `ambient`.
inline SeparatingInstance thm5_separating_family(const GroupContext& sub, const GroupContext& ambient,
                                                 const GroupElement& lambda, int genus, std::uint64_t seed,
                                                 const Tolerance& tol = {}) {
    if (genus < 2) throw InvalidArgument("separating family needs genus at least 2");
    if (!(lambda.context() == sub)) throw ContextMismatch("lambda must lie in G'");
    detail::require_central_torsion(lambda, tol);
    const auto first = solve_commutator(sub, lambda, std::nullopt, mix_seed(seed, 1), tol);
    const auto second = solve_commutator(sub, lambda.inverse(), std::nullopt, mix_seed(seed, 2), tol);
    std::vector<GroupElement> images(2 * genus, GroupElement::identity(sub));
    images[0] = first.a;
    images[genus] = first.b;
    images[1] = second.a;
    images[genus + 1] = second.b;
    Representation rho_sub = Representation::make(sub, genus, std::move(images), tol);
    Representation rho = embed_block(rho_sub, ambient);
    return {std::move(rho), std::move(rho_sub), PseudoDegeneration(genus, {{CurveId::sep(genus, 1), 1}})};
}

/// Density heuristic applied to the pair (g, h).
inline DensityReport pair_density(const GroupElement& g, const GroupElement& h, const Tolerance& tol = {},
                                  int max_order = 200) {
    return density_heuristic(Representation::trusted(g.context(), 1, {g, h}), tol, max_order);
}

struct DenseInstance {
    Representation rho;
    Representation rho_sub;
    PseudoDegeneration tau;
    GroupElement g;
    GroupElement h;
    int resamples;
};

/// C(a_1, a_{p+1}) = lambda, handle 2 carries (g, h), and
/// C(a_3, a_{p+3}) = (lambda C(g, h))^-1 so the relation closes; p >= 3.
/// (g, h) are Haar-sampled in K' until the density heuristic passes (64 tries)
/// unless supplied.
inline DenseInstance thm5_dense_rep(const GroupContext& sub, const GroupContext& ambient, const GroupElement& lambda,
                                    int genus, std::uint64_t seed, const Tolerance& tol = {},
                                    std::optional<std::pair<GroupElement, GroupElement>> pair = std::nullopt) {
    if (genus < 3) throw InvalidArgument("dense family needs genus at least 3");
    if (!(lambda.context() == sub)) throw ContextMismatch("lambda must lie in G'");
    detail::require_central_torsion(lambda, tol);
    Rng rng(seed);
    int resamples = 0;
    if (!pair) {
        for (; resamples < 64; ++resamples) {
            GroupElement g = haar_unitary(sub, rng);
            GroupElement h = haar_unitary(sub, rng);
            if (pair_density(g, h, tol).passed()) {
                pair.emplace(g, h);
                break;
            }
        }
        if (!pair) throw SolverFailed("no pair passed the density heuristic", 0.0);
    } else if (!pair_density(pair->first, pair->second, tol).passed()) {
        throw InvalidArgument("supplied pair fails the density heuristic");
    }
    const auto& [g, h] = *pair;
    const auto first = solve_commutator(sub, lambda, std::nullopt, mix_seed(seed, 1), tol);
    const auto third = solve_commutator(sub, (lambda * commutator(g, h)).inverse(), std::nullopt, mix_seed(seed, 3), tol);
    std::vector<GroupElement> images(2 * genus, GroupElement::identity(sub));
    images[0] = first.a;
    images[genus] = first.b;
    images[1] = g;
    images[genus + 1] = h;
    images[2] = third.a;
    images[genus + 2] = third.b;
    Representation rho_sub = Representation::make(sub, genus, std::move(images), tol);
    Representation rho = embed_block(rho_sub, ambient);
    return {std::move(rho), std::move(rho_sub), PseudoDegeneration(genus, {{CurveId::sep(genus, 1), 1}}), g, h,
            resamples};
}

// ---------------------------------------------------------------------------
// Pseudo-degeneration family tau_{A_1'} tau_{A_{p+2}'}^-1

/// (g, h, k) with k.(g, h g^-1) = (g, h), equivalently k in G^g and g = C(k^-1, h^-1).
struct WTriple {
    GroupElement g;
    GroupElement h;
    GroupElement k;

    double centralizer_residual() const { return group_distance(conjugate(k, g), g); }
    double commutator_residual() const { return group_distance(commutator(k.inverse(), h.inverse()), g); }
    bool valid(const Tolerance& tol = {}) const {
        return centralizer_residual() < tol.eq_tol && commutator_residual() < tol.eq_tol;
    }
};

/// g = diag(s, 1/s), h = [[0, 1], [-1, 0]], k = diag(t, 1/t). Not validated.
inline WTriple w_triple_from_s(const GroupContext& ctx, cplx s,
                               SquareRootConvention conv = SquareRootConvention::InverseS) {
    if (ctx.n() != 2) throw InvalidArgument("explicit W triples are 2x2");
    const cplx t = std::sqrt(conv == SquareRootConvention::InverseS ? 1.0 / s : s);
    return {diagonal(ctx, {s, 1.0 / s}), weyl_sl2(ctx), diagonal(ctx, {t, 1.0 / t})};
}

enum class FillerMode { Identity, CentralizerSample };

struct Sec6Instance {
    Representation rho;
    PseudoDegeneration tau;
    WTriple triple;
};

/// rho(A_1) = rho(A_{p+2}) = g, rho(A_2) = rho(A_{p+1}) = h; handles 3..p carry
/// identity or (u, e) with u diagonal (so they centralize k). The paired
/// tau_{A_1'} tau_{A_{p+2}'}^-1 fixes the class but is not realizable.
inline Sec6Instance sec6_family(int genus, cplx s, FillerMode filler = FillerMode::Identity, std::uint64_t seed = 0,
                                const Tolerance& tol = {}) {
    if (genus < 2) throw InvalidArgument("the W family needs genus at least 2");
    if (std::abs(s) < 1e-12) throw InvalidArgument("s must be nonzero");
    const GroupContext ctx(Family::SL, 2);
    WTriple triple = w_triple_from_s(ctx, s);
    std::vector<GroupElement> images(2 * genus, GroupElement::identity(ctx));
    images[0] = triple.g;
    images[genus + 1] = triple.g;
    images[1] = triple.h;
    images[genus] = triple.h;
    if (filler == FillerMode::CentralizerSample) {
        Rng rng(seed);
        for (int i = 3; i <= genus; ++i) {
            const cplx u = std::exp(cplx(0.3 * rng.normal(), 2.0 * std::numbers::pi * rng.uniform()));
            images[i - 1] = diagonal(ctx, {u, 1.0 / u});
        }
    }
    Representation rho = Representation::make(ctx, genus, std::move(images), tol);
    PseudoDegeneration tau(genus, {{CurveId::gen(genus, 1), 1}, {CurveId::gen(genus, genus + 2), -1}});
    return {std::move(rho), std::move(tau), std::move(triple)};
}

/// For g in K, solves g = C(k^-1, h^-1) with k in the centralizer of g:
/// C(a, b) = g^-1 with b in the torus of g, then h = a^-1, k = b^-1.
inline WTriple build_W_from_first_coordinate(const GroupElement& g, std::uint64_t seed = 0, const Tolerance& tol = {}) {
    const GroupContext& ctx = g.context();
    if (!is_unitary(det_one_representative(g), 1e-8)) throw InvalidArgument("g must be unitary");
    if (is_identity(g, tol)) return {g, GroupElement::identity(ctx), GroupElement::identity(ctx)};
    const auto sol = solve_commutator(ctx, g.inverse(), g, seed, tol);
    WTriple triple{g, sol.a.inverse(), sol.b.inverse()};
    if (!triple.valid(tol)) throw SolverFailed("W triple failed validation", triple.commutator_residual());
    return triple;
}

/// The W-representation at genus p built from any valid W triple.
inline FamilyInstance w_family_from_triple(const WTriple& triple, int genus, const Tolerance& tol = {}) {
    if (genus < 2) throw InvalidArgument("the W family needs genus at least 2");
    const GroupContext& ctx = triple.g.context();
    std::vector<GroupElement> images(2 * genus, GroupElement::identity(ctx));
    images[0] = triple.g;
    images[genus + 1] = triple.g;
    images[1] = triple.h;
    images[genus] = triple.h;
    Representation rho = Representation::make(ctx, genus, std::move(images), tol);
    return {std::move(rho),
            PseudoDegeneration(genus, {{CurveId::gen(genus, 1), 1}, {CurveId::gen(genus, genus + 2), -1}})};
}

// ---------------------------------------------------------------------------
// Random representations and relation repair

/// Random representation with compact images: handles 1..p-1 Haar, last
/// handle solved so the relation closes (p = 1: a commuting torus pair).
/// With `generic_conjugate`, the result is conjugated by a generic element.
inline Representation random_representation(const GroupContext& ctx, int genus, std::uint64_t seed,
                                            bool generic_conjugate = false, const Tolerance& tol = {}) {
    Rng rng(seed);
    std::vector<GroupElement> images(2 * genus, GroupElement::identity(ctx));
    if (genus == 1) {
        images[0] = haar_unitary(ctx, rng);
        const Matrix v = detail::regular_eigenbasis(det_one_representative(images[0]));
        Eigen::VectorXd theta(ctx.n());
        for (int j = 0; j < ctx.n(); ++j) theta(j) = rng.uniform(0.0, 2.0 * std::numbers::pi);
        if (ctx.traceless_algebra()) theta(ctx.n() - 1) = -theta.head(ctx.n() - 1).sum();
        images[1] = GroupElement::trusted(ctx, detail::torus_element(v, theta));
    } else {
        GroupElement prefix = GroupElement::identity(ctx);
        for (int i = 1; i < genus; ++i) {
            images[i - 1] = haar_unitary(ctx, rng);
            images[i + genus - 1] = haar_unitary(ctx, rng);
            prefix = prefix * commutator(images[i - 1], images[i + genus - 1]);
        }
        Matrix target = det_one_representative(prefix.inverse());
        const auto sol = solve_commutator(ctx, GroupElement::trusted(ctx, target), std::nullopt, rng.next_seed(), tol);
        images[genus - 1] = sol.a;
        images[2 * genus - 1] = sol.b;
    }
    Representation rho = Representation::make(ctx, genus, std::move(images), tol);
    if (generic_conjugate) rho = conjugate(generic_element(ctx, rng), rho);
    return rho;
}

/// Perturbs every generator not listed in `frozen` by a right factor
/// exp(scale X), then restores the relation by Gauss-Newton on the two
/// generators of handle `repair_handle`.
inline Representation perturb_and_repair(const Representation& rho, const std::vector<int>& frozen, int repair_handle,
                                         double scale, std::uint64_t seed, const Tolerance& tol = {}) {
    const int p = rho.genus();
    const GroupContext& ctx = rho.context();
    const int n = ctx.n();
    if (repair_handle < 1 || repair_handle > p) throw InvalidArgument("repair handle out of range");
    const std::set<int> frozen_set(frozen.begin(), frozen.end());
    if (frozen_set.count(repair_handle) || frozen_set.count(repair_handle + p))
        throw InvalidArgument("repair handle generators must not be frozen");
    const auto basis = lie_algebra_basis(ctx);
    const auto d = static_cast<Eigen::Index>(basis.size());
    Rng rng(seed);

    std::vector<GroupElement> images;
    for (const auto& g : rho.images()) images.push_back(GroupElement::trusted(ctx, det_one_representative(g)));
    for (int j = 1; j <= 2 * p; ++j) {
        if (frozen_set.count(j)) continue;
        Matrix x = Matrix::Zero(n, n);
        for (const auto& b : basis) x += scale * rng.complex_normal() * b;
        images[j - 1] = GroupElement::trusted(ctx, images[j - 1].matrix() * x.exp());
    }

    const Matrix eye = Matrix::Identity(n, n);
    for (int it = 0; it < 100; ++it) {
        Representation current = Representation::trusted(ctx, p, images);
        Matrix mu = evaluate(current, surface_relation(p)).matrix();
        // PGL representatives close up to a sign after determinant normalization.
        const Matrix target = (ctx.projective() && std::real(mu.trace()) < 0.0) ? Matrix(-eye) : eye;
        const Vector residual = linalg::vec(mu - target);
        if (residual.norm() < 1e-14 * std::max(1.0, mu.norm())) break;
        const Matrix jac = relation_jacobian(current);
        Matrix sub(jac.rows(), 2 * d);
        sub.leftCols(d) = jac.middleCols((repair_handle - 1) * d, d);
        sub.rightCols(d) = jac.middleCols((repair_handle + p - 1) * d, d);
        const Vector step = -sub.completeOrthogonalDecomposition().solve(residual);
        Matrix xa = Matrix::Zero(n, n), xb = Matrix::Zero(n, n);
        for (Eigen::Index k = 0; k < d; ++k) {
            xa += step(k) * basis[k];
            xb += step(d + k) * basis[k];
        }
        images[repair_handle - 1] = GroupElement::trusted(ctx, images[repair_handle - 1].matrix() * xa.exp());
        images[repair_handle + p - 1] = GroupElement::trusted(ctx, images[repair_handle + p - 1].matrix() * xb.exp());
    }
    Representation out = Representation::trusted(ctx, p, images);
    const double defect = relation_defect(out);
    if (!(defect < tol.eq_tol)) throw SolverFailed("relation repair did not converge", defect);
    return out;
}

}  // namespace dehn
