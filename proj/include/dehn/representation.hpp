#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "dehn/group.hpp"
#include "dehn/linalg.hpp"
#include "dehn/surface.hpp"

namespace dehn {

/// A homomorphism from the genus-p surface group, stored as the images of
/// A_1..A_2p (images[i] is the image of A_{i+1}).
class Representation {
public:
    /// Validates sizes, contexts and the surface relation (defect < eq_tol).
    static Representation make(const GroupContext& ctx, int genus, std::vector<GroupElement> images,
                               const Tolerance& tol = {});

    /// No relation check; for outputs of relation-preserving operations.
    static Representation trusted(const GroupContext& ctx, int genus, std::vector<GroupElement> images) {
        return Representation(ctx, genus, std::move(images));
    }

    static Representation trivial(const GroupContext& ctx, int genus) {
        return Representation(ctx, genus, std::vector<GroupElement>(2 * genus, GroupElement::identity(ctx)));
    }

    const GroupContext& context() const noexcept { return ctx_; }
    int genus() const noexcept { return genus_; }
    const std::vector<GroupElement>& images() const noexcept { return images_; }
    /// Image of A_index, 1-based.
    const GroupElement& image(int index) const { return images_.at(index - 1); }

    Representation with_image(int index, GroupElement g) const {
        std::vector<GroupElement> out = images_;
        out.at(index - 1) = std::move(g);
        return Representation(ctx_, genus_, std::move(out));
    }

private:
    Representation(const GroupContext& ctx, int genus, std::vector<GroupElement> images)
        : ctx_(ctx), genus_(genus), images_(std::move(images)) {}

    GroupContext ctx_;
    int genus_;
    std::vector<GroupElement> images_;
};

inline GroupElement evaluate(const Representation& rho, const Word& w) {
    if (w.genus() != rho.genus()) throw InvalidArgument("word genus does not match representation genus");
    Matrix acc = Matrix::Identity(rho.context().n(), rho.context().n());
    std::vector<std::optional<Matrix>> inverses(rho.images().size());
    for (int letter : w.letters()) {
        const std::size_t idx = static_cast<std::size_t>(std::abs(letter) - 1);
        if (letter > 0) {
            acc = acc * rho.images()[idx].matrix();
        } else {
            if (!inverses[idx]) inverses[idx] = rho.images()[idx].inverse().matrix();
            acc = acc * *inverses[idx];
        }
    }
    return GroupElement::trusted(rho.context(), std::move(acc));
}

/// Distance of the surface relation's image from the identity.
inline double relation_defect(const Representation& rho) {
    return distance_to_identity(evaluate(rho, surface_relation(rho.genus())));
}

inline Representation Representation::make(const GroupContext& ctx, int genus, std::vector<GroupElement> images,
                                           const Tolerance& tol) {
    if (genus < 1) throw InvalidArgument("genus must be at least 1");
    if (images.size() != static_cast<std::size_t>(2 * genus))
        throw InvalidArgument("expected " + std::to_string(2 * genus) + " images, got " +
                              std::to_string(images.size()));
    for (const auto& g : images)
        if (!(g.context() == ctx)) throw ContextMismatch("image context differs from representation context");
    Representation rho(ctx, genus, std::move(images));
    const double defect = relation_defect(rho);
    if (!(defect < tol.eq_tol)) throw DefectTooLarge(defect, tol.eq_tol);
    return rho;
}

/// g.rho: every image conjugated by g.
inline Representation conjugate(const GroupElement& g, const Representation& rho) {
    std::vector<GroupElement> out;
    out.reserve(rho.images().size());
    const GroupElement g_inv = g.inverse();
    for (const auto& a : rho.images()) {
        g.require_same(a);
        out.push_back(g * a * g_inv);
    }
    return Representation::trusted(rho.context(), rho.genus(), std::move(out));
}

/// Basis of the complex Lie algebra: all E_ij for GL, trace-zero matrices
/// (E_ij off-diagonal and E_ii - E_nn) for SL and PGL.
inline std::vector<Matrix> lie_algebra_basis(const GroupContext& ctx) {
    const int n = ctx.n();
    std::vector<Matrix> basis;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            Matrix e = Matrix::Zero(n, n);
            e(i, j) = 1.0;
            basis.push_back(std::move(e));
        }
    if (ctx.traceless_algebra()) {
        for (int i = 0; i < n - 1; ++i) {
            Matrix e = Matrix::Zero(n, n);
            e(i, i) = 1.0;
            e(n - 1, n - 1) = -1.0;
            basis.push_back(std::move(e));
        }
    } else {
        for (int i = 0; i < n; ++i) {
            Matrix e = Matrix::Zero(n, n);
            e(i, i) = 1.0;
            basis.push_back(std::move(e));
        }
    }
    return basis;
}

/// Dimension of the fixed subalgebra of the image's adjoint action.
inline int lie_centralizer_dimension(const Representation& rho, const Tolerance& tol = {}) {
    const auto basis = lie_algebra_basis(rho.context());
    const int n = rho.context().n();
    const Eigen::Index block = static_cast<Eigen::Index>(n) * n;
    Matrix op(block * static_cast<Eigen::Index>(rho.images().size()), static_cast<Eigen::Index>(basis.size()));
    double scale = 0.0;
    for (std::size_t i = 0; i < rho.images().size(); ++i) {
        const Matrix a = det_one_representative(rho.images()[i]);
        scale = std::max(scale, a.norm());
        for (std::size_t k = 0; k < basis.size(); ++k)
            op.block(static_cast<Eigen::Index>(i) * block, static_cast<Eigen::Index>(k), block, 1) =
                linalg::vec(a * basis[k] - basis[k] * a);
    }
    const int rank = linalg::numerical_rank(op, tol.rank_tol, scale);
    return static_cast<int>(basis.size()) - rank;
}

/// Irreducible in the sense that the image's fixed subalgebra is the center.
inline bool is_irreducible(const Representation& rho, const Tolerance& tol = {}) {
    return lie_centralizer_dimension(rho, tol) == rho.context().center_dimension();
}

/// A conjugator X with X rho1(A_i) X^-1 = rho2(A_i), and its residual.
struct ConjugacyWitness {
    GroupElement g;
    double residual;
};

namespace detail {

// Largest group distance between X.rho1(A_i) and rho2(A_i).
inline double conjugation_residual(const GroupElement& x, const Representation& rho1, const Representation& rho2) {
    const GroupElement x_inv = x.inverse();
    double worst = 0.0;
    for (std::size_t i = 0; i < rho1.images().size(); ++i)
        worst = std::max(worst, group_distance(x * rho1.images()[i] * x_inv, rho2.images()[i]));
    return worst;
}

inline std::optional<ConjugacyWitness> witness_from_matrices(const std::vector<Matrix>& src,
                                                             const std::vector<Matrix>& dst,
                                                             const Representation& rho1, const Representation& rho2,
                                                             const Tolerance& tol, Rng& rng) {
    const int n = rho1.context().n();
    const Eigen::Index block = static_cast<Eigen::Index>(n) * n;
    Matrix stacked(block * static_cast<Eigen::Index>(src.size()), block);
    const Matrix eye = Matrix::Identity(n, n);
    double scale = 0.0;
    for (std::size_t i = 0; i < src.size(); ++i) {
        // vec(X A - B X) = (A^T kron I - I kron B) vec(X)
        stacked.middleRows(static_cast<Eigen::Index>(i) * block, block) =
            linalg::left_right_operator(eye, src[i]) - linalg::left_right_operator(dst[i], eye);
        scale = std::max({scale, src[i].norm(), dst[i].norm()});
    }
    const Matrix basis = src.empty() ? Matrix::Identity(block, block) : linalg::nullspace(stacked, tol.rank_tol, scale);
    if (basis.cols() == 0) return std::nullopt;

    constexpr int kRetries = 32;
    std::optional<ConjugacyWitness> best;
    for (int attempt = 0; attempt < kRetries; ++attempt) {
        Vector coeffs(basis.cols());
        for (Eigen::Index j = 0; j < coeffs.size(); ++j) coeffs(j) = rng.complex_normal();
        Matrix x = linalg::unvec(basis * coeffs, n);
        const cplx det = x.determinant();
        const double size = x.norm() / std::sqrt(static_cast<double>(n));
        if (!(std::abs(det) > 1e-8 * std::pow(size, n))) continue;
        x /= std::pow(det, 1.0 / n);
        GroupElement g = GroupElement::trusted(rho1.context(), std::move(x));
        const double residual = conjugation_residual(g, rho1, rho2);
        if (!best || residual < best->residual) best = ConjugacyWitness{g, residual};
        if (residual < tol.solver_tol) break;
    }
    if (best && best->residual < tol.solver_tol) return best;
    return std::nullopt;
}

}  // namespace detail

/// Finds X with X rho1 X^-1 = rho2 from the intertwiner space
/// {X : X rho1(A_i) = rho2(A_i) X}, sampling random combinations of its basis
/// until an invertible one appears (32 tries).
///
/// For PGL, representatives are scaled to determinant 1 and their signs are
/// aligned by trace; generators with vanishing trace have both signs tried.
inline std::optional<ConjugacyWitness> conjugacy_witness(const Representation& rho1, const Representation& rho2,
                                                         const Tolerance& tol = {}, std::uint64_t seed = 0) {
    if (!(rho1.context() == rho2.context())) throw InvalidArgument("representations live in different groups");
    if (rho1.genus() != rho2.genus()) throw InvalidArgument("representations have different genus");
    Rng rng(seed);
    const std::size_t count = rho1.images().size();
    std::vector<Matrix> src(count), dst(count);
    for (std::size_t i = 0; i < count; ++i) {
        src[i] = det_one_representative(rho1.images()[i]);
        dst[i] = det_one_representative(rho2.images()[i]);
    }
    if (!rho1.context().projective()) return detail::witness_from_matrices(src, dst, rho1, rho2, tol, rng);

    std::vector<std::size_t> ambiguous;
    for (std::size_t i = 0; i < count; ++i) {
        const cplx t1 = src[i].trace();
        const cplx t2 = dst[i].trace();
        const double size = std::max(src[i].norm(), dst[i].norm());
        if (std::abs(t1) < 1e-6 * size && std::abs(t2) < 1e-6 * size) {
            ambiguous.push_back(i);
        } else if (std::abs(t1 + t2) < std::abs(t1 - t2)) {
            src[i] = -src[i];
        }
    }
    constexpr std::size_t kMaxAmbiguous = 12;
    if (ambiguous.size() > kMaxAmbiguous) ambiguous.resize(kMaxAmbiguous);
    std::optional<ConjugacyWitness> best;
    for (std::uint32_t mask = 0; mask < (1U << ambiguous.size()); ++mask) {
        std::vector<Matrix> flipped = src;
        for (std::size_t b = 0; b < ambiguous.size(); ++b)
            if (mask & (1U << b)) flipped[ambiguous[b]] = -flipped[ambiguous[b]];
        auto w = detail::witness_from_matrices(flipped, dst, rho1, rho2, tol, rng);
        if (w && (!best || w->residual < best->residual)) best = w;
        if (best) break;
    }
    return best;
}

/// The fixed word list used by character_fingerprint: every generator, every
/// product A_i A_j with i < j, every handle commutator C(A_i, A_{i+p}).
inline std::vector<Word> fingerprint_words(int genus) {
    std::vector<Word> words;
    for (int i = 1; i <= 2 * genus; ++i) words.push_back(Word::generator(genus, i));
    for (int i = 1; i <= 2 * genus; ++i)
        for (int j = i + 1; j <= 2 * genus; ++j) words.push_back(Word::reduce(genus, {i, j}));
    for (int i = 1; i <= genus; ++i) words.push_back(commutator_word(genus, i, i + genus));
    return words;
}

/// Conjugation-invariant traces on fingerprint_words; tr(M)^2/det(M) for PGL.
inline std::vector<cplx> character_fingerprint(const Representation& rho) {
    std::vector<cplx> out;
    for (const auto& w : fingerprint_words(rho.genus())) {
        const Matrix m = evaluate(rho, w).matrix();
        if (rho.context().projective())
            out.push_back(m.trace() * m.trace() / m.determinant());
        else
            out.push_back(m.trace());
    }
    return out;
}

/// Largest entrywise difference between two fingerprints.
inline double fingerprint_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.size() != b.size()) throw InvalidArgument("fingerprint length mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

/// Zariski-density heuristic: irreducible, and some fingerprint word has an
/// image of infinite order (no torsion up to max_order).
struct DensityReport {
    bool irreducible = false;
    bool infinite_order_witness = false;
    bool passed() const { return irreducible && infinite_order_witness; }
    /// "dense" for SL(2), where the rule is used as the density criterion;
    /// "heuristic-dense" elsewhere.
    const char* label(const GroupContext& ctx) const {
        if (!passed()) return "not-dense";
        return ctx.family() == Family::SL && ctx.n() == 2 ? "dense" : "heuristic-dense";
    }
};

inline DensityReport density_heuristic(const Representation& rho, const Tolerance& tol = {}, int max_order = 200) {
    DensityReport report;
    report.irreducible = is_irreducible(rho, tol);
    for (const auto& w : fingerprint_words(rho.genus())) {
        if (!torsion_order(evaluate(rho, w), max_order, tol)) {
            report.infinite_order_witness = true;
            break;
        }
    }
    return report;
}

}  // namespace dehn
