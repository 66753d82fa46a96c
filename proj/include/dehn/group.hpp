#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dehn/errors.hpp"
#include "dehn/linalg.hpp"
#include "dehn/random.hpp"
#include "dehn/tolerance.hpp"

namespace dehn {

enum class Family { SL, GL, PGL };

inline std::string family_name(Family f) {
    switch (f) {
        case Family::SL: return "SL";
        case Family::GL: return "GL";
        case Family::PGL: return "PGL";
    }
    return "?";
}

/// A complex matrix group together with its structure constants.
///
/// PGL is supported only for n = 2 and is realized by 2x2 matrices compared
/// up to a nonzero scalar.
class GroupContext {
public:
    GroupContext(Family family, int n) : family_(family), n_(n) {
        if (n < 2) throw InvalidArgument("matrix size must be at least 2");
        if (family == Family::PGL && n != 2) throw InvalidArgument("PGL is supported only for n = 2");
    }

    /// Parses names such as "SL2", "SL3", "GL4", "PGL2" (case-insensitive).
    static GroupContext parse(std::string_view name) {
        std::string s(name);
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
        Family family;
        std::string rest;
        if (s.rfind("PGL", 0) == 0) {
            family = Family::PGL;
            rest = s.substr(3);
        } else if (s.rfind("SL", 0) == 0) {
            family = Family::SL;
            rest = s.substr(2);
        } else if (s.rfind("GL", 0) == 0) {
            family = Family::GL;
            rest = s.substr(2);
        } else {
            throw InvalidArgument("unknown group '" + std::string(name) + "'");
        }
        if (rest.empty() || !std::all_of(rest.begin(), rest.end(), [](unsigned char c) { return std::isdigit(c); }))
            throw InvalidArgument("group '" + std::string(name) + "' lacks a matrix size");
        return GroupContext(family, std::stoi(rest));
    }

    Family family() const noexcept { return family_; }
    int n() const noexcept { return n_; }

    /// Complex dimension d of G.
    int dimension() const noexcept {
        switch (family_) {
            case Family::SL: return n_ * n_ - 1;
            case Family::GL: return n_ * n_;
            case Family::PGL: return 3;
        }
        return 0;
    }
    /// Rank r of G.
    int rank() const noexcept { return family_ == Family::GL ? n_ : n_ - 1; }
    /// Dimension z of the center of G.
    int center_dimension() const noexcept { return family_ == Family::GL ? 1 : 0; }
    /// Real dimension of the maximal compact subgroup (SU(n), U(n) or PU(2)).
    int compact_real_dimension() const noexcept { return dimension(); }

    bool projective() const noexcept { return family_ == Family::PGL; }
    bool traceless_algebra() const noexcept { return family_ != Family::GL; }

    std::string name() const { return family_name(family_) + std::to_string(n_); }

    friend bool operator==(const GroupContext&, const GroupContext&) = default;

private:
    Family family_;
    int n_;
};

/// An invertible matrix interpreted in a group context.
class GroupElement {
public:
    /// Validates the determinant condition of the context.
    GroupElement(const GroupContext& ctx, Matrix mat, double det_tol = 1e-8) : ctx_(ctx), mat_(std::move(mat)) {
        if (mat_.rows() != ctx.n() || mat_.cols() != ctx.n())
            throw InvalidArgument("matrix size does not match context " + ctx.name());
        if (!mat_.allFinite()) throw InvalidArgument("matrix has non-finite entries");
        const cplx det = mat_.determinant();
        if (ctx.family() == Family::SL) {
            if (std::abs(det - 1.0) >= det_tol)
                throw InvalidArgument("SL element must have determinant 1 (got |det-1| = " +
                                      std::to_string(std::abs(det - 1.0)) + ")");
        } else if (std::abs(det) <= det_tol) {
            throw InvalidArgument("element is not invertible");
        }
    }

    static GroupElement identity(const GroupContext& ctx) {
        return trusted(ctx, Matrix::Identity(ctx.n(), ctx.n()));
    }

    /// Skips validation; for results of group operations on valid elements.
    static GroupElement trusted(const GroupContext& ctx, Matrix mat) {
        return GroupElement(ctx, std::move(mat), Unchecked{});
    }

    const GroupContext& context() const noexcept { return ctx_; }
    const Matrix& matrix() const noexcept { return mat_; }
    int n() const noexcept { return ctx_.n(); }

    GroupElement operator*(const GroupElement& other) const {
        require_same(other);
        return trusted(ctx_, mat_ * other.mat_);
    }

    GroupElement inverse() const {
        if (mat_.rows() == 2) {
            const cplx det = mat_(0, 0) * mat_(1, 1) - mat_(0, 1) * mat_(1, 0);
            Matrix inv(2, 2);
            inv << mat_(1, 1), -mat_(0, 1), -mat_(1, 0), mat_(0, 0);
            inv /= det;
            return trusted(ctx_, std::move(inv));
        }
        return trusted(ctx_, mat_.partialPivLu().inverse());
    }

    /// Integer power; negative exponents invert first.
    GroupElement pow(long long exponent) const {
        Matrix base = exponent < 0 ? inverse().mat_ : mat_;
        unsigned long long e = exponent < 0 ? static_cast<unsigned long long>(-exponent)
                                            : static_cast<unsigned long long>(exponent);
        Matrix result = Matrix::Identity(n(), n());
        while (e) {
            if (e & 1ULL) result = result * base;
            e >>= 1;
            if (e) base = base * base;
        }
        return trusted(ctx_, std::move(result));
    }

    void require_same(const GroupElement& other) const {
        if (!(ctx_ == other.ctx_))
            throw ContextMismatch("context mismatch: " + ctx_.name() + " vs " + other.ctx_.name());
    }

private:
    struct Unchecked {};
    GroupElement(const GroupContext& ctx, Matrix mat, Unchecked) : ctx_(ctx), mat_(std::move(mat)) {}

    GroupContext ctx_;
    Matrix mat_;
};

/// C(a, b) = a b a^-1 b^-1.
inline GroupElement commutator(const GroupElement& a, const GroupElement& b) {
    a.require_same(b);
    return a * b * a.inverse() * b.inverse();
}

/// g.h = g h g^-1.
inline GroupElement conjugate(const GroupElement& g, const GroupElement& h) {
    g.require_same(h);
    return g * h * g.inverse();
}

namespace detail {

// Unit Frobenius norm, phase fixed so that entry `pivot` is real positive.
inline Matrix projective_normal_form(const Matrix& m, Eigen::Index pivot) {
    Matrix out = m / m.norm();
    const cplx p = out.data()[pivot];
    if (std::abs(p) > 0.0) out *= std::conj(p) / std::abs(p);
    return out;
}

inline Eigen::Index largest_entry(const Matrix& m) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < m.size(); ++i)
        if (std::abs(m.data()[i]) > std::abs(m.data()[best])) best = i;
    return best;
}

}  // namespace detail

/// Distance used by group_equal: relative Frobenius distance, or the distance
/// of projective normal forms for PGL.
inline double group_distance(const GroupElement& a, const GroupElement& b) {
    a.require_same(b);
    if (a.context().projective()) {
        const Eigen::Index pivot = detail::largest_entry(a.matrix());
        return (detail::projective_normal_form(a.matrix(), pivot) -
                detail::projective_normal_form(b.matrix(), pivot)).norm();
    }
    const double scale = std::max(a.matrix().norm(), b.matrix().norm());
    return (a.matrix() - b.matrix()).norm() / scale;
}

inline bool group_equal(const GroupElement& a, const GroupElement& b, const Tolerance& tol = {}) {
    return group_distance(a, b) < tol.eq_tol;
}

inline double distance_to_identity(const GroupElement& g) {
    return group_distance(g, GroupElement::identity(g.context()));
}

inline bool is_identity(const GroupElement& g, const Tolerance& tol = {}) {
    return distance_to_identity(g) < tol.eq_tol;
}

/// Scales a PGL representative to determinant 1 (principal root). SL/GL unchanged.
inline Matrix det_one_representative(const GroupElement& g) {
    if (!g.context().projective()) return g.matrix();
    const cplx det = g.matrix().determinant();
    return g.matrix() / std::pow(det, 1.0 / g.n());
}

/// Smallest m <= max_order with g^m = e, or none.
///
/// Elements with an eigenvalue modulus off the unit circle (after projective
/// normalization for PGL) are rejected without powering.
inline std::optional<int> torsion_order(const GroupElement& g, int max_order, const Tolerance& tol = {}) {
    if (max_order < 1) throw InvalidArgument("max_order must be at least 1");
    Matrix m = g.matrix();
    if (g.context().projective()) m /= std::pow(std::abs(m.determinant()), 1.0 / g.n());
    const Eigen::VectorXcd eig = Eigen::ComplexEigenSolver<Matrix>(m, false).eigenvalues();
    const double off_circle = std::sqrt(tol.eq_tol);
    for (Eigen::Index i = 0; i < eig.size(); ++i)
        if (std::abs(std::abs(eig(i)) - 1.0) > off_circle) return std::nullopt;

    GroupElement acc = g;
    for (int order = 1; order <= max_order; ++order) {
        if (is_identity(acc, tol)) return order;
        acc = acc * g;
    }
    return std::nullopt;
}

namespace detail {

inline Matrix haar_unitary_matrix(int n, Rng& rng) {
    Matrix z(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) z(i, j) = rng.complex_normal();
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        const cplx d = r(j, j);
        q.col(j) *= d / std::abs(d);
    }
    return q;
}

inline Matrix normalize_det(const Matrix& m) {
    const cplx det = m.determinant();
    return m / std::pow(det, 1.0 / static_cast<double>(m.rows()));
}

inline bool needs_unit_det(const GroupContext& ctx) { return ctx.family() != Family::GL; }

}  // namespace detail

enum class StructureKind { Weyl, Center, CartanSample };

/// Weyl representatives, center elements or random Cartan elements of ctx.
///
/// Weyl representatives are permutation matrices; for SL and PGL a
/// permutation of determinant -1 has its last row negated. The center of
/// GL(n) is the scalar line, returned as the identity plus sampled points.
inline std::vector<GroupElement> structure_elements(const GroupContext& ctx, StructureKind kind,
                                                    std::uint64_t seed = 0) {
    const int n = ctx.n();
    std::vector<GroupElement> out;
    switch (kind) {
        case StructureKind::Weyl: {
            std::vector<int> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            do {
                Matrix p = Matrix::Zero(n, n);
                for (int j = 0; j < n; ++j) p(perm[j], j) = 1.0;
                if (detail::needs_unit_det(ctx) && std::real(p.determinant()) < 0.0) p.row(n - 1) *= -1.0;
                out.push_back(GroupElement::trusted(ctx, std::move(p)));
            } while (std::next_permutation(perm.begin(), perm.end()));
            break;
        }
        case StructureKind::Center: {
            if (ctx.family() == Family::SL) {
                for (int k = 0; k < n; ++k) {
                    const cplx root = std::polar(1.0, 2.0 * std::numbers::pi * k / n);
                    out.push_back(GroupElement::trusted(ctx, root * Matrix::Identity(n, n)));
                }
            } else if (ctx.family() == Family::PGL) {
                out.push_back(GroupElement::identity(ctx));
            } else {
                Rng rng(seed);
                out.push_back(GroupElement::identity(ctx));
                for (int k = 0; k < 3; ++k) {
                    const cplx c = std::exp(cplx(0.5 * rng.normal(), 2.0 * std::numbers::pi * rng.uniform()));
                    out.push_back(GroupElement::trusted(ctx, c * Matrix::Identity(n, n)));
                }
            }
            break;
        }
        case StructureKind::CartanSample: {
            Rng rng(seed);
            for (int k = 0; k < 4; ++k) {
                Matrix d = Matrix::Zero(n, n);
                for (int i = 0; i < n; ++i) d(i, i) = std::exp(cplx(0.5 * rng.normal(), 2.0 * std::numbers::pi * rng.uniform()));
                if (detail::needs_unit_det(ctx)) d = detail::normalize_det(d);
                out.push_back(GroupElement::trusted(ctx, std::move(d)));
            }
            break;
        }
    }
    return out;
}

struct SampleMode {
    enum class Kind { HaarUnitary, TorsionUnitary, Generic };
    Kind kind = Kind::HaarUnitary;
    int max_order = 0;  // TorsionUnitary only

    static SampleMode haar() { return {Kind::HaarUnitary, 0}; }
    static SampleMode torsion(int max_order) { return {Kind::TorsionUnitary, max_order}; }
    static SampleMode generic() { return {Kind::Generic, 0}; }
};

/// Haar-random compact element (SU(n), U(n), or SU(2) for PGL(2)).
inline GroupElement haar_unitary(const GroupContext& ctx, Rng& rng) {
    Matrix q = detail::haar_unitary_matrix(ctx.n(), rng);
    if (detail::needs_unit_det(ctx)) q = detail::normalize_det(q);
    return GroupElement::trusted(ctx, std::move(q));
}

/// Compact element of finite order dividing some m <= max_order.
inline GroupElement torsion_unitary(const GroupContext& ctx, int max_order, Rng& rng) {
    if (max_order < 1) throw InvalidArgument("max_order must be at least 1");
    const int n = ctx.n();
    const int m = rng.uniform_int(1, max_order);
    std::vector<int> k(n);
    int sum = 0;
    for (int i = 0; i < n; ++i) {
        k[i] = rng.uniform_int(0, m - 1);
        sum += k[i];
    }
    if (detail::needs_unit_det(ctx)) {
        sum -= k[n - 1];
        k[n - 1] = ((-sum) % m + m) % m;
    }
    Matrix d = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = std::polar(1.0, 2.0 * std::numbers::pi * k[i] / m);
    const Matrix u = detail::haar_unitary_matrix(n, rng);
    return GroupElement::trusted(ctx, u * d * u.adjoint());
}

/// Random element with complex Gaussian entries, determinant-normalized for SL/PGL.
inline GroupElement generic_element(const GroupContext& ctx, Rng& rng) {
    const int n = ctx.n();
    for (;;) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = rng.complex_normal();
        if (std::abs(m.determinant()) < 1e-3) continue;
        if (detail::needs_unit_det(ctx)) m = detail::normalize_det(m);
        return GroupElement::trusted(ctx, std::move(m));
    }
}

inline GroupElement sample_element(const GroupContext& ctx, SampleMode mode, std::uint64_t seed) {
    Rng rng(seed);
    switch (mode.kind) {
        case SampleMode::Kind::HaarUnitary: return haar_unitary(ctx, rng);
        case SampleMode::Kind::TorsionUnitary: return torsion_unitary(ctx, mode.max_order, rng);
        case SampleMode::Kind::Generic: return generic_element(ctx, rng);
    }
    throw InvalidArgument("unknown sample mode");
}

/// Diagonal SL(2)/PGL(2)/GL(2) helper: diag(x, y).
inline GroupElement diagonal(const GroupContext& ctx, const std::vector<cplx>& entries) {
    if (static_cast<int>(entries.size()) != ctx.n()) throw InvalidArgument("diagonal length mismatch");
    Matrix d = Matrix::Zero(ctx.n(), ctx.n());
    for (int i = 0; i < ctx.n(); ++i) d(i, i) = entries[i];
    return GroupElement(ctx, std::move(d));
}

inline bool is_diagonal(const GroupElement& g, double tol = 1e-12) {
    const Matrix& m = g.matrix();
    const double scale = m.norm();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (i != j && std::abs(m(i, j)) > tol * scale) return false;
    return true;
}

/// The SL(2) Weyl representative [[0, 1], [-1, 0]].
inline GroupElement weyl_sl2(const GroupContext& ctx) {
    if (ctx.n() != 2) throw InvalidArgument("weyl_sl2 needs a 2x2 context");
    Matrix w(2, 2);
    w << 0.0, 1.0, -1.0, 0.0;
    return GroupElement::trusted(ctx, std::move(w));
}

inline bool is_unitary(const Matrix& m, double tol = 1e-10) {
    return (m * m.adjoint() - Matrix::Identity(m.rows(), m.cols())).norm() < tol;
}

}  // namespace dehn
