#pragma once

#include <variant>
#include <vector>

#include "dehn/representation.hpp"

namespace dehn {

/// delta_i = 0.
struct FixGenerator {
    int index;  // 1-based generator index
};

/// The linearization of C(A_h, A_{h+p}) vanishes; `target` must equal the
/// current value of that commutator.
struct FixCommutator {
    int handle;  // 1-based, 1 <= handle <= p
    GroupElement target;
};

using TangentConstraint = std::variant<FixGenerator, FixCommutator>;

namespace detail {

// d/de C(a(I+eX), b(I+eY)) at e = 0.
inline Matrix commutator_differential(const Matrix& a, const Matrix& b, const Matrix& a_inv, const Matrix& b_inv,
                                      const Matrix* x, const Matrix* y) {
    Matrix out = Matrix::Zero(a.rows(), a.cols());
    if (x) out += a * *x * b * a_inv * b_inv - a * b * *x * a_inv * b_inv;
    if (y) out += a * b * *y * a_inv * b_inv - a * b * a_inv * *y * b_inv;
    return out;
}

struct HandleData {
    std::vector<Matrix> a, b, a_inv, b_inv, comm, prefix, suffix;
};

inline HandleData handle_data(const Representation& rho) {
    const int p = rho.genus();
    const int n = rho.context().n();
    HandleData h;
    for (int i = 1; i <= p; ++i) {
        h.a.push_back(det_one_representative(rho.image(i)));
        h.b.push_back(det_one_representative(rho.image(i + p)));
        h.a_inv.push_back(h.a.back().inverse());
        h.b_inv.push_back(h.b.back().inverse());
        h.comm.push_back(h.a.back() * h.b.back() * h.a_inv.back() * h.b_inv.back());
    }
    // prefix[i] = C_1 ... C_{i}, with prefix[0] = I; suffix[i] = C_{i+1} ... C_p
    h.prefix.assign(p + 1, Matrix::Identity(n, n));
    h.suffix.assign(p + 1, Matrix::Identity(n, n));
    for (int i = 0; i < p; ++i) h.prefix[i + 1] = h.prefix[i] * h.comm[i];
    for (int i = p - 1; i >= 0; --i) h.suffix[i] = h.comm[i] * h.suffix[i + 1];
    return h;
}

}  // namespace detail

/// Jacobian of the relation map prod_i C(a_i, a_{i+p}) at rho, in
/// right-translated coordinates a_j -> a_j (I + e X). Columns are ordered by
/// generator, then by lie_algebra_basis; rows are vec of the n x n derivative.
inline Matrix relation_jacobian(const Representation& rho) {
    const int p = rho.genus();
    const int n = rho.context().n();
    const auto basis = lie_algebra_basis(rho.context());
    const auto d = static_cast<Eigen::Index>(basis.size());
    const auto h = detail::handle_data(rho);
    Matrix jac(static_cast<Eigen::Index>(n) * n, 2 * p * d);
    for (int j = 1; j <= 2 * p; ++j) {
        const int handle = (j <= p ? j : j - p) - 1;
        const bool first = j <= p;
        for (Eigen::Index k = 0; k < d; ++k) {
            const Matrix dc = detail::commutator_differential(h.a[handle], h.b[handle], h.a_inv[handle],
                                                              h.b_inv[handle], first ? &basis[k] : nullptr,
                                                              first ? nullptr : &basis[k]);
            jac.col((j - 1) * d + k) = linalg::vec(h.prefix[handle] * dc * h.suffix[handle + 1]);
        }
    }
    return jac;
}

/// Rows whose common kernel is the tangent space cut out by the relation and
/// the constraints.
inline Matrix constrained_tangent_system(const Representation& rho, const std::vector<TangentConstraint>& constraints,
                                         const Tolerance& tol = {}) {
    const int p = rho.genus();
    const int n = rho.context().n();
    const auto basis = lie_algebra_basis(rho.context());
    const auto d = static_cast<Eigen::Index>(basis.size());
    const auto block = static_cast<Eigen::Index>(n) * n;
    const auto h = detail::handle_data(rho);

    std::vector<Matrix> blocks{relation_jacobian(rho)};
    for (const auto& c : constraints) {
        if (const auto* fg = std::get_if<FixGenerator>(&c)) {
            if (fg->index < 1 || fg->index > 2 * p) throw InvalidArgument("FixGenerator index out of range");
            Matrix rows = Matrix::Zero(d, 2 * p * d);
            rows.block(0, (fg->index - 1) * d, d, d) = Matrix::Identity(d, d);
            blocks.push_back(std::move(rows));
        } else {
            const auto& fc = std::get<FixCommutator>(c);
            if (fc.handle < 1 || fc.handle > p) throw InvalidArgument("FixCommutator handle out of range");
            const GroupElement current = commutator(rho.image(fc.handle), rho.image(fc.handle + p));
            if (group_distance(current, fc.target) > std::sqrt(tol.eq_tol))
                throw InvalidArgument("FixCommutator target differs from the current commutator value");
            const int i = fc.handle - 1;
            Matrix rows = Matrix::Zero(block, 2 * p * d);
            for (Eigen::Index k = 0; k < d; ++k) {
                rows.col(i * d + k) =
                    linalg::vec(detail::commutator_differential(h.a[i], h.b[i], h.a_inv[i], h.b_inv[i], &basis[k], nullptr));
                rows.col((i + p) * d + k) =
                    linalg::vec(detail::commutator_differential(h.a[i], h.b[i], h.a_inv[i], h.b_inv[i], nullptr, &basis[k]));
            }
            blocks.push_back(std::move(rows));
        }
    }
    Eigen::Index total = 0;
    for (const auto& b : blocks) total += b.rows();
    Matrix system(total, 2 * p * d);
    Eigen::Index row = 0;
    for (const auto& b : blocks) {
        system.middleRows(row, b.rows()) = b;
        row += b.rows();
    }
    return system;
}

/// Numerical dimension of the tangent space of the representation variety at
/// rho, intersected with the linearized constraints.
inline int tangent_dimension(const Representation& rho, const std::vector<TangentConstraint>& constraints = {},
                             const Tolerance& tol = {}) {
    const double defect = relation_defect(rho);
    if (!(defect < tol.eq_tol)) throw DefectTooLarge(defect, tol.eq_tol);
    const Matrix system = constrained_tangent_system(rho, constraints, tol);
    return static_cast<int>(system.cols()) - linalg::numerical_rank(system, tol.rank_tol);
}

}  // namespace dehn
