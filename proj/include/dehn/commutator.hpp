#pragma once

#include <unsupported/Eigen/MatrixFunctions>

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "dehn/group.hpp"
#include "dehn/tangent.hpp"

namespace dehn {

struct CommutatorSolverOptions {
    int restarts = 16;
    int iterations = 500;
};

struct CommutatorSolution {
    GroupElement a;
    GroupElement b;
    double residual;  // Frobenius norm of C(a, b) - target
};

namespace detail {

/// Real basis of the compact Lie algebra: su(n) for SL/PGL, u(n) for GL.
inline std::vector<Matrix> compact_algebra_basis(const GroupContext& ctx) {
    const int n = ctx.n();
    const cplx i1(0.0, 1.0);
    std::vector<Matrix> basis;
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            Matrix x = Matrix::Zero(n, n);
            x(j, k) = 1.0;
            x(k, j) = -1.0;
            basis.push_back(x);
            Matrix y = Matrix::Zero(n, n);
            y(j, k) = i1;
            y(k, j) = i1;
            basis.push_back(y);
        }
    if (ctx.traceless_algebra()) {
        for (int j = 0; j < n - 1; ++j) {
            Matrix d = Matrix::Zero(n, n);
            d(j, j) = i1;
            d(n - 1, n - 1) = -i1;
            basis.push_back(d);
        }
    } else {
        for (int j = 0; j < n; ++j) {
            Matrix d = Matrix::Zero(n, n);
            d(j, j) = i1;
            basis.push_back(d);
        }
    }
    return basis;
}

/// Orthonormal eigenbasis of a regular normal matrix (columns).
inline Matrix regular_eigenbasis(const Matrix& g) {
    Eigen::ComplexEigenSolver<Matrix> es(g);
    const Eigen::VectorXcd& ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        for (Eigen::Index j = i + 1; j < ev.size(); ++j)
            if (std::abs(ev(i) - ev(j)) < 1e-6)
                throw InvalidArgument("centralizer constraint requires a regular element");
    Eigen::HouseholderQR<Matrix> qr(es.eigenvectors());
    return qr.householderQ();
}

/// Nearest unitary (polar factor), determinant fixed to 1 when `special`.
inline Matrix unitarize(const Matrix& m, bool special) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix u = svd.matrixU() * svd.matrixV().adjoint();
    if (special) u /= std::pow(u.determinant(), 1.0 / static_cast<double>(m.rows()));
    return u;
}

// Torus element V diag(exp(i theta)) V^*.
inline Matrix torus_element(const Matrix& v, const Eigen::VectorXd& theta) {
    const Eigen::Index n = v.rows();
    Eigen::VectorXcd phases(n);
    for (Eigen::Index j = 0; j < n; ++j) phases(j) = std::polar(1.0, theta(j));
    return v * phases.asDiagonal() * v.adjoint();
}

class CommutatorProblem {
public:
    CommutatorProblem(const GroupContext& ctx, Matrix target, std::optional<Matrix> torus_basis)
        : ctx_(ctx), target_(std::move(target)), torus_(std::move(torus_basis)),
          algebra_(compact_algebra_basis(ctx)) {
        const int n = ctx.n();
        if (torus_) {
            // Directions in the torus Lie algebra, expressed through theta.
            torus_params_ = ctx.traceless_algebra() ? n - 1 : n;
        }
    }

    // Levenberg-Marquardt from (a, b); theta parametrizes b when constrained.
    double run(Matrix& a, Matrix& b, Eigen::VectorXd& theta, int iterations) const {
        const int n = ctx_.n();
        const auto m_a = static_cast<Eigen::Index>(algebra_.size());
        const Eigen::Index m_b = torus_ ? torus_params_ : m_a;
        const Eigen::Index m = m_a + m_b;
        const Eigen::Index rows = 2 * static_cast<Eigen::Index>(n) * n;
        double lambda = 1e-3;
        double cost = residual(a, b).squaredNorm();
        for (int it = 0; it < iterations && std::sqrt(cost) > kStop; ++it) {
            const Matrix a_inv = a.adjoint();
            const Matrix b_inv = b.adjoint();
            Eigen::MatrixXd jac(rows, m);
            for (Eigen::Index k = 0; k < m_a; ++k)
                jac.col(k) = split(commutator_differential(a, b, a_inv, b_inv, &algebra_[k], nullptr));
            for (Eigen::Index k = 0; k < m_b; ++k) {
                const Matrix dir = torus_ ? torus_direction(k) : algebra_[k];
                jac.col(m_a + k) = split(commutator_differential(a, b, a_inv, b_inv, nullptr, &dir));
            }
            const Eigen::VectorXd r = residual(a, b);
            const Eigen::MatrixXd normal = jac.transpose() * jac;
            const Eigen::VectorXd grad = jac.transpose() * r;
            bool accepted = false;
            while (!accepted && lambda < 1e12) {
                Eigen::MatrixXd damped = normal;
                damped.diagonal().array() += lambda * (1.0 + normal.diagonal().array());
                const Eigen::VectorXd step = -damped.ldlt().solve(grad);
                Matrix a_new = a * direction(step.head(m_a)).exp();
                Matrix b_new;
                Eigen::VectorXd theta_new = theta;
                if (torus_) {
                    for (Eigen::Index k = 0; k < m_b; ++k) {
                        theta_new(k) += step(m_a + k);
                        if (ctx_.traceless_algebra()) theta_new(n - 1) -= step(m_a + k);
                    }
                    b_new = torus_element(*torus_, theta_new);
                } else {
                    b_new = b * direction(step.tail(m_b)).exp();
                }
                const double new_cost = residual(a_new, b_new).squaredNorm();
                if (new_cost < cost) {
                    a = std::move(a_new);
                    b = std::move(b_new);
                    theta = std::move(theta_new);
                    cost = new_cost;
                    lambda = std::max(lambda / 3.0, 1e-12);
                    accepted = true;
                } else {
                    lambda *= 4.0;
                }
            }
            if (!accepted) break;
        }
        return std::sqrt(cost);
    }

    Eigen::VectorXd residual(const Matrix& a, const Matrix& b) const {
        return split(a * b * a.adjoint() * b.adjoint() - target_);
    }

    static constexpr double kStop = 1e-14;

private:
    static Eigen::VectorXd split(const Matrix& m) {
        const Eigen::Index size = m.size();
        Eigen::VectorXd out(2 * size);
        for (Eigen::Index i = 0; i < size; ++i) {
            out(i) = m.data()[i].real();
            out(size + i) = m.data()[i].imag();
        }
        return out;
    }

    Matrix direction(const Eigen::VectorXd& coeffs) const {
        Matrix x = Matrix::Zero(ctx_.n(), ctx_.n());
        for (Eigen::Index k = 0; k < coeffs.size(); ++k) x += coeffs(k) * algebra_[k];
        return x;
    }

    // Right-translation direction of b for theta_k (minus theta_{n-1} when traceless).
    Matrix torus_direction(Eigen::Index k) const {
        const int n = ctx_.n();
        Eigen::VectorXcd diag = Eigen::VectorXcd::Zero(n);
        diag(k) = cplx(0.0, 1.0);
        if (ctx_.traceless_algebra()) diag(n - 1) = cplx(0.0, -1.0);
        return *torus_ * diag.asDiagonal() * torus_->adjoint();
    }

    GroupContext ctx_;
    Matrix target_;
    std::optional<Matrix> torus_;
    Eigen::Index torus_params_ = 0;
    std::vector<Matrix> algebra_;
};

}  // namespace detail

/// Finds a, b in the maximal compact subgroup with C(a, b) = target.
///
/// With `centralizer_of = g` (g regular), b is restricted to the torus
/// centralizing g. Levenberg-Marquardt on right-translated coordinates with
/// Haar-random restarts; throws SolverFailed when no restart reaches
/// tol.solver_tol. PGL(2) is solved in SU(2) on determinant-one representatives.
inline CommutatorSolution solve_commutator(const GroupContext& ctx, const GroupElement& target,
                                           const std::optional<GroupElement>& centralizer_of = std::nullopt,
                                           std::uint64_t seed = 0, const Tolerance& tol = {},
                                           const CommutatorSolverOptions& options = {}) {
    if (!(target.context() == ctx)) throw ContextMismatch("target context differs from solver context");
    const int n = ctx.n();
    const Matrix t = det_one_representative(target);
    if (!is_unitary(t, 1e-8)) throw InvalidArgument("commutator target must lie in the maximal compact subgroup");
    if (std::abs(t.determinant() - 1.0) > 1e-8)
        throw InvalidArgument("commutator target must have determinant 1");

    std::optional<Matrix> torus;
    if (centralizer_of) {
        if (!(centralizer_of->context() == ctx)) throw ContextMismatch("constraint context differs");
        const Matrix g = det_one_representative(*centralizer_of);
        if (!is_unitary(g, 1e-8)) throw InvalidArgument("centralizer constraint must be unitary");
        torus = detail::regular_eigenbasis(g);
    }

    const bool special = ctx.traceless_algebra();
    if ((t - Matrix::Identity(n, n)).norm() < 1e-15)
        return {GroupElement::identity(ctx), GroupElement::identity(ctx), 0.0};

    detail::CommutatorProblem problem(ctx, t, torus);
    Rng rng(seed);
    double best = std::numeric_limits<double>::infinity();
    std::optional<CommutatorSolution> best_solution;
    for (int restart = 0; restart < options.restarts; ++restart) {
        Matrix a = haar_unitary(ctx, rng).matrix();
        Matrix b;
        Eigen::VectorXd theta = Eigen::VectorXd::Zero(n);
        if (torus) {
            for (int j = 0; j < n; ++j) theta(j) = rng.uniform(0.0, 2.0 * std::numbers::pi);
            if (special) theta(n - 1) = -theta.head(n - 1).sum();
            b = detail::torus_element(*torus, theta);
        } else {
            b = haar_unitary(ctx, rng).matrix();
        }
        problem.run(a, b, theta, options.iterations);
        a = detail::unitarize(a, special);
        if (!torus) b = detail::unitarize(b, special);
        const double residual = problem.residual(a, b).norm();
        if (residual < best) {
            best = residual;
            best_solution = CommutatorSolution{GroupElement::trusted(ctx, a), GroupElement::trusted(ctx, b), residual};
        }
        if (best < detail::CommutatorProblem::kStop * 100.0) break;
    }
    if (!best_solution || !(best < tol.solver_tol)) throw SolverFailed("commutator solver did not converge", best);
    return *best_solution;
}

}  // namespace dehn
