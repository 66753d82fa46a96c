#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>

namespace dehn {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

namespace linalg {

/// Singular values of `a`, largest first. Handles empty matrices.
inline Eigen::VectorXd singular_values(const Matrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return Eigen::VectorXd();
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues();
}

/// Numerical rank: singular values above rank_tol * max(sigma_max, scale).
/// `scale` keeps an all-roundoff matrix from being treated as full rank.
inline int numerical_rank(const Matrix& a, double rank_tol, double scale = 1.0) {
    const Eigen::VectorXd s = singular_values(a);
    if (s.size() == 0) return 0;
    const double cut = rank_tol * std::max(s(0), scale);
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > cut) ++rank;
    return rank;
}

/// Orthonormal basis (as columns) of the right nullspace of `a`.
inline Matrix nullspace(const Matrix& a, double rank_tol, double scale = 1.0) {
    const Eigen::Index cols = a.cols();
    if (a.rows() == 0) return Matrix::Identity(cols, cols);
    // Pad to at least square so the full V is available from a thin problem.
    Matrix padded = a;
    if (a.rows() < cols) {
        padded = Matrix::Zero(cols, cols);
        padded.topRows(a.rows()) = a;
    }
    Eigen::JacobiSVD<Matrix> svd(padded, Eigen::ComputeFullV);
    const Eigen::VectorXd& s = svd.singularValues();
    const double cut = rank_tol * std::max(s.size() ? s(0) : 0.0, scale);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > cut) ++rank;
    return svd.matrixV().rightCols(cols - rank);
}

/// Column-major vectorization.
inline Vector vec(const Matrix& m) {
    return Eigen::Map<const Vector>(m.data(), m.size());
}

inline Matrix unvec(const Vector& v, Eigen::Index n) {
    return Eigen::Map<const Matrix>(v.data(), n, n);
}

/// Matrix of X -> a * X * b acting on column-major vec(X).
inline Matrix left_right_operator(const Matrix& a, const Matrix& b) {
    const Eigen::Index n = a.rows();
    Matrix op(n * n, n * n);
    // vec(a X b) = (b^T kron a) vec(X)
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            op.block(i * n, j * n, n, n) = b(j, i) * a;
    return op;
}

}  // namespace linalg
}  // namespace dehn
