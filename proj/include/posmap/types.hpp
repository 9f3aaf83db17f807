// types.hpp — Shared matrix aliases and small dense-algebra helpers.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <cstdint>

namespace posmap {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultFlagTol = 1e-9;
inline constexpr double kDefaultViolationTol = 1e-8;

// |i><j| in a d-dimensional space.
inline Matrix matrix_unit(int d, int i, int j) {
    Matrix m = Matrix::Zero(d, d);
    m(i, j) = 1.0;
    return m;
}

// Column-stacking vectorization: vec(X)[c*d + r] = X(r, c).
inline Vector vec(const Matrix& x) {
    return Eigen::Map<const Vector>(x.data(), x.size());
}

inline Matrix unvec(const Vector& v, int rows, int cols) {
    return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

inline Matrix unvec_square(const Vector& v) {
    const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(v.size()))));
    return unvec(v, d, d);
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline double frobenius_norm(const Matrix& m) { return m.norm(); }

inline Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

inline bool is_hermitian(const Matrix& m, double tol) {
    return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

// Smallest eigenvalue of a (numerically) Hermitian matrix, with optional eigenvector.
inline double min_eigenvalue(const Matrix& m, Vector* eigvec = nullptr) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver;
    if (eigvec == nullptr) {
        solver.compute(hermitize(m), Eigen::EigenvaluesOnly);
        return solver.eigenvalues()(0);
    }
    solver.compute(hermitize(m));
    *eigvec = solver.eigenvectors().col(0);
    return solver.eigenvalues()(0);
}

// Trace norm of a Hermitian matrix (sum of absolute eigenvalues).
inline double trace_norm_hermitian(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(m), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().sum();
}

// Integer square root for d^2-sized containers; -1 when not a perfect square.
inline int exact_isqrt(Eigen::Index n) {
    const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    return (static_cast<Eigen::Index>(r) * r == n) ? r : -1;
}

}  // namespace posmap
