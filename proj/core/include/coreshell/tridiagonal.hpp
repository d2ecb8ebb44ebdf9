#pragma once

#include <Eigen/Dense>

namespace coreshell {

/// Symmetric tridiagonal matrix stored by diagonal and first off-diagonal.
struct SymTridiagonal {
    Eigen::VectorXd diag;
    Eigen::VectorXd off;  // size() - 1 entries, off(i) couples i and i+1

    SymTridiagonal() = default;
    explicit SymTridiagonal(Eigen::Index n)
        : diag(Eigen::VectorXd::Zero(n)), off(Eigen::VectorXd::Zero(n > 0 ? n - 1 : 0)) {}

    Eigen::Index size() const noexcept { return diag.size(); }

    Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;

    /// Principal block [first, first + count).
    SymTridiagonal block(Eigen::Index first, Eigen::Index count) const;

    /// this + s * other
    SymTridiagonal axpy(double s, const SymTridiagonal& other) const;

    Eigen::MatrixXd dense() const;
};

/// LDL^T factorization of a symmetric positive-definite tridiagonal matrix.
/// Throws std::runtime_error on a non-positive pivot.
class TridiagonalCholesky {
public:
    TridiagonalCholesky() = default;
    explicit TridiagonalCholesky(const SymTridiagonal& a);

    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
    Eigen::Index size() const noexcept { return d_.size(); }

private:
    Eigen::VectorXd d_;  // pivots
    Eigen::VectorXd l_;  // unit lower bidiagonal
};

/// Thomas algorithm for a general tridiagonal system; sub(i) couples row i+1
/// to column i, super(i) couples row i to column i+1.
Eigen::VectorXd solve_tridiagonal(const Eigen::VectorXd& sub, const Eigen::VectorXd& diag,
                                  const Eigen::VectorXd& super, const Eigen::VectorXd& rhs);

}  // namespace coreshell
