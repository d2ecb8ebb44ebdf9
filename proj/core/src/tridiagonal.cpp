#include "coreshell/tridiagonal.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace coreshell {

Eigen::VectorXd SymTridiagonal::operator*(const Eigen::VectorXd& x) const {
    const Eigen::Index n = size();
    if (x.size() != n) throw std::invalid_argument("tridiagonal product: dimension mismatch");
    Eigen::VectorXd y = diag.cwiseProduct(x);
    if (n > 1) {
        y.head(n - 1) += off.cwiseProduct(x.tail(n - 1));
        y.tail(n - 1) += off.cwiseProduct(x.head(n - 1));
    }
    return y;
}

SymTridiagonal SymTridiagonal::block(Eigen::Index first, Eigen::Index count) const {
    SymTridiagonal b;
    b.diag = diag.segment(first, count);
    b.off = count > 1 ? Eigen::VectorXd(off.segment(first, count - 1)) : Eigen::VectorXd();
    return b;
}

SymTridiagonal SymTridiagonal::axpy(double s, const SymTridiagonal& other) const {
    SymTridiagonal r;
    r.diag = diag + s * other.diag;
    r.off = off + s * other.off;
    return r;
}

Eigen::MatrixXd SymTridiagonal::dense() const {
    const Eigen::Index n = size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = diag(i);
    for (Eigen::Index i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = off(i);
    return m;
}

TridiagonalCholesky::TridiagonalCholesky(const SymTridiagonal& a)
    : d_(a.size()), l_(a.size() > 0 ? a.size() - 1 : 0) {
    const Eigen::Index n = a.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        double pivot = a.diag(i);
        if (i > 0) {
            l_(i - 1) = a.off(i - 1) / d_(i - 1);
            pivot -= l_(i - 1) * a.off(i - 1);
        }
        if (!(pivot > 0.0) || !std::isfinite(pivot))
            throw std::runtime_error("tridiagonal matrix not positive definite at row " +
                                     std::to_string(i));
        d_(i) = pivot;
    }
}

Eigen::VectorXd TridiagonalCholesky::solve(const Eigen::VectorXd& rhs) const {
    const Eigen::Index n = size();
    if (rhs.size() != n) throw std::invalid_argument("tridiagonal solve: dimension mismatch");
    Eigen::VectorXd x = rhs;
    for (Eigen::Index i = 1; i < n; ++i) x(i) -= l_(i - 1) * x(i - 1);
    x.array() /= d_.array();
    for (Eigen::Index i = n - 2; i >= 0; --i) x(i) -= l_(i) * x(i + 1);
    return x;
}

Eigen::VectorXd solve_tridiagonal(const Eigen::VectorXd& sub, const Eigen::VectorXd& diag,
                                  const Eigen::VectorXd& super, const Eigen::VectorXd& rhs) {
    const Eigen::Index n = diag.size();
    if (rhs.size() != n || (n > 0 && (sub.size() != n - 1 || super.size() != n - 1)))
        throw std::invalid_argument("tridiagonal solve: dimension mismatch");
    Eigen::VectorXd c(n), x(n);
    double denom = diag(0);
    if (denom == 0.0) throw std::runtime_error("singular tridiagonal system");
    c(0) = n > 1 ? super(0) / denom : 0.0;
    x(0) = rhs(0) / denom;
    for (Eigen::Index i = 1; i < n; ++i) {
        denom = diag(i) - sub(i - 1) * c(i - 1);
        if (denom == 0.0 || !std::isfinite(denom))
            throw std::runtime_error("singular tridiagonal system at row " + std::to_string(i));
        c(i) = i + 1 < n ? super(i) / denom : 0.0;
        x(i) = (rhs(i) - sub(i - 1) * x(i - 1)) / denom;
    }
    for (Eigen::Index i = n - 2; i >= 0; --i) x(i) -= c(i) * x(i + 1);
    return x;
}

}  // namespace coreshell
