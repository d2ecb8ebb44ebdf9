#include "coreshell/operators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace coreshell {

DiffusionField::DiffusionField(double b1, double b2, double regularization_width)
    : b1_(b1), b2_(b2), width_(regularization_width) {
    if (!(b1 > 0.0) || !(b2 > 0.0) || !std::isfinite(b1) || !std::isfinite(b2))
        throw std::invalid_argument("diffusivities must be positive and finite");
    if (!(regularization_width >= 0.0) || !std::isfinite(regularization_width))
        throw std::invalid_argument("regularization width must be non-negative");
}

double DiffusionField::value(double x, double interface) const noexcept {
    if (width_ == 0.0) return x <= interface ? b1_ : b2_;
    const double t = std::clamp((x - (interface - 0.5 * width_)) / width_, 0.0, 1.0);
    return b1_ + (b2_ - b1_) * t * t * (3.0 - 2.0 * t);
}

namespace {

// 4-point Gauss-Legendre on [-1, 1], exact through degree 7.
constexpr std::array<double, 4> kGaussX = {-0.8611363115940526, -0.3399810435848563,
                                           0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> kGaussW = {0.3478548451374538, 0.6521451548625461,
                                           0.6521451548625461, 0.3478548451374538};

struct ElementIntegrals {
    double weight = 0.0;     // int w
    double b_weight = 0.0;   // int b w
    double mass_aa = 0.0;    // int phi_a^2 w
    double mass_ab = 0.0;    // int phi_a phi_b w
    double mass_bb = 0.0;    // int phi_b^2 w
};

template <class Fn>
void gauss(double lo, double hi, Fn&& fn) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    for (std::size_t q = 0; q < kGaussX.size(); ++q) fn(mid + half * kGaussX[q], half * kGaussW[q]);
}

ElementIntegrals integrate_element(double xa, double xb, int weight_exponent,
                                   const DiffusionField& diffusion, double interface) {
    ElementIntegrals out;
    const double h = xb - xa;
    const double b_const = diffusion.value(0.5 * (xa + xb), interface);

    auto accumulate = [&](double lo, double hi, bool with_b) {
        gauss(lo, hi, [&](double x, double wq) {
            const double w = std::pow(x, weight_exponent) * wq;
            const double pa = (xb - x) / h;
            const double pb = (x - xa) / h;
            out.weight += w;
            out.b_weight += (with_b ? diffusion.value(x, interface) : b_const) * w;
            out.mass_aa += pa * pa * w;
            out.mass_ab += pa * pb * w;
            out.mass_bb += pb * pb * w;
        });
    };

    if (diffusion.width() == 0.0) {
        accumulate(xa, xb, false);
        return out;
    }
    // Split at the ramp ends so every piece integrates a polynomial.
    std::array<double, 4> cuts = {xa, interface - 0.5 * diffusion.width(),
                                  interface + 0.5 * diffusion.width(), xb};
    std::sort(cuts.begin() + 1, cuts.end() - 1);
    double lo = xa;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        const double hi = std::clamp(cuts[i], xa, xb);
        if (hi > lo) {
            accumulate(lo, hi, true);
            lo = hi;
        }
    }
    return out;
}

}  // namespace

DiffractionOperator assemble(const Mesh& mesh, const DiffusionField& diffusion) {
    const std::size_t nodes = mesh.node_count();
    if (nodes < 3) throw std::invalid_argument("mesh needs at least two elements");
    if (mesh.interface_index == 0 || mesh.interface_index + 1 >= nodes)
        throw std::invalid_argument("mesh has no interior interface node");
    for (std::size_t i = 0; i + 1 < nodes; ++i)
        if (!(mesh.nodes[i + 1] > mesh.nodes[i]))
            throw std::invalid_argument("mesh nodes must be strictly increasing");

    DiffractionOperator op(mesh, diffusion);
    const auto n = static_cast<Eigen::Index>(nodes);
    op.full_stiffness_ = SymTridiagonal(n);
    op.full_mass_ = SymTridiagonal(n);
    op.full_unit_stiffness_ = SymTridiagonal(n);
    const double interface = mesh.interface_position();

    for (Eigen::Index e = 0; e + 1 < n; ++e) {
        const double xa = mesh.nodes[static_cast<std::size_t>(e)];
        const double xb = mesh.nodes[static_cast<std::size_t>(e) + 1];
        const double h = xb - xa;
        const auto ints = integrate_element(xa, xb, mesh.weight_exponent, diffusion, interface);

        const double k = ints.b_weight / (h * h);
        op.full_stiffness_.diag(e) += k;
        op.full_stiffness_.diag(e + 1) += k;
        op.full_stiffness_.off(e) -= k;

        const double k1 = ints.weight / (h * h);
        op.full_unit_stiffness_.diag(e) += k1;
        op.full_unit_stiffness_.diag(e + 1) += k1;
        op.full_unit_stiffness_.off(e) -= k1;

        op.full_mass_.diag(e) += ints.mass_aa;
        op.full_mass_.diag(e + 1) += ints.mass_bb;
        op.full_mass_.off(e) += ints.mass_ab;
    }

    const auto first = static_cast<Eigen::Index>(mesh.first_free());
    const auto count = static_cast<Eigen::Index>(mesh.free_count());
    op.stiffness_ = op.full_stiffness_.block(first, count);
    op.mass_ = op.full_mass_.block(first, count);
    op.mass_factor_ = TridiagonalCholesky(op.mass_);
    op.stiffness_factor_ = TridiagonalCholesky(op.stiffness_);
    return op;
}

Eigen::VectorXd DiffractionOperator::restrict_free(const Field& u) const {
    if (u.size() != node_count()) throw std::invalid_argument("field size does not match mesh");
    return u.segment(first_free(), free_count());
}

Field DiffractionOperator::extend(const Eigen::VectorXd& free_values) const {
    if (free_values.size() != free_count())
        throw std::invalid_argument("free vector size does not match operator");
    Field u = zero_field();
    u.segment(first_free(), free_count()) = free_values;
    return u;
}

Eigen::VectorXd DiffractionOperator::load(const Field& f) const {
    return restrict_free(full_mass_ * f);
}

Field DiffractionOperator::l2_project(const Field& f) const {
    return extend(mass_factor_.solve(load(f)));
}

Field DiffractionOperator::apply(const Field& u) const {
    return extend(mass_factor_.solve(restrict_free(full_stiffness_ * u)));
}

double bilinear_form(const DiffractionOperator& op, const Field& u, const Field& v) {
    if (u.size() != op.node_count() || v.size() != op.node_count())
        throw std::invalid_argument("bilinear_form: dimension mismatch");
    return u.dot(op.full_stiffness() * v);
}

double inner_h(const DiffractionOperator& op, const Field& u, const Field& v) {
    if (u.size() != op.node_count() || v.size() != op.node_count())
        throw std::invalid_argument("inner product: dimension mismatch");
    return u.dot(op.full_mass() * v);
}

NormKind parse_norm_kind(std::string_view name) {
    if (name == "H") return NormKind::H;
    if (name == "V") return NormKind::V;
    if (name == "V_semi") return NormKind::V_semi;
    if (name == "DA") return NormKind::DA;
    throw std::invalid_argument("unknown norm kind: " + std::string(name));
}

double norm(const DiffractionOperator& op, const Field& u, NormKind kind) {
    if (u.size() != op.node_count()) throw std::invalid_argument("norm: dimension mismatch");
    const auto sq = [](double x) { return std::sqrt(std::max(0.0, x)); };
    switch (kind) {
        case NormKind::H:
            return sq(u.dot(op.full_mass() * u));
        case NormKind::V_semi:
            return sq(u.dot(op.full_unit_stiffness() * u));
        case NormKind::V:
            return sq(u.dot(op.full_mass() * u) + u.dot(op.full_unit_stiffness() * u));
        case NormKind::DA: {
            const Eigen::VectorXd ku = op.restrict_free(op.full_stiffness() * u);
            return sq(ku.dot(op.mass_factor().solve(ku)));
        }
    }
    throw std::invalid_argument("unknown norm kind");
}

Field solve_elliptic(const DiffractionOperator& op, const Field& rhs) {
    return op.extend(op.stiffness_factor().solve(op.load(rhs)));
}

EigenBasis eigenbasis(const DiffractionOperator& op, std::size_t n) {
    const auto free = static_cast<std::size_t>(op.free_count());
    if (n == 0 || n > free)
        throw std::invalid_argument("eigenbasis: requested " + std::to_string(n) +
                                    " modes, operator has " + std::to_string(free) + " free nodes");

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        op.stiffness().dense(), op.mass().dense(), Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigenbasis: generalized eigensolver failed (mass not SPD?)");

    EigenBasis basis;
    basis.op_ = std::make_shared<const DiffractionOperator>(op);
    const auto count = static_cast<Eigen::Index>(n);
    basis.eigenvalues_ = solver.eigenvalues().head(count);
    basis.vectors_ = solver.eigenvectors().leftCols(count);

    for (Eigen::Index j = 0; j < count; ++j) {
        auto col = basis.vectors_.col(j);
        // Re-normalize in the mass inner product; the solver's scaling is
        // accurate to roughly sqrt(eps) relative otherwise.
        col /= std::sqrt(col.dot(op.mass() * Eigen::VectorXd(col)));
        const double threshold = 1e-12 * col.cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < col.size(); ++i) {
            if (std::abs(col(i)) > threshold) {
                if (col(i) < 0.0) col = -col;
                break;
            }
        }
    }
    return basis;
}

Field EigenBasis::mode(std::size_t j) const {
    if (j >= size()) throw std::out_of_range("eigenbasis mode index out of range");
    return op_->extend(vectors_.col(static_cast<Eigen::Index>(j)));
}

Eigen::VectorXd project(const EigenBasis& basis, const Field& u, std::size_t n) {
    if (n > basis.size()) throw std::invalid_argument("project: n exceeds basis size");
    const Eigen::VectorXd load = basis.op().load(u);
    return basis.vectors().leftCols(static_cast<Eigen::Index>(n)).transpose() * load;
}

Field reconstruct(const EigenBasis& basis, const Eigen::VectorXd& coeffs) {
    if (static_cast<std::size_t>(coeffs.size()) > basis.size())
        throw std::invalid_argument("reconstruct: more coefficients than modes");
    return basis.op().extend(basis.vectors().leftCols(coeffs.size()) * coeffs);
}

Field projection_p(const EigenBasis& basis, const Field& u, std::size_t n) {
    return reconstruct(basis, project(basis, u, n));
}

Field projection_q(const EigenBasis& basis, const Field& u, std::size_t n) {
    return u - projection_p(basis, u, n);
}

}  // namespace coreshell
