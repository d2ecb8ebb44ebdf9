#pragma once

#include <cstddef>
#include <memory>
#include <string_view>

#include <Eigen/Dense>

#include "coreshell/geometry.hpp"
#include "coreshell/tridiagonal.hpp"

namespace coreshell {

/// Nodal values over every mesh node. Dirichlet entries are zero for states;
/// reaction values may be nonzero there and enter through the full mass matrix.
using Field = Eigen::VectorXd;

/// Piecewise-constant diffusivity b1 on the closed core, b2 on the shell.
/// A positive regularization width replaces the jump by a cubic smoothstep
/// ramp over [interface - width/2, interface + width/2].
class DiffusionField {
public:
    DiffusionField(double b1, double b2, double regularization_width = 0.0);

    double b1() const noexcept { return b1_; }
    double b2() const noexcept { return b2_; }
    double width() const noexcept { return width_; }
    double b_min() const noexcept { return b1_ < b2_ ? b1_ : b2_; }
    double b_max() const noexcept { return b1_ < b2_ ? b2_ : b1_; }

    double value(double x, double interface) const noexcept;

private:
    double b1_;
    double b2_;
    double width_;
};

/// Linear finite element realization of a(u, v) = int b u' v' r^(N-1) dr
/// together with the mass matrix of the weighted L2 inner product.
///
/// Matrices are kept over all nodes ("full") and over the free block. The
/// free nodes form a contiguous range [first_free, first_free + free_count).
class DiffractionOperator {
public:
    const Mesh& mesh() const noexcept { return mesh_; }
    const DiffusionField& diffusion() const noexcept { return diffusion_; }

    const SymTridiagonal& stiffness() const noexcept { return stiffness_; }
    const SymTridiagonal& mass() const noexcept { return mass_; }
    const SymTridiagonal& full_stiffness() const noexcept { return full_stiffness_; }
    const SymTridiagonal& full_mass() const noexcept { return full_mass_; }
    /// Stiffness with b = 1, used for the gradient seminorm.
    const SymTridiagonal& full_unit_stiffness() const noexcept { return full_unit_stiffness_; }

    const TridiagonalCholesky& mass_factor() const noexcept { return mass_factor_; }
    const TridiagonalCholesky& stiffness_factor() const noexcept { return stiffness_factor_; }

    Eigen::Index node_count() const noexcept { return full_mass_.size(); }
    Eigen::Index first_free() const noexcept { return static_cast<Eigen::Index>(mesh_.first_free()); }
    Eigen::Index free_count() const noexcept { return mass_.size(); }

    Field zero_field() const { return Field::Zero(node_count()); }
    Eigen::VectorXd restrict_free(const Field& u) const;
    Field extend(const Eigen::VectorXd& free_values) const;

    /// Load vector (M_full f) restricted to the free nodes.
    Eigen::VectorXd load(const Field& f) const;
    /// Discrete L2 projection of f onto the finite element space.
    Field l2_project(const Field& f) const;
    /// Discrete strong operator A u = M^-1 K u.
    Field apply(const Field& u) const;

private:
    friend DiffractionOperator assemble(const Mesh&, const DiffusionField&);
    DiffractionOperator(Mesh mesh, DiffusionField diffusion) : mesh_(std::move(mesh)), diffusion_(diffusion) {}

    Mesh mesh_;
    DiffusionField diffusion_;
    SymTridiagonal full_stiffness_;
    SymTridiagonal full_mass_;
    SymTridiagonal full_unit_stiffness_;
    SymTridiagonal stiffness_;
    SymTridiagonal mass_;
    TridiagonalCholesky mass_factor_;
    TridiagonalCholesky stiffness_factor_;
};

DiffractionOperator assemble(const Mesh& mesh, const DiffusionField& diffusion);

/// u^T K v
double bilinear_form(const DiffractionOperator& op, const Field& u, const Field& v);

enum class NormKind { H, V, V_semi, DA };
NormKind parse_norm_kind(std::string_view name);

double norm(const DiffractionOperator& op, const Field& u, NormKind kind);
double inner_h(const DiffractionOperator& op, const Field& u, const Field& v);

/// Solves K u = M rhs with homogeneous Dirichlet data.
Field solve_elliptic(const DiffractionOperator& op, const Field& rhs);

/// Leading eigenpairs of K w = lambda M w, mass-orthonormal, ascending.
class EigenBasis {
public:
    std::size_t size() const noexcept { return static_cast<std::size_t>(eigenvalues_.size()); }
    const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
    double eigenvalue(std::size_t j) const { return eigenvalues_(static_cast<Eigen::Index>(j)); }
    /// Mode j (0-based) as a full nodal field.
    Field mode(std::size_t j) const;
    /// Free-node eigenvectors, one column per mode.
    const Eigen::MatrixXd& vectors() const noexcept { return vectors_; }
    const DiffractionOperator& op() const noexcept { return *op_; }

private:
    friend EigenBasis eigenbasis(const DiffractionOperator&, std::size_t);
    std::shared_ptr<const DiffractionOperator> op_;
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd vectors_;
};

/// Throws std::invalid_argument if n exceeds the free node count and
/// std::runtime_error if the mass matrix is not positive definite.
EigenBasis eigenbasis(const DiffractionOperator& op, std::size_t n);

/// Coefficients (u, w_j)_H for j < n.
Eigen::VectorXd project(const EigenBasis& basis, const Field& u, std::size_t n);
/// sum_j coeffs_j w_j
Field reconstruct(const EigenBasis& basis, const Eigen::VectorXd& coeffs);

/// P_n u and Q_n u = u - P_n u.
Field projection_p(const EigenBasis& basis, const Field& u, std::size_t n);
Field projection_q(const EigenBasis& basis, const Field& u, std::size_t n);

}  // namespace coreshell
