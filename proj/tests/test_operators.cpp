#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "coreshell/operators.hpp"
#include "oracles.hpp"

using namespace coreshell;

namespace {

Mesh interval_mesh(double gamma, std::size_t elements) {
    return build_mesh(build_geometry(GeometryKind::interval, 1, gamma, 1.0), 1.0 / static_cast<double>(elements));
}

Field random_state(const DiffractionOperator& op, unsigned seed) {
    std::srand(seed);
    return op.extend(Eigen::VectorXd::Random(op.free_count()));
}

}  // namespace

TEST(Assemble, HandAssembledRows) {
    // h = 1/3 on [0, 1] with b = 1: interior stiffness (-3, 6, -3), mass h/6 (1, 4, 1).
    const auto mesh = build_mesh_counts(build_geometry(GeometryKind::interval, 1, 1.0 / 3.0, 1.0), 1, 2);
    const auto op = assemble(mesh, DiffusionField(1.0, 1.0));
    const auto& k = op.full_stiffness();
    const auto& m = op.full_mass();
    EXPECT_NEAR(k.off(0), -3.0, 1e-12);
    EXPECT_NEAR(k.diag(1), 6.0, 1e-12);
    EXPECT_NEAR(k.off(1), -3.0, 1e-12);
    EXPECT_NEAR(m.off(0), 1.0 / 18.0, 1e-15);
    EXPECT_NEAR(m.diag(1), 4.0 / 18.0, 1e-15);
    EXPECT_NEAR(m.off(1), 1.0 / 18.0, 1e-15);
}

TEST(Assemble, InterfaceDiagonalCombinesBothSides) {
    const auto mesh = interval_mesh(0.5, 8);
    const auto op = assemble(mesh, DiffusionField(2.0, 1.0));
    const double h = 1.0 / 8.0;
    const auto k = static_cast<Eigen::Index>(mesh.interface_index);
    EXPECT_NEAR(op.full_stiffness().diag(k), 2.0 / h + 1.0 / h, 1e-12);
}

TEST(Assemble, RowSumsVanishAndMassIsPartitionOfUnity) {
    for (int dim : {1, 2, 3}) {
        const auto g = build_geometry(dim == 1 ? GeometryKind::interval : GeometryKind::radial, dim, 0.37, 1.3);
        const auto op = assemble(build_mesh(g, 0.05), DiffusionField(3.0, 0.5));
        const Field ones = Field::Ones(op.node_count());
        EXPECT_LT((op.full_stiffness() * ones).cwiseAbs().maxCoeff(), 1e-10) << "dim " << dim;
        // sum of all mass entries = weighted measure, computed independently
        const double measure = oracle::simpson([dim](double r) { return std::pow(r, dim - 1); }, 0.0, 1.3);
        EXPECT_NEAR(ones.dot(op.full_mass() * ones), measure, 1e-12) << "dim " << dim;
        EXPECT_NEAR(measure, g.measure(), 1e-12);
    }
}

TEST(Assemble, RejectsMeshWithoutInterface) {
    auto mesh = interval_mesh(0.5, 8);
    mesh.interface_index = 0;
    EXPECT_THROW(assemble(mesh, DiffusionField(1.0, 1.0)), std::invalid_argument);
}

TEST(Diffusion, SmoothstepRamp) {
    const DiffusionField b(4.0, 1.0, 0.2);
    EXPECT_DOUBLE_EQ(b.value(0.39, 0.5), 4.0);
    EXPECT_DOUBLE_EQ(b.value(0.5, 0.5), 2.5);
    EXPECT_DOUBLE_EQ(b.value(0.61, 0.5), 1.0);
    double prev = 5.0;
    for (double x = 0.35; x <= 0.65; x += 0.001) {
        EXPECT_LE(b.value(x, 0.5), prev);
        prev = b.value(x, 0.5);
    }
    const DiffusionField sharp(4.0, 1.0);
    EXPECT_EQ(sharp.value(0.5, 0.5), 4.0);
    EXPECT_EQ(sharp.value(0.5000001, 0.5), 1.0);
    EXPECT_THROW(DiffusionField(0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(DiffusionField(1.0, 1.0, -0.1), std::invalid_argument);
}

TEST(Assemble, DegenerateRampMatchesSharp) {
    const auto mesh = interval_mesh(0.5, 64);
    const auto a = assemble(mesh, DiffusionField(2.0, 2.0));
    const auto b = assemble(mesh, DiffusionField(2.0, 2.0, 0.2));
    EXPECT_LT((a.full_stiffness().diag - b.full_stiffness().diag).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(BilinearForm, CoercivitySymmetryZero) {
    const auto op = assemble(interval_mesh(0.3, 100), DiffusionField(4.0, 1.0));
    for (unsigned s = 0; s < 100; ++s) {
        const Field u = random_state(op, s);
        const Field v = random_state(op, 1000 + s);
        const double grad_sq = std::pow(norm(op, u, NormKind::V_semi), 2);
        EXPECT_GE(bilinear_form(op, u, u), op.diffusion().b_min() * grad_sq * (1.0 - 1e-14));
        EXPECT_LE(bilinear_form(op, u, u), op.diffusion().b_max() * grad_sq * (1.0 + 1e-14));
        EXPECT_NEAR(bilinear_form(op, u, v), bilinear_form(op, v, u), 1e-10);
    }
    EXPECT_EQ(bilinear_form(op, op.zero_field(), op.zero_field()), 0.0);
    EXPECT_THROW(bilinear_form(op, Field::Zero(3), op.zero_field()), std::invalid_argument);
}

TEST(Eigenbasis, UniformCoefficientMatchesSineSpectrum) {
    const auto op = assemble(interval_mesh(0.5, 512), DiffusionField(1.0, 1.0));
    const auto basis = eigenbasis(op, 5);
    for (std::size_t j = 0; j < 5; ++j) {
        const double exact = std::pow((j + 1) * std::numbers::pi, 2);
        EXPECT_NEAR(basis.eigenvalue(j), exact, 0.01 * exact);
    }
}

TEST(Eigenbasis, DiffractionMatchesShootingOracle) {
    const double oracle_lambda = oracle::first_eigenvalue_by_shooting(4.0, 1.0, 0.5, 1.0);
    EXPECT_NEAR(oracle_lambda, 21.1696424, 1e-6);
    const auto op = assemble(interval_mesh(0.5, 512), DiffusionField(4.0, 1.0));
    EXPECT_NEAR(eigenbasis(op, 1).eigenvalue(0), oracle_lambda, 0.005 * oracle_lambda);
}

TEST(Eigenbasis, OrthonormalEigenpairsWithSignConvention) {
    const auto op = assemble(interval_mesh(0.3, 64), DiffusionField(4.0, 1.0));
    const auto basis = eigenbasis(op, 20);
    const Eigen::MatrixXd w = basis.vectors();
    const Eigen::MatrixXd gram = w.transpose() * op.mass().dense() * w;
    EXPECT_LT((gram - Eigen::MatrixXd::Identity(20, 20)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_GT(basis.eigenvalue(0), 0.0);
    for (std::size_t j = 0; j < 20; ++j) {
        if (j > 0) EXPECT_LE(basis.eigenvalue(j - 1), basis.eigenvalue(j));
        const Eigen::VectorXd col = w.col(static_cast<Eigen::Index>(j));
        const Eigen::VectorXd residual = op.stiffness() * col - basis.eigenvalue(j) * (op.mass() * col);
        EXPECT_LT(residual.norm(), 1e-8 * basis.eigenvalue(j));
        EXPECT_GT(col(0), 0.0);
    }
    EXPECT_NO_THROW(eigenbasis(op, static_cast<std::size_t>(op.free_count())));
    EXPECT_THROW(eigenbasis(op, static_cast<std::size_t>(op.free_count()) + 1), std::invalid_argument);
    EXPECT_THROW(eigenbasis(op, 0), std::invalid_argument);
}

TEST(Eigenbasis, ScalesLinearlyAndObeysRayleighBounds) {
    const auto mesh = interval_mesh(0.4, 80);
    const auto base = eigenbasis(assemble(mesh, DiffusionField(3.0, 0.7)), 10);
    const auto scaled = eigenbasis(assemble(mesh, DiffusionField(3.0 * 2.5, 0.7 * 2.5)), 10);
    const auto unit = eigenbasis(assemble(mesh, DiffusionField(1.0, 1.0)), 10);
    for (std::size_t j = 0; j < 10; ++j) {
        EXPECT_NEAR(scaled.eigenvalue(j), 2.5 * base.eigenvalue(j), 1e-10 * scaled.eigenvalue(j));
        EXPECT_GE(base.eigenvalue(j), 0.7 * unit.eigenvalue(j) * (1 - 1e-12));
        EXPECT_LE(base.eigenvalue(j), 3.0 * unit.eigenvalue(j) * (1 + 1e-12));
    }
}

TEST(Eigenbasis, RadialBallFirstEigenvalue) {
    // b = 1 on the unit ball in 3D: lambda_1 = pi^2 (u = sin(pi r) / r).
    const auto g = build_geometry(GeometryKind::radial, 3, 0.5, 1.0);
    const auto op = assemble(build_mesh(g, 1.0 / 256), DiffusionField(1.0, 1.0));
    const double pi2 = std::numbers::pi * std::numbers::pi;
    EXPECT_NEAR(eigenbasis(op, 1).eigenvalue(0), pi2, 1e-3 * pi2);
}

TEST(Projection, OrthogonalProjectorProperties) {
    const auto op = assemble(interval_mesh(0.3, 60), DiffusionField(4.0, 1.0));
    const auto basis = eigenbasis(op, 30);
    EXPECT_LT(norm(op, projection_p(basis, basis.mode(1), 1), NormKind::H), 1e-12);
    for (std::size_t j = 0; j < 5; ++j)
        EXPECT_LT((projection_p(basis, basis.mode(j), 10) - basis.mode(j)).cwiseAbs().maxCoeff(), 1e-12);

    for (unsigned s = 0; s < 100; ++s) {
        std::srand(s);
        const Field u = Field::Random(op.node_count());  // general L2 field, boundary values included
        const double hu = norm(op, u, NormKind::H);
        for (std::size_t n : {1u, 5u, 17u, 30u}) {
            const Field p = projection_p(basis, u, n);
            const Field q = projection_q(basis, u, n);
            ASSERT_LE(norm(op, p, NormKind::H), hu * (1.0 + 1e-12));
            ASSERT_LT((projection_p(basis, p, n) - p).cwiseAbs().maxCoeff(), 1e-10);
            ASSERT_LT(std::abs(inner_h(op, p, q)), 1e-10);
        }
    }
}

TEST(Norms, DefinitionsAndEigenrelation) {
    const auto op = assemble(interval_mesh(0.5, 64), DiffusionField(4.0, 1.0));
    const Field z = op.zero_field();
    for (auto k : {NormKind::H, NormKind::V, NormKind::V_semi, NormKind::DA}) EXPECT_EQ(norm(op, z, k), 0.0);
    for (unsigned s = 0; s < 50; ++s) {
        const Field u = random_state(op, s);
        EXPECT_GE(norm(op, u, NormKind::V), norm(op, u, NormKind::H));
        EXPECT_GE(norm(op, u, NormKind::V), norm(op, u, NormKind::V_semi));
    }
    const auto basis = eigenbasis(op, 3);
    EXPECT_NEAR(norm(op, basis.mode(0), NormKind::H), 1.0, 1e-12);
    EXPECT_NEAR(norm(op, basis.mode(0), NormKind::DA), basis.eigenvalue(0), 1e-9 * basis.eigenvalue(0));
    EXPECT_THROW(parse_norm_kind("L7"), std::invalid_argument);
    EXPECT_EQ(parse_norm_kind("DA"), NormKind::DA);
}

TEST(SolveElliptic, PoissonClosedForm) {
    const auto op = assemble(interval_mesh(0.5, 64), DiffusionField(1.0, 1.0));
    const Field u = solve_elliptic(op, Field::Ones(op.node_count()));
    const double h = 1.0 / 64;
    for (Eigen::Index i = 0; i < u.size(); ++i)
        EXPECT_NEAR(u(i), oracle::poisson_unit(op.mesh().nodes[static_cast<std::size_t>(i)]), h * h);
    EXPECT_NEAR(u(32), 0.125, h * h);
}

TEST(SolveElliptic, InvertsEigenrelationAndOperator) {
    const auto op = assemble(interval_mesh(0.3, 64), DiffusionField(4.0, 1.0));
    const auto basis = eigenbasis(op, 2);
    const Field w1 = basis.mode(0);
    EXPECT_LT((solve_elliptic(op, w1) - w1 / basis.eigenvalue(0)).cwiseAbs().maxCoeff(), 1e-12);
    for (unsigned s = 0; s < 10; ++s) {
        const Field u = random_state(op, s);
        EXPECT_LT((solve_elliptic(op, op.apply(u)) - u).cwiseAbs().maxCoeff(), 1e-8);
    }
}

TEST(SolveElliptic, InterfaceFluxJumpVanishesUnderRefinement) {
    double previous = INFINITY;
    for (std::size_t n : {32u, 64u, 128u, 256u}) {
        const auto op = assemble(interval_mesh(0.5, n), DiffusionField(4.0, 1.0));
        const Field u = solve_elliptic(op, Field::Ones(op.node_count()));
        const auto k = static_cast<Eigen::Index>(op.mesh().interface_index);
        const double h = 1.0 / static_cast<double>(n);
        const double jump = std::abs(4.0 * (u(k) - u(k - 1)) / h - 1.0 * (u(k + 1) - u(k)) / h);
        EXPECT_LT(jump, previous);
        previous = jump;
    }
    EXPECT_LT(previous, 5e-3);
}
