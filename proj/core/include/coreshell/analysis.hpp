#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "coreshell/geometry.hpp"
#include "coreshell/operators.hpp"
#include "coreshell/reactions.hpp"
#include "coreshell/solvers.hpp"

namespace coreshell {

/// Signed margins of the a priori estimates along one trajectory.
///
/// Time integrals follow the discrete energy identities of IMEX Euler: the
/// gradient integral uses the implicitly treated (new) state of each step,
/// the forcing integral the explicitly treated (old) one. With these
/// quadratures the weak inequality holds up to slack_constant * dt, where
/// slack_constant = 1/2 * int ||P f||^2, and the strong inequality holds
/// exactly.
struct EnergyReport {
    double k_bound = 0.0;
    double t_final = 0.0;
    double dt = 0.0;
    double b_min = 0.0;
    double b_max = 0.0;
    double gamma = 0.0;           // K T + 1/2 ||u0||^2
    double slack_constant = 0.0;  // C in the C * dt tolerance

    std::vector<double> times;
    std::vector<double> weak_margins;    // K t + 1/2||u0||^2 - 1/2||u(t)||^2 - b_min int ||grad u||^2
    std::vector<double> strong_margins;  // a(u0) + int ||P f||^2 - a(u(t))

    double sup_h_norm_sq = 0.0;
    double sup_margin = 0.0;       // 2 gamma - sup ||u||^2
    double grad_integral = 0.0;
    double integral_margin = 0.0;  // gamma / b_min - int ||grad u||^2
    double strong_margin = 0.0;    // final-time strong margin
    /// int ||P f||^2 - (b_min ||grad u(T)||^2 - b_max ||grad u(0)||^2)
    double weighted_strong_margin = 0.0;
    double max_u_f_inner = 0.0;
    double max_f_norm = 0.0;

    double worst_weak_margin = 0.0;
    double worst_strong_margin = 0.0;

    bool weak_pass = false;
    bool sup_pass = false;
    bool integral_pass = false;
    bool strong_pass = false;
    bool admissibility_pass = false;

    double tolerance() const noexcept { return slack_constant * dt; }
    bool pass() const noexcept {
        return weak_pass && sup_pass && integral_pass && strong_pass && admissibility_pass;
    }
};

EnergyReport energy_report(const Trajectory& trajectory, double k_bound, const DiffractionOperator& op);
EnergyReport energy_report(const Trajectory& trajectory, const ReactionTerm& term,
                           const CoreShellGeometry& geometry, const DiffractionOperator& op);

/// b1 u'(interface-) - b2 u'(interface+) from the two adjacent elements.
double flux_jump(const DiffractionOperator& op, const Field& u);

struct DependenceReport {
    double lipschitz = 0.0;
    double initial_h_distance = 0.0;
    double initial_v_distance_sq = 0.0;
    std::vector<double> times;
    std::vector<double> h_ratios;  // ||w(t)||_H / (||w0||_H e^{L t})
    std::vector<double> v_ratios;  // ||w(t)||_V^2 / ((b_max/b_min) ||w0||_V^2 e^{L^2 t / b_min})
    double worst_h_ratio = 0.0;
    double worst_v_ratio = 0.0;
    bool h_pass = false;
    bool v_pass = false;
    bool pass() const noexcept { return h_pass && v_pass; }
};

/// Integrates u0 and v0 with fem_solve on identical discretizations and
/// checks both continuous-dependence bounds at every stored sample.
DependenceReport dependence_check(const DiffractionOperator& op, const ReactionTerm& term, const Field& u0,
                                  const Field& v0, const SolveConfig& config);

/// Reproducible uniform doubles in [0, 1) from a 64-bit Mersenne twister.
class AuditRng {
public:
    explicit AuditRng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 engine_;
};

/// Random free-node field scaled to the given H-norm.
Field random_perturbation(const DiffractionOperator& op, AuditRng& rng, double h_norm);

struct AdmissibilityAudit {
    double k_bound = 0.0;
    std::size_t samples = 0;
    double max_u_f_inner = 0.0;
    double max_f_norm = 0.0;
    bool pass = false;
};

/// Samples nodewise uniform fields on [-2 c0, 2 c0] and compares (u, f(u))_H
/// and ||f(u)||_H against K.
AdmissibilityAudit admissibility_audit(const DiffractionOperator& op, const ReactionTerm& term, double k_bound,
                                       std::size_t samples, std::uint64_t seed);

struct ConvergenceRow {
    std::size_t modes = 0;
    double relative_error = 0.0;
};

/// Relative final-time H-error of galerkin_solve against fem_solve.
std::vector<ConvergenceRow> galerkin_convergence(const DiffractionOperator& op, const ReactionTerm& term,
                                                 const SolveConfig& config,
                                                 const std::vector<std::size_t>& mode_counts);

struct MeshRow {
    std::size_t elements = 0;
    double h = 0.0;
    double final_error = 0.0;  // max nodal difference to the finest level at shared nodes
    double error_order = 0.0;
    double flux_jump = 0.0;    // of the stationary state
    double flux_order = 0.0;
    std::size_t newton_iterations = 0;
    double newton_residual = 0.0;
};

/// Successive bisection of base_mesh. Orders are log2 ratios against the
/// previous row (0 on the first row).
std::vector<MeshRow> mesh_convergence(const Mesh& base_mesh, const DiffusionField& diffusion,
                                      const ReactionTerm& term, const SolveConfig& config, std::size_t levels);

struct RegularizationRow {
    double width = 0.0;
    double discrepancy = 0.0;  // [int ||u_eps - u||_H^2 dt]^(1/2)
    double regularity = 0.0;   // max second difference near the interface
};

/// Runs fem_solve with the smoothstep diffusivity for every width and
/// compares against the sharp-interface solution on the same mesh. Throws
/// std::invalid_argument unless the mesh puts at least 8 elements inside the
/// narrowest ramp.
std::vector<RegularizationRow> regularization_study(const Mesh& mesh, const DiffusionField& diffusion,
                                                    const ReactionTerm& term, const SolveConfig& config,
                                                    const std::vector<double>& widths);

/// Maximum over interior nodes with |x - interface| <= window of the nodal
/// second difference.
double interface_second_difference(const Mesh& mesh, const Field& u, double window);

/// ||u(t) - target||_H at every stored FEM sample.
std::vector<double> distance_to_state(const DiffractionOperator& op, const Trajectory& trajectory,
                                      const Field& target);

}  // namespace coreshell
