#pragma once

#include <cstddef>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "coreshell/operators.hpp"
#include "coreshell/reactions.hpp"

namespace coreshell {

/// Raised on blow-up (non-finite state) or Newton non-convergence.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Scheme { imex_euler, exponential_euler };
Scheme parse_scheme(std::string_view name);
std::string_view to_string(Scheme scheme) noexcept;

struct InitialCondition {
    enum class Kind { zero, mode, table };
    Kind kind = Kind::zero;
    std::size_t mode = 1;          // 1-based eigenmode index for Kind::mode
    std::vector<double> values;    // nodal values for Kind::table

    static InitialCondition zero_state() { return {}; }
    static InitialCondition single_mode(std::size_t j) { return {Kind::mode, j, {}}; }
    static InitialCondition table(std::vector<double> v) { return {Kind::table, 1, std::move(v)}; }
};

/// Realizes the initial condition on the operator's mesh. Table values at
/// Dirichlet nodes are pinned to zero.
Field initial_field(const DiffractionOperator& op, const InitialCondition& initial);

struct SolveConfig {
    double t_final = 1.0;
    double dt = 1e-3;
    std::size_t modes = 1;
    Scheme scheme = Scheme::imex_euler;
    InitialCondition initial;
    /// States are stored every snapshot_stride steps (and at t_final).
    std::size_t snapshot_stride = 1;

    /// Throws std::invalid_argument on T <= 0, dt <= 0, dt > T or n = 0.
    void validate() const;
    /// Number of uniform steps; the step actually used is t_final / steps().
    std::size_t steps() const;
    double step_size() const { return t_final / static_cast<double>(steps()); }
};

/// Norms of one state u_k together with the forcing used to leave it.
struct NormRecord {
    double t = 0.0;
    double h_norm_sq = 0.0;       // ||u||_H^2
    double grad_norm_sq = 0.0;    // ||grad u||_H^2
    double v_norm_sq = 0.0;       // ||u||_V^2
    double da_norm_sq = 0.0;      // ||A u||_H^2
    double u_f_inner = 0.0;       // (u, f(u))_H
    double a_form = 0.0;          // a(u, u)
    double f_norm_sq = 0.0;       // ||f(u)||_H^2
    double proj_f_norm_sq = 0.0;  // ||P f(u)||_H^2, P the projection used by the scheme
};

struct Trajectory {
    bool modal = false;
    double dt = 0.0;
    std::vector<double> times;
    /// Modal coefficients (Galerkin) or nodal fields (FEM), one per time.
    std::vector<Eigen::VectorXd> states;
    /// One record per step, including t = 0 and t = T.
    std::vector<NormRecord> records;
    Field initial_state;
    Field final_state;
};

/// Spectral Galerkin integration of dv/dt + A v = P_n f(v), v(0) = P_n u0.
/// P_n f is recomputed every step by reconstructing v on the mesh, applying
/// f nodewise and projecting back onto the first n modes.
Trajectory galerkin_solve(const EigenBasis& basis, const ReactionTerm& term, const SolveConfig& config);
Trajectory galerkin_solve(const EigenBasis& basis, const ReactionTerm& term, const SolveConfig& config,
                          const Field& u0);

/// Nodal method of lines, (M + dt K) u+ = M (u + dt f(u)). Ignores config.modes
/// and config.scheme.
Trajectory fem_solve(const DiffractionOperator& op, const ReactionTerm& term, const SolveConfig& config);
Trajectory fem_solve(const DiffractionOperator& op, const ReactionTerm& term, const SolveConfig& config,
                     const Field& u0);

struct StationaryOptions {
    double tolerance = 1e-10;
    std::size_t max_iterations = 50;
};

struct StationaryResult {
    Field state;
    std::size_t iterations = 0;
    double residual = 0.0;
    std::vector<double> residual_history;
};

/// Damped Newton on K u = M f(u). The residual is measured as the H-norm of
/// the strong residual field M^-1 (K u - M f(u)).
StationaryResult stationary_solve(const DiffractionOperator& op, const ReactionTerm& term,
                                  const Field& initial_guess, const StationaryOptions& options = {});

/// H-norm of the strong residual at u.
double stationary_residual(const DiffractionOperator& op, const ReactionTerm& term, const Field& u);

}  // namespace coreshell
