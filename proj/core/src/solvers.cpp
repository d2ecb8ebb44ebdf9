#include "coreshell/solvers.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace coreshell {

Scheme parse_scheme(std::string_view name) {
    if (name == "imex_euler") return Scheme::imex_euler;
    if (name == "exponential_euler") return Scheme::exponential_euler;
    throw std::invalid_argument("unknown scheme: " + std::string(name));
}

std::string_view to_string(Scheme scheme) noexcept {
    return scheme == Scheme::imex_euler ? "imex_euler" : "exponential_euler";
}

void SolveConfig::validate() const {
    if (!(t_final > 0.0) || !std::isfinite(t_final)) throw std::invalid_argument("t_final must be positive");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
    if (dt > t_final) throw std::invalid_argument("dt must not exceed t_final");
    if (modes == 0) throw std::invalid_argument("modes must be at least 1");
    if (snapshot_stride == 0) throw std::invalid_argument("snapshot_stride must be at least 1");
}

std::size_t SolveConfig::steps() const {
    const double ratio = t_final / dt;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) <= 1e-9 * ratio) return static_cast<std::size_t>(rounded);
    return static_cast<std::size_t>(std::ceil(ratio));
}

Field initial_field(const DiffractionOperator& op, const InitialCondition& initial) {
    switch (initial.kind) {
        case InitialCondition::Kind::zero:
            return op.zero_field();
        case InitialCondition::Kind::mode: {
            if (initial.mode == 0) throw std::invalid_argument("initial mode index is 1-based");
            return eigenbasis(op, initial.mode).mode(initial.mode - 1);
        }
        case InitialCondition::Kind::table: {
            if (static_cast<Eigen::Index>(initial.values.size()) != op.node_count())
                throw std::invalid_argument("initial table has " + std::to_string(initial.values.size()) +
                                            " values, mesh has " + std::to_string(op.node_count()) + " nodes");
            Field u = Eigen::Map<const Eigen::VectorXd>(initial.values.data(), op.node_count());
            return op.extend(op.restrict_free(u));
        }
    }
    return op.zero_field();
}

namespace {

NormRecord record_state(const DiffractionOperator& op, double t, const Field& u, const Field& f,
                        double proj_f_norm_sq) {
    NormRecord r;
    r.t = t;
    const Eigen::VectorXd mu = op.full_mass() * u;
    r.h_norm_sq = u.dot(mu);
    r.grad_norm_sq = u.dot(op.full_unit_stiffness() * u);
    r.v_norm_sq = r.h_norm_sq + r.grad_norm_sq;
    const Eigen::VectorXd ku = op.restrict_free(op.full_stiffness() * u);
    r.a_form = u.segment(op.first_free(), op.free_count()).dot(ku);
    r.da_norm_sq = ku.dot(op.mass_factor().solve(ku));
    r.u_f_inner = mu.dot(f);
    r.f_norm_sq = f.dot(op.full_mass() * f);
    r.proj_f_norm_sq = proj_f_norm_sq;
    return r;
}

void check_finite(const Eigen::VectorXd& x, std::size_t step, double t) {
    if (!x.allFinite()) {
        std::ostringstream msg;
        msg << "non-finite state at step " << step << " (t = " << t
            << "); blow-up contradicts global existence, check dt and the reaction term";
        throw SolverError(msg.str());
    }
}

bool keep_snapshot(std::size_t step, std::size_t steps, std::size_t stride) {
    return step % stride == 0 || step == steps;
}

}  // namespace

Trajectory galerkin_solve(const EigenBasis& basis, const ReactionTerm& term, const SolveConfig& config) {
    return galerkin_solve(basis, term, config, initial_field(basis.op(), config.initial));
}

Trajectory galerkin_solve(const EigenBasis& basis, const ReactionTerm& term, const SolveConfig& config,
                          const Field& u0) {
    config.validate();
    if (config.modes > basis.size())
        throw std::invalid_argument("modes exceeds eigenbasis size");
    const DiffractionOperator& op = basis.op();
    const auto n = static_cast<Eigen::Index>(config.modes);
    const Eigen::MatrixXd w = basis.vectors().leftCols(n);
    const Eigen::VectorXd lambda = basis.eigenvalues().head(n);
    const std::size_t steps = config.steps();
    const double dt = config.step_size();

    Eigen::VectorXd decay(n), gain(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        if (config.scheme == Scheme::imex_euler) {
            decay(j) = 1.0 / (1.0 + dt * lambda(j));
            gain(j) = dt * decay(j);
        } else {
            decay(j) = std::exp(-lambda(j) * dt);
            gain(j) = -std::expm1(-lambda(j) * dt) / lambda(j);
        }
    }

    Trajectory traj;
    traj.modal = true;
    traj.dt = dt;
    traj.records.reserve(steps + 1);

    Eigen::VectorXd c = w.transpose() * op.load(u0);
    Field u = op.extend(w * c);
    traj.initial_state = u;
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * dt;
        const Field f = apply_f(term, u);
        const Eigen::VectorXd forcing = w.transpose() * op.load(f);
        traj.records.push_back(record_state(op, t, u, f, forcing.squaredNorm()));
        if (keep_snapshot(k, steps, config.snapshot_stride)) {
            traj.times.push_back(t);
            traj.states.push_back(c);
        }
        if (k == steps) break;
        c = decay.cwiseProduct(c) + gain.cwiseProduct(forcing);
        check_finite(c, k + 1, t + dt);
        u = op.extend(w * c);
    }
    traj.final_state = u;
    return traj;
}

Trajectory fem_solve(const DiffractionOperator& op, const ReactionTerm& term, const SolveConfig& config) {
    return fem_solve(op, term, config, initial_field(op, config.initial));
}

Trajectory fem_solve(const DiffractionOperator& op, const ReactionTerm& term, const SolveConfig& config,
                     const Field& u0) {
    config.validate();
    const std::size_t steps = config.steps();
    const double dt = config.step_size();
    const TridiagonalCholesky lhs(op.mass().axpy(dt, op.stiffness()));

    Trajectory traj;
    traj.modal = false;
    traj.dt = dt;
    traj.records.reserve(steps + 1);

    Field u = op.extend(op.restrict_free(u0));
    traj.initial_state = u;
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * dt;
        const Field f = apply_f(term, u);
        const Eigen::VectorXd load_f = op.load(f);
        traj.records.push_back(record_state(op, t, u, f, load_f.dot(op.mass_factor().solve(load_f))));
        if (keep_snapshot(k, steps, config.snapshot_stride)) {
            traj.times.push_back(t);
            traj.states.push_back(u);
        }
        if (k == steps) break;
        const Eigen::VectorXd next = lhs.solve(op.load(u) + dt * load_f);
        check_finite(next, k + 1, t + dt);
        u = op.extend(next);
    }
    traj.final_state = u;
    return traj;
}

namespace {

Eigen::VectorXd residual_vector(const DiffractionOperator& op, const ReactionTerm& term, const Field& u) {
    return op.restrict_free(op.full_stiffness() * u) - op.load(apply_f(term, u));
}

double residual_norm(const DiffractionOperator& op, const Eigen::VectorXd& r) {
    return std::sqrt(std::max(0.0, r.dot(op.mass_factor().solve(r))));
}

}  // namespace

double stationary_residual(const DiffractionOperator& op, const ReactionTerm& term, const Field& u) {
    return residual_norm(op, residual_vector(op, term, u));
}

StationaryResult stationary_solve(const DiffractionOperator& op, const ReactionTerm& term,
                                  const Field& initial_guess, const StationaryOptions& options) {
    StationaryResult result;
    Field u = op.extend(op.restrict_free(initial_guess));
    Eigen::VectorXd r = residual_vector(op, term, u);
    double rnorm = residual_norm(op, r);
    result.residual_history.push_back(rnorm);

    const Eigen::Index first = op.first_free();
    const Eigen::Index count = op.free_count();
    const SymTridiagonal& k = op.stiffness();
    const SymTridiagonal& m = op.mass();

    while (rnorm >= options.tolerance) {
        if (result.iterations >= options.max_iterations) {
            std::ostringstream msg;
            msg << "Newton did not converge in " << options.max_iterations
                << " iterations; last residual " << rnorm;
            throw SolverError(msg.str());
        }
        // J = K - M diag(f'(u)) on the free block.
        const Eigen::VectorXd fp = apply_f_prime(term, u).segment(first, count);
        const Eigen::VectorXd diag = k.diag - m.diag.cwiseProduct(fp);
        const Eigen::VectorXd super = k.off - m.off.cwiseProduct(fp.tail(count - 1));
        const Eigen::VectorXd sub = k.off - m.off.cwiseProduct(fp.head(count - 1));
        const Eigen::VectorXd delta = solve_tridiagonal(sub, diag, super, -r);

        double alpha = 1.0;
        Field trial;
        Eigen::VectorXd trial_r;
        double trial_norm = 0.0;
        for (int halvings = 0;; ++halvings) {
            trial = u;
            trial.segment(first, count) += alpha * delta;
            trial_r = residual_vector(op, term, trial);
            trial_norm = residual_norm(op, trial_r);
            if (trial_norm <= rnorm || halvings == 30) break;
            alpha *= 0.5;
        }
        if (!std::isfinite(trial_norm)) throw SolverError("Newton produced a non-finite residual");
        u = std::move(trial);
        r = std::move(trial_r);
        rnorm = trial_norm;
        ++result.iterations;
        result.residual_history.push_back(rnorm);
    }
    result.state = std::move(u);
    result.residual = rnorm;
    return result;
}

}  // namespace coreshell
