#include "coreshell/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace coreshell {

EnergyReport energy_report(const Trajectory& trajectory, double k_bound, const DiffractionOperator& op) {
    const auto& rec = trajectory.records;
    if (rec.size() < 2) throw std::invalid_argument("energy_report: trajectory has no steps");

    EnergyReport r;
    r.k_bound = k_bound;
    r.dt = trajectory.dt;
    r.t_final = rec.back().t;
    r.b_min = op.diffusion().b_min();
    r.b_max = op.diffusion().b_max();
    const double half_u0 = 0.5 * rec.front().h_norm_sq;
    r.gamma = k_bound * r.t_final + half_u0;

    double forcing_integral = 0.0;
    for (std::size_t k = 0; k + 1 < rec.size(); ++k) forcing_integral += r.dt * rec[k].proj_f_norm_sq;
    r.slack_constant = 0.5 * forcing_integral;

    r.times.reserve(rec.size());
    r.weak_margins.reserve(rec.size());
    r.strong_margins.reserve(rec.size());
    double grad_integral = 0.0;
    double forcing_so_far = 0.0;
    r.worst_weak_margin = std::numeric_limits<double>::infinity();
    r.worst_strong_margin = std::numeric_limits<double>::infinity();
    r.max_u_f_inner = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < rec.size(); ++k) {
        if (k > 0) {
            grad_integral += r.dt * rec[k].grad_norm_sq;
            forcing_so_far += r.dt * rec[k - 1].proj_f_norm_sq;
        }
        const double weak = k_bound * rec[k].t + half_u0 - 0.5 * rec[k].h_norm_sq - r.b_min * grad_integral;
        const double strong = rec.front().a_form + forcing_so_far - rec[k].a_form;
        r.times.push_back(rec[k].t);
        r.weak_margins.push_back(weak);
        r.strong_margins.push_back(strong);
        r.worst_weak_margin = std::min(r.worst_weak_margin, weak);
        r.worst_strong_margin = std::min(r.worst_strong_margin, strong);
        r.sup_h_norm_sq = std::max(r.sup_h_norm_sq, rec[k].h_norm_sq);
        r.max_u_f_inner = std::max(r.max_u_f_inner, rec[k].u_f_inner);
        r.max_f_norm = std::max(r.max_f_norm, std::sqrt(rec[k].f_norm_sq));
    }
    r.grad_integral = grad_integral;
    r.sup_margin = 2.0 * r.gamma - r.sup_h_norm_sq;
    r.integral_margin = r.gamma / r.b_min - grad_integral;
    r.strong_margin = r.strong_margins.back();
    r.weighted_strong_margin =
        forcing_so_far - (r.b_min * rec.back().grad_norm_sq - r.b_max * rec.front().grad_norm_sq);

    const double tol = r.tolerance();
    r.weak_pass = r.worst_weak_margin >= -tol;
    r.sup_pass = r.sup_margin >= -2.0 * tol;
    r.integral_pass = r.integral_margin >= -tol / r.b_min;
    r.strong_pass = r.worst_strong_margin >= -tol && r.weighted_strong_margin >= -tol;
    r.admissibility_pass = r.max_u_f_inner <= k_bound && r.max_f_norm <= k_bound;
    return r;
}

EnergyReport energy_report(const Trajectory& trajectory, const ReactionTerm& term,
                           const CoreShellGeometry& geometry, const DiffractionOperator& op) {
    return energy_report(trajectory, certify_admissibility(term, geometry), op);
}

double flux_jump(const DiffractionOperator& op, const Field& u) {
    const Mesh& mesh = op.mesh();
    if (u.size() != op.node_count()) throw std::invalid_argument("flux_jump: dimension mismatch");
    const std::size_t k = mesh.interface_index;
    const auto i = static_cast<Eigen::Index>(k);
    const double left = (u(i) - u(i - 1)) / (mesh.nodes[k] - mesh.nodes[k - 1]);
    const double right = (u(i + 1) - u(i)) / (mesh.nodes[k + 1] - mesh.nodes[k]);
    return op.diffusion().b1() * left - op.diffusion().b2() * right;
}

namespace {

double safe_ratio(double num, double den) {
    if (den > 0.0) return num / den;
    return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

}  // namespace

DependenceReport dependence_check(const DiffractionOperator& op, const ReactionTerm& term, const Field& u0,
                                  const Field& v0, const SolveConfig& config) {
    DependenceReport r;
    r.lipschitz = certify_lipschitz(term);
    const Trajectory tu = fem_solve(op, term, config, u0);
    const Trajectory tv = fem_solve(op, term, config, v0);

    const Field w0 = tu.initial_state - tv.initial_state;
    r.initial_h_distance = norm(op, w0, NormKind::H);
    const double v0_sq = std::pow(norm(op, w0, NormKind::V), 2);
    r.initial_v_distance_sq = v0_sq;
    const double b_ratio = op.diffusion().b_max() / op.diffusion().b_min();
    const double l = r.lipschitz;

    for (std::size_t s = 0; s < tu.times.size(); ++s) {
        const double t = tu.times[s];
        const Field w = tu.states[s] - tv.states[s];
        const double h_ratio = safe_ratio(norm(op, w, NormKind::H), r.initial_h_distance * std::exp(l * t));
        const double v_ratio = safe_ratio(std::pow(norm(op, w, NormKind::V), 2),
                                          b_ratio * v0_sq * std::exp(l * l * t / op.diffusion().b_min()));
        r.times.push_back(t);
        r.h_ratios.push_back(h_ratio);
        r.v_ratios.push_back(v_ratio);
        r.worst_h_ratio = std::max(r.worst_h_ratio, h_ratio);
        r.worst_v_ratio = std::max(r.worst_v_ratio, v_ratio);
    }
    r.h_pass = r.worst_h_ratio <= 1.0;
    r.v_pass = r.worst_v_ratio <= 1.0;
    return r;
}

Field random_perturbation(const DiffractionOperator& op, AuditRng& rng, double h_norm) {
    Eigen::VectorXd free(op.free_count());
    for (Eigen::Index i = 0; i < free.size(); ++i) free(i) = rng.uniform(-1.0, 1.0);
    Field w = op.extend(free);
    return w * (h_norm / norm(op, w, NormKind::H));
}

AdmissibilityAudit admissibility_audit(const DiffractionOperator& op, const ReactionTerm& term, double k_bound,
                                       std::size_t samples, std::uint64_t seed) {
    AdmissibilityAudit audit;
    audit.k_bound = k_bound;
    audit.samples = samples;
    audit.max_u_f_inner = -std::numeric_limits<double>::infinity();
    AuditRng rng(seed);
    const double c0 = term.c0();
    Field u(op.node_count());
    for (std::size_t s = 0; s < samples; ++s) {
        for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = rng.uniform(-2.0 * c0, 2.0 * c0);
        const Field f = apply_f(term, u);
        audit.max_u_f_inner = std::max(audit.max_u_f_inner, inner_h(op, u, f));
        audit.max_f_norm = std::max(audit.max_f_norm, norm(op, f, NormKind::H));
    }
    audit.pass = audit.max_u_f_inner <= k_bound && audit.max_f_norm <= k_bound;
    return audit;
}

std::vector<ConvergenceRow> galerkin_convergence(const DiffractionOperator& op, const ReactionTerm& term,
                                                 const SolveConfig& config,
                                                 const std::vector<std::size_t>& mode_counts) {
    if (mode_counts.empty()) return {};
    if (!std::is_sorted(mode_counts.begin(), mode_counts.end()))
        throw std::invalid_argument("mode_counts must be ascending");
    const Field u0 = initial_field(op, config.initial);
    const Trajectory reference = fem_solve(op, term, config, u0);
    const double ref_norm = norm(op, reference.final_state, NormKind::H);
    const EigenBasis basis = eigenbasis(op, mode_counts.back());

    std::vector<ConvergenceRow> rows;
    for (std::size_t n : mode_counts) {
        SolveConfig c = config;
        c.modes = n;
        c.snapshot_stride = c.steps();
        const Trajectory g = galerkin_solve(basis, term, c, u0);
        const double err = norm(op, g.final_state - reference.final_state, NormKind::H);
        rows.push_back({n, ref_norm > 0.0 ? err / ref_norm : err});
    }
    return rows;
}

std::vector<MeshRow> mesh_convergence(const Mesh& base_mesh, const DiffusionField& diffusion,
                                      const ReactionTerm& term, const SolveConfig& config, std::size_t levels) {
    if (levels == 0) return {};
    std::vector<Mesh> meshes{base_mesh};
    for (std::size_t l = 1; l < levels; ++l) meshes.push_back(refine(meshes.back()));

    std::vector<Field> finals;
    std::vector<MeshRow> rows;
    for (const Mesh& mesh : meshes) {
        const DiffractionOperator op = assemble(mesh, diffusion);
        SolveConfig c = config;
        c.snapshot_stride = c.steps();
        const Trajectory traj = fem_solve(op, term, c);
        finals.push_back(traj.final_state);
        const StationaryResult stat = stationary_solve(op, term, op.zero_field());

        MeshRow row;
        row.elements = mesh.element_count();
        row.h = mesh.max_element_size();
        row.flux_jump = flux_jump(op, stat.state);
        row.newton_iterations = stat.iterations;
        row.newton_residual = stat.residual;
        rows.push_back(row);
    }

    const Field& finest = finals.back();
    for (std::size_t l = 0; l < rows.size(); ++l) {
        const std::size_t stride = std::size_t{1} << (rows.size() - 1 - l);
        double err = 0.0;
        for (Eigen::Index i = 0; i < finals[l].size(); ++i)
            err = std::max(err, std::abs(finals[l](i) - finest(i * static_cast<Eigen::Index>(stride))));
        rows[l].final_error = err;
        if (l > 0) {
            rows[l].flux_order = std::log2(std::abs(rows[l - 1].flux_jump) / std::abs(rows[l].flux_jump));
            if (l + 1 < rows.size())
                rows[l].error_order = std::log2(rows[l - 1].final_error / rows[l].final_error);
        }
    }
    return rows;
}

double interface_second_difference(const Mesh& mesh, const Field& u, double window) {
    const double gamma = mesh.interface_position();
    double best = 0.0;
    for (std::size_t i = 1; i + 1 < mesh.node_count(); ++i) {
        if (std::abs(mesh.nodes[i] - gamma) > window) continue;
        const double hl = mesh.nodes[i] - mesh.nodes[i - 1];
        const double hr = mesh.nodes[i + 1] - mesh.nodes[i];
        const auto k = static_cast<Eigen::Index>(i);
        const double d2 = 2.0 * ((u(k + 1) - u(k)) / hr - (u(k) - u(k - 1)) / hl) / (hl + hr);
        best = std::max(best, std::abs(d2));
    }
    return best;
}

std::vector<RegularizationRow> regularization_study(const Mesh& mesh, const DiffusionField& diffusion,
                                                    const ReactionTerm& term, const SolveConfig& config,
                                                    const std::vector<double>& widths) {
    if (widths.empty()) return {};
    for (std::size_t i = 0; i < widths.size(); ++i) {
        if (!(widths[i] > 0.0)) throw std::invalid_argument("regularization widths must be positive");
        if (i > 0 && !(widths[i] < widths[i - 1]))
            throw std::invalid_argument("regularization widths must be strictly descending");
    }
    const double h = mesh.max_element_size();
    if (widths.back() < 8.0 * h)
        throw std::invalid_argument("mesh too coarse: need at least 8 elements inside the narrowest ramp");

    SolveConfig c = config;
    c.snapshot_stride = 1;
    const DiffractionOperator sharp = assemble(mesh, DiffusionField(diffusion.b1(), diffusion.b2()));
    const Field u0 = initial_field(sharp, c.initial);
    const Trajectory reference = fem_solve(sharp, term, c, u0);

    std::vector<RegularizationRow> rows;
    for (double eps : widths) {
        const DiffractionOperator op = assemble(mesh, DiffusionField(diffusion.b1(), diffusion.b2(), eps));
        const Trajectory traj = fem_solve(op, term, c, u0);
        double sq = 0.0;
        double reg = 0.0;
        const double window = 0.5 * eps + h;
        for (std::size_t s = 0; s < traj.states.size(); ++s) {
            if (s + 1 < traj.states.size()) {
                const Field d = traj.states[s] - reference.states[s];
                sq += traj.dt * inner_h(sharp, d, d);
            }
            reg = std::max(reg, interface_second_difference(mesh, traj.states[s], window));
        }
        rows.push_back({eps, std::sqrt(sq), reg});
    }
    return rows;
}

std::vector<double> distance_to_state(const DiffractionOperator& op, const Trajectory& trajectory,
                                      const Field& target) {
    if (trajectory.modal) throw std::invalid_argument("distance_to_state expects a nodal trajectory");
    std::vector<double> out;
    out.reserve(trajectory.states.size());
    for (const auto& s : trajectory.states) out.push_back(norm(op, s - target, NormKind::H));
    return out;
}

}  // namespace coreshell
