#include "coreshell/runner.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <json.hpp>

#include "coreshell/analysis.hpp"

namespace coreshell {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const fs::path& path, const std::string& header) : out_(path) {
        if (!out_) throw std::runtime_error("cannot write " + path.string());
        out_ << header << '\n';
    }
    template <class... Ts>
    void row(const Ts&... values) {
        bool first = true;
        ((out_ << (first ? "" : ",") << cell(values), first = false), ...);
        out_ << '\n';
    }

private:
    static std::string cell(double v) { return num(v); }
    static std::string cell(std::size_t v) { return std::to_string(v); }
    static std::string cell(int v) { return std::to_string(v); }
    std::ofstream out_;
};

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

struct Context {
    const ExperimentConfig& cfg;
    fs::path dir;
    std::uint64_t seed;
    bool quiet;
    std::ostream& console;

    void note(const std::string& line) const {
        if (!quiet) console << line << '\n';
    }
};

Trajectory integrate(const Context& ctx, const DiffractionOperator& op, const ReactionTerm& term,
                     const SolveConfig& solve) {
    if (ctx.cfg.solver == SolverKind::fem) return fem_solve(op, term, solve);
    const EigenBasis basis = eigenbasis(op, solve.modes);
    return galerkin_solve(basis, term, solve);
}

SolveConfig solve_config(const ExperimentConfig& cfg) {
    SolveConfig s = cfg.solve;
    s.snapshot_stride = cfg.snapshot_stride == 0 ? s.steps() : cfg.snapshot_stride;
    return s;
}

int run_eigen(const Context& ctx) {
    const DiffractionOperator op = assemble(ctx.cfg.mesh(), ctx.cfg.diffusion());
    const EigenBasis basis = eigenbasis(op, ctx.cfg.solve.modes);
    CsvWriter values(ctx.dir / "eigenvalues.csv", "j,lambda");
    for (std::size_t j = 0; j < basis.size(); ++j) values.row(j + 1, basis.eigenvalue(j));

    std::string header = "x";
    for (std::size_t j = 0; j < basis.size(); ++j) header += ",w" + std::to_string(j + 1);
    std::ofstream vectors(ctx.dir / "eigenvectors.csv");
    vectors << header << '\n';
    std::vector<Field> modes;
    for (std::size_t j = 0; j < basis.size(); ++j) modes.push_back(basis.mode(j));
    for (Eigen::Index i = 0; i < op.node_count(); ++i) {
        vectors << num(op.mesh().nodes[static_cast<std::size_t>(i)]);
        for (const auto& m : modes) vectors << ',' << num(m(i));
        vectors << '\n';
    }
    write_json(ctx.dir / "eigen.json",
               {{"modes", basis.size()}, {"lambda_1", basis.eigenvalue(0)}, {"elements", op.mesh().element_count()}});
    ctx.note("eigen: lambda_1 = " + num(basis.eigenvalue(0)));
    return kExitPass;
}

void write_trajectory(const fs::path& path, const Trajectory& traj) {
    CsvWriter csv(path, "t,h_norm_sq,grad_norm_sq,v_norm_sq,da_norm_sq,u_f_inner");
    for (const auto& r : traj.records)
        csv.row(r.t, r.h_norm_sq, r.grad_norm_sq, r.v_norm_sq, r.da_norm_sq, r.u_f_inner);
}

int run_solve(const Context& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const CoreShellGeometry geometry = cfg.geometry();
    const DiffractionOperator op = assemble(cfg.mesh(), cfg.diffusion());
    const ReactionTerm term = cfg.reaction();
    const SolveConfig solve = solve_config(cfg);

    std::optional<EigenBasis> basis;
    Trajectory traj;
    if (cfg.solver == SolverKind::fem) {
        traj = fem_solve(op, term, solve);
    } else {
        basis = eigenbasis(op, solve.modes);
        traj = galerkin_solve(*basis, term, solve);
    }
    write_trajectory(ctx.dir / "trajectory.csv", traj);

    if (cfg.snapshot_stride > 0) {
        CsvWriter snaps(ctx.dir / "snapshots.csv", "t,x,u");
        for (std::size_t s = 0; s < traj.times.size(); ++s) {
            const Field u = traj.modal ? reconstruct(*basis, traj.states[s]) : traj.states[s];
            for (Eigen::Index i = 0; i < u.size(); ++i)
                snaps.row(traj.times[s], op.mesh().nodes[static_cast<std::size_t>(i)], u(i));
        }
    }

    json summary = {{"solver", cfg.solver == SolverKind::fem ? "fem" : "galerkin"},
                    {"scheme", std::string(to_string(solve.scheme))},
                    {"steps", solve.steps()},
                    {"dt", traj.dt},
                    {"t_final", traj.records.back().t},
                    {"modes", solve.modes},
                    {"elements", op.mesh().element_count()},
                    {"seed", ctx.seed},
                    {"final_h_norm", std::sqrt(traj.records.back().h_norm_sq)},
                    {"final_v_norm", std::sqrt(traj.records.back().v_norm_sq)}};
    bool pass = true;
    if (term.test_only()) {
        summary["admissible"] = false;
    } else {
        const double k = certify_admissibility(term, geometry);
        double max_uf = traj.records.front().u_f_inner;
        for (const auto& r : traj.records) max_uf = std::max(max_uf, r.u_f_inner);
        pass = max_uf <= k;
        summary["admissible"] = true;
        summary["K"] = k;
        summary["L"] = certify_lipschitz(term);
        summary["max_u_f_inner"] = max_uf;
        summary["admissibility_pass"] = pass;
    }
    summary["pass"] = pass;
    write_json(ctx.dir / "summary.json", summary);
    ctx.note("solve: " + std::to_string(solve.steps()) + " steps, final ||u||_H = " +
             num(std::sqrt(traj.records.back().h_norm_sq)));
    return pass ? kExitPass : kExitFail;
}

int run_stationary(const Context& ctx) {
    const DiffractionOperator op = assemble(ctx.cfg.mesh(), ctx.cfg.diffusion());
    const ReactionTerm term = ctx.cfg.reaction();
    json out = {{"seed", ctx.seed}};
    try {
        const StationaryResult res = stationary_solve(op, term, initial_field(op, ctx.cfg.initial));
        CsvWriter csv(ctx.dir / "state.csv", "x,u");
        for (Eigen::Index i = 0; i < res.state.size(); ++i)
            csv.row(op.mesh().nodes[static_cast<std::size_t>(i)], res.state(i));
        out["converged"] = true;
        out["iterations"] = res.iterations;
        out["residual"] = res.residual;
        out["residual_history"] = res.residual_history;
        out["flux_jump"] = flux_jump(op, res.state);
        out["h_norm"] = norm(op, res.state, NormKind::H);
        write_json(ctx.dir / "residual.json", out);
        ctx.note("stationary: converged in " + std::to_string(res.iterations) + " iterations, residual " +
                 num(res.residual));
        return kExitPass;
    } catch (const SolverError& e) {
        out["converged"] = false;
        out["error"] = e.what();
        write_json(ctx.dir / "residual.json", out);
        ctx.note(std::string("stationary: ") + e.what());
        return kExitFail;
    }
}

int run_energy(const Context& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const CoreShellGeometry geometry = cfg.geometry();
    const DiffractionOperator op = assemble(cfg.mesh(), cfg.diffusion());
    const ReactionTerm term = cfg.reaction();
    const double k = certify_admissibility(term, geometry);
    const Trajectory traj = integrate(ctx, op, term, solve_config(cfg));
    const EnergyReport rep = energy_report(traj, k, op);

    CsvWriter csv(ctx.dir / "margins.csv", "t,weak_margin,strong_margin,h_norm_sq,grad_norm_sq,a_form");
    for (std::size_t i = 0; i < rep.times.size(); ++i)
        csv.row(rep.times[i], rep.weak_margins[i], rep.strong_margins[i], traj.records[i].h_norm_sq,
                traj.records[i].grad_norm_sq, traj.records[i].a_form);

    write_json(ctx.dir / "energy.json",
               {{"K", rep.k_bound},
                {"gamma", rep.gamma},
                {"t_final", rep.t_final},
                {"dt", rep.dt},
                {"b_min", rep.b_min},
                {"b_max", rep.b_max},
                {"slack_constant", rep.slack_constant},
                {"tolerance", rep.tolerance()},
                {"worst_weak_margin", rep.worst_weak_margin},
                {"sup_h_norm_sq", rep.sup_h_norm_sq},
                {"sup_bound", 2.0 * rep.gamma},
                {"sup_margin", rep.sup_margin},
                {"grad_integral", rep.grad_integral},
                {"integral_bound", rep.gamma / rep.b_min},
                {"integral_margin", rep.integral_margin},
                {"worst_strong_margin", rep.worst_strong_margin},
                {"strong_margin", rep.strong_margin},
                {"weighted_strong_margin", rep.weighted_strong_margin},
                {"max_u_f_inner", rep.max_u_f_inner},
                {"max_f_norm", rep.max_f_norm},
                {"weak", rep.weak_pass ? "PASS" : "FAIL"},
                {"sup", rep.sup_pass ? "PASS" : "FAIL"},
                {"integral", rep.integral_pass ? "PASS" : "FAIL"},
                {"strong", rep.strong_pass ? "PASS" : "FAIL"},
                {"admissibility", rep.admissibility_pass ? "PASS" : "FAIL"},
                {"result", rep.pass() ? "PASS" : "FAIL"},
                {"seed", ctx.seed}});
    ctx.note(std::string("energy: ") + (rep.pass() ? "PASS" : "FAIL") + ", worst weak margin " +
             num(rep.worst_weak_margin) + ", tolerance " + num(rep.tolerance()));
    return rep.pass() ? kExitPass : kExitFail;
}

int run_converge(const Context& ctx, ConvergeMode mode) {
    const ExperimentConfig& cfg = ctx.cfg;
    const ReactionTerm term = cfg.reaction();
    if (mode == ConvergeMode::galerkin) {
        const DiffractionOperator op = assemble(cfg.mesh(), cfg.diffusion());
        std::vector<std::size_t> counts = cfg.studies.mode_counts;
        const auto rows = galerkin_convergence(op, term, cfg.solve, counts);
        CsvWriter csv(ctx.dir / "galerkin_convergence.csv", "modes,relative_error");
        bool monotone = true;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            csv.row(rows[i].modes, rows[i].relative_error);
            if (i > 0 && rows[i].relative_error > 1.1 * rows[i - 1].relative_error) monotone = false;
        }
        json table = json::array();
        for (const auto& r : rows) table.push_back({{"modes", r.modes}, {"relative_error", r.relative_error}});
        write_json(ctx.dir / "galerkin_convergence.json",
                   {{"rows", table}, {"non_increasing", monotone}, {"result", monotone ? "PASS" : "FAIL"},
                    {"seed", ctx.seed}});
        ctx.note(std::string("converge --galerkin: ") + (monotone ? "PASS" : "FAIL"));
        return monotone ? kExitPass : kExitFail;
    }

    const auto rows = mesh_convergence(cfg.mesh(cfg.studies.mesh_elements), cfg.diffusion(), term, cfg.solve, cfg.studies.mesh_levels);
    CsvWriter csv(ctx.dir / "mesh_convergence.csv",
                  "elements,h,final_error,error_order,flux_jump,flux_order,newton_iterations");
    bool decreasing = true;
    json table = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        csv.row(r.elements, r.h, r.final_error, r.error_order, r.flux_jump, r.flux_order, r.newton_iterations);
        if (i > 0 && !(std::abs(r.flux_jump) < std::abs(rows[i - 1].flux_jump))) decreasing = false;
        table.push_back({{"elements", r.elements}, {"flux_jump", r.flux_jump}, {"flux_order", r.flux_order},
                         {"final_error", r.final_error}});
    }
    write_json(ctx.dir / "mesh_convergence.json",
               {{"rows", table}, {"flux_jump_decreasing", decreasing}, {"result", decreasing ? "PASS" : "FAIL"},
                {"seed", ctx.seed}});
    ctx.note(std::string("converge --mesh: ") + (decreasing ? "PASS" : "FAIL"));
    return decreasing ? kExitPass : kExitFail;
}

int run_regularize(const Context& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const auto rows =
        regularization_study(cfg.mesh(), cfg.diffusion(), cfg.reaction(), cfg.solve, cfg.studies.widths);
    CsvWriter csv(ctx.dir / "regularization.csv", "epsilon,discrepancy,regularity");
    bool d_decreasing = true;
    bool r_non_decreasing = true;
    json table = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        csv.row(rows[i].width, rows[i].discrepancy, rows[i].regularity);
        if (i > 0) {
            if (!(rows[i].discrepancy < rows[i - 1].discrepancy)) d_decreasing = false;
            if (rows[i].regularity < rows[i - 1].regularity) r_non_decreasing = false;
        }
        table.push_back({{"epsilon", rows[i].width},
                         {"discrepancy", rows[i].discrepancy},
                         {"regularity", rows[i].regularity}});
    }
    const bool pass = d_decreasing && r_non_decreasing;
    write_json(ctx.dir / "regularization.json", {{"rows", table},
                                                 {"discrepancy_strictly_decreasing", d_decreasing},
                                                 {"regularity_non_decreasing", r_non_decreasing},
                                                 {"result", pass ? "PASS" : "FAIL"},
                                                 {"seed", ctx.seed}});
    ctx.note(std::string("regularize: ") + (pass ? "PASS" : "FAIL"));
    return pass ? kExitPass : kExitFail;
}

int run_depend(const Context& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const DiffractionOperator op = assemble(cfg.mesh(), cfg.diffusion());
    const ReactionTerm term = cfg.reaction();
    SolveConfig solve = cfg.solve;
    solve.snapshot_stride = 1;
    const Field u0 = initial_field(op, cfg.initial);
    AuditRng rng(ctx.seed);

    CsvWriter csv(ctx.dir / "dependence.csv", "pair,worst_h_ratio,worst_v_ratio");
    bool pass = true;
    double worst_h = 0.0;
    double worst_v = 0.0;
    for (std::size_t p = 0; p < cfg.studies.pairs; ++p) {
        const Field v0 = u0 + random_perturbation(op, rng, cfg.studies.perturbation);
        const DependenceReport rep = dependence_check(op, term, u0, v0, solve);
        csv.row(p, rep.worst_h_ratio, rep.worst_v_ratio);
        worst_h = std::max(worst_h, rep.worst_h_ratio);
        worst_v = std::max(worst_v, rep.worst_v_ratio);
        pass = pass && rep.pass();
    }
    write_json(ctx.dir / "dependence.json", {{"pairs", cfg.studies.pairs},
                                             {"perturbation", cfg.studies.perturbation},
                                             {"lipschitz", certify_lipschitz(term)},
                                             {"worst_h_ratio", worst_h},
                                             {"worst_v_ratio", worst_v},
                                             {"result", pass ? "PASS" : "FAIL"},
                                             {"seed", ctx.seed}});
    ctx.note(std::string("depend: ") + (pass ? "PASS" : "FAIL") + ", worst H ratio " + num(worst_h));
    return pass ? kExitPass : kExitFail;
}

int run_certify(const Context& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const ReactionTerm term = cfg.reaction();
    json out = {{"kind", std::string(to_string(term.kind()))}, {"seed", ctx.seed}};
    int status = kExitPass;
    try {
        const double k = certify_admissibility(term, cfg.geometry());
        const double l = certify_lipschitz(term);
        const DiffractionOperator op = assemble(cfg.mesh(), cfg.diffusion());
        const AdmissibilityAudit audit = admissibility_audit(op, term, k, cfg.studies.samples, ctx.seed);
        out["admissible"] = true;
        out["K"] = k;
        out["L"] = l;
        out["audit"] = {{"samples", audit.samples},
                        {"max_u_f_inner", audit.max_u_f_inner},
                        {"max_f_norm", audit.max_f_norm},
                        {"result", audit.pass ? "PASS" : "FAIL"}};
        if (!audit.pass) status = kExitFail;
    } catch (const InadmissibleReaction& e) {
        out["admissible"] = false;
        out["reason"] = e.what();
        status = kExitFail;
    }
    write_json(ctx.dir / "certify.json", out);
    ctx.console << out.dump() << '\n';
    return status;
}

}  // namespace

fs::path resolve_output_directory(const ExperimentConfig& config, const RunOptions& options) {
    fs::path dir = options.out ? *options.out : config.output_directory;
    if (dir.is_relative()) {
        if (const char* root = std::getenv(kOutputRootEnv); root != nullptr && *root != '\0') dir = fs::path(root) / dir;
    }
    return dir;
}

int run(std::string_view subcommand, const ExperimentConfig& config, const RunOptions& options) {
    std::ostream& console = options.console ? *options.console : std::cout;
    const fs::path dir = resolve_output_directory(config, options);
    try {
        fs::create_directories(dir);
        const Context ctx{config, dir, options.seed.value_or(config.seed), options.quiet, console};
        if (subcommand == "eigen") return run_eigen(ctx);
        if (subcommand == "solve") return run_solve(ctx);
        if (subcommand == "stationary") return run_stationary(ctx);
        if (subcommand == "energy") return run_energy(ctx);
        if (subcommand == "converge") return run_converge(ctx, options.converge);
        if (subcommand == "regularize") return run_regularize(ctx);
        if (subcommand == "depend") return run_depend(ctx);
        if (subcommand == "certify") return run_certify(ctx);
        console << "unknown subcommand: " << subcommand << '\n';
        return kExitUsage;
    } catch (const InadmissibleReaction& e) {
        console << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        console << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const SolverError& e) {
        console << "solver error: " << e.what() << '\n';
        return kExitFail;
    }
}

}  // namespace coreshell
