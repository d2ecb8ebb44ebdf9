#include "coreshell/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace coreshell {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& errors) {
    std::string out = "invalid configuration:";
    for (const auto& e : errors) out += "\n  " + e;
    return out;
}

/// Reads optional fields, recording problems instead of stopping at the first.
class Reader {
public:
    explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

    void error(const std::string& field, const std::string& what) { errors_.push_back(field + ": " + what); }

    const json* block(const json& root, const char* name, bool required) {
        if (!root.contains(name)) {
            if (required) error(name, "missing block");
            return nullptr;
        }
        if (!root[name].is_object()) {
            error(name, "must be an object");
            return nullptr;
        }
        return &root[name];
    }

    template <class T>
    bool get(const json* obj, const std::string& prefix, const char* key, T& out, bool required = false) {
        const std::string field = prefix + "." + key;
        if (obj == nullptr || !obj->contains(key)) {
            if (required) error(field, "missing");
            return false;
        }
        try {
            out = (*obj)[key].get<T>();
            return true;
        } catch (const json::exception&) {
            error(field, "wrong type");
            return false;
        }
    }

private:
    std::vector<std::string>& errors_;
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join(errors)), errors_(std::move(errors)) {}

CoreShellGeometry ExperimentConfig::geometry() const {
    return build_geometry(geometry_kind, dimension, interface, outer_extent);
}

DiffusionField ExperimentConfig::diffusion() const { return DiffusionField(b1, b2, epsilon); }

ReactionTerm ExperimentConfig::reaction() const {
    switch (reaction_kind) {
        case ReactionKind::zero: return ReactionTerm::zero();
        case ReactionKind::constant_source: return ReactionTerm::constant_source(source);
        case ReactionKind::michaelis_menten: return ReactionTerm::michaelis_menten(v_max, k_m, c0);
        case ReactionKind::substrate_inhibition: return ReactionTerm::substrate_inhibition(v_max, k_m, c0);
        case ReactionKind::tabulated: return ReactionTerm::tabulated(table_v, table_g, c0, table_lipschitz);
    }
    return ReactionTerm::zero();
}

Mesh ExperimentConfig::mesh() const { return mesh(elements); }

Mesh ExperimentConfig::mesh(std::size_t element_target) const {
    return build_mesh(geometry(), outer_extent / static_cast<double>(element_target));
}

ExperimentConfig parse_config_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("document: malformed JSON: ") + e.what()});
    }
    if (!root.is_object()) throw ConfigError({"document: top level must be an object"});

    std::vector<std::string> errors;
    Reader rd(errors);
    ExperimentConfig cfg;

    // geometry
    if (const json* g = rd.block(root, "geometry", true)) {
        std::string kind = "interval";
        rd.get(g, "geometry", "kind", kind);
        if (kind == "interval") cfg.geometry_kind = GeometryKind::interval;
        else if (kind == "radial") cfg.geometry_kind = GeometryKind::radial;
        else rd.error("geometry.kind", "unknown kind '" + kind + "'");
        cfg.dimension = cfg.geometry_kind == GeometryKind::interval ? 1 : 3;
        rd.get(g, "geometry", "dimension", cfg.dimension);
        rd.get(g, "geometry", "outer_extent", cfg.outer_extent);
        rd.get(g, "geometry", "interface", cfg.interface, true);
        if (!(cfg.outer_extent > 0.0)) rd.error("geometry.outer_extent", "must be positive");
        if (!(cfg.interface > 0.0) || !(cfg.interface < cfg.outer_extent))
            rd.error("geometry.interface", "must lie strictly between 0 and outer_extent");
        if (cfg.geometry_kind == GeometryKind::interval && cfg.dimension != 1)
            rd.error("geometry.dimension", "interval geometry requires dimension 1");
        if (cfg.geometry_kind == GeometryKind::radial && cfg.dimension != 2 && cfg.dimension != 3)
            rd.error("geometry.dimension", "radial geometry requires dimension 2 or 3");
    }

    // diffusion
    if (const json* d = rd.block(root, "diffusion", true)) {
        rd.get(d, "diffusion", "b1", cfg.b1, true);
        rd.get(d, "diffusion", "b2", cfg.b2, true);
        rd.get(d, "diffusion", "epsilon", cfg.epsilon);
        if (!(cfg.b1 > 0.0)) rd.error("diffusion.b1", "must be positive");
        if (!(cfg.b2 > 0.0)) rd.error("diffusion.b2", "must be positive");
        if (!(cfg.epsilon >= 0.0)) rd.error("diffusion.epsilon", "must be non-negative");
    }

    // reaction
    if (const json* r = rd.block(root, "reaction", true)) {
        std::string kind;
        if (rd.get(r, "reaction", "kind", kind, true)) {
            try {
                cfg.reaction_kind = parse_reaction_kind(kind);
            } catch (const std::invalid_argument&) {
                rd.error("reaction.kind", "unknown kind '" + kind + "'");
            }
        }
        switch (cfg.reaction_kind) {
            case ReactionKind::zero:
                break;
            case ReactionKind::constant_source:
                rd.get(r, "reaction", "s", cfg.source, true);
                break;
            case ReactionKind::michaelis_menten:
            case ReactionKind::substrate_inhibition:
                rd.get(r, "reaction", "v_max", cfg.v_max, true);
                rd.get(r, "reaction", "k_m", cfg.k_m, true);
                rd.get(r, "reaction", "c0", cfg.c0, true);
                if (!(cfg.v_max >= 0.0)) rd.error("reaction.v_max", "must be non-negative");
                if (!(cfg.k_m > 0.0)) rd.error("reaction.k_m", "must be positive");
                if (!(cfg.c0 > 0.0)) rd.error("reaction.c0", "must be positive");
                break;
            case ReactionKind::tabulated: {
                rd.get(r, "reaction", "v", cfg.table_v, true);
                rd.get(r, "reaction", "g", cfg.table_g, true);
                rd.get(r, "reaction", "c0", cfg.c0, true);
                double l = 0.0;
                if (rd.get(r, "reaction", "lipschitz", l)) cfg.table_lipschitz = l;
                try {
                    (void)cfg.reaction();
                } catch (const std::invalid_argument& e) {
                    rd.error("reaction", e.what());
                }
                break;
            }
        }
    }

    // initial
    if (const json* i = rd.block(root, "initial", false)) {
        std::string kind = "zero";
        rd.get(i, "initial", "kind", kind);
        if (kind == "zero") {
            cfg.initial = InitialCondition::zero_state();
        } else if (kind == "mode") {
            std::size_t j = 1;
            rd.get(i, "initial", "j", j, true);
            if (j == 0) rd.error("initial.j", "mode index is 1-based");
            cfg.initial = InitialCondition::single_mode(j);
        } else if (kind == "table") {
            std::vector<double> v;
            rd.get(i, "initial", "values", v, true);
            cfg.initial = InitialCondition::table(std::move(v));
        } else {
            rd.error("initial.kind", "unknown kind '" + kind + "'");
        }
    }

    // solve
    if (const json* s = rd.block(root, "solve", true)) {
        rd.get(s, "solve", "t_final", cfg.solve.t_final, true);
        rd.get(s, "solve", "dt", cfg.solve.dt, true);
        rd.get(s, "solve", "modes", cfg.solve.modes);
        rd.get(s, "solve", "elements", cfg.elements);
        std::string scheme = "imex_euler";
        if (rd.get(s, "solve", "scheme", scheme)) {
            try {
                cfg.solve.scheme = parse_scheme(scheme);
            } catch (const std::invalid_argument&) {
                rd.error("solve.scheme", "unknown scheme '" + scheme + "'");
            }
        }
        std::string solver = "galerkin";
        if (rd.get(s, "solve", "solver", solver)) {
            if (solver == "galerkin") cfg.solver = SolverKind::galerkin;
            else if (solver == "fem") cfg.solver = SolverKind::fem;
            else rd.error("solve.solver", "unknown solver '" + solver + "'");
        }
        if (!(cfg.solve.t_final > 0.0)) rd.error("solve.t_final", "must be positive");
        if (!(cfg.solve.dt > 0.0)) rd.error("solve.dt", "must be positive");
        else if (cfg.solve.dt > cfg.solve.t_final) rd.error("solve.dt", "must not exceed t_final");
        if (cfg.elements < 2) rd.error("solve.elements", "must be at least 2");
        if (cfg.solve.modes == 0) rd.error("solve.modes", "must be at least 1");
        else if (cfg.solve.modes > cfg.elements) rd.error("solve.modes", "exceeds the number of free nodes");
        if (cfg.initial.kind == InitialCondition::Kind::mode && cfg.initial.mode > cfg.elements)
            rd.error("initial.j", "exceeds the number of free nodes");
    }

    // output
    if (const json* o = rd.block(root, "output", false)) {
        std::string dir = cfg.output_directory.string();
        rd.get(o, "output", "directory", dir);
        cfg.output_directory = dir;
        rd.get(o, "output", "snapshot_stride", cfg.snapshot_stride);
    }

    if (root.contains("seed")) {
        try {
            cfg.seed = root["seed"].get<std::uint64_t>();
        } catch (const json::exception&) {
            rd.error("seed", "must be a non-negative integer");
        }
    }

    if (const json* st = rd.block(root, "studies", false)) {
        rd.get(st, "studies", "mode_counts", cfg.studies.mode_counts);
        rd.get(st, "studies", "widths", cfg.studies.widths);
        rd.get(st, "studies", "mesh_elements", cfg.studies.mesh_elements);
        rd.get(st, "studies", "mesh_levels", cfg.studies.mesh_levels);
        rd.get(st, "studies", "pairs", cfg.studies.pairs);
        rd.get(st, "studies", "perturbation", cfg.studies.perturbation);
        rd.get(st, "studies", "samples", cfg.studies.samples);
        if (!(cfg.studies.perturbation > 0.0)) rd.error("studies.perturbation", "must be positive");
        if (cfg.studies.mesh_elements < 2) rd.error("studies.mesh_elements", "must be at least 2");
        if (cfg.studies.mesh_levels == 0) rd.error("studies.mesh_levels", "must be at least 1");
    }

    if (!errors.empty()) throw ConfigError(std::move(errors));
    return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"file: cannot open '" + path.string() + "'"});
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace coreshell
