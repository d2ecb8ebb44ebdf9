#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coreshell/geometry.hpp"
#include "coreshell/operators.hpp"
#include "coreshell/reactions.hpp"
#include "coreshell/solvers.hpp"

namespace coreshell {

/// Carries every validation failure found in a configuration, each prefixed
/// with the dotted field name, e.g. "geometry.interface: ...".
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const noexcept { return errors_; }

private:
    std::vector<std::string> errors_;
};

enum class SolverKind { galerkin, fem };

struct StudyConfig {
    std::vector<std::size_t> mode_counts{4, 8, 16, 32, 64};
    std::vector<double> widths{0.2, 0.1, 0.05, 0.025};
    std::size_t mesh_elements = 64;  // coarsest level of the mesh study
    std::size_t mesh_levels = 4;
    std::size_t pairs = 10;
    double perturbation = 1e-3;
    std::size_t samples = 1000;
};

struct ExperimentConfig {
    GeometryKind geometry_kind = GeometryKind::interval;
    int dimension = 1;
    double interface = 0.5;
    double outer_extent = 1.0;

    double b1 = 1.0;
    double b2 = 1.0;
    double epsilon = 0.0;

    ReactionKind reaction_kind = ReactionKind::zero;
    double v_max = 0.0;
    double k_m = 1.0;
    double c0 = 1.0;
    double source = 0.0;
    std::vector<double> table_v;
    std::vector<double> table_g;
    std::optional<double> table_lipschitz;

    InitialCondition initial;
    SolveConfig solve;
    std::size_t elements = 64;
    SolverKind solver = SolverKind::galerkin;

    std::filesystem::path output_directory = "out";
    /// 0 disables state snapshots.
    std::size_t snapshot_stride = 0;
    std::uint64_t seed = 0;

    StudyConfig studies;

    CoreShellGeometry geometry() const;
    DiffusionField diffusion() const;
    ReactionTerm reaction() const;
    Mesh mesh() const;
    Mesh mesh(std::size_t element_target) const;
};

ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_text(const std::string& text);

}  // namespace coreshell
