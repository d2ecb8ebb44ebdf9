#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>

#include "coreshell/config.hpp"

namespace coreshell {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable that, when set, roots relative output directories.
inline constexpr const char* kOutputRootEnv = "CORESHELL_OUTPUT_ROOT";

enum class ConvergeMode { galerkin, mesh };

struct RunOptions {
    std::optional<std::filesystem::path> out;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
    ConvergeMode converge = ConvergeMode::galerkin;
    std::ostream* console = nullptr;  // defaults to std::cout
};

/// Subcommands: eigen, solve, stationary, energy, converge, regularize,
/// depend, certify. Returns kExitPass when the run succeeded and every audited
/// inequality holds, kExitFail on an audit failure, kExitUsage on bad input.
int run(std::string_view subcommand, const ExperimentConfig& config, const RunOptions& options = {});

/// Output directory after applying --out and the environment override.
std::filesystem::path resolve_output_directory(const ExperimentConfig& config, const RunOptions& options);

}  // namespace coreshell
