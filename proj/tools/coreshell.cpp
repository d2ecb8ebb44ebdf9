// Command-line front end: one subcommand per study, each reading a JSON
// experiment configuration and writing CSV/JSON into the output directory.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "coreshell/config.hpp"
#include "coreshell/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Core-shell reaction-diffusion solver with a priori estimate audits"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out;
    std::uint64_t seed = 0;
    bool quiet = false;
    bool galerkin = false;
    bool mesh = false;

    const std::pair<const char*, const char*> commands[] = {
        {"eigen", "Eigenvalues and eigenvectors of the diffraction operator"},
        {"solve", "Integrate the Galerkin (or FEM) system and write the trajectory"},
        {"stationary", "Newton solve for a stationary state"},
        {"energy", "Audit the weak and strong energy estimates"},
        {"converge", "Galerkin truncation or mesh refinement study"},
        {"regularize", "Smoothed-coefficient limit study"},
        {"depend", "Continuous dependence on initial data"},
        {"certify", "Print the admissibility constant K and Lipschitz constant L as JSON"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("config", config_path, "JSON experiment configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "Output directory (overrides the config)");
        sub->add_option("--seed", seed, "Seed for randomized audits (overrides the config)");
        sub->add_flag("--quiet", quiet, "Suppress progress output");
        if (std::string(name) == "converge") {
            auto* g = sub->add_flag("--galerkin", galerkin, "Galerkin truncation study (default)");
            auto* m = sub->add_flag("--mesh", mesh, "Mesh refinement study");
            g->excludes(m);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : coreshell::kExitUsage;
    }

    const CLI::App* sub = app.get_subcommands().front();
    coreshell::RunOptions options;
    options.quiet = quiet;
    options.converge = mesh ? coreshell::ConvergeMode::mesh : coreshell::ConvergeMode::galerkin;
    if (!out.empty()) options.out = out;
    if (sub->count("--seed") > 0) options.seed = seed;

    try {
        const coreshell::ExperimentConfig config = coreshell::parse_config(config_path);
        return coreshell::run(sub->get_name(), config, options);
    } catch (const coreshell::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return coreshell::kExitUsage;
    }
}
