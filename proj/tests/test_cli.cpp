#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "coreshell/config.hpp"
#include "coreshell/runner.hpp"

using namespace coreshell;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({
  "geometry": {"kind": "interval", "interface": 0.5},
  "diffusion": {"b1": 4.0, "b2": 1.0},
  "reaction": {"kind": "michaelis_menten", "v_max": 1.0, "k_m": 0.5, "c0": 1.0},
  "solve": {"t_final": 0.1, "dt": 1e-3, "modes": 8, "elements": 64}
})";

nlohmann::json minimal() { return nlohmann::json::parse(kMinimal); }

ExperimentConfig from(const nlohmann::json& j) { return parse_config_text(j.dump()); }

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class RunTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("coreshell_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int invoke(const std::string& sub, const ExperimentConfig& cfg, const fs::path& out) {
        RunOptions opts;
        opts.out = out;
        opts.quiet = true;
        opts.console = &console_;
        return run(sub, cfg, opts);
    }

    fs::path dir_;
    std::ostringstream console_;
};

std::vector<std::string> errors_of(const nlohmann::json& j) {
    try {
        from(j);
    } catch (const ConfigError& e) {
        return e.errors();
    }
    return {};
}

bool any_starts_with(const std::vector<std::string>& errors, const std::string& prefix) {
    for (const auto& e : errors)
        if (e.rfind(prefix, 0) == 0) return true;
    return false;
}

}  // namespace

TEST(Config, ParsesMinimalWithDefaults) {
    const auto cfg = from(minimal());
    EXPECT_EQ(cfg.geometry_kind, GeometryKind::interval);
    EXPECT_EQ(cfg.outer_extent, 1.0);
    EXPECT_EQ(cfg.reaction_kind, ReactionKind::michaelis_menten);
    EXPECT_EQ(cfg.solve.modes, 8u);
    EXPECT_EQ(cfg.elements, 64u);
    EXPECT_EQ(cfg.solver, SolverKind::galerkin);
    EXPECT_EQ(cfg.initial.kind, InitialCondition::Kind::zero);
    EXPECT_EQ(cfg.mesh().element_count(), 64u);
    EXPECT_EQ(cfg.reaction().v_max(), 1.0);
}

TEST(Config, InterfaceOutsideDomain) {
    auto j = minimal();
    j["geometry"]["interface"] = 1.5;
    EXPECT_TRUE(any_starts_with(errors_of(j), "geometry.interface"));
}

TEST(Config, NonPositiveStep) {
    auto j = minimal();
    j["solve"]["dt"] = 0.0;
    EXPECT_TRUE(any_starts_with(errors_of(j), "solve.dt"));
}

TEST(Config, CollectsEveryError) {
    auto j = minimal();
    j["geometry"]["interface"] = -1.0;
    j["diffusion"]["b2"] = -2.0;
    j["reaction"]["kind"] = "hill";
    j["solve"]["modes"] = 0;
    const auto errors = errors_of(j);
    EXPECT_GE(errors.size(), 4u);
    EXPECT_TRUE(any_starts_with(errors, "geometry.interface"));
    EXPECT_TRUE(any_starts_with(errors, "diffusion.b2"));
    EXPECT_TRUE(any_starts_with(errors, "reaction.kind"));
    EXPECT_TRUE(any_starts_with(errors, "solve.modes"));
}

TEST(Config, MissingBlocksAndMalformedText) {
    EXPECT_TRUE(any_starts_with(errors_of(nlohmann::json::object()), "geometry"));
    EXPECT_THROW(parse_config_text("{not json"), ConfigError);
    EXPECT_THROW(parse_config("/nonexistent/coreshell.json"), ConfigError);
}

TEST(Config, InitialAndStudies) {
    auto j = minimal();
    j["initial"] = {{"kind", "mode"}, {"j", 2}};
    j["studies"] = {{"widths", {0.1, 0.05}}, {"pairs", 3}, {"mesh_elements", 32}};
    j["output"] = {{"directory", "results"}, {"snapshot_stride", 10}};
    j["seed"] = 17;
    const auto cfg = from(j);
    EXPECT_EQ(cfg.initial.kind, InitialCondition::Kind::mode);
    EXPECT_EQ(cfg.initial.mode, 2u);
    EXPECT_EQ(cfg.studies.widths, (std::vector<double>{0.1, 0.05}));
    EXPECT_EQ(cfg.studies.pairs, 3u);
    EXPECT_EQ(cfg.studies.mesh_elements, 32u);
    EXPECT_EQ(cfg.mesh(cfg.studies.mesh_elements).element_count(), 32u);
    EXPECT_EQ(cfg.snapshot_stride, 10u);
    EXPECT_EQ(cfg.seed, 17u);
    EXPECT_EQ(cfg.output_directory, fs::path("results"));
}

TEST_F(RunTest, SolveWritesTrajectory) {
    auto j = minimal();
    j["output"] = {{"snapshot_stride", 50}};
    ASSERT_EQ(invoke("solve", from(j), dir_), kExitPass);
    const std::string csv = read_file(dir_ / "trajectory.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,h_norm_sq,grad_norm_sq,v_norm_sq,da_norm_sq,u_f_inner");
    EXPECT_TRUE(fs::exists(dir_ / "snapshots.csv"));
    EXPECT_TRUE(fs::exists(dir_ / "summary.json"));
}

TEST_F(RunTest, EnergyWithoutReactionPasses) {
    auto j = minimal();
    j["reaction"] = {{"kind", "zero"}};
    j["initial"] = {{"kind", "mode"}, {"j", 1}};
    ASSERT_EQ(invoke("energy", from(j), dir_), kExitPass);
    const auto report = nlohmann::json::parse(read_file(dir_ / "energy.json"));
    EXPECT_GE(report["worst_weak_margin"].get<double>(), 0.0);
    EXPECT_EQ(report["result"], "PASS");
}

TEST_F(RunTest, EigenOfHomogeneousSlab) {
    auto j = minimal();
    j["diffusion"] = {{"b1", 1.0}, {"b2", 1.0}};
    ASSERT_EQ(invoke("eigen", from(j), dir_), kExitPass);
    std::ifstream in(dir_ / "eigenvalues.csv");
    std::string header, line;
    std::getline(in, header);
    std::getline(in, line);
    EXPECT_EQ(header, "j,lambda");
    const double lambda = std::stod(line.substr(line.find(',') + 1));
    EXPECT_NEAR(lambda, M_PI * M_PI, 0.01 * M_PI * M_PI);
}

TEST_F(RunTest, RepeatedRunsAreIdentical) {
    const auto cfg = from(minimal());
    ASSERT_EQ(invoke("depend", cfg, dir_ / "a"), kExitPass);
    ASSERT_EQ(invoke("depend", cfg, dir_ / "b"), kExitPass);
    EXPECT_EQ(read_file(dir_ / "a" / "dependence.csv"), read_file(dir_ / "b" / "dependence.csv"));
    ASSERT_EQ(invoke("solve", cfg, dir_ / "c"), kExitPass);
    ASSERT_EQ(invoke("solve", cfg, dir_ / "d"), kExitPass);
    EXPECT_EQ(read_file(dir_ / "c" / "trajectory.csv"), read_file(dir_ / "d" / "trajectory.csv"));
}

TEST_F(RunTest, CertifyPrintsConstants) {
    ASSERT_EQ(invoke("certify", from(minimal()), dir_), kExitPass);
    const auto printed = nlohmann::json::parse(console_.str());
    EXPECT_DOUBLE_EQ(printed["K"].get<double>(), 1.0);
    EXPECT_DOUBLE_EQ(printed["L"].get<double>(), 2.0);
    EXPECT_EQ(nlohmann::json::parse(read_file(dir_ / "certify.json")), printed);
}

TEST_F(RunTest, ConstantSourceEnergyIsUsageError) {
    auto j = minimal();
    j["reaction"] = {{"kind", "constant_source"}, {"s", 1.0}};
    EXPECT_EQ(invoke("energy", from(j), dir_), kExitUsage);
}

TEST_F(RunTest, UnknownSubcommand) { EXPECT_EQ(invoke("plot", from(minimal()), dir_), kExitUsage); }

TEST_F(RunTest, StationaryAndConverge) {
    auto j = minimal();
    ASSERT_EQ(invoke("stationary", from(j), dir_ / "s"), kExitPass);
    const auto res = nlohmann::json::parse(read_file(dir_ / "s" / "residual.json"));
    EXPECT_LT(res["residual"].get<double>(), 1e-10);
    j["studies"] = {{"mode_counts", {2, 4, 8}}};
    ASSERT_EQ(invoke("converge", from(j), dir_ / "g"), kExitPass);
    EXPECT_TRUE(fs::exists(dir_ / "g" / "galerkin_convergence.csv"));
}

TEST_F(RunTest, OutputRootEnvironment) {
    auto cfg = from(minimal());
    cfg.output_directory = "rel";
    ::setenv(kOutputRootEnv, dir_.c_str(), 1);
    EXPECT_EQ(resolve_output_directory(cfg, {}), dir_ / "rel");
    ::unsetenv(kOutputRootEnv);
    EXPECT_EQ(resolve_output_directory(cfg, {}), fs::path("rel"));
}
