#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cctskit/error.hpp"
#include "cctskit/fixtures.hpp"
#include "cctskit/pipeline.hpp"
#include "cctskit/scenario.hpp"

using namespace cctskit;
namespace fs = std::filesystem;

namespace {

Scenario mini_gulf(const std::string& out) {
  const auto dir = fs::temp_directory_path() / "cctskit_pipeline_fixture";
  if (!fs::exists(dir / "scenario.toml")) fixtures::write_mini_gulf(dir);
  auto s = load_scenario(dir / "scenario.toml");
  s.output_dir = (fs::temp_directory_path() / out).string();
  fs::remove_all(s.output_dir);
  return s;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Pipeline, StageNamesRoundTrip) {
  for (auto s : {pipeline::Stage::Capture, pipeline::Stage::Route, pipeline::Stage::SolveShared, pipeline::Stage::All})
    EXPECT_EQ(pipeline::parse_stage(pipeline::to_string(s)), s);
  EXPECT_THROW(pipeline::parse_stage("solve"), ConfigError);
}

TEST(Pipeline, MissingUpstreamIsDependencyError) {
  const auto s = mini_gulf("cctskit_pl_dep");
  std::ostringstream log;
  EXPECT_THROW(pipeline::run_stage(s, pipeline::Stage::SolveShared, log), DependencyError);
  EXPECT_THROW(pipeline::run_stage(s, pipeline::Stage::Compare, log), DependencyError);
  std::ostringstream err;
  EXPECT_EQ(pipeline::run(s, pipeline::Stage::Route, log, err), pipeline::kExitError);
  EXPECT_NE(err.str().find("missing upstream"), std::string::npos);
}

TEST(Pipeline, CaptureStageDeterministicWithMetadata) {
  const auto a = mini_gulf("cctskit_pl_a");
  const auto b = mini_gulf("cctskit_pl_b");
  std::ostringstream log;
  pipeline::run_stage(a, pipeline::Stage::Capture, log);
  pipeline::run_stage(b, pipeline::Stage::Capture, log);
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(a.output_dir)) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), a.output_dir);
    EXPECT_EQ(slurp(e.path()), slurp(fs::path(b.output_dir) / rel)) << rel;
    ++files;
  }
  EXPECT_GT(files, 2u);
  const auto meta = nlohmann::json::parse(slurp(fs::path(a.output_dir) / "run_metadata.json"));
  EXPECT_EQ(meta.at("config_hash"), config_hash(a));
  EXPECT_EQ(meta.at("seed"), a.seed);
  EXPECT_EQ(meta.at("toolkit_version"), pipeline::kToolkitVersion);
  EXPECT_FALSE(meta.at("scenario").contains("output_dir"));
}

TEST(Pipeline, FullRunThenInfeasibleTargetExitsTwo) {
  auto s = mini_gulf("cctskit_pl_full");
  std::ostringstream log, err;
  ASSERT_EQ(pipeline::run(s, pipeline::Stage::All, log, err), pipeline::kExitOk) << err.str();
  for (const char* f : {"network.json", "shared_solution.json", "dedicated_solution.json", "phases.csv", "plots"})
    EXPECT_TRUE(fs::exists(fs::path(s.output_dir) / f)) << f;
  s.target = 1e6;
  std::ostringstream err2;
  EXPECT_EQ(pipeline::run(s, pipeline::Stage::SolveShared, log, err2), pipeline::kExitInfeasible);
  EXPECT_NE(err2.str().find("infeasible"), std::string::npos);
}
