#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "cctskit/costsurface.hpp"
#include "cctskit/fixtures.hpp"
#include "cctskit/pipeline.hpp"
#include "cctskit/scenario.hpp"

namespace {

struct StageArgs {
  std::string scenario;
  std::optional<std::string> sej;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool quiet = false;
};

int run_stage(const std::string& stage_name, const StageArgs& args) {
  using namespace cctskit;
  try {
    const auto stage = pipeline::parse_stage(stage_name);
    Scenario s = load_scenario(args.scenario);
    if (args.sej) s.sej_mode = costsurface::parse_sej_mode(*args.sej);
    if (args.seed) s.seed = *args.seed;
    s.output_dir = args.out ? *args.out : s.resolve(s.output_dir).string();
    std::ostream null_stream(nullptr);
    return pipeline::run(s, stage, args.quiet ? null_stream : std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pipeline::kExitError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capture, transport and storage network planning toolkit", "cctskit"};
  app.set_version_flag("--version", cctskit::pipeline::kToolkitVersion);
  app.require_subcommand(1);

  StageArgs args;
  const char* stages[] = {"capture", "screen",          "characterize", "surface", "route",
                          "solve-shared", "solve-dedicated", "compare", "phase",   "all"};
  for (const char* name : stages) {
    auto* sub = app.add_subcommand(name, std::string("Run the ") + name + " stage");
    sub->add_option("--scenario", args.scenario, "Scenario TOML file")->required()->check(CLI::ExistingFile);
    sub->add_option("--sej", args.sej, "SEJ layer in the cost surface")->check(CLI::IsMember({"off", "sej3", "sej8"}));
    sub->add_option("--seed", args.seed, "Override the scenario seed");
    sub->add_option("--out", args.out, "Output directory (default: the scenario's output_dir)");
    sub->add_flag("-q,--quiet", args.quiet, "Suppress progress output");
    sub->callback([&app, sub, &args] {
      (void)app;
      throw CLI::RuntimeError(run_stage(sub->get_name(), args));
    });
  }

  std::string fixture_dir;
  auto* fixture = app.add_subcommand("make-fixture", "Write the synthetic mini-gulf dataset");
  fixture->add_option("dir", fixture_dir, "Destination directory")->required();
  fixture->callback([&fixture_dir] {
    cctskit::fixtures::write_mini_gulf(fixture_dir);
    std::cout << "wrote mini-gulf fixture to " << fixture_dir << "\n";
  });

  std::string json_scenario;
  auto* defaults = app.add_subcommand("defaults", "Print a scenario with every default spelled out");
  defaults->add_option("--scenario", json_scenario, "Start from this scenario instead of the built-in defaults")
      ->check(CLI::ExistingFile);
  bool as_json = false;
  defaults->add_flag("--json", as_json, "Print JSON instead of TOML");
  defaults->callback([&] {
    try {
      const auto s = json_scenario.empty() ? cctskit::Scenario{} : cctskit::load_scenario(json_scenario);
      std::cout << (as_json ? cctskit::to_json(s) : cctskit::to_toml(s));
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      throw CLI::RuntimeError(cctskit::pipeline::kExitError);
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::RuntimeError& e) {
    return e.get_exit_code();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cctskit::pipeline::kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cctskit::pipeline::kExitError;
  }
  return 0;
}
