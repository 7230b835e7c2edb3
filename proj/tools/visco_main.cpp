#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "visco/harness.hpp"

namespace {

struct CommonOptions {
  std::string config;
  std::vector<std::string> overrides;
  std::string out = "out";
  std::uint64_t seed = 0;
};

std::string exact(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Viscoelastic Green functions, attenuation correction and source localization"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string input, output, method;
  double nu_s = -1.0, c_s = -1.0;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"fig1", "Temporal Green function overlays (elastic vs viscous)"},
      {"fig2", "Planar Green function fields at a fixed instant"},
      {"fig3", "Error of the Gaussian-kernel approximation versus viscosity"},
      {"localize", "Synthetic source localization with and without correction"},
      {"kk-check", "Causality residual of the dispersion relation"},
      {"green", "Evaluate the time-domain Green tensor for one source/receiver pair"},
      {"correct", "De-attenuate a (t, value) CSV trace"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", common.config, "INI configuration file")->check(CLI::ExistingFile);
    sub->add_option("-s,--set", common.overrides, "Override a config key: section.key=value");
    sub->add_option("-o,--out", common.out, "Output root directory")->capture_default_str();
    sub->add_option("--seed", common.seed, "Random seed (overrides run.seed)");
    if (name == "correct") {
      sub->add_option("-i,--input", input, "Input CSV with columns t,value")->required()->check(CLI::ExistingFile);
      sub->add_option("--output", output, "Output CSV (default: <out>/correct/corrected.csv)");
      sub->add_option("--nu-s", nu_s, "Shear viscosity nu_s");
      sub->add_option("--c-s", c_s, "Shear speed c_s");
      sub->add_option("--method", method, "Inversion method")->check(CLI::IsMember({"first_order", "ode"}));
    }
  }
  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    std::vector<std::string> overrides = common.overrides;
    if (app.get_subcommands().front()->count("--seed") > 0) overrides.push_back("run.seed=" + std::to_string(common.seed));
    if (nu_s >= 0.0) overrides.push_back("medium.nu_s=" + exact(nu_s));
    if (c_s > 0.0) overrides.push_back("medium.c_s=" + exact(c_s));
    if (!method.empty()) overrides.push_back("imaging.method=" + method);
    std::optional<std::filesystem::path> config_file;
    if (!common.config.empty()) config_file = common.config;
    const auto config = visco::harness::Config::load(command, config_file, overrides);
    std::optional<std::filesystem::path> in, out;
    if (!input.empty()) in = input;
    if (!output.empty()) out = output;
    const bool passed = visco::harness::execute(command, config, common.out, in, out);
    std::cout << command << ": " << (passed ? "all assertions passed" : "ASSERTION FAILED") << " (manifest "
              << (std::filesystem::path(common.out) / command / "manifest.json").string() << ")\n";
    return passed ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << command << ": error: " << e.what() << "\n";
    return 2;
  }
}
