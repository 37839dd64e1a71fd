#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "rydlgt/error.hpp"

// Exit codes: 0 success, 2 config error, 3 numerical failure, 4 capacity.
namespace {

constexpr int kConfigExit = 2;
constexpr int kNumericalExit = 3;
constexpr int kCapacityExit = 4;

}  // namespace

int main(int argc, char** argv) {
  using namespace rydlgt;
  CLI::App app{"Rydberg-array lattice gauge theory simulator"};
  app.require_subcommand(1);

  std::string config_file;
  cli::Overrides overrides;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out_dir;
  std::string basis;
  bool quiet = false;

  struct Entry {
    const char* name;
    const char* help;
    void (*run)(const cli::RunConfig&, const cli::Progress&);
  };
  const Entry entries[] = {
      {"geometry", "Build a geometry and sketch the lattice", cli::cmd_geometry},
      {"scan-phase", "Ground-state or sweep scan over (R_b, delta/Omega)", cli::cmd_scan_phase},
      {"quench", "Time series after a local-detuning quench", cli::cmd_quench},
      {"scan-resonance", "Scan delta_0 at a fixed probe time and fit the p_b peak", cli::cmd_scan_resonance},
      {"shots", "String probability tables from measured or simulated shots", cli::cmd_shots},
  };
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("--config", config_file, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Override the config seed");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--basis", basis, "Basis mode")->check(CLI::IsMember({"full", "blockaded"}));
    sub->add_flag("--quiet", quiet, "Suppress progress on stderr");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigExit;
  }

  const auto given = [&](const char* flag) {
    for (const auto* sub : app.get_subcommands()) {
      if (sub->count(flag) > 0) return true;
    }
    return false;
  };
  if (given("--seed")) overrides.seed = seed;
  if (given("--threads")) overrides.threads = threads;
  if (given("--out")) overrides.output = out_dir;
  if (given("--basis")) overrides.basis = parse_basis_mode(basis);

  const std::string command = app.get_subcommands().front()->get_name();
  const cli::Progress progress = [&](const std::string& msg) {
    if (!quiet) std::cerr << command << ": " << msg << "\n";
  };
  try {
    const cli::RunConfig config = cli::load_run_config(config_file, overrides);
    for (const auto& e : entries) {
      if (command == e.name) e.run(config, progress);
    }
    if (!quiet) std::cerr << command << ": wrote " << config.output.string() << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigExit;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalExit;
  } catch (const CapacityError& e) {
    std::cerr << "capacity exceeded: " << e.what() << "\n";
    return kCapacityExit;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
