#include "replidyn/numeric.hpp"
#include "replidyn/scenario.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw replidyn::ConfigError("cannot read config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw replidyn::ConfigError("cannot read config file: " + path);
  return buffer.str();
}

struct CommandOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

CLI::App* add_command(CLI::App& app, const char* name, const char* help, CommandOptions& opt,
                      bool with_seed) {
  CLI::App* cmd = app.add_subcommand(name, help);
  cmd->add_option("--config", opt.config_path, "Config file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", opt.out_dir, "Output directory, created if missing (default: .)");
  if (with_seed) {
    cmd->add_option("--seed", opt.seed, "Override the seed from the config");
  }
  cmd->add_flag("--quiet", opt.quiet, "Suppress the status line");
  return cmd;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Evolutionary game dynamics: replicator flows, their commutator matrix form, "
      "and density-operator evolution"};
  app.require_subcommand(0, 1);

  CommandOptions simulate_opt;
  CommandOptions equilibria_opt;
  CommandOptions entropy_opt;
  CommandOptions gibbs_opt;
  CommandOptions compare_opt;
  CommandOptions sweep_opt;

  CLI::App* simulate = add_command(
      app, "simulate", "Integrate a scenario (vector, matrix, or von-neumann mode)",
      simulate_opt, true);
  CLI::App* equilibria = add_command(
      app, "equilibria", "Enumerate and classify the rest points of a game", equilibria_opt,
      true);
  CLI::App* entropy = add_command(
      app, "entropy", "Report entropies of a population state and/or density operator",
      entropy_opt, false);
  CLI::App* gibbs = add_command(
      app, "gibbs", "Tabulate thermal states of a Hamiltonian over inverse temperatures",
      gibbs_opt, false);
  CLI::App* compare = add_command(
      app, "compare", "Run the vector and matrix engines side by side and report deviation",
      compare_opt, true);
  CLI::App* sweep = add_command(
      app, "sweep", "Equilibrium statistics over seeded random games", sweep_opt, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (simulate->parsed()) {
      replidyn::run_simulate_command(read_file(simulate_opt.config_path), simulate_opt.out_dir,
                                     simulate_opt.seed, simulate_opt.quiet);
    } else if (equilibria->parsed()) {
      replidyn::run_equilibria_command(read_file(equilibria_opt.config_path),
                                       equilibria_opt.out_dir, equilibria_opt.seed,
                                       equilibria_opt.quiet);
    } else if (entropy->parsed()) {
      replidyn::run_entropy_command(read_file(entropy_opt.config_path), entropy_opt.out_dir,
                                    entropy_opt.quiet);
    } else if (gibbs->parsed()) {
      replidyn::run_gibbs_command(read_file(gibbs_opt.config_path), gibbs_opt.out_dir,
                                  gibbs_opt.quiet);
    } else if (compare->parsed()) {
      replidyn::run_simulate_command(read_file(compare_opt.config_path), compare_opt.out_dir,
                                     compare_opt.seed, compare_opt.quiet,
                                     replidyn::ScenarioMode::compare);
    } else if (sweep->parsed()) {
      replidyn::run_sweep_command(read_file(sweep_opt.config_path), sweep_opt.out_dir,
                                  sweep_opt.seed, sweep_opt.quiet);
    } else {
      std::cout << app.help();
      return 1;
    }
  } catch (const replidyn::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const replidyn::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
