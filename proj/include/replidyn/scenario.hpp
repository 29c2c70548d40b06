#pragma once

#include "replidyn/game.hpp"
#include "replidyn/matrix_form.hpp"
#include "replidyn/quantum.hpp"
#include "replidyn/replicator.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace replidyn {

// Configuration or I/O problem: maps to exit code 1 in the CLI, as opposed
// to NumericalError (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ScenarioMode { vector, matrix, von_neumann, compare };
enum class HamiltonianRule { fixed, state_dependent };

struct OutputPaths {
  std::string trajectory = "trajectory.csv";
  std::string trajectory_b = "trajectory_b.csv";  // second population / matrix engine
  std::string deviation = "deviation.csv";        // compare mode
  std::string summary = "summary.json";
};

struct RandomGameSpec {
  Eigen::Index n = 2;
};

// Parsed scenario document. Exactly one of `game` / `random_game` supplies
// the payoff matrix where one is needed; `density` overrides the square-root
// embedding of `initial_state` as the starting density operator.
struct ScenarioConfig {
  ScenarioMode mode = ScenarioMode::vector;
  std::optional<PayoffMatrix> game;
  std::optional<PayoffMatrix> game_b;
  std::optional<RandomGameSpec> random_game;
  std::optional<PopulationState> initial_state;
  std::optional<PopulationState> initial_state_b;
  std::optional<Eigen::MatrixXcd> density;
  std::optional<Hamiltonian> hamiltonian;
  HamiltonianRule rule = HamiltonianRule::state_dependent;
  MatrixProjection projection = MatrixProjection::diagonal_rebuild;
  IntegratorConfig integrator;
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  OutputPaths outputs;
};

struct RunSummary {
  ScenarioMode mode = ScenarioMode::vector;
  Eigen::VectorXd final_state;  // frequencies, X diagonal, or density diagonal
  double residual_norm = 0.0;   // max-abs of the field at the final state
  std::vector<EquilibriumReport> equilibria;
  double entropy_initial = 0.0;
  double entropy_final = 0.0;
  double max_deviation = 0.0;   // compare mode only
  // Kept out of every output file so repeated runs stay byte-identical.
  double duration_seconds = 0.0;
  std::string config_echo;      // normalized document, parse_config-compatible
};

// Parses and validates a scenario document (JSON text). Unknown keys,
// missing mode-required fields, dimension mismatches and off-simplex states
// are ConfigErrors carrying the offending field.
ScenarioConfig parse_config(const std::string& text);

// Normalized round-trippable form of a parsed config.
std::string echo_config(const ScenarioConfig& cfg);

// Payoff matrix with entries drawn uniformly from [-1, 1]. The generator is
// fully specified here (mt19937_64 + fixed mapping), so a seed pins the game
// across platforms.
PayoffMatrix random_game(Eigen::Index n, std::uint64_t seed);

// 17-significant-digit, locale-independent decimal formatting used by every
// emitter.
std::string format_double(double v);

// CSV emitters: header row plus one row per stored step, '\n' line endings.
void emit_trajectory(const Trajectory& traj, const std::string& path);
void emit_matrix_trajectory(const MatrixTrajectory& traj, const std::string& path);
void emit_density_trajectory(const DensityTrajectory& traj,
                             const std::optional<PayoffMatrix>& a, const std::string& path);

// Runs one scenario, writes its outputs under out_dir, returns the summary.
RunSummary run_scenario(const ScenarioConfig& cfg, const std::string& out_dir,
                        bool quiet = true);

// CLI entry points: parse the subcommand's config text, run, write outputs.
// Throw ConfigError for usage/config problems and NumericalError for
// numerical failures.
void run_simulate_command(const std::string& config_text, const std::string& out_dir,
                          std::optional<std::uint64_t> seed_override, bool quiet,
                          std::optional<ScenarioMode> forced_mode = std::nullopt);
void run_equilibria_command(const std::string& config_text, const std::string& out_dir,
                            std::optional<std::uint64_t> seed_override, bool quiet);
void run_entropy_command(const std::string& config_text, const std::string& out_dir,
                         bool quiet);
void run_gibbs_command(const std::string& config_text, const std::string& out_dir,
                       bool quiet);
void run_sweep_command(const std::string& config_text, const std::string& out_dir,
                       std::optional<std::uint64_t> seed_override, bool quiet);

}  // namespace replidyn
