#include "replidyn/scenario.hpp"

#include "replidyn/numeric.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <mutex>
#include <random>
#include <thread>
#include <utility>

namespace replidyn {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Small JSON / string helpers
// ---------------------------------------------------------------------------

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
}

void require_object(const json& v, const std::string& where) {
  if (!v.is_object()) throw ConfigError(where + " must be an object");
}

void require_allowed_keys(const json& obj, const std::string& where,
                          std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("unknown config key '" + item.key() + "' in " + where);
    }
  }
}

double get_double(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field + " must be a number");
  return v.get<double>();
}

std::int64_t get_integer(const json& v, const std::string& field) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    throw ConfigError(field + " must be an integer");
  }
  return v.get<std::int64_t>();
}

std::uint64_t get_seed(const json& v, const std::string& field) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    const std::int64_t s = v.get<std::int64_t>();
    if (s < 0) throw ConfigError(field + " must be a non-negative integer");
    return static_cast<std::uint64_t>(s);
  }
  throw ConfigError(field + " must be a non-negative integer");
}

bool get_bool(const json& v, const std::string& field) {
  if (!v.is_boolean()) throw ConfigError(field + " must be a boolean");
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& field) {
  if (!v.is_string() || v.get<std::string>().empty()) {
    throw ConfigError(field + " must be a non-empty string");
  }
  return v.get<std::string>();
}

Eigen::VectorXd parse_real_vector(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) {
    throw ConfigError(field + " must be a non-empty array of numbers");
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = get_double(v[i], field + " entries");
  }
  return out;
}

Eigen::MatrixXd parse_real_matrix(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) {
    throw ConfigError(field + " must be a non-empty array of rows");
  }
  const std::size_t rows = v.size();
  if (!v[0].is_array() || v[0].empty()) {
    throw ConfigError(field + " rows must be non-empty arrays of numbers");
  }
  const std::size_t cols = v[0].size();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!v[i].is_array() || v[i].size() != cols) {
      throw ConfigError(field + " rows must all have the same length");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          get_double(v[i][j], field + " entries");
    }
  }
  return out;
}

// A complex matrix is either a plain array of rows (real) or an object
// {"real": [[..]], "imag": [[..]]} with matching shapes.
Eigen::MatrixXcd parse_complex_matrix(const json& v, const std::string& field) {
  if (v.is_array()) {
    return parse_real_matrix(v, field).cast<Complex>();
  }
  require_object(v, field);
  require_allowed_keys(v, field, {"real", "imag"});
  if (!v.contains("real")) throw ConfigError(field + " needs a 'real' part");
  const Eigen::MatrixXd re = parse_real_matrix(v["real"], field + ".real");
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(re.rows(), re.cols());
  if (v.contains("imag")) {
    im = parse_real_matrix(v["imag"], field + ".imag");
    if (im.rows() != re.rows() || im.cols() != re.cols()) {
      throw ConfigError(field + " real and imaginary parts must have the same shape");
    }
  }
  Eigen::MatrixXcd out(re.rows(), re.cols());
  out.real() = re;
  out.imag() = im;
  return out;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

json complex_matrix_to_json(const Eigen::MatrixXcd& m) {
  return json{{"real", matrix_to_json(m.real())}, {"imag", matrix_to_json(m.imag())}};
}

json support_to_json(const std::vector<int>& support) {
  json out = json::array();
  for (int s : support) out.push_back(s);
  return out;
}

// ---------------------------------------------------------------------------
// Enum <-> string
// ---------------------------------------------------------------------------

const char* mode_name(ScenarioMode m) {
  switch (m) {
    case ScenarioMode::vector: return "vector";
    case ScenarioMode::matrix: return "matrix";
    case ScenarioMode::von_neumann: return "von-neumann";
    case ScenarioMode::compare: return "compare";
  }
  return "vector";
}

ScenarioMode mode_from_string(const std::string& s) {
  if (s == "vector") return ScenarioMode::vector;
  if (s == "matrix") return ScenarioMode::matrix;
  if (s == "von-neumann") return ScenarioMode::von_neumann;
  if (s == "compare") return ScenarioMode::compare;
  throw ConfigError("unknown mode '" + s +
                    "': expected vector, matrix, von-neumann, or compare");
}

const char* method_name(Method m) {
  return m == Method::rk4_fixed ? "rk4-fixed" : "euler";
}

Method method_from_string(const std::string& s) {
  if (s == "rk4-fixed") return Method::rk4_fixed;
  if (s == "euler") return Method::euler;
  throw ConfigError("unknown integrator method '" + s + "': expected rk4-fixed or euler");
}

const char* rule_name(HamiltonianRule r) {
  return r == HamiltonianRule::fixed ? "fixed" : "state-dependent";
}

HamiltonianRule rule_from_string(const std::string& s) {
  if (s == "fixed") return HamiltonianRule::fixed;
  if (s == "state-dependent") return HamiltonianRule::state_dependent;
  throw ConfigError("unknown rule '" + s + "': expected fixed or state-dependent");
}

const char* projection_name(MatrixProjection p) {
  return p == MatrixProjection::diagonal_rebuild ? "diagonal-rebuild" : "none";
}

MatrixProjection projection_from_string(const std::string& s) {
  if (s == "diagonal-rebuild") return MatrixProjection::diagonal_rebuild;
  if (s == "none") return MatrixProjection::none;
  throw ConfigError("unknown projection '" + s + "': expected diagonal-rebuild or none");
}

// ---------------------------------------------------------------------------
// File output
// ---------------------------------------------------------------------------

std::string join_output_path(const std::string& out_dir, const std::string& name) {
  const fs::path base = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  return (base / name).string();
}

void ensure_output_dir(const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir.empty() ? "." : out_dir, ec);
  if (ec) {
    throw ConfigError("cannot create output directory '" + out_dir + "': " + ec.message());
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << content;
  out.flush();
  if (!out) throw ConfigError("cannot write output file: " + path);
}

void write_json_file(const std::string& path, const json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// PopulationState parsing with the documented error wording
// ---------------------------------------------------------------------------

PopulationState parse_state(const json& v, const std::string& field,
                            const std::string& label) {
  const Eigen::VectorXd raw = parse_real_vector(v, field);
  try {
    return PopulationState(raw);
  } catch (const std::invalid_argument& e) {
    std::string inner = e.what();
    const std::string prefix = "state not on simplex: ";
    if (inner.rfind(prefix, 0) == 0) inner = inner.substr(prefix.size());
    throw ConfigError(label + " not on simplex: " + inner);
  }
}

// ---------------------------------------------------------------------------
// Entropy of a stored density-trajectory state (same clipping rule as the
// library entropy: eigenvalues in (-1e-10, 0) count as zero, lower is fatal)
// ---------------------------------------------------------------------------

double density_entropy(const Eigen::MatrixXcd& rho) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  double h = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lambda = es.eigenvalues()(i);
    if (lambda < -1e-10) {
      throw NumericalError("entropy undefined: spectrum has eigenvalue " +
                           std::to_string(lambda) + " below -1e-10");
    }
    if (lambda > 0.0) h -= lambda * std::log(lambda);
  }
  return h;
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

ScenarioConfig parse_impl(const std::string& text, std::optional<ScenarioMode> forced_mode) {
  json doc = parse_json(text);
  require_object(doc, "config");
  require_allowed_keys(doc, "config",
                       {"mode", "game", "game_b", "random_game", "initial_state",
                        "initial_state_b", "density", "hamiltonian", "rule", "projection",
                        "integrator", "tol", "seed", "outputs"});

  ScenarioConfig cfg;

  if (doc.contains("mode")) {
    cfg.mode = mode_from_string(get_string(doc["mode"], "mode"));
    if (forced_mode && cfg.mode != *forced_mode) {
      throw ConfigError(std::string("config mode '") + mode_name(cfg.mode) +
                        "' conflicts with the subcommand (expected " +
                        mode_name(*forced_mode) + ")");
    }
  } else if (forced_mode) {
    cfg.mode = *forced_mode;
  }

  if (doc.contains("game")) {
    try {
      cfg.game = PayoffMatrix(parse_real_matrix(doc["game"], "game"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("game: ") + e.what());
    }
  }
  if (doc.contains("game_b")) {
    try {
      cfg.game_b = PayoffMatrix(parse_real_matrix(doc["game_b"], "game_b"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("game_b: ") + e.what());
    }
  }
  if (doc.contains("random_game")) {
    require_object(doc["random_game"], "random_game");
    require_allowed_keys(doc["random_game"], "random_game", {"n"});
    if (!doc["random_game"].contains("n")) {
      throw ConfigError("random_game needs the strategy count 'n'");
    }
    const std::int64_t n = get_integer(doc["random_game"]["n"], "random_game.n");
    if (n < 1 || n > 64) {
      throw ConfigError("random_game.n must be between 1 and 64");
    }
    cfg.random_game = RandomGameSpec{static_cast<Eigen::Index>(n)};
  }
  if (cfg.game && cfg.random_game) {
    throw ConfigError("'game' and 'random_game' are mutually exclusive");
  }

  if (doc.contains("initial_state")) {
    cfg.initial_state = parse_state(doc["initial_state"], "initial_state", "initial state");
  }
  if (doc.contains("initial_state_b")) {
    cfg.initial_state_b =
        parse_state(doc["initial_state_b"], "initial_state_b", "initial state b");
  }

  if (doc.contains("density")) {
    const Eigen::MatrixXcd raw = parse_complex_matrix(doc["density"], "density");
    try {
      (void)DensityMatrix::from_matrix(raw);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("density: ") + e.what());
    }
    cfg.density = raw;
  }
  if (doc.contains("hamiltonian")) {
    try {
      cfg.hamiltonian = Hamiltonian(parse_complex_matrix(doc["hamiltonian"], "hamiltonian"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("hamiltonian: ") + e.what());
    }
  }

  const bool has_rule = doc.contains("rule");
  if (has_rule) cfg.rule = rule_from_string(get_string(doc["rule"], "rule"));
  const bool has_projection = doc.contains("projection");
  if (has_projection) {
    cfg.projection = projection_from_string(get_string(doc["projection"], "projection"));
  }

  if (doc.contains("integrator")) {
    const json& it = doc["integrator"];
    require_object(it, "integrator");
    require_allowed_keys(it, "integrator",
                         {"dt", "t_max", "method", "boundary_clip", "renormalize_each_step"});
    if (it.contains("dt")) cfg.integrator.dt = get_double(it["dt"], "integrator.dt");
    if (it.contains("t_max")) cfg.integrator.t_max = get_double(it["t_max"], "integrator.t_max");
    if (it.contains("method")) {
      cfg.integrator.method = method_from_string(get_string(it["method"], "integrator.method"));
    }
    if (it.contains("boundary_clip")) {
      cfg.integrator.boundary_clip = get_double(it["boundary_clip"], "integrator.boundary_clip");
    }
    if (it.contains("renormalize_each_step")) {
      cfg.integrator.renormalize_each_step =
          get_bool(it["renormalize_each_step"], "integrator.renormalize_each_step");
    }
  }

  if (doc.contains("tol")) {
    cfg.tol = get_double(doc["tol"], "tol");
    if (!(cfg.tol > 0.0) || !std::isfinite(cfg.tol)) {
      throw ConfigError("tol must be a positive finite number");
    }
  }
  if (doc.contains("seed")) cfg.seed = get_seed(doc["seed"], "seed");

  if (doc.contains("outputs")) {
    const json& out = doc["outputs"];
    require_object(out, "outputs");
    require_allowed_keys(out, "outputs", {"trajectory", "trajectory_b", "deviation", "summary"});
    if (out.contains("trajectory")) {
      cfg.outputs.trajectory = get_string(out["trajectory"], "outputs.trajectory");
    }
    if (out.contains("trajectory_b")) {
      cfg.outputs.trajectory_b = get_string(out["trajectory_b"], "outputs.trajectory_b");
    }
    if (out.contains("deviation")) {
      cfg.outputs.deviation = get_string(out["deviation"], "outputs.deviation");
    }
    if (out.contains("summary")) {
      cfg.outputs.summary = get_string(out["summary"], "outputs.summary");
    }
  }

  // --- Cross-field validation -------------------------------------------

  const bool von_neumann = cfg.mode == ScenarioMode::von_neumann;
  if (!von_neumann) {
    if (cfg.density) throw ConfigError("'density' requires mode von-neumann");
    if (cfg.hamiltonian) throw ConfigError("'hamiltonian' requires mode von-neumann");
    if (has_rule) throw ConfigError("'rule' requires mode von-neumann");
  } else {
    if (!has_rule) {
      cfg.rule = cfg.hamiltonian ? HamiltonianRule::fixed : HamiltonianRule::state_dependent;
    }
    if (cfg.rule == HamiltonianRule::fixed && !cfg.hamiltonian) {
      throw ConfigError("von-neumann mode with rule 'fixed' needs 'hamiltonian'");
    }
    if (cfg.rule == HamiltonianRule::state_dependent && cfg.hamiltonian) {
      throw ConfigError("'hamiltonian' is only used with rule 'fixed'");
    }
  }
  if (has_projection && cfg.mode != ScenarioMode::matrix && cfg.mode != ScenarioMode::compare) {
    throw ConfigError("'projection' requires mode matrix or compare");
  }
  if (cfg.mode != ScenarioMode::vector) {
    if (cfg.game_b || cfg.initial_state_b) {
      throw ConfigError("two-population runs are only available in vector mode");
    }
  }

  const bool needs_game = !von_neumann || cfg.rule == HamiltonianRule::state_dependent;
  if (needs_game && !cfg.game && !cfg.random_game) {
    throw ConfigError("provide exactly one of 'game' and 'random_game'");
  }

  // Resolve the population dimension for consistency checks.
  Eigen::Index n = -1;
  if (cfg.game) n = cfg.game->rows();
  if (cfg.random_game) n = cfg.random_game->n;

  if (cfg.mode == ScenarioMode::vector && cfg.game_b) {
    if (!cfg.game) throw ConfigError("asymmetric runs need an explicit 'game'");
    try {
      (void)AsymmetricGame(*cfg.game, *cfg.game_b);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("game_b: ") + e.what());
    }
    if (!cfg.initial_state) throw ConfigError("asymmetric runs need 'initial_state'");
    if (!cfg.initial_state_b) throw ConfigError("asymmetric runs need 'initial_state_b'");
    if (cfg.initial_state->size() != cfg.game->rows()) {
      throw ConfigError("initial_state length must match the row count of 'game'");
    }
    if (cfg.initial_state_b->size() != cfg.game->cols()) {
      throw ConfigError("initial_state_b length must match the column count of 'game'");
    }
  } else {
    if (cfg.initial_state_b) throw ConfigError("'initial_state_b' requires 'game_b'");
    if (cfg.game && !cfg.game->square()) {
      throw ConfigError("single-population runs need a square game");
    }
    if (cfg.initial_state && n >= 0 && cfg.initial_state->size() != n) {
      throw ConfigError("initial_state length must match the game dimension");
    }
  }

  if (von_neumann) {
    Eigen::Index dim = -1;
    const auto check_dim = [&dim](Eigen::Index d, const char* what) {
      if (dim < 0) {
        dim = d;
      } else if (dim != d) {
        throw ConfigError(std::string(what) + " dimension does not match the rest of the config");
      }
    };
    if (cfg.hamiltonian) check_dim(cfg.hamiltonian->dim(), "hamiltonian");
    if (cfg.density) check_dim(cfg.density->rows(), "density");
    if (cfg.initial_state) check_dim(cfg.initial_state->size(), "initial_state");
    if (n >= 0) check_dim(n, "game");
    if (!cfg.density && !cfg.initial_state && !cfg.game && !cfg.random_game) {
      throw ConfigError("von-neumann mode needs 'density' or 'initial_state'");
    }
    n = dim;
  } else if (cfg.mode == ScenarioMode::vector && cfg.game_b) {
    n = std::max(cfg.game->rows(), cfg.game->cols());
  } else if (!cfg.initial_state && !cfg.random_game) {
    throw ConfigError("'initial_state' is required with an explicit 'game'");
  }

  try {
    cfg.integrator.validate(n >= 1 ? n : 1);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("integrator: ") + e.what());
  }

  return cfg;
}

// ---------------------------------------------------------------------------
// CSV rows
// ---------------------------------------------------------------------------

void append_row(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  out += '\n';
}

}  // namespace

// ---------------------------------------------------------------------------
// Public helpers
// ---------------------------------------------------------------------------

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

PayoffMatrix random_game(Eigen::Index n, std::uint64_t seed) {
  if (n <= 0) throw std::invalid_argument("random game needs at least one strategy");
  // Entries uniform in [-1, 1]. The bit mapping is spelled out (rather than
  // delegated to a distribution) so a seed produces the same game everywhere.
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
      m(i, j) = 2.0 * u - 1.0;
    }
  }
  return PayoffMatrix(std::move(m));
}

std::string echo_config(const ScenarioConfig& cfg) {
  json doc;
  doc["mode"] = mode_name(cfg.mode);
  if (cfg.game) doc["game"] = matrix_to_json(cfg.game->entries());
  if (cfg.game_b) doc["game_b"] = matrix_to_json(cfg.game_b->entries());
  if (cfg.random_game) doc["random_game"] = json{{"n", cfg.random_game->n}};
  if (cfg.initial_state) doc["initial_state"] = vector_to_json(cfg.initial_state->freqs());
  if (cfg.initial_state_b) {
    doc["initial_state_b"] = vector_to_json(cfg.initial_state_b->freqs());
  }
  if (cfg.density) doc["density"] = complex_matrix_to_json(*cfg.density);
  if (cfg.hamiltonian) doc["hamiltonian"] = complex_matrix_to_json(cfg.hamiltonian->entries());
  if (cfg.mode == ScenarioMode::von_neumann) doc["rule"] = rule_name(cfg.rule);
  if (cfg.mode == ScenarioMode::matrix || cfg.mode == ScenarioMode::compare) {
    doc["projection"] = projection_name(cfg.projection);
  }
  doc["integrator"] = json{{"dt", cfg.integrator.dt},
                           {"t_max", cfg.integrator.t_max},
                           {"method", method_name(cfg.integrator.method)},
                           {"boundary_clip", cfg.integrator.boundary_clip},
                           {"renormalize_each_step", cfg.integrator.renormalize_each_step}};
  doc["tol"] = cfg.tol;
  doc["seed"] = cfg.seed;
  doc["outputs"] = json{{"trajectory", cfg.outputs.trajectory},
                        {"trajectory_b", cfg.outputs.trajectory_b},
                        {"deviation", cfg.outputs.deviation},
                        {"summary", cfg.outputs.summary}};
  return doc.dump(2) + "\n";
}

ScenarioConfig parse_config(const std::string& text) { return parse_impl(text, std::nullopt); }

void emit_trajectory(const Trajectory& traj, const std::string& path) {
  if (traj.states.empty()) throw std::invalid_argument("cannot emit an empty trajectory");
  const Eigen::Index n = traj.states.front().size();
  std::string out = "t";
  for (Eigen::Index i = 0; i < n; ++i) out += ",x_" + std::to_string(i + 1);
  out += ",avg_fitness,entropy\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    std::vector<std::string> cells;
    cells.reserve(static_cast<std::size_t>(n) + 3);
    cells.push_back(format_double(traj.times[k]));
    for (Eigen::Index i = 0; i < n; ++i) cells.push_back(format_double(traj.states[k][i]));
    cells.push_back(format_double(traj.observables[k].average_fitness));
    cells.push_back(format_double(traj.observables[k].entropy));
    append_row(out, cells);
  }
  write_text_file(path, out);
}

void emit_matrix_trajectory(const MatrixTrajectory& traj, const std::string& path) {
  if (traj.states.empty()) throw std::invalid_argument("cannot emit an empty trajectory");
  const Eigen::Index n = traj.states.front().rows();
  std::string out = "t";
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      out += ",X_" + std::to_string(i + 1) + std::to_string(j + 1);
    }
  }
  out += ",avg_fitness,entropy\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    std::vector<std::string> cells;
    cells.push_back(format_double(traj.times[k]));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i; j < n; ++j) cells.push_back(format_double(traj.states[k](i, j)));
    }
    cells.push_back(format_double(traj.observables[k].average_fitness));
    cells.push_back(format_double(traj.observables[k].entropy));
    append_row(out, cells);
  }
  write_text_file(path, out);
}

void emit_density_trajectory(const DensityTrajectory& traj,
                             const std::optional<PayoffMatrix>& a, const std::string& path) {
  if (traj.states.empty()) throw std::invalid_argument("cannot emit an empty trajectory");
  const Eigen::Index n = traj.states.front().rows();
  if (a && a->rows() != n) {
    throw std::invalid_argument("payoff matrix and density trajectory dimensions differ");
  }
  std::string out = "t";
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const std::string tag = std::to_string(i + 1) + std::to_string(j + 1);
      out += ",rho_" + tag + "_re,rho_" + tag + "_im";
    }
  }
  out += ",avg_fitness,entropy\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const Eigen::MatrixXcd& rho = traj.states[k];
    std::vector<std::string> cells;
    cells.push_back(format_double(traj.times[k]));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i; j < n; ++j) {
        cells.push_back(format_double(rho(i, j).real()));
        cells.push_back(format_double(rho(i, j).imag()));
      }
    }
    if (a) {
      const Eigen::VectorXd d = rho.diagonal().real();
      cells.push_back(format_double(d.dot(a->entries() * d)));
    } else {
      cells.push_back(format_double(std::numeric_limits<double>::quiet_NaN()));
    }
    cells.push_back(format_double(density_entropy(rho)));
    append_row(out, cells);
  }
  write_text_file(path, out);
}

// ---------------------------------------------------------------------------
// Scenario execution
// ---------------------------------------------------------------------------

RunSummary run_scenario(const ScenarioConfig& cfg, const std::string& out_dir, bool quiet) {
  const auto start = std::chrono::steady_clock::now();
  ensure_output_dir(out_dir);

  std::optional<PayoffMatrix> game = cfg.game;
  if (!game && cfg.random_game) game = random_game(cfg.random_game->n, cfg.seed);

  std::optional<PopulationState> x0 = cfg.initial_state;
  if (!x0 && game && !cfg.density) x0 = PopulationState::uniform(game->rows());

  RunSummary summary;
  summary.mode = cfg.mode;
  summary.config_echo = echo_config(cfg);

  EquilibriumScan scan;
  const bool single_population = game && game->square() && !cfg.game_b;
  if (cfg.mode != ScenarioMode::von_neumann && single_population && game->rows() <= 5) {
    scan = find_equilibria(*game, cfg.tol);
  }
  summary.equilibria = scan.equilibria;

  switch (cfg.mode) {
    case ScenarioMode::vector: {
      if (cfg.game_b) {
        const AsymmetricGame g(*game, *cfg.game_b);
        const auto [ta, tb] =
            integrate_asymmetric(g, *cfg.initial_state, *cfg.initial_state_b, cfg.integrator);
        emit_trajectory(ta, join_output_path(out_dir, cfg.outputs.trajectory));
        emit_trajectory(tb, join_output_path(out_dir, cfg.outputs.trajectory_b));
        const PopulationState& xa = ta.states.back();
        const PopulationState& xb = tb.states.back();
        summary.final_state.resize(xa.size() + xb.size());
        summary.final_state << xa.freqs(), xb.freqs();
        const auto [da, db] = asymmetric_field(g, xa, xb);
        summary.residual_norm =
            std::max(da.lpNorm<Eigen::Infinity>(), db.lpNorm<Eigen::Infinity>());
        summary.entropy_initial =
            ta.observables.front().entropy + tb.observables.front().entropy;
        summary.entropy_final = ta.observables.back().entropy + tb.observables.back().entropy;
      } else {
        const Trajectory traj = integrate(*game, *x0, cfg.integrator);
        emit_trajectory(traj, join_output_path(out_dir, cfg.outputs.trajectory));
        summary.final_state = traj.states.back().freqs();
        summary.residual_norm =
            replicator_field(*game, traj.states.back()).lpNorm<Eigen::Infinity>();
        summary.entropy_initial = traj.observables.front().entropy;
        summary.entropy_final = traj.observables.back().entropy;
      }
      break;
    }
    case ScenarioMode::matrix: {
      const MatrixTrajectory traj = integrate_matrix(*game, FrequencyMatrix::from_state(*x0),
                                                     cfg.integrator, cfg.projection);
      emit_matrix_trajectory(traj, join_output_path(out_dir, cfg.outputs.trajectory));
      const PopulationState final_diag =
          PopulationState::renormalized(traj.states.back().diagonal());
      summary.final_state = traj.states.back().diagonal();
      summary.residual_norm =
          replicator_field(*game, final_diag).lpNorm<Eigen::Infinity>();
      summary.entropy_initial = traj.observables.front().entropy;
      summary.entropy_final = traj.observables.back().entropy;
      break;
    }
    case ScenarioMode::von_neumann: {
      const DensityMatrix rho0 = cfg.density
                                     ? DensityMatrix::from_matrix(*cfg.density)
                                     : DensityMatrix::from_frequency(
                                           FrequencyMatrix::from_state(*x0));
      EvolutionRule rule = cfg.rule == HamiltonianRule::fixed
                               ? EvolutionRule(FixedHamiltonian{*cfg.hamiltonian})
                               : EvolutionRule(PayoffGenerator{*game});
      const DensityTrajectory traj = integrate_von_neumann(rule, rho0, cfg.integrator);
      emit_density_trajectory(traj, game, join_output_path(out_dir, cfg.outputs.trajectory));
      const Eigen::MatrixXcd& final_rho = traj.states.back();
      summary.final_state = final_rho.diagonal().real();
      Eigen::MatrixXcd field;
      if (cfg.rule == HamiltonianRule::fixed) {
        const Eigen::MatrixXcd& h = cfg.hamiltonian->entries();
        field = Complex(0.0, -1.0) * (h * final_rho - final_rho * h);
      } else {
        const Eigen::MatrixXcd a = game->entries().cast<Complex>();
        const Eigen::MatrixXcd lambda = 0.5 * (a * final_rho - final_rho * a * final_rho);
        field = lambda * final_rho - final_rho * lambda;
      }
      summary.residual_norm = field.lpNorm<Eigen::Infinity>();
      summary.entropy_initial = density_entropy(traj.states.front());
      summary.entropy_final = density_entropy(final_rho);
      break;
    }
    case ScenarioMode::compare: {
      const Trajectory vec = integrate(*game, *x0, cfg.integrator);
      const MatrixTrajectory mat = integrate_matrix(*game, FrequencyMatrix::from_state(*x0),
                                                    cfg.integrator, cfg.projection);
      emit_trajectory(vec, join_output_path(out_dir, cfg.outputs.trajectory));
      emit_matrix_trajectory(mat, join_output_path(out_dir, cfg.outputs.trajectory_b));

      std::string dev = "t,deviation\n";
      double worst = 0.0;
      for (std::size_t k = 0; k < vec.states.size(); ++k) {
        const double d =
            (mat.states[k].diagonal() - vec.states[k].freqs()).lpNorm<Eigen::Infinity>();
        worst = std::max(worst, d);
        append_row(dev, {format_double(vec.times[k]), format_double(d)});
      }
      write_text_file(join_output_path(out_dir, cfg.outputs.deviation), dev);
      summary.max_deviation = worst;
      summary.final_state = vec.states.back().freqs();
      summary.residual_norm =
          replicator_field(*game, vec.states.back()).lpNorm<Eigen::Infinity>();
      summary.entropy_initial = vec.observables.front().entropy;
      summary.entropy_final = vec.observables.back().entropy;
      break;
    }
  }

  json js;
  js["mode"] = mode_name(cfg.mode);
  js["final_state"] = vector_to_json(summary.final_state);
  js["residual_norm"] = summary.residual_norm;
  json eq = json::array();
  for (const EquilibriumReport& r : scan.equilibria) {
    eq.push_back(json{{"state", vector_to_json(r.state.freqs())},
                      {"support", support_to_json(r.support)},
                      {"nash", r.nash},
                      {"strict", r.strict},
                      {"ess", r.ess}});
  }
  js["equilibria"] = eq;
  json singular = json::array();
  for (const std::vector<int>& s : scan.singular_supports) singular.push_back(support_to_json(s));
  js["singular_supports"] = singular;
  js["entropy"] = json{{"initial", summary.entropy_initial}, {"final", summary.entropy_final}};
  if (cfg.mode == ScenarioMode::compare) js["max_deviation"] = summary.max_deviation;
  js["config"] = json::parse(summary.config_echo);
  write_json_file(join_output_path(out_dir, cfg.outputs.summary), js);

  summary.duration_seconds = elapsed_seconds(start);
  if (!quiet) {
    std::cout << "mode=" << mode_name(cfg.mode)
              << " summary=" << join_output_path(out_dir, cfg.outputs.summary)
              << " duration_seconds=" << format_double(summary.duration_seconds) << "\n";
  }
  return summary;
}

// ---------------------------------------------------------------------------
// CLI entry points
// ---------------------------------------------------------------------------

void run_simulate_command(const std::string& config_text, const std::string& out_dir,
                          std::optional<std::uint64_t> seed_override, bool quiet,
                          std::optional<ScenarioMode> forced_mode) {
  ScenarioConfig cfg = parse_impl(config_text, forced_mode);
  if (seed_override) cfg.seed = *seed_override;
  (void)run_scenario(cfg, out_dir, quiet);
}

void run_equilibria_command(const std::string& config_text, const std::string& out_dir,
                            std::optional<std::uint64_t> seed_override, bool quiet) {
  const auto start = std::chrono::steady_clock::now();
  json doc = parse_json(config_text);
  require_object(doc, "config");
  require_allowed_keys(doc, "config", {"game", "random_game", "seed", "tol", "outputs"});

  std::optional<PayoffMatrix> game;
  if (doc.contains("game")) {
    try {
      game = PayoffMatrix(parse_real_matrix(doc["game"], "game"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("game: ") + e.what());
    }
    if (!game->square()) throw ConfigError("equilibrium scans need a square game");
  }
  std::optional<Eigen::Index> random_n;
  if (doc.contains("random_game")) {
    require_object(doc["random_game"], "random_game");
    require_allowed_keys(doc["random_game"], "random_game", {"n"});
    if (!doc["random_game"].contains("n")) {
      throw ConfigError("random_game needs the strategy count 'n'");
    }
    const std::int64_t n = get_integer(doc["random_game"]["n"], "random_game.n");
    if (n < 1) throw ConfigError("random_game.n must be at least 1");
    random_n = static_cast<Eigen::Index>(n);
  }
  if (static_cast<bool>(game) == static_cast<bool>(random_n)) {
    throw ConfigError("provide exactly one of 'game' and 'random_game'");
  }
  double tol = kDefaultTol;
  if (doc.contains("tol")) {
    tol = get_double(doc["tol"], "tol");
    if (!(tol > 0.0) || !std::isfinite(tol)) throw ConfigError("tol must be a positive finite number");
  }
  std::uint64_t seed = doc.contains("seed") ? get_seed(doc["seed"], "seed") : 0;
  if (seed_override) seed = *seed_override;
  std::string summary_path = "summary.json";
  if (doc.contains("outputs")) {
    require_object(doc["outputs"], "outputs");
    require_allowed_keys(doc["outputs"], "outputs", {"summary"});
    if (doc["outputs"].contains("summary")) {
      summary_path = get_string(doc["outputs"]["summary"], "outputs.summary");
    }
  }

  if (!game) game = random_game(*random_n, seed);
  if (game->rows() > 5) {
    throw ConfigError("dimension too large: support enumeration caps at 5 strategies");
  }

  ensure_output_dir(out_dir);
  const EquilibriumScan scan = find_equilibria(*game, tol);

  json eq = json::array();
  for (const EquilibriumReport& r : scan.equilibria) {
    json entry{{"state", vector_to_json(r.state.freqs())},
               {"support", support_to_json(r.support)},
               {"nash", r.nash},
               {"strict", r.strict},
               {"ess", r.ess}};
    try {
      const FixedPointReport fp = find_fixed_point(*game, r.state, tol);
      entry["stability"] = fp.stability == Stability::stable     ? "stable"
                           : fp.stability == Stability::unstable ? "unstable"
                                                                 : "marginal";
      json spectrum = json::array();
      for (const std::complex<double>& z : fp.jacobian_eigenvalues) {
        spectrum.push_back(json{{"re", z.real()}, {"im", z.imag()}});
      }
      entry["jacobian_eigenvalues"] = spectrum;
    } catch (const NumericalError&) {
      entry["stability"] = "unavailable";
    }
    eq.push_back(std::move(entry));
  }
  json singular = json::array();
  for (const std::vector<int>& s : scan.singular_supports) singular.push_back(support_to_json(s));

  json js;
  js["game"] = matrix_to_json(game->entries());
  js["tol"] = tol;
  js["equilibria"] = eq;
  js["singular_supports"] = singular;
  json config{{"tol", tol}, {"seed", seed}, {"outputs", json{{"summary", summary_path}}}};
  if (random_n) config["random_game"] = json{{"n", *random_n}};
  js["config"] = config;
  write_json_file(join_output_path(out_dir, summary_path), js);

  if (!quiet) {
    std::cout << "equilibria=" << scan.equilibria.size()
              << " singular_supports=" << scan.singular_supports.size()
              << " duration_seconds=" << format_double(elapsed_seconds(start)) << "\n";
  }
}

void run_entropy_command(const std::string& config_text, const std::string& out_dir,
                         bool quiet) {
  const auto start = std::chrono::steady_clock::now();
  json doc = parse_json(config_text);
  require_object(doc, "config");
  require_allowed_keys(doc, "config", {"state", "density", "outputs"});
  if (!doc.contains("state") && !doc.contains("density")) {
    throw ConfigError("provide 'state', 'density', or both");
  }
  std::string summary_path = "summary.json";
  if (doc.contains("outputs")) {
    require_object(doc["outputs"], "outputs");
    require_allowed_keys(doc["outputs"], "outputs", {"summary"});
    if (doc["outputs"].contains("summary")) {
      summary_path = get_string(doc["outputs"]["summary"], "outputs.summary");
    }
  }

  ensure_output_dir(out_dir);
  json js;
  if (doc.contains("state")) {
    const PopulationState x = parse_state(doc["state"], "state", "state");
    js["state"] = json{
        {"frequencies", vector_to_json(x.freqs())},
        {"shannon", diagonal_entropy(x)},
        {"frequency_matrix", entropy(FrequencyMatrix::from_state(x))},
        {"uniform_reference", std::log(static_cast<double>(x.size()))}};
  }
  if (doc.contains("density")) {
    const Eigen::MatrixXcd raw = parse_complex_matrix(doc["density"], "density");
    DensityMatrix rho = [&raw] {
      try {
        return DensityMatrix::from_matrix(raw);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("density: ") + e.what());
      }
    }();
    js["density"] = json{{"dimension", rho.dim()},
                         {"von_neumann", entropy(rho)},
                         {"purity", purity(rho)},
                         {"diagonal_shannon", shannon_entropy(rho.diagonal_real())}};
  }
  js["config"] = json{{"outputs", json{{"summary", summary_path}}}};
  write_json_file(join_output_path(out_dir, summary_path), js);

  if (!quiet) {
    std::cout << "summary=" << join_output_path(out_dir, summary_path)
              << " duration_seconds=" << format_double(elapsed_seconds(start)) << "\n";
  }
}

void run_gibbs_command(const std::string& config_text, const std::string& out_dir, bool quiet) {
  const auto start = std::chrono::steady_clock::now();
  json doc = parse_json(config_text);
  require_object(doc, "config");
  require_allowed_keys(doc, "config", {"hamiltonian", "beta", "betas", "beta_grid", "outputs"});
  if (!doc.contains("hamiltonian")) throw ConfigError("gibbs runs need 'hamiltonian'");

  const Hamiltonian h = [&doc] {
    try {
      return Hamiltonian(parse_complex_matrix(doc["hamiltonian"], "hamiltonian"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("hamiltonian: ") + e.what());
    }
  }();

  const int sources = static_cast<int>(doc.contains("beta")) +
                      static_cast<int>(doc.contains("betas")) +
                      static_cast<int>(doc.contains("beta_grid"));
  if (sources != 1) {
    throw ConfigError("provide exactly one of 'beta', 'betas', 'beta_grid'");
  }
  std::vector<double> betas;
  if (doc.contains("beta")) {
    betas.push_back(get_double(doc["beta"], "beta"));
  } else if (doc.contains("betas")) {
    const Eigen::VectorXd v = parse_real_vector(doc["betas"], "betas");
    betas.assign(v.data(), v.data() + v.size());
  } else {
    const json& grid = doc["beta_grid"];
    require_object(grid, "beta_grid");
    require_allowed_keys(grid, "beta_grid", {"from", "to", "points"});
    if (!grid.contains("from") || !grid.contains("to") || !grid.contains("points")) {
      throw ConfigError("beta_grid needs 'from', 'to', and 'points'");
    }
    const double from = get_double(grid["from"], "beta_grid.from");
    const double to = get_double(grid["to"], "beta_grid.to");
    const std::int64_t points = get_integer(grid["points"], "beta_grid.points");
    if (points < 2) throw ConfigError("beta_grid.points must be at least 2");
    for (std::int64_t k = 0; k < points; ++k) {
      betas.push_back(from + (to - from) * static_cast<double>(k) /
                                 static_cast<double>(points - 1));
    }
  }
  for (double b : betas) {
    if (!std::isfinite(b)) throw ConfigError("inverse temperatures must be finite");
  }

  std::string table_path = "gibbs.csv";
  std::string summary_path = "summary.json";
  if (doc.contains("outputs")) {
    require_object(doc["outputs"], "outputs");
    require_allowed_keys(doc["outputs"], "outputs", {"table", "summary"});
    if (doc["outputs"].contains("table")) {
      table_path = get_string(doc["outputs"]["table"], "outputs.table");
    }
    if (doc["outputs"].contains("summary")) {
      summary_path = get_string(doc["outputs"]["summary"], "outputs.summary");
    }
  }

  ensure_output_dir(out_dir);
  const Eigen::Index n = h.dim();
  std::string csv = "beta,partition_function,entropy";
  for (Eigen::Index i = 0; i < n; ++i) csv += ",rho_" + std::to_string(i + 1);
  csv += '\n';
  double entropy_first = 0.0;
  double entropy_last = 0.0;
  for (std::size_t k = 0; k < betas.size(); ++k) {
    const double z = partition_function(h, betas[k]);
    const DensityMatrix rho = gibbs_state(h, betas[k]);
    const double sigma = entropy(rho);
    if (k == 0) entropy_first = sigma;
    entropy_last = sigma;
    std::vector<std::string> cells{format_double(betas[k]), format_double(z),
                                   format_double(sigma)};
    const Eigen::VectorXd diag = rho.diagonal_real();
    for (Eigen::Index i = 0; i < n; ++i) cells.push_back(format_double(diag(i)));
    append_row(csv, cells);
  }
  write_text_file(join_output_path(out_dir, table_path), csv);

  json js;
  js["dimension"] = n;
  js["rows"] = betas.size();
  js["beta_first"] = betas.front();
  js["beta_last"] = betas.back();
  js["entropy_first"] = entropy_first;
  js["entropy_last"] = entropy_last;
  js["config"] = json{{"hamiltonian", complex_matrix_to_json(h.entries())},
                      {"outputs", json{{"table", table_path}, {"summary", summary_path}}}};
  write_json_file(join_output_path(out_dir, summary_path), js);

  if (!quiet) {
    std::cout << "rows=" << betas.size()
              << " duration_seconds=" << format_double(elapsed_seconds(start)) << "\n";
  }
}

void run_sweep_command(const std::string& config_text, const std::string& out_dir,
                       std::optional<std::uint64_t> seed_override, bool quiet) {
  const auto start = std::chrono::steady_clock::now();
  json doc = parse_json(config_text);
  require_object(doc, "config");
  require_allowed_keys(doc, "config", {"n", "count", "seed", "tol", "workers", "outputs"});
  if (!doc.contains("n") || !doc.contains("count")) {
    throw ConfigError("sweep runs need 'n' and 'count'");
  }
  const std::int64_t n64 = get_integer(doc["n"], "n");
  if (n64 < 1 || n64 > 5) {
    throw ConfigError("n must be between 1 and 5: support enumeration caps at 5 strategies");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(n64);
  const std::int64_t count64 = get_integer(doc["count"], "count");
  if (count64 < 1 || count64 > 1000000) {
    throw ConfigError("count must be between 1 and 1000000");
  }
  const std::size_t count = static_cast<std::size_t>(count64);
  std::uint64_t seed = doc.contains("seed") ? get_seed(doc["seed"], "seed") : 0;
  if (seed_override) seed = *seed_override;
  double tol = kDefaultTol;
  if (doc.contains("tol")) {
    tol = get_double(doc["tol"], "tol");
    if (!(tol > 0.0) || !std::isfinite(tol)) throw ConfigError("tol must be a positive finite number");
  }
  unsigned workers = std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
  bool workers_explicit = false;
  if (doc.contains("workers")) {
    const std::int64_t w = get_integer(doc["workers"], "workers");
    if (w < 1 || w > 256) throw ConfigError("workers must be between 1 and 256");
    workers = static_cast<unsigned>(w);
    workers_explicit = true;
  }
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  std::string table_path = "sweep.csv";
  std::string summary_path = "summary.json";
  if (doc.contains("outputs")) {
    require_object(doc["outputs"], "outputs");
    require_allowed_keys(doc["outputs"], "outputs", {"table", "summary"});
    if (doc["outputs"].contains("table")) {
      table_path = get_string(doc["outputs"]["table"], "outputs.table");
    }
    if (doc["outputs"].contains("summary")) {
      summary_path = get_string(doc["outputs"]["summary"], "outputs.summary");
    }
  }

  ensure_output_dir(out_dir);

  struct Row {
    std::size_t candidates = 0;
    std::size_t nash = 0;
    std::size_t strict = 0;
    std::size_t ess = 0;
    std::size_t singular = 0;
  };
  std::vector<Row> rows(count);

  const auto analyze = [&rows, n, seed, tol](std::size_t i) {
    const PayoffMatrix a = random_game(n, mix_seed(seed, i));
    const EquilibriumScan scan = find_equilibria(a, tol);
    Row& row = rows[i];
    row.candidates = scan.equilibria.size();
    row.singular = scan.singular_supports.size();
    for (const EquilibriumReport& r : scan.equilibria) {
      row.nash += r.nash ? 1 : 0;
      row.strict += r.strict ? 1 : 0;
      row.ess += r.ess ? 1 : 0;
    }
  };

  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) analyze(i);
  } else {
    // Each game index is claimed once and written to its own slot, so the
    // table is identical no matter how the indices land on threads.
    std::atomic<std::size_t> next(0);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
          try {
            analyze(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            return;
          }
        }
      });
    }
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  std::string csv = "game,candidates,nash,strict,ess,singular_supports\n";
  Row totals;
  for (std::size_t i = 0; i < count; ++i) {
    const Row& r = rows[i];
    totals.candidates += r.candidates;
    totals.nash += r.nash;
    totals.strict += r.strict;
    totals.ess += r.ess;
    totals.singular += r.singular;
    append_row(csv, {std::to_string(i), std::to_string(r.candidates), std::to_string(r.nash),
                     std::to_string(r.strict), std::to_string(r.ess),
                     std::to_string(r.singular)});
  }
  write_text_file(join_output_path(out_dir, table_path), csv);

  const auto mean = [count](std::size_t total) {
    return static_cast<double>(total) / static_cast<double>(count);
  };
  json config{{"n", n}, {"count", count}, {"seed", seed}, {"tol", tol}};
  if (workers_explicit) config["workers"] = workers;
  config["outputs"] = json{{"table", table_path}, {"summary", summary_path}};
  json js;
  js["games"] = count;
  js["strategies"] = n;
  js["totals"] = json{{"candidates", totals.candidates},
                      {"nash", totals.nash},
                      {"strict", totals.strict},
                      {"ess", totals.ess},
                      {"singular_supports", totals.singular}};
  js["means"] = json{{"candidates", mean(totals.candidates)},
                     {"nash", mean(totals.nash)},
                     {"strict", mean(totals.strict)},
                     {"ess", mean(totals.ess)},
                     {"singular_supports", mean(totals.singular)}};
  js["config"] = config;
  write_json_file(join_output_path(out_dir, summary_path), js);

  if (!quiet) {
    std::cout << "games=" << count
              << " duration_seconds=" << format_double(elapsed_seconds(start)) << "\n";
  }
}

}  // namespace replidyn
