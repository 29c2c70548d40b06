// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Invoked by ctest with the CLI binary, the canonical configs, the
// committed golden outputs and a scratch directory.

#include "replidyn/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace replidyn;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string cli;
  fs::path configs;
  fs::path golden;
  fs::path scratch;
};

class Failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& detail) {
  if (!ok) throw Failure(detail);
}

void require_close(double value, double target, double tol, const std::string& what) {
  if (!(std::abs(value - target) <= tol)) {
    std::ostringstream ss;
    ss.precision(17);
    ss << what << ": " << value << " is not within " << tol << " of " << target;
    throw Failure(ss.str());
  }
}

PopulationState random_interior_state(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.1);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = u(rng);
  v /= v.sum();
  return PopulationState(v);
}

PayoffMatrix hawk_dove() {
  Eigen::MatrixXd m(2, 2);
  m << -1.0, 2.0, 0.0, 1.0;
  return PayoffMatrix(m);
}

PayoffMatrix prisoners_dilemma() {
  Eigen::MatrixXd m(2, 2);
  m << 3.0, 0.0, 5.0, 1.0;
  return PayoffMatrix(m);
}

PayoffMatrix rock_paper_scissors() {
  Eigen::MatrixXd m(3, 3);
  m << 0.0, -1.0, 1.0, 1.0, 0.0, -1.0, -1.0, 1.0, 0.0;
  return PayoffMatrix(m);
}

PopulationState state2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return PopulationState(v);
}

PopulationState state3(double a, double b, double c) {
  Eigen::VectorXd v(3);
  v << a, b, c;
  return PopulationState(v);
}

IntegratorConfig config(double dt, double t_max) {
  IntegratorConfig cfg;
  cfg.dt = dt;
  cfg.t_max = t_max;
  return cfg;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  require(in.good(), "cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- criterion bodies -------------------------------------------------------

void matrix_engine_tracks_vector_engine() {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + (trial % 3);
    const PayoffMatrix a = random_game(n, 1000 + static_cast<std::uint64_t>(trial));
    const PopulationState x0 = random_interior_state(n, rng);
    const IntegratorConfig cfg = config(0.01, 20.0);
    const Trajectory vec = integrate(a, x0, cfg);
    const MatrixTrajectory mat =
        integrate_matrix(a, FrequencyMatrix::from_state(x0), cfg,
                         MatrixProjection::diagonal_rebuild);
    require(vec.states.size() == mat.states.size(), "stored step counts differ");
    double worst = 0.0;
    for (std::size_t k = 0; k < vec.states.size(); ++k) {
      const Eigen::VectorXd diff =
          mat.states[k].diagonal() - vec.states[k].freqs();
      worst = std::max(worst, diff.lpNorm<Eigen::Infinity>());
    }
    require_close(worst, 0.0, 1e-6, "trial " + std::to_string(trial) + " diagonal gap");
  }
}

void decomposition_identities_hold() {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + (trial % 4);
    const PayoffMatrix a = random_game(n, 5000 + static_cast<std::uint64_t>(trial));
    const PopulationState x = random_interior_state(n, rng);
    const DecompositionReport report = verify_decomposition(a, x);
    require_close(report.max_residual(), 0.0, 1e-10,
                  "trial " + std::to_string(trial) + " residual");
  }
  bool threw = false;
  try {
    verify_decomposition(hawk_dove(), PopulationState::pure(2, 0));
  } catch (const std::domain_error&) {
    threw = true;
  }
  require(threw, "boundary state must be a domain error");
}

void frequency_matrix_structure_preserved() {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 2 + (trial % 4);
    const FrequencyMatrix x = FrequencyMatrix::from_state(random_interior_state(n, rng));
    const Eigen::MatrixXd& m = x.entries();
    require_close(m.trace(), 1.0, 1e-12, "trace");
    require((m - m.transpose()).lpNorm<Eigen::Infinity>() == 0.0, "symmetry");
    require_close((m * m - m).lpNorm<Eigen::Infinity>(), 0.0, 1e-10, "idempotency");
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    require(es.eigenvalues().minCoeff() >= -1e-10, "eigenvalue floor");
    require(es.eigenvalues().maxCoeff() <= 1.0 + 1e-10, "eigenvalue ceiling");
    require(es.eigenvalues()(n - 2) <= 1e-10, "rank one");
  }

  const PayoffMatrix a = hawk_dove();
  const FrequencyMatrix x0 = FrequencyMatrix::from_state(state2(0.25, 0.75));
  const IntegratorConfig cfg = config(0.01, 10.0);
  const MatrixTrajectory projected =
      integrate_matrix(a, x0, cfg, MatrixProjection::diagonal_rebuild);
  require_close(projected.max_trace_drift(), 0.0, 1e-9, "projected trace drift");
  const MatrixTrajectory raw = integrate_matrix(a, x0, cfg, MatrixProjection::none);
  require_close(raw.max_trace_drift(), 0.0, 1e-9, "raw trace drift");
  require(std::isfinite(raw.max_idempotency_drift()), "idempotency drift recorded");
  require(raw.idempotency_drift.size() == raw.states.size(),
          "idempotency drift per stored step");
}

void equilibria_are_classified() {
  {
    const EquilibriumScan scan = find_equilibria(hawk_dove());
    require(scan.equilibria.size() == 3, "hawk-dove candidate count");
    bool found = false;
    for (const EquilibriumReport& r : scan.equilibria) {
      if (r.support.size() == 2) {
        found = true;
        require_close(r.state[0], 0.5, 1e-12, "hawk-dove mix");
        require(r.nash && !r.strict && r.ess, "hawk-dove mix verdicts");
      } else {
        require(!r.nash, "hawk-dove vertices are not equilibria");
      }
    }
    require(found, "hawk-dove interior equilibrium");
    const FixedPointReport fp = find_fixed_point(hawk_dove(), state2(0.4, 0.6));
    require(fp.stability == Stability::stable, "hawk-dove mix is stable");
  }
  {
    const EquilibriumScan scan = find_equilibria(prisoners_dilemma());
    int nash_count = 0;
    for (const EquilibriumReport& r : scan.equilibria) {
      if (!r.nash) continue;
      ++nash_count;
      require(r.support == std::vector<int>{1}, "defection is the equilibrium");
      require(r.strict && r.ess, "defection is strict and stable");
    }
    require(nash_count == 1, "dilemma has a unique equilibrium");
    const FixedPointReport fp = find_fixed_point(prisoners_dilemma(), state2(0.1, 0.9));
    require(fp.stability == Stability::stable, "defection is dynamically stable");
  }
  {
    const EquilibriumScan scan = find_equilibria(rock_paper_scissors());
    bool found = false;
    for (const EquilibriumReport& r : scan.equilibria) {
      if (r.support.size() == 3) {
        found = true;
        require_close(r.state[0], 1.0 / 3.0, 1e-12, "cyclic center");
        require(r.nash && !r.ess, "cyclic center is Nash but not ESS");
      }
    }
    require(found, "cyclic interior equilibrium");
    require(scan.singular_supports.size() == 3, "cyclic pair supports are singular");
    const FixedPointReport fp =
        find_fixed_point(rock_paper_scissors(), state3(0.3, 0.3, 0.4));
    require(fp.stability == Stability::marginal, "cyclic center is marginal");
  }
}

void flows_converge_to_attractors() {
  const Trajectory hd = integrate(hawk_dove(), state2(0.1, 0.9), config(0.01, 100.0));
  require_close(hd.states.back()[0], 0.5, 1e-6, "hawk-dove limit");
  const Trajectory pd =
      integrate(prisoners_dilemma(), state2(0.9, 0.1), config(0.01, 200.0));
  require_close(pd.states.back()[0], 0.0, 1e-6, "cooperation dies out");
  require_close(pd.states.back()[1], 1.0, 1e-6, "defection takes over");
}

void cyclic_invariant_is_conserved() {
  const Trajectory traj =
      integrate(rock_paper_scissors(), state3(0.2, 0.3, 0.5), config(0.01, 50.0));
  const double reference = 0.2 * 0.3 * 0.5;
  double worst = 0.0;
  for (const PopulationState& s : traj.states) {
    worst = std::max(worst, std::abs(s.freqs().prod() - reference));
  }
  require_close(worst, 0.0, 1e-5, "product drift");
}

void entropy_anchors_hold() {
  for (int n = 2; n <= 8; ++n) {
    require_close(entropy(DensityMatrix::maximally_mixed(n)), std::log(double(n)),
                  1e-12, "maximally mixed entropy, n = " + std::to_string(n));
  }
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 2 + (trial % 4);
    const PopulationState x = random_interior_state(n, rng);
    require_close(entropy(FrequencyMatrix::from_state(x)), 0.0, 1e-10,
                  "square-root embeddings are pure");
  }
}

void thermal_states_are_reproduced() {
  const Hamiltonian two = Hamiltonian::from_real(Eigen::Vector2d(0.0, 1.0).asDiagonal());
  require_close(partition_function(two, 1.0), 1.3678794411714423, 1e-15,
                "two-level partition function");
  const DensityMatrix g1 = gibbs_state(two, 1.0);
  require_close(g1.entries()(0, 0).real(), 0.7310585786300049, 1e-12, "ground weight");
  require_close(g1.entries()(1, 1).real(), 0.2689414213699951, 1e-12, "excited weight");
  const DensityMatrix g0 = gibbs_state(two, 0.0);
  require(g0.entries()(0, 0).real() == 0.5 && g0.entries()(1, 1).real() == 0.5,
          "infinite temperature is exactly uniform");

  const Hamiltonian three = Hamiltonian::from_real(Eigen::Vector3d(0.0, 1.0, 2.0).asDiagonal());
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 20; ++k) {
    const double beta = 5.0 * k / 19.0;
    const double s = entropy(gibbs_state(three, beta));
    require(s <= previous + 1e-12,
            "entropy must not increase with beta, k = " + std::to_string(k));
    previous = s;
  }

  // Maximize the mixing entropy over the simplex at fixed mean energy by
  // projected gradient ascent; the optimum must be the Gibbs diagonal.
  const double beta = 1.0;
  const Eigen::Vector3d energies(0.0, 1.0, 2.0);
  const Eigen::VectorXd gibbs_diag = gibbs_state(three, beta).diagonal_real();
  const double target = energies.dot(gibbs_diag);

  Eigen::MatrixXd c(2, 3);
  c.row(0).setOnes();
  c.row(1) = energies.transpose();
  const Eigen::MatrixXd ct_cct = c.transpose() * (c * c.transpose()).inverse();
  const Eigen::MatrixXd tangent = Eigen::MatrixXd::Identity(3, 3) - ct_cct * c;

  Eigen::VectorXd p = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
  Eigen::Vector2d rhs(1.0, target);
  p += ct_cct * (rhs - c * p);
  require(p.minCoeff() > 0.0, "feasible start");
  for (int it = 0; it < 20000; ++it) {
    const Eigen::VectorXd grad = -(p.array().log() + 1.0).matrix();
    Eigen::VectorXd step = 0.05 * (tangent * grad);
    while ((p + step).minCoeff() <= 1e-12) step *= 0.5;
    p += step;
  }
  require_close((p - gibbs_diag).lpNorm<Eigen::Infinity>(), 0.0, 1e-4,
                "entropy maximizer matches the thermal diagonal");
}

void average_energy_identity_holds() {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (Eigen::Index n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
      for (Eigen::Index i = 0; i < n; ++i) a(i, i) = u(rng);
      const PayoffMatrix game(a);
      for (Eigen::Index k = 0; k < n; ++k) {
        const StateHamiltonian sh = hamiltonian_from_state(
            game, density_from_pure(StateVector::basis(n, k)));
        require(sh.idempotent, "vertex projectors are idempotent");
        require(std::abs(sh.average_energy) <= 1e-12, "vertex energy vanishes");
      }
    }
  }

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 3.0;
  Eigen::VectorXd half(2);
  half << 0.5, 0.5;
  const StateHamiltonian sh =
      hamiltonian_from_state(PayoffMatrix(a), DensityMatrix::from_diagonal(half));
  require(!sh.idempotent, "the mixed counterexample is flagged");
  require_close(sh.average_energy.real(), 0.0, 1e-15, "counterexample real part");
  require_close(sh.average_energy.imag(), 0.3125, 1e-15, "counterexample imaginary part");
}

void fixed_hamiltonian_evolution_is_unitary() {
  Eigen::MatrixXcd sx(2, 2);
  sx << 0.0, 1.0, 1.0, 0.0;
  Eigen::VectorXd ground(2);
  ground << 1.0, 0.0;
  const DensityTrajectory traj =
      integrate_von_neumann(FixedHamiltonian{Hamiltonian{sx}},
                            DensityMatrix::from_diagonal(ground), config(0.01, 10.0));
  double worst_track = 0.0;
  double worst_trace = 0.0;
  double worst_herm = 0.0;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const Eigen::MatrixXcd& rho = traj.states[k];
    const double t = traj.times[k];
    const double expected = std::cos(t) * std::cos(t);
    worst_track = std::max(worst_track, std::abs(rho(0, 0).real() - expected));
    worst_trace = std::max(worst_trace, std::abs(rho.trace() - Complex(1.0, 0.0)));
    worst_herm =
        std::max(worst_herm, (rho - rho.adjoint()).lpNorm<Eigen::Infinity>());
  }
  require_close(worst_track, 0.0, 1e-6, "population must follow cos^2(t)");
  require_close(worst_trace, 0.0, 1e-9, "trace preservation");
  require_close(worst_herm, 0.0, 1e-12, "Hermiticity preservation");

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(traj.states.back(),
                                                           Eigen::EigenvaluesOnly);
  require_close(es.eigenvalues()(0), 0.0, 1e-6, "final spectrum floor");
  require_close(es.eigenvalues()(1), 1.0, 1e-6, "final spectrum ceiling");
}

struct CliCase {
  std::string config;   // file name under --configs
  std::string command;  // CLI subcommand
  std::vector<std::string> outputs;
};

void run_cli(const Options& opt, const CliCase& c, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const std::string cmd = "\"" + opt.cli + "\" " + c.command + " --config \"" +
                          (opt.configs / c.config).string() + "\" --out \"" +
                          out_dir.string() + "\" --quiet";
  require(std::system(cmd.c_str()) == 0, "command failed: " + cmd);
}

void cli_outputs_match_goldens(const Options& opt) {
  const std::vector<CliCase> cases = {
      {"hawk_dove.json", "simulate", {"trajectory.csv", "summary.json"}},
      {"prisoners_dilemma.json", "simulate", {"trajectory.csv", "summary.json"}},
      {"rock_paper_scissors.json", "simulate", {"trajectory.csv", "summary.json"}},
      {"compare_random3.json", "compare",
       {"trajectory.csv", "trajectory_b.csv", "deviation.csv", "summary.json"}},
  };
  for (const CliCase& c : cases) {
    const std::string stem = fs::path(c.config).stem().string();
    const fs::path first = opt.scratch / (stem + "_1");
    const fs::path second = opt.scratch / (stem + "_2");
    run_cli(opt, c, first);
    run_cli(opt, c, second);
    for (const std::string& name : c.outputs) {
      const std::string a = read_file(first / name);
      const std::string b = read_file(second / name);
      require(a == b, stem + "/" + name + ": reruns differ");
      const std::string gold = read_file(opt.golden / stem / name);
      require(a == gold, stem + "/" + name + ": output differs from the golden copy");
    }
  }
}

Options parse_options(int argc, char** argv) {
  Options opt;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string key = argv[i];
    const std::string value = argv[i + 1];
    if (key == "--cli") {
      opt.cli = value;
    } else if (key == "--configs") {
      opt.configs = value;
    } else if (key == "--golden") {
      opt.golden = value;
    } else if (key == "--scratch") {
      opt.scratch = value;
    } else {
      throw std::invalid_argument("unknown option: " + key);
    }
  }
  if (opt.cli.empty() || opt.configs.empty() || opt.golden.empty() || opt.scratch.empty()) {
    throw std::invalid_argument(
        "usage: acceptance --cli PATH --configs DIR --golden DIR --scratch DIR");
  }
  return opt;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  try {
    opt = parse_options(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  fs::remove_all(opt.scratch);
  fs::create_directories(opt.scratch);

  const std::vector<std::pair<std::string, std::function<void()>>> criteria = {
      {"matrix engine tracks the vector engine", matrix_engine_tracks_vector_engine},
      {"growth-rate decomposition identities", decomposition_identities_hold},
      {"frequency-matrix structure preserved", frequency_matrix_structure_preserved},
      {"equilibrium classification", equilibria_are_classified},
      {"convergence to attractors", flows_converge_to_attractors},
      {"cyclic-game invariant conservation", cyclic_invariant_is_conserved},
      {"entropy anchors", entropy_anchors_hold},
      {"thermal states and entropy maximization", thermal_states_are_reproduced},
      {"average-energy identity", average_energy_identity_holds},
      {"fixed-Hamiltonian evolution", fixed_hamiltonian_evolution_is_unitary},
      {"CLI determinism against goldens",
       [&opt] { cli_outputs_match_goldens(opt); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const std::string label = "criterion " + std::to_string(i + 1) + ": " + criteria[i].first;
    try {
      criteria[i].second();
      std::cout << "[PASS] " << label << "\n";
    } catch (const std::exception& e) {
      ++failures;
      std::cout << "[FAIL] " << label << " — " << e.what() << "\n";
    }
  }
  if (failures != 0) {
    std::cout << failures << " of " << criteria.size() << " criteria failed\n";
  }
  return failures == 0 ? 0 : 1;
}
