// Python bindings for the replicator-dynamics core. Matrices and states cross
// the boundary as numpy arrays; density operators and Hamiltonians are
// validated on entry by the same checks the C++ API applies.

#include "replidyn/numeric.hpp"
#include "replidyn/scenario.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace py = pybind11;
using namespace replidyn;

namespace {

Method parse_method(const std::string& name) {
  if (name == "rk4-fixed") return Method::rk4_fixed;
  if (name == "euler") return Method::euler;
  throw std::invalid_argument("unknown method '" + name + "' (expected 'rk4-fixed' or 'euler')");
}

MatrixProjection parse_projection(const std::string& name) {
  if (name == "diagonal-rebuild") return MatrixProjection::diagonal_rebuild;
  if (name == "none") return MatrixProjection::none;
  throw std::invalid_argument("unknown projection '" + name +
                              "' (expected 'diagonal-rebuild' or 'none')");
}

AsymmetricIndexing parse_indexing(const std::string& name) {
  if (name == "per-strategy") return AsymmetricIndexing::per_strategy;
  if (name == "first-component") return AsymmetricIndexing::first_component;
  throw std::invalid_argument("unknown indexing '" + name +
                              "' (expected 'per-strategy' or 'first-component')");
}

std::string stability_name(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    default: return "marginal";
  }
}

IntegratorConfig make_config(double dt, double t_max, const std::string& method,
                             double boundary_clip, bool renormalize) {
  IntegratorConfig cfg;
  cfg.dt = dt;
  cfg.t_max = t_max;
  cfg.method = parse_method(method);
  cfg.boundary_clip = boundary_clip;
  cfg.renormalize_each_step = renormalize;
  return cfg;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd stacked_states(const Trajectory& t) {
  const Eigen::Index rows = static_cast<Eigen::Index>(t.states.size());
  const Eigen::Index cols = t.states.empty() ? 0 : t.states.front().size();
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index k = 0; k < rows; ++k) out.row(k) = t.states[k].freqs().transpose();
  return out;
}

Eigen::VectorXd observable_column(const std::vector<StepObservables>& obs, bool fitness_column) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(obs.size()));
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    out(k) = fitness_column ? obs[k].average_fitness : obs[k].entropy;
  }
  return out;
}

DensityMatrix density_arg(const Eigen::MatrixXcd& rho) { return DensityMatrix::from_matrix(rho); }

Hamiltonian hamiltonian_arg(const Eigen::MatrixXcd& h) { return Hamiltonian(h); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Evolutionary game dynamics: replicator flows, their commutator matrix "
      "form, and density-operator evolution";

  // --- result types ---------------------------------------------------------

  py::class_<NashVerdict>(m, "NashVerdict")
      .def_readonly("nash", &NashVerdict::nash)
      .def_readonly("strict", &NashVerdict::strict)
      .def("__repr__", [](const NashVerdict& v) {
        return "NashVerdict(nash=" + std::string(v.nash ? "True" : "False") +
               ", strict=" + (v.strict ? "True" : "False") + ")";
      });

  py::class_<EquilibriumReport>(m, "EquilibriumReport")
      .def_property_readonly("state",
                             [](const EquilibriumReport& r) { return r.state.freqs(); })
      .def_readonly("nash", &EquilibriumReport::nash)
      .def_readonly("strict", &EquilibriumReport::strict)
      .def_readonly("ess", &EquilibriumReport::ess)
      .def_readonly("support", &EquilibriumReport::support)
      .def_readonly("tol", &EquilibriumReport::tol);

  py::class_<EquilibriumScan>(m, "EquilibriumScan")
      .def_readonly("equilibria", &EquilibriumScan::equilibria)
      .def_readonly("singular_supports", &EquilibriumScan::singular_supports);

  py::class_<Trajectory>(m, "Trajectory")
      .def_property_readonly("times", [](const Trajectory& t) { return to_vector(t.times); })
      .def_property_readonly("states", &stacked_states)
      .def_property_readonly(
          "average_fitness",
          [](const Trajectory& t) { return observable_column(t.observables, true); })
      .def_property_readonly(
          "entropy",
          [](const Trajectory& t) { return observable_column(t.observables, false); })
      .def("__len__", [](const Trajectory& t) { return t.states.size(); });

  py::class_<MatrixTrajectory>(m, "MatrixTrajectory")
      .def_property_readonly("times",
                             [](const MatrixTrajectory& t) { return to_vector(t.times); })
      .def_readonly("states", &MatrixTrajectory::states)
      .def_property_readonly(
          "average_fitness",
          [](const MatrixTrajectory& t) { return observable_column(t.observables, true); })
      .def_property_readonly(
          "entropy",
          [](const MatrixTrajectory& t) { return observable_column(t.observables, false); })
      .def_property_readonly(
          "trace_drift", [](const MatrixTrajectory& t) { return to_vector(t.trace_drift); })
      .def_property_readonly(
          "idempotency_drift",
          [](const MatrixTrajectory& t) { return to_vector(t.idempotency_drift); })
      .def("max_trace_drift", &MatrixTrajectory::max_trace_drift)
      .def("max_idempotency_drift", &MatrixTrajectory::max_idempotency_drift)
      .def("__len__", [](const MatrixTrajectory& t) { return t.states.size(); });

  py::class_<DensityTrajectory>(m, "DensityTrajectory")
      .def_property_readonly("times",
                             [](const DensityTrajectory& t) { return to_vector(t.times); })
      .def_readonly("states", &DensityTrajectory::states)
      .def("__len__", [](const DensityTrajectory& t) { return t.states.size(); });

  py::class_<FixedPointReport>(m, "FixedPointReport")
      .def_property_readonly("state",
                             [](const FixedPointReport& r) { return r.state.freqs(); })
      .def_readonly("residual", &FixedPointReport::residual)
      .def_readonly("jacobian_eigenvalues", &FixedPointReport::jacobian_eigenvalues)
      .def_property_readonly("stability", [](const FixedPointReport& r) {
        return stability_name(r.stability);
      });

  py::class_<DecompositionReport>(m, "DecompositionReport")
      .def_readonly("growth_outer", &DecompositionReport::growth_outer)
      .def_readonly("product_g1", &DecompositionReport::product_g1)
      .def_readonly("product_g2", &DecompositionReport::product_g2)
      .def_readonly("product_g3", &DecompositionReport::product_g3)
      .def_readonly("assembly", &DecompositionReport::assembly)
      .def_readonly("field", &DecompositionReport::field)
      .def("max_residual", &DecompositionReport::max_residual);

  py::class_<StateHamiltonian>(m, "StateHamiltonian")
      .def_readonly("generator", &StateHamiltonian::lambda)
      .def_readonly("h", &StateHamiltonian::h)
      .def_readonly("eigenvalues", &StateHamiltonian::eigenvalues)
      .def_readonly("average_energy", &StateHamiltonian::average_energy)
      .def_readonly("idempotent", &StateHamiltonian::idempotent);

  py::class_<TraceIdentityReport>(m, "TraceIdentityReport")
      .def_readonly("trace_payoff", &TraceIdentityReport::trace_payoff)
      .def_readonly("symmetrized_expectation", &TraceIdentityReport::symmetrized_expectation)
      .def_readonly("trace_residual", &TraceIdentityReport::trace_residual)
      .def_readonly("sandwich_payoff", &TraceIdentityReport::sandwich_payoff)
      .def_readonly("average_payoff", &TraceIdentityReport::average_payoff)
      .def_readonly("average_residual", &TraceIdentityReport::average_residual)
      .def_readonly("off_diagonal_norm", &TraceIdentityReport::off_diagonal_norm);

  // --- games and equilibria --------------------------------------------------

  m.def(
      "fitness",
      [](const Eigen::MatrixXd& a, const Eigen::VectorXd& x, Eigen::Index i) {
        return fitness(PayoffMatrix(a), PopulationState(x), i);
      },
      py::arg("game"), py::arg("state"), py::arg("strategy"));
  m.def(
      "average_fitness",
      [](const Eigen::MatrixXd& a, const Eigen::VectorXd& x) {
        return average_fitness(PayoffMatrix(a), PopulationState(x));
      },
      py::arg("game"), py::arg("state"));
  m.def(
      "best_replies",
      [](const Eigen::MatrixXd& a, const Eigen::VectorXd& q, double tol) {
        return best_replies(PayoffMatrix(a), PopulationState(q), tol);
      },
      py::arg("game"), py::arg("state"), py::arg("tol") = kDefaultTol);
  m.def(
      "support",
      [](const Eigen::VectorXd& x, double tol) { return support(PopulationState(x), tol); },
      py::arg("state"), py::arg("tol") = kDefaultTol);
  m.def(
      "is_nash",
      [](const Eigen::MatrixXd& a, const Eigen::VectorXd& p, double tol) {
        return is_nash(PayoffMatrix(a), PopulationState(p), tol);
      },
      py::arg("game"), py::arg("state"), py::arg("tol") = kDefaultTol);
  m.def(
      "is_ess",
      [](const Eigen::MatrixXd& a, const Eigen::VectorXd& p, double tol,
         std::optional<int> mutant_grid) {
        return is_ess(PayoffMatrix(a), PopulationState(p), tol, mutant_grid);
      },
      py::arg("game"), py::arg("state"), py::arg("tol") = kDefaultTol,
      py::arg("mutant_grid") = py::none());
  m.def(
      "find_equilibria",
      [](const Eigen::MatrixXd& a, double tol) {
        return find_equilibria(PayoffMatrix(a), tol);
      },
      py::arg("game"), py::arg("tol") = kDefaultTol);
  m.def("default_mutant_grid", &default_mutant_grid, py::arg("n"));
  m.def("simplex_lattice", &simplex_lattice, py::arg("n"), py::arg("grid"));
  m.def("random_game",
        [](Eigen::Index n, std::uint64_t seed) { return random_game(n, seed).entries(); },
        py::arg("n"), py::arg("seed"));

  // --- replicator flows -------------------------------------------------------

  m.def(
      "replicator_field",
      [](const Eigen::MatrixXd& a, const Eigen::VectorXd& x) {
        return replicator_field(PayoffMatrix(a), PopulationState(x));
      },
      py::arg("game"), py::arg("state"));
  m.def(
      "asymmetric_field",
      [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::VectorXd& x,
         const Eigen::VectorXd& y, const std::string& indexing) {
        return asymmetric_field(AsymmetricGame(PayoffMatrix(a), PayoffMatrix(b)),
                                PopulationState(x), PopulationState(y),
                                parse_indexing(indexing));
      },
      py::arg("game"), py::arg("game_b"), py::arg("state"), py::arg("state_b"),
      py::arg("indexing") = "per-strategy");
  m.def(
      "integrate",
      [](const Eigen::MatrixXd& a, const Eigen::VectorXd& x0, double dt, double t_max,
         const std::string& method, double boundary_clip, bool renormalize) {
        return integrate(PayoffMatrix(a), PopulationState(x0),
                         make_config(dt, t_max, method, boundary_clip, renormalize));
      },
      py::arg("game"), py::arg("state"), py::arg("dt") = 0.01, py::arg("t_max") = 50.0,
      py::arg("method") = "rk4-fixed", py::arg("boundary_clip") = 0.0,
      py::arg("renormalize") = true);
  m.def(
      "integrate_asymmetric",
      [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::VectorXd& x0,
         const Eigen::VectorXd& y0, double dt, double t_max, const std::string& method,
         double boundary_clip, bool renormalize, const std::string& indexing) {
        return integrate_asymmetric(AsymmetricGame(PayoffMatrix(a), PayoffMatrix(b)),
                                    PopulationState(x0), PopulationState(y0),
                                    make_config(dt, t_max, method, boundary_clip, renormalize),
                                    parse_indexing(indexing));
      },
      py::arg("game"), py::arg("game_b"), py::arg("state"), py::arg("state_b"),
      py::arg("dt") = 0.01, py::arg("t_max") = 50.0, py::arg("method") = "rk4-fixed",
      py::arg("boundary_clip") = 0.0, py::arg("renormalize") = true,
      py::arg("indexing") = "per-strategy");
  m.def(
      "find_fixed_point",
      [](const Eigen::MatrixXd& a, const Eigen::VectorXd& guess, double tol) {
        return find_fixed_point(PayoffMatrix(a), PopulationState(guess), tol);
      },
      py::arg("game"), py::arg("guess"), py::arg("tol") = kDefaultTol);

  // --- matrix form -------------------------------------------------------------

  m.def(
      "frequency_matrix",
      [](const Eigen::VectorXd& x) {
        return FrequencyMatrix::from_state(PopulationState(x)).entries();
      },
      py::arg("state"));
  m.def(
      "growth_rate_matrix",
      [](const Eigen::MatrixXd& a, const Eigen::VectorXd& x) {
        return growth_rate_matrix(PayoffMatrix(a), PopulationState(x));
      },
      py::arg("game"), py::arg("state"));
  m.def(
      "half_fitness_diagonal",
      [](const Eigen::MatrixXd& a, const Eigen::VectorXd& x) {
        return half_fitness_diagonal(PayoffMatrix(a), PopulationState(x));
      },
      py::arg("game"), py::arg("state"));
  m.def(
      "selection_generator",
      [](const Eigen::MatrixXd& a, const Eigen::VectorXd& x) {
        return selection_generator(PayoffMatrix(a), PopulationState(x)).entries();
      },
      py::arg("game"), py::arg("state"));
  m.def(
      "matrix_replicator_field",
      [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& x) {
        return matrix_replicator_field(PayoffMatrix(a), FrequencyMatrix::from_matrix(x));
      },
      py::arg("game"), py::arg("frequency_matrix"));
  m.def(
      "verify_decomposition",
      [](const Eigen::MatrixXd& a, const Eigen::VectorXd& x) {
        return verify_decomposition(PayoffMatrix(a), PopulationState(x));
      },
      py::arg("game"), py::arg("state"));
  m.def(
      "integrate_matrix",
      [](const Eigen::MatrixXd& a, const Eigen::VectorXd& x0, double dt, double t_max,
         const std::string& method, const std::string& projection) {
        return integrate_matrix(PayoffMatrix(a),
                                FrequencyMatrix::from_state(PopulationState(x0)),
                                make_config(dt, t_max, method, 0.0, true),
                                parse_projection(projection));
      },
      py::arg("game"), py::arg("state"), py::arg("dt") = 0.01, py::arg("t_max") = 50.0,
      py::arg("method") = "rk4-fixed", py::arg("projection") = "diagonal-rebuild");

  // --- density operators ---------------------------------------------------------

  m.def(
      "density_from_pure",
      [](const Eigen::VectorXcd& psi) { return density_from_pure(StateVector(psi)).entries(); },
      py::arg("amplitudes"));
  m.def(
      "density_from_ensemble",
      [](const Eigen::VectorXd& weights, const std::vector<Eigen::VectorXcd>& states) {
        std::vector<StateVector> parsed;
        parsed.reserve(states.size());
        for (const Eigen::VectorXcd& s : states) parsed.emplace_back(s);
        return density_from_ensemble(Ensemble(weights, std::move(parsed))).entries();
      },
      py::arg("weights"), py::arg("states"));
  m.def(
      "density_from_state",
      [](const Eigen::VectorXd& x) {
        return DensityMatrix::from_frequency(FrequencyMatrix::from_state(PopulationState(x)))
            .entries();
      },
      py::arg("state"));
  m.def("maximally_mixed",
        [](Eigen::Index n) { return DensityMatrix::maximally_mixed(n).entries(); },
        py::arg("n"));
  m.def(
      "expectation",
      [](const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& a) {
        return expectation(density_arg(rho), a);
      },
      py::arg("density"), py::arg("observable"));
  m.def(
      "coherence",
      [](const Eigen::MatrixXcd& rho, Eigen::Index n, Eigen::Index p) {
        return coherence(density_arg(rho), n, p);
      },
      py::arg("density"), py::arg("n"), py::arg("p"));
  m.def("purity", [](const Eigen::MatrixXcd& rho) { return purity(density_arg(rho)); },
        py::arg("density"));
  m.def(
      "von_neumann_entropy",
      [](const Eigen::MatrixXcd& rho) { return entropy(density_arg(rho)); },
      py::arg("density"));
  m.def(
      "shannon_entropy",
      [](const Eigen::VectorXd& x) { return diagonal_entropy(PopulationState(x)); },
      py::arg("state"));
  m.def(
      "partition_function",
      [](const Eigen::MatrixXcd& h, double beta) {
        return partition_function(hamiltonian_arg(h), beta);
      },
      py::arg("hamiltonian"), py::arg("beta"));
  m.def(
      "gibbs_state",
      [](const Eigen::MatrixXcd& h, double beta) {
        return gibbs_state(hamiltonian_arg(h), beta).entries();
      },
      py::arg("hamiltonian"), py::arg("beta"));
  m.def(
      "von_neumann_field",
      [](const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& rho) {
        return von_neumann_field(hamiltonian_arg(h), density_arg(rho));
      },
      py::arg("hamiltonian"), py::arg("density"));
  m.def(
      "quantized_fitness",
      [](const Eigen::MatrixXd& a, const Eigen::MatrixXcd& rho, Eigen::Index i) {
        return quantized_fitness(PayoffMatrix(a), density_arg(rho), i);
      },
      py::arg("game"), py::arg("density"), py::arg("strategy"));
  m.def(
      "quantized_average_fitness",
      [](const Eigen::MatrixXd& a, const Eigen::MatrixXcd& rho) {
        return quantized_average_fitness(PayoffMatrix(a), density_arg(rho));
      },
      py::arg("game"), py::arg("density"));
  m.def(
      "hamiltonian_from_state",
      [](const Eigen::MatrixXd& a, const Eigen::MatrixXcd& rho) {
        return hamiltonian_from_state(PayoffMatrix(a), density_arg(rho));
      },
      py::arg("game"), py::arg("density"));
  m.def(
      "integrate_von_neumann",
      [](const Eigen::MatrixXcd& rho0, double dt, double t_max, const std::string& method,
         std::optional<Eigen::MatrixXcd> hamiltonian, std::optional<Eigen::MatrixXd> game) {
        if (hamiltonian.has_value() == game.has_value()) {
          throw std::invalid_argument(
              "pass exactly one of 'hamiltonian' (fixed rule) or 'game' "
              "(state-dependent rule)");
        }
        const EvolutionRule rule =
            hamiltonian ? EvolutionRule(FixedHamiltonian{hamiltonian_arg(*hamiltonian)})
                        : EvolutionRule(PayoffGenerator{PayoffMatrix(*game)});
        return integrate_von_neumann(rule, density_arg(rho0),
                                     make_config(dt, t_max, method, 0.0, true));
      },
      py::arg("density"), py::arg("dt") = 0.01, py::arg("t_max") = 50.0,
      py::arg("method") = "rk4-fixed", py::arg("hamiltonian") = py::none(),
      py::arg("game") = py::none());
  m.def(
      "trace_fitness_identities",
      [](const Eigen::MatrixXd& a, const Eigen::MatrixXcd& rho) {
        return trace_fitness_identities(PayoffMatrix(a), density_arg(rho));
      },
      py::arg("game"), py::arg("density"));

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
}
