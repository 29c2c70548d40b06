#include "replidyn/quantum.hpp"

#include "replidyn/numeric.hpp"
#include "stepper.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace replidyn {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kEigenFloor = -1e-10;
constexpr double kDiagonalTol = 1e-10;

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": dimensions differ");
}

double off_diagonal_max(const Eigen::MatrixXcd& m) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i != j) worst = std::max(worst, std::abs(m(i, j)));
    }
  }
  return worst;
}

// Entropy of a spectrum: eigenvalues in (-1e-10, 0) count as zero; anything
// lower means the operator is not a state.
double spectrum_entropy(const Eigen::VectorXd& eigenvalues) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double lambda = eigenvalues(i);
    if (lambda < kEigenFloor) {
      throw NumericalError("entropy undefined: spectrum has eigenvalue " +
                           std::to_string(lambda) + " below -1e-10");
    }
    if (lambda > 0.0) h -= lambda * std::log(lambda);
  }
  return h;
}

Eigen::MatrixXcd state_generator(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& rho) {
  return 0.5 * (a * rho - rho * a * rho);
}

Eigen::MatrixXd state_generator(const Eigen::MatrixXd& a, const Eigen::MatrixXd& rho) {
  return 0.5 * (a * rho - rho * a * rho);
}

}  // namespace

StateVector::StateVector(Eigen::VectorXcd amplitudes, double norm_tol)
    : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw std::invalid_argument("state vector must be non-empty");
  if (!amplitudes_.allFinite()) {
    throw std::invalid_argument("state vector amplitudes must be finite");
  }
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > norm_tol) {
    throw std::invalid_argument("state vector must be normalized: |psi| = " +
                                std::to_string(norm));
  }
  amplitudes_ /= norm;
}

StateVector StateVector::basis(Eigen::Index n, Eigen::Index i) {
  if (n <= 0) throw std::invalid_argument("state vector must be non-empty");
  if (i < 0 || i >= n) throw std::invalid_argument("basis index out of range");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n);
  psi(i) = Complex(1.0, 0.0);
  return StateVector(std::move(psi));
}

Ensemble::Ensemble(Eigen::VectorXd weights_in, std::vector<StateVector> states_in)
    : weights(std::move(weights_in)), states(std::move(states_in)) {
  if (states.empty()) throw std::invalid_argument("ensemble must contain at least one state");
  if (weights.size() != static_cast<Eigen::Index>(states.size())) {
    throw std::invalid_argument("ensemble needs one weight per state");
  }
  if (!weights.allFinite() || weights.minCoeff() < -kTraceTol) {
    throw std::invalid_argument("ensemble weights must be non-negative");
  }
  if (std::abs(weights.sum() - 1.0) > kTraceTol) {
    throw std::invalid_argument("ensemble weights must sum to 1");
  }
  const Eigen::Index dim = states.front().size();
  for (const StateVector& s : states) {
    if (s.size() != dim) throw std::invalid_argument("ensemble states must share one dimension");
  }
  weights = weights.cwiseMax(0.0);
  weights /= weights.sum();
}

DensityMatrix DensityMatrix::from_matrix(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols() || m.size() == 0) {
    throw std::invalid_argument("density operator must be square and non-empty");
  }
  if (!m.allFinite()) throw std::invalid_argument("density operator entries must be finite");
  if ((m - m.adjoint()).lpNorm<Eigen::Infinity>() > kHermTol) {
    throw std::invalid_argument("density operator must be Hermitian");
  }
  if (std::abs(m.trace() - Complex(1.0, 0.0)) > kTraceTol) {
    throw std::invalid_argument("density operator trace must equal 1");
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& lambda = es.eigenvalues();
  if (lambda.minCoeff() < kEigenFloor) {
    throw std::invalid_argument("density operator must be positive semidefinite");
  }
  if (lambda.squaredNorm() > 1.0 + kTraceTol) {
    throw std::invalid_argument("density operator purity exceeds 1");
  }
  return DensityMatrix(m);
}

DensityMatrix DensityMatrix::from_diagonal(const Eigen::VectorXd& probabilities) {
  if (probabilities.size() == 0) {
    throw std::invalid_argument("density operator must be square and non-empty");
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(probabilities.size(), probabilities.size());
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    m(i, i) = Complex(probabilities(i), 0.0);
  }
  return from_matrix(m);
}

DensityMatrix DensityMatrix::from_frequency(const FrequencyMatrix& x) {
  return from_matrix(x.entries().cast<Complex>());
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index n) {
  if (n <= 0) throw std::invalid_argument("density operator must be square and non-empty");
  return DensityMatrix(Eigen::MatrixXcd::Identity(n, n) / static_cast<double>(n));
}

Hamiltonian::Hamiltonian(Eigen::MatrixXcd h, double herm_tol) : h_(std::move(h)) {
  if (h_.rows() != h_.cols() || h_.size() == 0) {
    throw std::invalid_argument("Hamiltonian must be square and non-empty");
  }
  if (!h_.allFinite()) throw std::invalid_argument("Hamiltonian entries must be finite");
  if ((h_ - h_.adjoint()).lpNorm<Eigen::Infinity>() > herm_tol) {
    throw std::invalid_argument("Hamiltonian must be Hermitian");
  }
  h_ = 0.5 * (h_ + h_.adjoint().eval());
}

Hamiltonian Hamiltonian::from_real(const Eigen::MatrixXd& h) {
  return Hamiltonian(h.cast<Complex>());
}

DensityMatrix density_from_pure(const StateVector& psi) {
  const Eigen::VectorXcd& v = psi.amplitudes();
  Eigen::MatrixXcd rho = v * v.adjoint();
  rho = 0.5 * (rho + rho.adjoint().eval());
  return DensityMatrix::from_matrix(rho);
}

DensityMatrix density_from_ensemble(const Ensemble& e) {
  const Eigen::Index n = e.states.front().size();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t k = 0; k < e.states.size(); ++k) {
    const Eigen::VectorXcd& v = e.states[k].amplitudes();
    rho += e.weights(static_cast<Eigen::Index>(k)) * (v * v.adjoint());
  }
  rho = 0.5 * (rho + rho.adjoint().eval());
  return DensityMatrix::from_matrix(rho);
}

double expectation(const DensityMatrix& rho, const Eigen::MatrixXcd& a) {
  require_same_dim(rho.dim(), a.rows(), "expectation");
  if (a.rows() != a.cols()) throw std::invalid_argument("observable must be square");
  if ((a - a.adjoint()).lpNorm<Eigen::Infinity>() > kHermTol) {
    throw std::invalid_argument("observable must be Hermitian");
  }
  const Complex t = (rho.entries() * a).trace();
  if (std::abs(t.imag()) > kHermTol) {
    throw NumericalError("expectation value has imaginary residue " +
                         std::to_string(t.imag()));
  }
  return t.real();
}

Complex coherence(const DensityMatrix& rho, Eigen::Index n, Eigen::Index p) {
  if (n < 0 || n >= rho.dim() || p < 0 || p >= rho.dim()) {
    throw std::invalid_argument("coherence index out of range");
  }
  return rho.entries()(n, p);
}

double purity(const DensityMatrix& rho) {
  return (rho.entries() * rho.entries()).trace().real();
}

Eigen::MatrixXcd von_neumann_field(const Hamiltonian& h, const DensityMatrix& rho) {
  require_same_dim(rho.dim(), h.dim(), "von Neumann field");
  const Complex i(0.0, 1.0);
  return -i * (h.entries() * rho.entries() - rho.entries() * h.entries());
}

double entropy(const DensityMatrix& rho) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.entries(), Eigen::EigenvaluesOnly);
  return spectrum_entropy(es.eigenvalues());
}

double entropy(const FrequencyMatrix& x) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x.entries(), Eigen::EigenvaluesOnly);
  return spectrum_entropy(es.eigenvalues());
}

double diagonal_entropy(const PopulationState& x) { return shannon_entropy(x.freqs()); }

double partition_function(const Hamiltonian& h, double beta) {
  if (!std::isfinite(beta)) throw std::invalid_argument("inverse temperature must be finite");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.entries(), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& energy = es.eigenvalues();
  const double shift = (-beta * energy.array()).maxCoeff();
  const double scaled = ((-beta * energy.array()) - shift).exp().sum();
  const double z = std::exp(shift) * scaled;
  if (!std::isfinite(z)) {
    throw NumericalError("partition function overflows at beta = " + std::to_string(beta));
  }
  return z;
}

DensityMatrix gibbs_state(const Hamiltonian& h, double beta) {
  if (!std::isfinite(beta)) throw std::invalid_argument("inverse temperature must be finite");
  if (beta == 0.0) return DensityMatrix::maximally_mixed(h.dim());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.entries());
  const Eigen::VectorXd& energy = es.eigenvalues();
  const double shift = (-beta * energy.array()).maxCoeff();
  Eigen::VectorXd weights = ((-beta * energy.array()) - shift).exp().matrix();
  const double total = weights.sum();
  if (!std::isfinite(total) || !(total > 0.0)) {
    throw NumericalError("Gibbs weights are not normalizable at beta = " + std::to_string(beta));
  }
  weights /= total;
  Eigen::MatrixXcd rho =
      es.eigenvectors() * weights.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  rho = 0.5 * (rho + rho.adjoint().eval());
  return DensityMatrix::from_matrix(rho);
}

double quantized_fitness(const PayoffMatrix& a, const DensityMatrix& rho, Eigen::Index i) {
  if (!a.square()) throw std::invalid_argument("payoff matrix must be square");
  require_same_dim(rho.dim(), a.rows(), "quantized fitness");
  if (i < 0 || i >= a.rows()) throw std::invalid_argument("strategy index out of range");
  return a.entries().row(i).dot(rho.diagonal_real());
}

double quantized_average_fitness(const PayoffMatrix& a, const DensityMatrix& rho) {
  if (!a.square()) throw std::invalid_argument("payoff matrix must be square");
  require_same_dim(rho.dim(), a.rows(), "quantized fitness");
  const Eigen::VectorXd d = rho.diagonal_real();
  return d.dot(a.entries() * d);
}

StateHamiltonian hamiltonian_from_state(const PayoffMatrix& a, const DensityMatrix& rho) {
  if (!a.square()) throw std::invalid_argument("payoff matrix must be square");
  require_same_dim(rho.dim(), a.rows(), "state Hamiltonian");
  Eigen::MatrixXd off = a.entries();
  off.diagonal().setZero();
  if (off.lpNorm<Eigen::Infinity>() > kDiagonalTol) {
    throw std::invalid_argument(
        "state Hamiltonian requires a diagonal payoff matrix: off-diagonal payoffs "
        "break the eigenbasis alignment");
  }
  if (off_diagonal_max(rho.entries()) > kDiagonalTol) {
    throw std::invalid_argument(
        "state Hamiltonian requires a diagonal density operator: coherences break "
        "the eigenbasis alignment");
  }

  StateHamiltonian out;
  out.lambda = state_generator(Eigen::MatrixXcd(a.entries().cast<Complex>()), rho.entries());
  out.h = Complex(0.0, 1.0) * out.lambda;
  out.eigenvalues = out.h.diagonal();
  out.average_energy = (rho.entries() * out.h).trace();
  const Eigen::MatrixXcd& r = rho.entries();
  out.idempotent = (r * r - r).lpNorm<Eigen::Infinity>() <= kDiagonalTol;
  return out;
}

DensityTrajectory integrate_von_neumann(const EvolutionRule& rule, const DensityMatrix& rho0,
                                        const IntegratorConfig& cfg) {
  cfg.validate(rho0.dim());
  const Eigen::Index steps = cfg.step_count();

  DensityTrajectory traj;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);

  const auto check = [&cfg](bool finite, Eigen::Index k) {
    if (!finite) {
      throw NumericalError("integration produced a non-finite state at step " +
                           std::to_string(k) + " (t = " + std::to_string(k * cfg.dt) + ")");
    }
  };

  const bool payoff_rule = std::holds_alternative<PayoffGenerator>(rule);
  const bool real_path =
      payoff_rule && rho0.entries().imag().lpNorm<Eigen::Infinity>() == 0.0;

  if (real_path) {
    // The payoff-generated flow preserves realness, so integrate in real
    // arithmetic and complexify only for storage.
    const Eigen::MatrixXd payoff = std::get<PayoffGenerator>(rule).a.entries();
    const auto field = [&payoff](const Eigen::MatrixXd& m) {
      const Eigen::MatrixXd lambda = state_generator(payoff, m);
      return Eigen::MatrixXd(lambda * m - m * lambda);
    };
    Eigen::MatrixXd m = rho0.entries().real();
    for (Eigen::Index k = 0;; ++k) {
      traj.times.push_back(k * cfg.dt);
      traj.states.push_back(m.cast<Complex>());
      if (k == steps) break;
      m = cfg.method == Method::rk4_fixed ? detail::rk4_step(field, m, cfg.dt)
                                          : detail::euler_step(field, m, cfg.dt);
      m = 0.5 * (m + m.transpose().eval());
      const double tr = m.trace();
      if (!(std::abs(tr) > kTraceTol)) {
        throw NumericalError("density operator trace collapsed during integration");
      }
      m /= tr;
      check(m.allFinite(), k + 1);
    }
    return traj;
  }

  const auto field = [&rule](const Eigen::MatrixXcd& m) -> Eigen::MatrixXcd {
    if (const auto* fixed = std::get_if<FixedHamiltonian>(&rule)) {
      const Complex i(0.0, 1.0);
      return -i * (fixed->h.entries() * m - m * fixed->h.entries());
    }
    const Eigen::MatrixXcd a = std::get<PayoffGenerator>(rule).a.entries().cast<Complex>();
    const Eigen::MatrixXcd lambda = state_generator(a, m);
    return lambda * m - m * lambda;
  };

  Eigen::MatrixXcd m = rho0.entries();
  for (Eigen::Index k = 0;; ++k) {
    traj.times.push_back(k * cfg.dt);
    traj.states.push_back(m);
    if (k == steps) break;
    m = cfg.method == Method::rk4_fixed ? detail::rk4_step(field, m, cfg.dt)
                                        : detail::euler_step(field, m, cfg.dt);
    m = 0.5 * (m + m.adjoint().eval());
    const double tr = m.trace().real();
    if (!(std::abs(tr) > kTraceTol)) {
      throw NumericalError("density operator trace collapsed during integration");
    }
    m /= tr;
    check(m.allFinite(), k + 1);
  }
  return traj;
}

TraceIdentityReport trace_fitness_identities(const PayoffMatrix& a, const DensityMatrix& rho) {
  if (!a.square()) throw std::invalid_argument("payoff matrix must be square");
  require_same_dim(rho.dim(), a.rows(), "trace identities");
  const Eigen::MatrixXcd ac = a.entries().cast<Complex>();
  const Eigen::MatrixXcd sym =
      (0.5 * (a.entries() + a.entries().transpose())).cast<Complex>();

  TraceIdentityReport report;
  report.trace_payoff = (ac * rho.entries()).trace().real();
  report.symmetrized_expectation = expectation(rho, sym);
  report.trace_residual = std::abs(report.trace_payoff - report.symmetrized_expectation);
  report.sandwich_payoff = (rho.entries() * ac * rho.entries()).trace().real();
  report.average_payoff = quantized_average_fitness(a, rho);
  report.average_residual = std::abs(report.sandwich_payoff - report.average_payoff);
  report.off_diagonal_norm = off_diagonal_max(rho.entries());
  return report;
}

}  // namespace replidyn
