#pragma once

#include "replidyn/game.hpp"
#include "replidyn/matrix_form.hpp"
#include "replidyn/replicator.hpp"

#include <complex>
#include <variant>
#include <vector>

namespace replidyn {

using Complex = std::complex<double>;

// Normalized complex amplitude vector.
class StateVector {
 public:
  explicit StateVector(Eigen::VectorXcd amplitudes, double norm_tol = 1e-12);
  static StateVector basis(Eigen::Index n, Eigen::Index i);

  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Eigen::Index size() const { return amplitudes_.size(); }

 private:
  Eigen::VectorXcd amplitudes_;
};

// Classical mixture of pure states: non-negative weights summing to one,
// one weight per state, all states of equal dimension.
struct Ensemble {
  Ensemble(Eigen::VectorXd weights_in, std::vector<StateVector> states_in);

  Eigen::VectorXd weights;
  std::vector<StateVector> states;
};

// Density operator: Hermitian within 1e-12, unit trace within 1e-12,
// eigenvalues above -1e-10, purity at most 1 + 1e-12.
class DensityMatrix {
 public:
  static DensityMatrix from_matrix(const Eigen::MatrixXcd& m);
  static DensityMatrix from_diagonal(const Eigen::VectorXd& probabilities);
  static DensityMatrix from_frequency(const FrequencyMatrix& x);
  static DensityMatrix maximally_mixed(Eigen::Index n);

  const Eigen::MatrixXcd& entries() const { return rho_; }
  Eigen::Index dim() const { return rho_.rows(); }
  // Real part of the diagonal (exactly real for a valid density operator).
  Eigen::VectorXd diagonal_real() const { return rho_.diagonal().real(); }

 private:
  explicit DensityMatrix(Eigen::MatrixXcd rho) : rho_(std::move(rho)) {}

  Eigen::MatrixXcd rho_;
};

// Hermitian operator (observable / Hamiltonian), hbar = 1 throughout.
class Hamiltonian {
 public:
  explicit Hamiltonian(Eigen::MatrixXcd h, double herm_tol = 1e-12);
  static Hamiltonian from_real(const Eigen::MatrixXd& h);

  const Eigen::MatrixXcd& entries() const { return h_; }
  Eigen::Index dim() const { return h_.rows(); }

 private:
  Eigen::MatrixXcd h_;
};

DensityMatrix density_from_pure(const StateVector& psi);
DensityMatrix density_from_ensemble(const Ensemble& e);

// Tr(rho A) for a Hermitian observable A. The imaginary residue of the trace
// must stay below 1e-12 and is discarded.
double expectation(const DensityMatrix& rho, const Eigen::MatrixXcd& a);

// Off-diagonal element rho_np.
Complex coherence(const DensityMatrix& rho, Eigen::Index n, Eigen::Index p);

// Tr(rho^2); 1 for pure states, 1/n for the maximally mixed state.
double purity(const DensityMatrix& rho);

// Schroedinger-picture flow -i [H, rho].
Eigen::MatrixXcd von_neumann_field(const Hamiltonian& h, const DensityMatrix& rho);

// Von Neumann entropy -Tr(rho ln rho) in nats. Eigenvalues in (-1e-10, 0)
// count as zero; anything below -1e-10 is a NumericalError.
double entropy(const DensityMatrix& rho);
double entropy(const FrequencyMatrix& x);

// Shannon entropy of the frequencies, -sum_i x_i ln x_i in nats.
double diagonal_entropy(const PopulationState& x);

// Z(beta) = sum_l exp(-beta E_l) over the spectrum of h, evaluated with the
// dominant exponent factored out; throws NumericalError when the result
// still overflows.
double partition_function(const Hamiltonian& h, double beta);

// Thermal state exp(-beta H) / Z computed in the eigenbasis of h; beta = 0
// yields the maximally mixed state exactly.
DensityMatrix gibbs_state(const Hamiltonian& h, double beta);

// Payoff of strategy i against the diagonal of rho: sum_j a_ij rho_jj.
double quantized_fitness(const PayoffMatrix& a, const DensityMatrix& rho, Eigen::Index i);

// Mean payoff sum_kl a_kl rho_kk rho_ll.
double quantized_average_fitness(const PayoffMatrix& a, const DensityMatrix& rho);

// Selection generator and Hamiltonian induced by a diagonal payoff matrix at
// a diagonal state: Lambda = (A rho - rho A rho) / 2 and H = i Lambda, so the
// diagonal entries of H are its eigenvalues with the basis kets as
// eigenvectors. Tr(rho H) vanishes exactly when rho is idempotent; otherwise
// the energy is reported as is and flagged via `idempotent`.
struct StateHamiltonian {
  Eigen::MatrixXcd lambda;
  Eigen::MatrixXcd h;
  Eigen::VectorXcd eigenvalues;  // diagonal of h
  Complex average_energy{0.0, 0.0};
  bool idempotent = false;       // rho^2 = rho within 1e-10
};

StateHamiltonian hamiltonian_from_state(const PayoffMatrix& a, const DensityMatrix& rho);

struct FixedHamiltonian {
  Hamiltonian h;
};

// State-dependent generator Lambda(rho) = (A rho - rho A rho) / 2.
struct PayoffGenerator {
  PayoffMatrix a;
};

using EvolutionRule = std::variant<FixedHamiltonian, PayoffGenerator>;

struct DensityTrajectory {
  std::vector<double> times;
  std::vector<Eigen::MatrixXcd> states;
};

// Integrates d(rho)/dt = -i [H, rho] for a fixed Hamiltonian, or the
// commutator flow d(rho)/dt = [Lambda(rho), rho] for the payoff-generated
// rule (in real arithmetic when the inputs are real). Hermiticity is restored
// by symmetrization and the trace renormalized after every step.
DensityTrajectory integrate_von_neumann(const EvolutionRule& rule, const DensityMatrix& rho0,
                                        const IntegratorConfig& cfg);

// Diagnostic residuals tying the trace expressions to the payoff sums for
// (near-)diagonal states. No errors: the report simply records how far the
// identities are from holding.
struct TraceIdentityReport {
  double trace_payoff = 0.0;             // Tr(A rho)
  double symmetrized_expectation = 0.0;  // Tr(rho (A + A^T)/2)
  double trace_residual = 0.0;
  double sandwich_payoff = 0.0;          // Tr(rho A rho)
  double average_payoff = 0.0;           // quantized_average_fitness
  double average_residual = 0.0;
  double off_diagonal_norm = 0.0;        // max |rho_np| for n != p
};

TraceIdentityReport trace_fitness_identities(const PayoffMatrix& a, const DensityMatrix& rho);

}  // namespace replidyn
