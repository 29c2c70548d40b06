#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <vector>

namespace replidyn {

// Default comparison tolerance for payoff and equilibrium tests.
inline constexpr double kDefaultTol = 1e-9;

// Payoff matrix of a finite game. Entry (i, j) is the payoff to strategy i
// against strategy j; entries must be finite. Rectangular matrices are
// allowed for the two-population case.
class PayoffMatrix {
 public:
  explicit PayoffMatrix(Eigen::MatrixXd entries);

  const Eigen::MatrixXd& entries() const { return entries_; }
  Eigen::Index rows() const { return entries_.rows(); }
  Eigen::Index cols() const { return entries_.cols(); }
  bool square() const { return entries_.rows() == entries_.cols(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

 private:
  Eigen::MatrixXd entries_;
};

// Point on the probability simplex: non-negative frequencies summing to one.
class PopulationState {
 public:
  // Validates the simplex constraints (components in [0, 1], sum within
  // sum_tol of one), then rescales so the stored sum is one to machine
  // precision.
  explicit PopulationState(Eigen::VectorXd freqs, double sum_tol = 1e-12);

  // Clips negative components to zero and renormalizes; for integrator
  // output and other vectors already known to be near the simplex.
  static PopulationState renormalized(Eigen::VectorXd freqs);
  static PopulationState uniform(Eigen::Index n);
  static PopulationState pure(Eigen::Index n, Eigen::Index i);

  const Eigen::VectorXd& freqs() const { return freqs_; }
  Eigen::Index size() const { return freqs_.size(); }
  double operator[](Eigen::Index i) const { return freqs_(i); }

 private:
  struct Unchecked {};
  PopulationState(Unchecked, Eigen::VectorXd freqs) : freqs_(std::move(freqs)) {}

  Eigen::VectorXd freqs_;
};

// Two-population game: row population plays A (n x m) against the column
// population's state, column population plays B (m x n).
struct AsymmetricGame {
  AsymmetricGame(PayoffMatrix a_in, PayoffMatrix b_in);

  PayoffMatrix a;
  PayoffMatrix b;
};

struct NashVerdict {
  bool nash = false;
  bool strict = false;
};

// One rest-point candidate found by support enumeration, classified.
struct EquilibriumReport {
  PopulationState state;
  bool nash = false;
  bool strict = false;
  bool ess = false;
  std::vector<int> support;
  double tol = kDefaultTol;
};

// Result of a support-enumeration scan. Supports whose linear system is
// singular are listed instead of solved.
struct EquilibriumScan {
  std::vector<EquilibriumReport> equilibria;
  std::vector<std::vector<int>> singular_supports;
};

// Payoff of strategy i in population x: (A x)_i.
double fitness(const PayoffMatrix& a, const PopulationState& x, Eigen::Index i);

// Population mean payoff x^T A x.
double average_fitness(const PayoffMatrix& a, const PopulationState& x);

// Strategies whose payoff against q is within tol of the maximum.
std::vector<int> best_replies(const PayoffMatrix& a, const PopulationState& q,
                              double tol = kDefaultTol);

// Indices with frequency above tol.
std::vector<int> support(const PopulationState& x, double tol = kDefaultTol);

// Equilibrium test E(p, p) >= E(r, p) against every pure strategy r (pure
// deviations suffice because E is linear in its first argument). `strict`
// additionally requires p to be pure and every off-support deviation to earn
// strictly less than the incumbent payoff.
NashVerdict is_nash(const PayoffMatrix& a, const PopulationState& p,
                    double tol = kDefaultTol);

// Mutant lattice density used by is_ess when none is given: 50 subdivisions
// for two strategies, 20 for three, 10 beyond that.
int default_mutant_grid(Eigen::Index n);

// All simplex points with denominator `grid` (compositions of `grid` into n
// non-negative parts).
std::vector<Eigen::VectorXd> simplex_lattice(Eigen::Index n, int grid);

// Evolutionary stability: every mutant r != p must either earn strictly less
// against the incumbent, or tie and earn strictly less against itself. A
// strict equilibrium passes immediately; otherwise the mutants are the pure
// strategies plus a simplex lattice with `mutant_grid` subdivisions.
bool is_ess(const PayoffMatrix& a, const PopulationState& p,
            double tol = kDefaultTol, std::optional<int> mutant_grid = std::nullopt);

// Enumerates every non-empty support, solves the linear system that equalizes
// within-support payoffs, and classifies each solution lying in the simplex.
// Capped at 5 strategies; singular supports are skipped and reported.
EquilibriumScan find_equilibria(const PayoffMatrix& a, double tol = kDefaultTol);

}  // namespace replidyn
