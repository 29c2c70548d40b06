#include "replidyn/game.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace replidyn {

namespace {

void require_square(const PayoffMatrix& a) {
  if (!a.square()) throw std::invalid_argument("payoff matrix must be square");
}

void require_match(const PayoffMatrix& a, const PopulationState& x) {
  if (a.cols() != x.size()) {
    throw std::invalid_argument("payoff matrix and population state dimensions differ");
  }
}

// E(u, v) = u^T A v.
double bilinear_payoff(const Eigen::MatrixXd& a, const Eigen::VectorXd& u,
                       const Eigen::VectorXd& v) {
  return u.dot(a * v);
}

void enumerate_compositions(Eigen::Index n, int remaining, Eigen::VectorXd& point,
                            Eigen::Index pos, int grid,
                            std::vector<Eigen::VectorXd>& out) {
  if (pos == n - 1) {
    point(pos) = static_cast<double>(remaining) / grid;
    out.push_back(point);
    return;
  }
  for (int k = 0; k <= remaining; ++k) {
    point(pos) = static_cast<double>(k) / grid;
    enumerate_compositions(n, remaining - k, point, pos + 1, grid, out);
  }
}

}  // namespace

PayoffMatrix::PayoffMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.size() == 0) throw std::invalid_argument("payoff matrix must be non-empty");
  if (!entries_.allFinite()) throw std::invalid_argument("payoff matrix entries must be finite");
}

PopulationState::PopulationState(Eigen::VectorXd freqs, double sum_tol)
    : freqs_(std::move(freqs)) {
  if (freqs_.size() == 0) throw std::invalid_argument("population state must be non-empty");
  if (!freqs_.allFinite()) throw std::invalid_argument("population state entries must be finite");
  for (Eigen::Index i = 0; i < freqs_.size(); ++i) {
    if (freqs_(i) < -sum_tol || freqs_(i) > 1.0 + sum_tol) {
      throw std::invalid_argument("population state component outside [0, 1]");
    }
  }
  const double sum = freqs_.sum();
  if (std::abs(sum - 1.0) > sum_tol) {
    throw std::invalid_argument("state not on simplex: components must sum to 1");
  }
  freqs_ = (freqs_ / sum).cwiseMax(0.0).cwiseMin(1.0);
}

PopulationState PopulationState::renormalized(Eigen::VectorXd freqs) {
  if (freqs.size() == 0) throw std::invalid_argument("population state must be non-empty");
  if (!freqs.allFinite()) throw std::invalid_argument("population state entries must be finite");
  freqs = freqs.cwiseMax(0.0);
  const double sum = freqs.sum();
  if (!(sum > 0.0)) {
    throw std::invalid_argument("population state has no positive mass to renormalize");
  }
  return PopulationState(Unchecked{}, (freqs / sum).cwiseMin(1.0));
}

PopulationState PopulationState::uniform(Eigen::Index n) {
  if (n <= 0) throw std::invalid_argument("population state must be non-empty");
  return PopulationState(Unchecked{}, Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

PopulationState PopulationState::pure(Eigen::Index n, Eigen::Index i) {
  if (n <= 0) throw std::invalid_argument("population state must be non-empty");
  if (i < 0 || i >= n) throw std::invalid_argument("pure strategy index out of range");
  return PopulationState(Unchecked{}, Eigen::VectorXd::Unit(n, i));
}

AsymmetricGame::AsymmetricGame(PayoffMatrix a_in, PayoffMatrix b_in)
    : a(std::move(a_in)), b(std::move(b_in)) {
  if (a.rows() != b.cols() || a.cols() != b.rows()) {
    throw std::invalid_argument("two-population payoff matrices must have transposed shapes");
  }
}

double fitness(const PayoffMatrix& a, const PopulationState& x, Eigen::Index i) {
  require_square(a);
  require_match(a, x);
  if (i < 0 || i >= a.rows()) throw std::invalid_argument("strategy index out of range");
  return a.entries().row(i).dot(x.freqs());
}

double average_fitness(const PayoffMatrix& a, const PopulationState& x) {
  require_square(a);
  require_match(a, x);
  return bilinear_payoff(a.entries(), x.freqs(), x.freqs());
}

std::vector<int> best_replies(const PayoffMatrix& a, const PopulationState& q, double tol) {
  require_square(a);
  require_match(a, q);
  const Eigen::VectorXd payoffs = a.entries() * q.freqs();
  const double top = payoffs.maxCoeff();
  std::vector<int> replies;
  for (Eigen::Index i = 0; i < payoffs.size(); ++i) {
    if (payoffs(i) >= top - tol) replies.push_back(static_cast<int>(i));
  }
  return replies;
}

std::vector<int> support(const PopulationState& x, double tol) {
  std::vector<int> s;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] > tol) s.push_back(static_cast<int>(i));
  }
  return s;
}

NashVerdict is_nash(const PayoffMatrix& a, const PopulationState& p, double tol) {
  require_square(a);
  require_match(a, p);
  const Eigen::VectorXd pure_payoffs = a.entries() * p.freqs();
  const double incumbent = p.freqs().dot(pure_payoffs);

  NashVerdict verdict;
  verdict.nash = (pure_payoffs.array() <= incumbent + tol).all();
  if (!verdict.nash) return verdict;

  const std::vector<int> supp = support(p, tol);
  const bool pure = supp.size() == 1 && std::abs(p[supp.front()] - 1.0) <= tol;
  if (pure) {
    verdict.strict = true;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (static_cast<int>(i) == supp.front()) continue;
      if (pure_payoffs(i) >= incumbent - tol) {
        verdict.strict = false;
        break;
      }
    }
  }
  return verdict;
}

int default_mutant_grid(Eigen::Index n) {
  if (n <= 2) return 50;
  if (n == 3) return 20;
  return 10;
}

std::vector<Eigen::VectorXd> simplex_lattice(Eigen::Index n, int grid) {
  if (n <= 0) throw std::invalid_argument("lattice dimension must be positive");
  if (grid < 1) throw std::invalid_argument("lattice grid must be at least 1");
  std::vector<Eigen::VectorXd> points;
  Eigen::VectorXd point(n);
  enumerate_compositions(n, grid, point, 0, grid, points);
  return points;
}

bool is_ess(const PayoffMatrix& a, const PopulationState& p, double tol,
            std::optional<int> mutant_grid) {
  require_square(a);
  require_match(a, p);

  // A strict equilibrium point is always evolutionarily stable.
  const NashVerdict verdict = is_nash(a, p, tol);
  if (verdict.strict) return true;

  const Eigen::Index n = p.size();
  const int grid = mutant_grid.value_or(default_mutant_grid(n));
  const Eigen::MatrixXd& m = a.entries();
  const Eigen::VectorXd& pv = p.freqs();
  const double incumbent = bilinear_payoff(m, pv, pv);

  std::vector<Eigen::VectorXd> mutants;
  for (Eigen::Index i = 0; i < n; ++i) mutants.push_back(Eigen::VectorXd::Unit(n, i));
  for (auto& r : simplex_lattice(n, grid)) mutants.push_back(std::move(r));

  for (const Eigen::VectorXd& r : mutants) {
    if ((r - pv).lpNorm<Eigen::Infinity>() < 1e-12) continue;  // r = p
    const double invader = bilinear_payoff(m, r, pv);
    if (incumbent > invader + tol) continue;
    if (std::abs(incumbent - invader) <= tol &&
        bilinear_payoff(m, pv, r) > bilinear_payoff(m, r, r) + tol) {
      continue;
    }
    return false;
  }
  return true;
}

EquilibriumScan find_equilibria(const PayoffMatrix& a, double tol) {
  require_square(a);
  const Eigen::Index n = a.rows();
  if (n > 5) {
    throw std::invalid_argument("dimension too large: support enumeration caps at 5 strategies");
  }

  EquilibriumScan scan;
  const Eigen::MatrixXd& m = a.entries();

  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> supp;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (mask & (1u << i)) supp.push_back(static_cast<int>(i));
    }
    const Eigen::Index k = static_cast<Eigen::Index>(supp.size());

    // Unknowns: the k in-support frequencies plus the common payoff phi.
    //   (A x)_i - phi = 0 for i in the support,  sum of frequencies = 1.
    Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(k + 1, k + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
    for (Eigen::Index r = 0; r < k; ++r) {
      for (Eigen::Index c = 0; c < k; ++c) sys(r, c) = m(supp[r], supp[c]);
      sys(r, k) = -1.0;
    }
    sys.row(k).head(k).setOnes();
    rhs(k) = 1.0;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
    if (!lu.isInvertible()) {
      scan.singular_supports.push_back(supp);
      continue;
    }
    const Eigen::VectorXd sol = lu.solve(rhs);

    bool inside = true;
    for (Eigen::Index r = 0; r < k; ++r) {
      if (sol(r) < -tol || sol(r) > 1.0 + tol) {
        inside = false;
        break;
      }
    }
    if (!inside) continue;

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (Eigen::Index r = 0; r < k; ++r) x(supp[r]) = std::max(sol(r), 0.0);
    PopulationState state = PopulationState::renormalized(x);

    const auto duplicate = [&](const EquilibriumReport& rep) {
      return (rep.state.freqs() - state.freqs()).lpNorm<Eigen::Infinity>() < 1e-8;
    };
    if (std::any_of(scan.equilibria.begin(), scan.equilibria.end(), duplicate)) continue;

    const NashVerdict verdict = is_nash(a, state, tol);
    EquilibriumReport report{state, verdict.nash, verdict.strict,
                             is_ess(a, state, tol), support(state, tol), tol};
    scan.equilibria.push_back(std::move(report));
  }
  return scan;
}

}  // namespace replidyn
