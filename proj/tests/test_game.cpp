#include "replidyn/game.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace replidyn;

namespace {

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

PayoffMatrix hawk_dove() { return PayoffMatrix(mat2(-1.0, 2.0, 0.0, 1.0)); }
PayoffMatrix prisoners_dilemma() { return PayoffMatrix(mat2(3.0, 0.0, 5.0, 1.0)); }

PayoffMatrix rock_paper_scissors() {
  Eigen::MatrixXd m(3, 3);
  m << 0.0, -1.0, 1.0,
       1.0, 0.0, -1.0,
      -1.0, 1.0, 0.0;
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

const EquilibriumReport* find_report(const EquilibriumScan& scan,
                                     const Eigen::VectorXd& state, double tol = 1e-9) {
  for (const EquilibriumReport& r : scan.equilibria) {
    if (r.state.size() == state.size() &&
        (r.state.freqs() - state).lpNorm<Eigen::Infinity>() <= tol) {
      return &r;
    }
  }
  return nullptr;
}

}  // namespace

TEST_CASE("payoff matrix validation") {
  CHECK_THROWS_AS(PayoffMatrix(Eigen::MatrixXd(0, 0)), std::invalid_argument);
  Eigen::MatrixXd bad = mat2(1.0, 2.0, 3.0, std::nan(""));
  CHECK_THROWS_AS((PayoffMatrix(bad)), std::invalid_argument);
  const PayoffMatrix rect = PayoffMatrix(Eigen::MatrixXd::Ones(2, 3));
  CHECK(!rect.square());
  CHECK(rect.rows() == 2);
  CHECK(rect.cols() == 3);
}

TEST_CASE("population state validation and constructors") {
  Eigen::VectorXd off(2);
  off << 0.5, 0.4;
  CHECK_THROWS_WITH_AS((PopulationState(off)),
                       "state not on simplex: components must sum to 1",
                       std::invalid_argument);

  Eigen::VectorXd negative(2);
  negative << 1.2, -0.2;
  CHECK_THROWS_AS((PopulationState(negative)), std::invalid_argument);

  const PopulationState u = PopulationState::uniform(4);
  CHECK(u.size() == 4);
  CHECK(std::abs(u.freqs().sum() - 1.0) <= 1e-15);
  CHECK(std::abs(u[2] - 0.25) <= 1e-15);

  const PopulationState p = PopulationState::pure(3, 1);
  CHECK(p[0] == 0.0);
  CHECK(p[1] == 1.0);

  Eigen::VectorXd noisy(3);
  noisy << 0.5, -1e-14, 0.5;
  const PopulationState r = PopulationState::renormalized(noisy);
  CHECK(r[1] == 0.0);
  CHECK(std::abs(r.freqs().sum() - 1.0) <= 1e-15);
}

TEST_CASE("fitness and average fitness on the prisoners dilemma") {
  const PayoffMatrix a = prisoners_dilemma();
  const PopulationState x = state2(0.5, 0.5);
  CHECK(std::abs(fitness(a, x, 0) - 1.5) <= 1e-15);
  CHECK(std::abs(fitness(a, x, 1) - 3.0) <= 1e-15);
  CHECK(std::abs(average_fitness(a, x) - 2.25) <= 1e-15);
  CHECK_THROWS_AS(fitness(a, x, 2), std::invalid_argument);
}

TEST_CASE("fitness is linear in the population state") {
  const PayoffMatrix a = rock_paper_scissors();
  const PopulationState x = state3(0.2, 0.3, 0.5);
  const PopulationState y = state3(0.6, 0.1, 0.3);
  const double alpha = 0.37;
  const PopulationState mix =
      PopulationState(alpha * x.freqs() + (1.0 - alpha) * y.freqs());
  for (Eigen::Index i = 0; i < 3; ++i) {
    const double expected = alpha * fitness(a, x, i) + (1.0 - alpha) * fitness(a, y, i);
    CHECK(std::abs(fitness(a, mix, i) - expected) <= 1e-14);
  }
}

TEST_CASE("best replies") {
  const PayoffMatrix hd = hawk_dove();
  const std::vector<int> both = best_replies(hd, state2(0.5, 0.5));
  CHECK(both == std::vector<int>{0, 1});
  const std::vector<int> hawk = best_replies(hd, state2(0.0, 1.0));
  CHECK(hawk == std::vector<int>{0});
}

TEST_CASE("support extraction") {
  CHECK(support(state3(0.5, 0.5, 0.0)) == std::vector<int>{0, 1});
  CHECK(support(PopulationState::pure(3, 2)) == std::vector<int>{2});
}

TEST_CASE("Nash verdicts on canonical games") {
  const PayoffMatrix hd = hawk_dove();
  const NashVerdict center = is_nash(hd, state2(0.5, 0.5));
  CHECK(center.nash);
  CHECK(!center.strict);

  const PayoffMatrix pd = prisoners_dilemma();
  const NashVerdict defect = is_nash(pd, state2(0.0, 1.0));
  CHECK(defect.nash);
  CHECK(defect.strict);
  const NashVerdict cooperate = is_nash(pd, state2(1.0, 0.0));
  CHECK(!cooperate.nash);
  CHECK(!cooperate.strict);
}

TEST_CASE("Nash verdicts are invariant under column shifts") {
  const PayoffMatrix a = rock_paper_scissors();
  Eigen::MatrixXd shifted = a.entries();
  const Eigen::Vector3d shift(0.7, -1.3, 2.9);
  for (Eigen::Index j = 0; j < 3; ++j) shifted.col(j).array() += shift(j);
  const PayoffMatrix b{shifted};

  const std::vector<PopulationState> probes = {
      state3(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0), state3(0.2, 0.3, 0.5),
      PopulationState::pure(3, 0), state3(0.5, 0.5, 0.0)};
  for (const PopulationState& p : probes) {
    const NashVerdict va = is_nash(a, p);
    const NashVerdict vb = is_nash(b, p);
    CHECK(va.nash == vb.nash);
    CHECK(va.strict == vb.strict);
    CHECK(best_replies(a, p) == best_replies(b, p));
  }
}

TEST_CASE("simplex lattice sizes") {
  CHECK(simplex_lattice(2, 50).size() == 51);
  CHECK(simplex_lattice(3, 20).size() == 231);
  CHECK(default_mutant_grid(2) == 50);
  CHECK(default_mutant_grid(3) == 20);
  CHECK(default_mutant_grid(5) == 10);
  for (const Eigen::VectorXd& p : simplex_lattice(3, 7)) {
    CHECK(std::abs(p.sum() - 1.0) <= 1e-12);
    CHECK(p.minCoeff() >= 0.0);
  }
}

TEST_CASE("evolutionary stability on canonical games") {
  CHECK(is_ess(hawk_dove(), state2(0.5, 0.5)));
  CHECK(is_ess(prisoners_dilemma(), state2(0.0, 1.0)));
  CHECK(!is_ess(rock_paper_scissors(), state3(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)));
}

TEST_CASE("equilibrium scan: Hawk-Dove") {
  const EquilibriumScan scan = find_equilibria(hawk_dove());
  CHECK(scan.equilibria.size() == 3);
  CHECK(scan.singular_supports.empty());

  const EquilibriumReport* center = find_report(scan, Eigen::Vector2d(0.5, 0.5));
  REQUIRE(center != nullptr);
  CHECK(center->nash);
  CHECK(!center->strict);
  CHECK(center->ess);
  CHECK(center->support == std::vector<int>{0, 1});

  const EquilibriumReport* hawk = find_report(scan, Eigen::Vector2d(1.0, 0.0));
  REQUIRE(hawk != nullptr);
  CHECK(!hawk->nash);
  const EquilibriumReport* dove = find_report(scan, Eigen::Vector2d(0.0, 1.0));
  REQUIRE(dove != nullptr);
  CHECK(!dove->nash);
}

TEST_CASE("equilibrium scan: prisoners dilemma") {
  const EquilibriumScan scan = find_equilibria(prisoners_dilemma());
  CHECK(scan.equilibria.size() == 2);  // the interior solution lies outside the simplex
  CHECK(scan.singular_supports.empty());

  std::size_t nash_count = 0;
  for (const EquilibriumReport& r : scan.equilibria) nash_count += r.nash ? 1 : 0;
  CHECK(nash_count == 1);

  const EquilibriumReport* defect = find_report(scan, Eigen::Vector2d(0.0, 1.0));
  REQUIRE(defect != nullptr);
  CHECK(defect->nash);
  CHECK(defect->strict);
  CHECK(defect->ess);
}

TEST_CASE("equilibrium scan: rock-paper-scissors") {
  const EquilibriumScan scan = find_equilibria(rock_paper_scissors());
  CHECK(scan.equilibria.size() == 4);  // three vertices plus the center
  CHECK(scan.singular_supports.size() == 3);
  for (const std::vector<int>& s : scan.singular_supports) CHECK(s.size() == 2);

  const EquilibriumReport* center =
      find_report(scan, Eigen::Vector3d(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0));
  REQUIRE(center != nullptr);
  CHECK(center->nash);
  CHECK(!center->strict);
  CHECK(!center->ess);

  for (Eigen::Index i = 0; i < 3; ++i) {
    const EquilibriumReport* vertex =
        find_report(scan, Eigen::Vector3d::Unit(i));
    REQUIRE(vertex != nullptr);
    CHECK(!vertex->nash);
  }
}

TEST_CASE("equilibrium scan rejects more than five strategies") {
  CHECK_THROWS_AS(find_equilibria(PayoffMatrix(Eigen::MatrixXd::Zero(6, 6))),
                  std::invalid_argument);
}
