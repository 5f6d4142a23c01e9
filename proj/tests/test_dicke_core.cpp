#include <boost/math/constants/constants.hpp>
#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "dicke/bernstein.hpp"
#include "dicke/dicke_core.hpp"
#include "dicke/expm.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace dicke;
using doctest::Approx;

TEST_SUITE("population") {
  TEST_CASE("clamps tiny negatives and renormalizes") {
    const PopulationVector p({0.5, -1e-13, 0.5});
    CHECK(p[1] == 0.0);
    CHECK(p.emitters() == 2);
  }

  TEST_CASE("rejects bad vectors") {
    CHECK_THROWS_WITH_AS(PopulationVector({0.5, -1e-6, 0.5 + 1e-6}),
                         doctest::Contains("negative population"), Error);
    CHECK_THROWS_WITH_AS(PopulationVector({0.5, 0.6}),
                         doctest::Contains("unnormalized population"), Error);
    CHECK_THROWS_AS(PopulationVector({1.0}), Error);
    CHECK_THROWS_AS(PopulationVector({NAN, 1.0}), Error);
    CHECK_THROWS_WITH_AS(PopulationVector::dicke(0, 0), "invalid system size", Error);
    CHECK_THROWS_AS(PopulationVector::dicke(3, 4), Error);
  }
}

TEST_SUITE("decomposition") {
  TEST_CASE("merges close atoms and clamps") {
    const Decomposition d(4, {{0.25, 0.3}, {0.25, 0.3 + 5e-8}, {0.5, 1.0 + 5e-9}});
    REQUIRE(d.size() == 2);
    CHECK(d.atoms()[0].weight == Approx(0.5));
    CHECK(d.atoms()[0].eps == Approx(0.3 + 2.5e-8).epsilon(1e-12));
    CHECK(d.atoms()[1].eps == 1.0);
    CHECK(d.sorted_by_eps_descending().atoms()[0].eps == 1.0);
  }

  TEST_CASE("enforces invariants") {
    CHECK_THROWS_AS(Decomposition(2, {{0.5, 0.1}}), Error);
    CHECK_THROWS_AS(Decomposition(2, {{1.0, 1.1}}), Error);
    CHECK_THROWS_AS(Decomposition(2, {{1.1, 0.1}, {-0.1, 0.5}}), Error);
    // N = 2 allows at most two atoms.
    CHECK_THROWS_AS(Decomposition(2, {{0.3, 0.1}, {0.3, 0.5}, {0.4, 0.9}}), Error);
    CHECK(Decomposition::max_atoms(7) == 4);
    CHECK(Decomposition::max_atoms(8) == 5);
  }
}

TEST_SUITE("expm") {
  TEST_CASE("matches closed forms") {
    Eigen::MatrixXd rot(2, 2);
    rot << 0, 3, -3, 0;
    const Eigen::MatrixXd e = expm(rot);
    CHECK(e(0, 0) == Approx(std::cos(3.0)).epsilon(1e-14));
    CHECK(e(0, 1) == Approx(std::sin(3.0)).epsilon(1e-14));

    Eigen::MatrixXd nil = Eigen::MatrixXd::Zero(3, 3);
    nil(0, 1) = 1;
    nil(1, 2) = 1;
    const Eigen::MatrixXd en = expm(nil);
    CHECK(en(0, 2) == Approx(0.5));
    CHECK(en(0, 0) == 1.0);
  }

  TEST_CASE("agrees with Eigen's MatrixFunctions over all Pade branches") {
    testing::Rng rng(11);
    for (double scale : {1e-3, 0.1, 0.5, 1.5, 4.0, 40.0, 400.0}) {
      Eigen::MatrixXd a(6, 6);
      for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = testing::uniform(rng, -1, 1);
      a *= scale / a.cwiseAbs().colwise().sum().maxCoeff();
      const Eigen::MatrixXd ref = a.exp();
      const double err = (expm(a) - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff();
      CHECK(err < 1e-12);
    }
  }

  TEST_CASE("diagnoses non-finite input") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2) * NAN;
    CHECK_THROWS_AS(expm(a), Error);
    Eigen::MatrixXd big = Eigen::MatrixXd::Identity(2, 2) * 1e6;
    CHECK_THROWS_WITH_AS(expm(big), doctest::Contains("expm failed"), Error);
  }
}

TEST_SUITE("dicke_core") {
  TEST_CASE("rate coefficients") {
    CHECK(rate_coefficients(3) == std::vector<double>{0, 3, 4, 3});
    CHECK(rate_coefficients(5)[5] == 5.0);
    CHECK_THROWS_WITH_AS(rate_coefficients(0), "invalid system size", Error);
    for (int n = 1; n <= 40; ++n) {
      const auto h = rate_coefficients(n);
      for (int k = 1; k <= n; ++k) {
        CHECK(h[static_cast<std::size_t>(k)] == h[static_cast<std::size_t>(n + 1 - k)]);
      }
    }
  }

  TEST_CASE("rate matrix structure") {
    const RateMatrix m1 = rate_matrix(1);
    Eigen::MatrixXd expect(2, 2);
    expect << 0, 1, 0, -1;
    CHECK(m1.entries == expect);
    CHECK(rate_matrix(3).entries(1, 2) == 4.0);
    for (int n = 1; n <= 30; ++n) {
      const RateMatrix m = rate_matrix(n);
      CHECK(m.entries.colwise().sum().cwiseAbs().maxCoeff() == 0.0);
    }
  }

  TEST_CASE("evolve examples") {
    const PopulationVector g = PopulationVector::ground(5);
    CHECK(evolve(g, 3.7)[0] == 1.0);
    testing::Rng rng(1);
    const PopulationVector p0 = testing::random_population(rng, 4);
    const PopulationVector same = evolve(p0, 0.0);
    for (std::size_t k = 0; k < p0.size(); ++k) CHECK(same[k] == p0[k]);
    const PopulationVector p1 = evolve(PopulationVector::fully_excited(1), 1.0);
    CHECK(p1[0] == Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
    CHECK(p1[1] == Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK_THROWS_WITH_AS(evolve(g, -1.0), "negative time", Error);
  }

  TEST_CASE("trajectory examples") {
    const PopulationVector p0 = PopulationVector::fully_excited(1);
    const std::vector<double> one{0.0};
    CHECK(evolve_trajectory(p0, one).states.size() == 1);
    const std::vector<double> two{0.0, 1.0};
    const Trajectory tr = evolve_trajectory(p0, two);
    CHECK(tr.states[1][1] == Approx(std::exp(-1.0)).epsilon(1e-14));
    const std::vector<double> bad{0.0, 1.0, 1.0};
    CHECK_THROWS_AS(evolve_trajectory(p0, bad), Error);
    const std::vector<double> neg{-1.0, 1.0};
    CHECK_THROWS_AS(evolve_trajectory(p0, neg), Error);
  }

  TEST_CASE("trajectory stepping equals direct evolution") {
    testing::Rng rng(3);
    const PopulationVector p0 = testing::random_population(rng, 9);
    std::vector<double> times{0.0, 0.01, 0.02, 0.05, 0.3, 0.31, 2.0};
    const Trajectory tr = evolve_trajectory(p0, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const PopulationVector d = evolve(p0, times[i]);
      for (std::size_t k = 0; k < d.size(); ++k) CHECK(tr.states[i][k] == Approx(d[k]).epsilon(1e-12));
    }
  }

  TEST_CASE("intensity examples") {
    CHECK(intensity(PopulationVector::fully_excited(6)) == 6.0);
    CHECK(intensity(PopulationVector::ground(6)) == 0.0);
    CHECK(intensity(PopulationVector::dicke(4, 2)) == 6.0);
    CHECK(intensity_from_decomposition(5, Decomposition(5, {{1.0, 1.0}})) == Approx(5.0));
    CHECK(intensity_from_decomposition(5, Decomposition(5, {{1.0, 0.0}})) == 0.0);
    CHECK(intensity_from_decomposition(7, Decomposition(7, {{1.0, 0.5}})) == Approx(14.0));
    CHECK_THROWS_AS(intensity_from_decomposition(6, Decomposition(7, {{1.0, 0.5}})), Error);
  }
}

TEST_SUITE("dicke_core properties") {
  TEST_CASE("conservation and positivity") {
    testing::Rng rng(17);
    for (int trial = 0; trial < 60; ++trial) {
      const int n = testing::uniform_int(rng, 1, 30);
      const PopulationVector p0 = testing::random_population(rng, n, trial % 2 == 0);
      const double t = testing::uniform(rng, 0.0, 10.0);
      const RateMatrix m = rate_matrix(n);
      Eigen::VectorXd v(n + 1);
      for (int k = 0; k <= n; ++k) v[k] = p0[static_cast<std::size_t>(k)];
      const Eigen::VectorXd raw = expm(m.entries * t) * v;
      CHECK(std::abs(raw.sum() - 1.0) <= 1e-9);
      CHECK(raw.minCoeff() >= -1e-10);
    }
  }

  TEST_CASE("agrees with adaptive ODE integration for N <= 8") {
    testing::Rng rng(5);
    for (int n = 1; n <= 8; ++n) {
      for (int trial = 0; trial < 4; ++trial) {
        const PopulationVector p0 = testing::random_population(rng, n);
        const double t = testing::uniform(rng, 0.0, 3.0);
        const std::vector<double> ref =
            testing::ode_evolve({p0.values().begin(), p0.values().end()}, t);
        const PopulationVector p = evolve(p0, t);
        double err = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) err = std::max(err, std::abs(p[k] - ref[k]));
        CHECK(err <= 1e-8);
      }
    }
  }

  TEST_CASE("peak intensity scales like N^2") {
    for (int n : {4, 8, 16}) {
      std::vector<double> times;
      for (int i = 0; i <= 400; ++i) times.push_back(i * 2.0 / 400 / n * 4);
      const Trajectory tr = evolve_trajectory(PopulationVector::fully_excited(n), times);
      double peak = 0.0;
      for (const auto& s : tr.states) peak = std::max(peak, intensity(s));
      CHECK(peak >= n * n / 8.0);
    }
  }
}
