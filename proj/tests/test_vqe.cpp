// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <numbers>

#include "fqe/error.hpp"
#include "fqe/oracle.hpp"
#include "fqe/vqe.hpp"
#include "support.hpp"

using namespace fqe;
using namespace fqe::testing;

TEST(Ansatz, ZeroAnglesKeepBasisStateUpToSign) {
  const Ansatz a{4, 2};
  const std::vector<double> zero(a.param_count(), 0.0);
  for (std::uint64_t b : {0ull, 3ull, 0b1011ull, 15ull}) {
    const auto x = StateVector::basis_state(4, b);
    EXPECT_NEAR(ansatz_state(a, zero, x).fidelity(x), 1.0, 1e-15);
  }
}

TEST(Ansatz, PiRotationFlipsSingleQubit) {
  const std::vector<double> pi{std::numbers::pi};
  const auto out = ansatz_state({1, 1}, pi, StateVector(1));
  EXPECT_NEAR(std::abs(out[1]), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(out[0]), 0.0, 1e-15);
}

TEST(Ansatz, MatchesDenseGates) {
  // Ry(t) on qubit 0, then CZ, on two qubits: compare with explicit matrices.
  const double t0 = 0.3, t1 = -1.1;
  Eigen::Matrix2cd ry0, ry1;
  ry0 << std::cos(t0 / 2), -std::sin(t0 / 2), std::sin(t0 / 2), std::cos(t0 / 2);
  ry1 << std::cos(t1 / 2), -std::sin(t1 / 2), std::sin(t1 / 2), std::cos(t1 / 2);
  Eigen::MatrixXcd cz = Eigen::MatrixXcd::Identity(4, 4);
  cz(3, 3) = -1.0;
  const Eigen::MatrixXcd u = cz * kron(ry1, ry0);
  std::mt19937_64 rng(61);
  const auto x = random_state(2, rng);
  const std::vector<double> theta{t0, t1};
  EXPECT_LT((as_vector(ansatz_state({2, 1}, theta, x)) - u * as_vector(x)).norm(), 1e-14);
}

TEST(Ansatz, UnitaryOnRandomAngles) {
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> ang(-3.2, 3.2);
  for (int trial = 0; trial < 20; ++trial) {
    const Ansatz a{1 + static_cast<int>(rng() % 6), 1 + static_cast<int>(rng() % 3)};
    std::vector<double> theta(a.param_count());
    for (auto& t : theta) t = ang(rng);
    EXPECT_NEAR(ansatz_state(a, theta, random_state(a.n_qubits, rng)).norm(), 1.0, 1e-12);
  }
  EXPECT_THROW(ansatz_state({2, 1}, std::vector<double>(3), StateVector(2)), ConfigError);
  EXPECT_THROW(ansatz_state({2, 1}, std::vector<double>(2), StateVector(3)), ConfigError);
}

TEST(InitialAngles, SmallAndSeeded) {
  const Ansatz a{6, 3};
  const auto t = initial_angles(a, 11);
  ASSERT_EQ(t.size(), 18u);
  for (double v : t) EXPECT_LE(std::abs(v), 0.1);
  EXPECT_EQ(t, initial_angles(a, 11));
  EXPECT_NE(t, initial_angles(a, 12));
}

TEST(VqeRun, SingleQubitZConverges) {
  const PauliSum z(1, {{1.0, PauliString::parse("Z")}});
  VqeConfig c;
  c.gamma = 0.1;
  c.layers = 1;
  c.max_iters = 5000;
  c.seed = 3;
  const auto t = vqe_run(z, StateVector(1), c);
  EXPECT_TRUE(t.converged);
  EXPECT_NEAR(t.final_energy(), -1.0, 1e-4);
}

TEST(VqeRun, TraceSchemaAndLowerBound) {
  std::mt19937_64 rng(63);
  const auto h = random_sum(3, 10, rng, 0.5);
  VqeConfig c;
  c.gamma = 0.05;
  c.layers = 2;
  c.max_iters = 50;
  const auto t = vqe_run(h, StateVector(3), c);
  const double lmin = oracle::dense_ground(h).energy;
  EXPECT_EQ(t.records[0].cum_direct_cost, 1.0);
  for (std::size_t i = 1; i < t.records.size(); ++i) {
    EXPECT_GE(t.records[i].energy, lmin - 1e-12);
    EXPECT_EQ(t.records[i].cum_direct_cost - t.records[i - 1].cum_direct_cost, 6.0 + 1.0);
    EXPECT_EQ(t.records[i].p_success, 1.0);
  }
  VqeConfig bad;
  bad.gamma = 0.0;
  EXPECT_THROW(vqe_run(h, StateVector(3), bad), ConfigError);
}

TEST(FiniteDifference, ConvergesToParameterShiftGradient) {
  std::mt19937_64 rng(64);
  for (int n = 2; n <= 4; ++n) {
    const auto h = random_sum(n, 12, rng);
    const CompiledSum op(h);
    const Ansatz a{n, 2};
    const auto theta = initial_angles(a, static_cast<std::uint64_t>(n));
    const auto x0 = StateVector(n);
    const auto f = [&](const std::vector<double>& t) { return op.expectation(ansatz_state(a, t, x0)); };
    const double f0 = f(theta);
    // Exact derivative for exp(-i t Y / 2) gates: (f(t + pi/2) - f(t - pi/2)) / 2.
    std::vector<double> exact(theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j) {
      auto up = theta, down = theta;
      up[j] += std::numbers::pi / 2;
      down[j] -= std::numbers::pi / 2;
      exact[j] = (f(up) - f(down)) / 2;
    }
    auto error = [&](double d) {
      const auto g = finite_difference_gradient(op, a, theta, x0, f0, d, false);
      EXPECT_EQ(g.evaluations, static_cast<int>(theta.size()));
      double e = 0.0;
      for (std::size_t j = 0; j < theta.size(); ++j) e = std::max(e, std::abs(g.grad[j] - exact[j]));
      return e;
    };
    const double e3 = error(1e-3), e4 = error(1e-4), e5 = error(1e-5);
    EXPECT_LT(e4, e3);
    EXPECT_NEAR(e3 / e4, 10.0, 1.5);
    EXPECT_NEAR(e4 / e5, 10.0, 1.5);
    const auto c = finite_difference_gradient(op, a, theta, x0, f0, 1e-4, true);
    for (std::size_t j = 0; j < theta.size(); ++j) EXPECT_NEAR(c.grad[j], exact[j], 1e-7);
  }
}
