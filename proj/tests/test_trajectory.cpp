#include "modukin/trajectory.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace modukin;

namespace {

TrajectorySpec reach() {
  JointVector a, b;
  a << 0.1, -0.4, 0.0, 0.9, -1.2, 0.3, 0.5;
  b << 0.6, 0.2, -0.7, 0.9, 0.4, -0.3, 1.5;
  return quintic_trajectory(a, b, 2.0);
}

}  // namespace

TEST(Quintic, BoundaryConditions) {
  const auto spec = reach();
  const JointState s0 = sample(spec, 0.0), s1 = sample(spec, 2.0);
  for (int k = 0; k < kDof; ++k) {
    EXPECT_EQ(s0.theta[k], spec.quintic[k].start);
    EXPECT_EQ(s0.omega[k], 0.0);
    EXPECT_EQ(s0.alpha[k], 0.0);
    EXPECT_NEAR(s1.theta[k], spec.quintic[k].end, 1e-15);
    EXPECT_EQ(s1.omega[k], 0.0);
    EXPECT_EQ(s1.alpha[k], 0.0);
  }
}

TEST(Quintic, Midpoint) {
  const auto spec = reach();
  const JointState mid = sample(spec, 1.0);
  for (int k = 0; k < kDof; ++k) {
    EXPECT_NEAR(mid.theta[k], 0.5 * (spec.quintic[k].start + spec.quintic[k].end), 1e-15);
  }
}

TEST(Quintic, PeakRateAtMidpoint) {
  const auto spec = reach();
  const auto series = sample_series(spec, 0.0, 2.0);
  for (int k = 0; k < kDof; ++k) {
    const double span = spec.quintic[k].end - spec.quintic[k].start;
    if (span == 0.0) continue;
    std::size_t best = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
      if (std::abs(series[i].state.omega[k]) > std::abs(series[best].state.omega[k])) best = i;
    }
    EXPECT_NEAR(series[best].t, 1.0, 1.0 / spec.sample_rate);
    EXPECT_NEAR(std::abs(series[best].state.omega[k]), 15.0 / 8.0 * std::abs(span) / 2.0, 1e-12);
  }
}

TEST(Quintic, Monotone) {
  const auto spec = reach();
  const auto series = sample_series(spec, 0.0, 2.0);
  for (int k = 0; k < kDof; ++k) {
    const double dir = spec.quintic[k].end - spec.quintic[k].start;
    for (std::size_t i = 1; i < series.size(); ++i) {
      EXPECT_GE((series[i].state.theta[k] - series[i - 1].state.theta[k]) * dir, 0.0);
    }
  }
}

TEST(Quintic, DerivativesMatchFiniteDifference) {
  const auto spec = reach();
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.01, 1.99);
  const double h = 1e-6;
  for (int i = 0; i < 100; ++i) {
    const double t = u(rng);
    const JointState s = sample(spec, t);
    const JointVector w = (sample(spec, t + h).theta - sample(spec, t - h).theta) / (2 * h);
    const JointVector a = (sample(spec, t + h).omega - sample(spec, t - h).omega) / (2 * h);
    EXPECT_LT((s.omega - w).norm() / std::max(w.norm(), 1e-8), 1e-6);
    EXPECT_LT((s.alpha - a).norm() / std::max(a.norm(), 1e-8), 1e-6);
  }
}

TEST(Quintic, OutOfRange) {
  const auto spec = reach();
  EXPECT_THROW(sample(spec, -1e-9), Error);
  EXPECT_THROW(sample(spec, 2.0 + 1e-9), Error);
}

TEST(Sinusoid, DerivativesMatchFiniteDifference) {
  const auto spec = default_demo_trajectory();
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  const double h = 1e-6;
  for (int i = 0; i < 100; ++i) {
    const double t = u(rng) + h;
    const JointState s = sample(spec, t);
    const JointVector w = (sample(spec, t + h).theta - sample(spec, t - h).theta) / (2 * h);
    const JointVector a = (sample(spec, t + h).omega - sample(spec, t - h).omega) / (2 * h);
    EXPECT_LT((s.omega - w).norm() / w.norm(), 1e-6);
    EXPECT_LT((s.alpha - a).norm() / a.norm(), 1e-6);
  }
  EXPECT_THROW(sample(spec, -0.5), Error);
  EXPECT_NO_THROW(sample(spec, 50.0));
}

TEST(Series, FencepostAndDefinition) {
  const auto spec = default_demo_trajectory();
  const auto series = sample_series(spec, 0.0, 1.0);
  ASSERT_EQ(series.size(), 101u);
  EXPECT_EQ(series.front().t, 0.0);
  EXPECT_EQ(series.back().t, 1.0);
  for (std::size_t i = 0; i < series.size(); ++i) {
    EXPECT_NEAR(series[i].t, i / 100.0, 1e-15);
    const JointState s = sample(spec, series[i].t);
    EXPECT_EQ(series[i].state.theta, s.theta);
    EXPECT_EQ(series[i].state.omega, s.omega);
    EXPECT_EQ(series[i].state.alpha, s.alpha);
  }
}

TEST(Series, Deterministic) {
  const auto a = sample_series(reach(), 0.0, 2.0), b = sample_series(reach(), 0.0, 2.0);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].state.theta, b[i].state.theta);
  EXPECT_THROW(sample_series(reach(), 1.0, 1.0), Error);
}

TEST(DemoTrajectory, Parameters) {
  const auto spec = default_demo_trajectory();
  EXPECT_EQ(spec.kind, TrajectoryKind::Sinusoidal);
  for (int k = 0; k < kDof; ++k) {
    EXPECT_EQ(spec.sinusoid[k].amplitude, 0.3);
    EXPECT_EQ(spec.sinusoid[k].frequency_hz, 0.25);
    EXPECT_NEAR(spec.sinusoid[k].phase, (k + 1) * std::numbers::pi / 7.0, 1e-15);
  }
}
