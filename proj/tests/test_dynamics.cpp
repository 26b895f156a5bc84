#include "modukin/dynamics.hpp"
#include "modukin/trajectory.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace modukin;
using P = JointPointId;

namespace {

JointState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> rate(-5.0, 5.0);
  JointState s;
  for (int k = 0; k < kDof; ++k) s.theta[k] = angle(rng);
  for (int k = 0; k < kDof; ++k) s.omega[k] = rate(rng);
  for (int k = 0; k < kDof; ++k) s.alpha[k] = rate(rng);
  return s;
}

/// Only one moving link carries mass.
AnthropometricProfile single_link(int link, double mass, InertiaModel model) {
  AnthropometricProfile p = builtin_profile("medium");
  p.inertia.masses.fill(0.0);
  p.inertia.masses[static_cast<std::size_t>(link)] = mass;
  p.inertia.model = model;
  return p;
}

// Rods by their end points; the R->S segment holds the l13 riser and the l14 arm.
struct OracleRod {
  std::function<oracle::Vec3(const oracle::Vec7&)> a, b;
  int length;
  int dof;
};

std::vector<OracleRod> oracle_rods(const LinkLengths& L) {
  const auto l = L.values();
  auto pt = [l](P id) { return [l, id](const oracle::Vec7& q) { return oracle::position(id, q, l); }; };
  auto riser = [l](const oracle::Vec7& q) -> oracle::Vec3 {
    return oracle::position(P::R, q, l) + oracle::Vec3(0, 0, l[12]);
  };
  return {{pt(P::A), pt(P::B), 2, 1},  {pt(P::B), pt(P::C), 3, 0},  {pt(P::C), pt(P::D), 4, 2},
          {pt(P::D), pt(P::E), 5, 0},  {pt(P::E), pt(P::F), 6, 3},  {pt(P::F), pt(P::G), 7, 3},
          {pt(P::G), pt(P::H), 8, 4},  {pt(P::H), pt(P::M), 9, 4},  {pt(P::M), pt(P::N), 10, 5},
          {pt(P::N), pt(P::P), 11, 0}, {pt(P::P), pt(P::Q), 12, 6}, {pt(P::R), riser, 13, 0},
          {riser, pt(P::S), 14, 7},    {pt(P::S), pt(P::T), 15, 0}};
}

/// Kinetic energy summed body by body from point velocities.
double direct_kinetic_energy(const JointState& s, const AnthropometricProfile& p) {
  const auto rods = oracle_rods(p.lengths);
  const bool rod_model = p.inertia.model == InertiaModel::UniformSlenderRod;
  double t = 0.0;
  for (std::size_t i = 0; i < rods.size(); ++i) {
    const double m = p.inertia.masses[i];
    auto com = [&](const oracle::Vec7& q) {
      return rod_model ? oracle::Vec3(0.5 * (rods[i].a(q) + rods[i].b(q))) : rods[i].b(q);
    };
    const oracle::Vec3 v =
        oracle::central_diff([&](double h) { return com(s.theta + h * s.omega); }, 1e-6);
    t += 0.5 * m * v.squaredNorm();
    if (rod_model && rods[i].dof > 0) {
      const double len = p.lengths(rods[i].length);
      const double w = s.omega[rods[i].dof - 1];
      t += 0.5 * (m * len * len / 12.0) * w * w;
    }
  }
  return t;
}

FrictionParameters some_friction() {
  FrictionParameters fp;
  for (int k = 0; k < kDof; ++k) {
    fp.viscous_joint[k] = 0.01 * (k + 1);
    fp.coulomb_joint[k] = 0.02;
    fp.viscous_skin[k] = 0.005;
  }
  return fp;
}

InteractionWrenches some_wrenches() {
  InteractionWrenches w;
  w.gamma1 = Vec3(0.3, -0.2, 1.1);
  w.gamma2 = Vec3(-0.5, 0.4, 0.2);
  for (int k = 0; k < kDof; ++k) w.lambda_u[k] = 0.01 * (k - 3);
  return w;
}

}  // namespace

TEST(MassMatrix, PointMassPendulum) {
  const auto p = single_link(0, 0.7, InertiaModel::PointMassAtDistalEnd);
  std::mt19937_64 rng(11);
  const double l2 = p.lengths(2);
  for (int i = 0; i < 10; ++i) {
    const JointMatrix m = mass_matrix(random_state(rng).theta, p);
    EXPECT_NEAR(m(0, 0), 0.7 * l2 * l2, 1e-15);
    JointMatrix rest = m;
    rest(0, 0) = 0.0;
    EXPECT_EQ(rest.cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(MassMatrix, SlenderRodAgainstDiscretizedRod) {
  const double mass = 0.7;
  const auto p = single_link(0, mass, InertiaModel::UniformSlenderRod);
  const auto l = p.lengths.values();
  for (double q1 : {0.0, 0.4, -2.2}) {
    JointVector q = JointVector::Zero();
    q[0] = q1;
    const double oracle_m11 = oracle::discretized_rod_inertia(
        [&](double t1, double s) {
          oracle::Vec7 qq = oracle::Vec7::Zero();
          qq[0] = t1;
          const oracle::Vec3 a = oracle::position(P::A, qq, l), b = oracle::position(P::B, qq, l);
          return oracle::Vec3(a + s * (b - a));
        },
        q1, mass);
    const double m11 = mass_matrix(q, p)(0, 0);
    EXPECT_NEAR(m11 / oracle_m11, 1.0, 1e-6);
    EXPECT_NEAR(m11, mass * l[1] * l[1] / 3.0, 1e-15);
  }
}

TEST(MassMatrix, SymmetricPositiveDefinite) {
  const auto p = builtin_profile("medium");
  std::mt19937_64 rng(0xC0FFEE + 4);
  for (int i = 0; i < 100; ++i) {
    const JointMatrix m = mass_matrix(random_state(rng).theta, p);
    EXPECT_LE((m - m.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<JointMatrix>(m).eigenvalues().minCoeff(), 0.0);
  }
}

TEST(MassMatrix, IllPosedWithoutMass) {
  auto p = builtin_profile("medium");
  p.inertia.masses.fill(0.0);
  try {
    mass_matrix(JointVector::Zero(), p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IllPosed);
  }
}

TEST(Coriolis, VanishesAtRest) {
  std::mt19937_64 rng(12);
  const auto p = builtin_profile("large");
  EXPECT_EQ(coriolis_vector(random_state(rng).theta, JointVector::Zero(), p), JointVector::Zero());
}

TEST(Coriolis, SinglePendulumHasNone) {
  const auto p = single_link(0, 0.7, InertiaModel::UniformSlenderRod);
  JointVector w = JointVector::Zero();
  w[0] = 3.0;
  EXPECT_LT(coriolis_vector(JointVector::Constant(0.3), w, p).norm(), 1e-15);
}

TEST(Coriolis, PassivityIdentity) {
  const auto p = builtin_profile("medium");
  std::mt19937_64 rng(0xC0FFEE + 5);
  for (int i = 0; i < 100; ++i) {
    const JointState s = random_state(rng);
    const double h = 1e-6;
    const JointMatrix mdot =
        (mass_matrix(s.theta + h * s.omega, p) - mass_matrix(s.theta - h * s.omega, p)) / (2 * h);
    const JointMatrix c = christoffel_matrix(s.theta, s.omega, p);
    EXPECT_LT(std::abs(s.omega.dot((mdot - 2.0 * c) * s.omega)), 1e-6 * s.omega.squaredNorm());
    EXPECT_LT((c * s.omega - coriolis_vector(s.theta, s.omega, p)).norm(), 1e-12);
  }
}

TEST(Gravity, ZeroGravity) {
  auto p = builtin_profile("medium");
  p.gravity.setZero();
  EXPECT_EQ(gravity_vector(JointVector::Constant(0.5), p), JointVector::Zero());
}

TEST(Gravity, SingleLinkAtD) {
  const double m = 0.4;
  const auto p = single_link(2, m, InertiaModel::PointMassAtDistalEnd);
  JointVector q = JointVector::Constant(0.3);
  q[1] = 0.0;
  const JointVector tau = gravity_vector(q, p);
  EXPECT_NEAR(tau[1], -m * p.gravity.z() * p.lengths(4), 1e-15);
  for (int k : {0, 2, 3, 4, 5, 6}) EXPECT_EQ(tau[k], 0.0);
}

TEST(Gravity, GradientOfPotential) {
  const auto p = builtin_profile("medium");
  std::mt19937_64 rng(0xC0FFEE + 6);
  for (int i = 0; i < 100; ++i) {
    const JointVector q = random_state(rng).theta;
    JointVector fd;
    for (int k = 0; k < kDof; ++k) {
      fd[k] = oracle::central_diff(
          [&](double h) {
            JointVector qq = q;
            qq[k] += h;
            return potential_energy(qq, p);
          },
          1e-6);
    }
    EXPECT_LT((gravity_vector(q, p) - fd).norm() / fd.norm(), 1e-6);
  }
}

TEST(Friction, Examples) {
  FrictionParameters fp;
  EXPECT_EQ(friction_torque(JointVector::Zero(), some_friction()), JointVector::Zero());
  fp.viscous_joint[0] = 1.0;
  JointVector w = JointVector::Zero();
  w[0] = 2.0;
  JointVector expect = JointVector::Zero();
  expect[0] = 2.0;
  EXPECT_EQ(friction_torque(w, fp), expect);

  FrictionParameters coulomb;
  coulomb.coulomb_joint[0] = 0.5;
  w[0] = 10.0 * coulomb.smoothing_eps;
  const double tau = friction_torque(w, coulomb)[0];
  EXPECT_NEAR(tau, 0.5, 1e-4);
  EXPECT_NEAR(tau, 0.5 * std::tanh(10.0), 1e-15);
}

TEST(KineticEnergy, PendulumExample) {
  const double m = 0.7;
  const auto p = single_link(0, m, InertiaModel::PointMassAtDistalEnd);
  JointVector w = JointVector::Zero();
  w[0] = 2.0;
  EXPECT_NEAR(kinetic_energy(JointVector::Zero(), w, p), 0.5 * m * std::pow(p.lengths(2), 2) * 4.0,
              1e-15);
  EXPECT_EQ(kinetic_energy(JointVector::Zero(), JointVector::Zero(), builtin_profile("small")), 0.0);
}

TEST(KineticEnergy, MatchesBodyByBodySum) {
  std::mt19937_64 rng(13);
  for (auto model : {InertiaModel::UniformSlenderRod, InertiaModel::PointMassAtDistalEnd}) {
    auto p = builtin_profile("medium");
    p.inertia.model = model;
    for (int i = 0; i < 50; ++i) {
      const JointState s = random_state(rng);
      const double direct = direct_kinetic_energy(s, p);
      EXPECT_NEAR(kinetic_energy(s.theta, s.omega, p) / direct, 1.0, 1e-9);
    }
  }
}

TEST(InverseDynamics, StaticsWithoutLoads) {
  auto p = builtin_profile("medium");
  p.gravity.setZero();
  JointState s;
  s.theta = JointVector::Constant(0.4);
  EXPECT_EQ(inverse_dynamics(s, p).total, JointVector::Zero());
}

TEST(InverseDynamics, StaticPoseIsGravityOnly) {
  const auto p = builtin_profile("medium");
  JointState s;
  s.theta = JointVector::LinSpaced(-1.0, 1.0);
  const auto b = inverse_dynamics(s, p);
  EXPECT_EQ(b.total, b.gravitational);
  EXPECT_EQ(b.total, gravity_vector(s.theta, p));
}

TEST(InverseDynamics, BreakdownIdentity) {
  const auto p = builtin_profile("large");
  std::mt19937_64 rng(14);
  for (int i = 0; i < 100; ++i) {
    const auto b = inverse_dynamics(random_state(rng), p, some_friction(), some_wrenches());
    const JointVector sum =
        b.inertial + b.coriolis + b.gravitational + b.friction - b.external - b.disturbance;
    double largest = 0.0;
    for (const auto* v : {&b.inertial, &b.coriolis, &b.gravitational, &b.friction, &b.external,
                          &b.disturbance}) {
      largest = std::max(largest, v->cwiseAbs().maxCoeff());
    }
    EXPECT_LE((b.total - sum).cwiseAbs().maxCoeff(), 1e-12 * largest);
  }
}

TEST(InverseDynamics, ExternalTorqueIsVirtualWork) {
  const auto p = builtin_profile("medium");
  const auto w = some_wrenches();
  std::mt19937_64 rng(15);
  const JointVector q = random_state(rng).theta;
  JointVector fd;
  for (int k = 0; k < kDof; ++k) {
    fd[k] = oracle::central_diff(
        [&](double h) {
          oracle::Vec7 qq = q;
          qq[k] += h;
          return w.gamma1.dot(oracle::position(P::M, qq, p.lengths.values())) +
                 w.gamma2.dot(oracle::position(P::T, qq, p.lengths.values()));
        },
        1e-6);
  }
  EXPECT_LT((external_torque(q, p.lengths, w) - fd).norm(), 1e-9);
}

TEST(InverseDynamics, LagrangianOracle) {
  const auto p = builtin_profile("medium");
  const auto fp = some_friction();
  const auto wr = some_wrenches();
  std::mt19937_64 rng(16);
  for (int i = 0; i < 20; ++i) {
    const JointState s = random_state(rng);
    const JointVector inertial = oracle::lagrangian_inertial<kDof>(
        [&](const JointVector& q, const JointVector& w) { return kinetic_energy(q, w, p); },
        s.theta, s.omega, s.alpha);
    const JointVector expect = inertial + gravity_vector(s.theta, p) + friction_torque(s.omega, fp) -
                               external_torque(s.theta, p.lengths, wr) - wr.lambda_u;
    const JointVector total = inverse_dynamics(s, p, fp, wr).total;
    EXPECT_LT((total - expect).norm() / expect.norm(), 1e-4);
  }
}

TEST(ForwardDynamics, InvertsInverseDynamics) {
  const auto p = builtin_profile("medium");
  const auto fp = some_friction();
  const auto wr = some_wrenches();
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    const JointState s = random_state(rng);
    const JointVector tau = inverse_dynamics(s, p, fp, wr).total;
    const JointVector a = forward_acceleration(s.theta, s.omega, tau, p, fp, wr);
    EXPECT_LT((a - s.alpha).norm() / s.alpha.norm(), 1e-10);
  }
}

TEST(ForwardDynamics, SingularMassForLonePendulum) {
  const auto p = single_link(0, 0.7, InertiaModel::PointMassAtDistalEnd);
  try {
    forward_acceleration(JointVector::Zero(), JointVector::Zero(), JointVector::Zero(), p, {}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularMass);
  }
}

TEST(ForwardDynamics, PendulumRateConservedWithoutGravity) {
  // Downstream links get a trace of mass so that M stays invertible.
  auto p = single_link(0, 0.7, InertiaModel::PointMassAtDistalEnd);
  for (std::size_t i = 1; i < p.inertia.masses.size(); ++i) p.inertia.masses[i] = 1e-12;
  p.gravity.setZero();
  JointVector theta = JointVector::Zero(), omega = JointVector::Zero();
  omega[0] = 1.5;
  for (int i = 0; i < 1000; ++i) {
    std::tie(theta, omega) =
        forward_dynamics_step(theta, omega, JointVector::Zero(), p, {}, {}, 1e-3);
  }
  EXPECT_NEAR(omega[0], 1.5, 1e-9);
  EXPECT_NEAR(theta[0], 1.5, 1e-9);
}

TEST(ForwardDynamics, RejectsNonPositiveStep) {
  const auto p = builtin_profile("medium");
  EXPECT_THROW(forward_dynamics_step(JointVector::Zero(), JointVector::Zero(), JointVector::Zero(),
                                     p, {}, {}, 0.0),
               Error);
}

TEST(ForwardDynamics, KineticEnergyConservedWithoutGravity) {
  auto p = builtin_profile("medium");
  p.gravity.setZero();
  std::mt19937_64 rng(18);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ChainState init;
  for (int k = 0; k < kDof; ++k) init.theta[k] = u(rng);
  for (int k = 0; k < kDof; ++k) init.omega[k] = u(rng);
  const auto sim = simulate(init, 0.0, 1e-3, 1000,
                            [](double, const JointVector&, const JointVector&) {
                              return JointVector::Zero().eval();
                            },
                            p);
  const double t0 = kinetic_energy(init.theta, init.omega, p);
  for (const auto& s : sim) {
    EXPECT_LT(std::abs(kinetic_energy(s.state.theta, s.state.omega, p) - t0) / t0, 1e-6);
  }
}

TEST(ForwardDynamics, Deterministic) {
  const auto p = builtin_profile("small");
  const auto spec = default_demo_trajectory();
  auto torque = [&](double t, const JointVector&, const JointVector&) {
    return inverse_dynamics(sample(spec, t), p).total;
  };
  const JointState s0 = sample(spec, 0.0);
  const auto a = simulate({s0.theta, s0.omega}, 0.0, 1e-3, 200, torque, p);
  const auto b = simulate({s0.theta, s0.omega}, 0.0, 1e-3, 200, torque, p);
  ASSERT_EQ(a.size(), 201u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].state.theta, b[i].state.theta);
    EXPECT_EQ(a[i].state.omega, b[i].state.omega);
  }
}
