#pragma once

#include "modukin/kinematics.hpp"
#include "modukin/multibody.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace modukin {

/// The 14 moving links of a profile as lumped bodies for the multibody sums.
class ChainBodies {
 public:
  static constexpr int kDofs = kDof;

  explicit ChainBodies(const AnthropometricProfile& profile,
                       const ChainTable& table = canonical_table())
      : profile_(&profile), table_(&table) {}

  int body_count() const { return kMovingLinkCount; }

  double body_mass(int b) const { return profile_->inertia.masses[static_cast<std::size_t>(b)]; }

  double body_transverse_inertia(int b) const {
    if (profile_->inertia.model == InertiaModel::PointMassAtDistalEnd) return 0.0;
    const double l = profile_->lengths(kRods[static_cast<std::size_t>(b)].length);
    return body_mass(b) * l * l / 12.0;
  }

  double com_fraction() const {
    return profile_->inertia.model == InertiaModel::UniformSlenderRod ? 0.5 : 1.0;
  }

  multibody::BodyKinematics<kDof> body_kinematics(int b, const JointVector& q) const {
    const auto& rod = kRods[static_cast<std::size_t>(b)];
    const TermSum sum = rod_terms(rod, com_fraction(), q, profile_->lengths, *table_);
    multibody::BodyKinematics<kDof> kin;
    kin.com = sum.position;
    kin.com_jacobian = sum.jacobian;
    if (rod.dof > 0) kin.angular_jacobian.col(rod.dof - 1) = joint_axis(rod.dof);
    for (int k = 0; k < kDof; ++k) {
      auto& partial = kin.com_jacobian_partials[static_cast<std::size_t>(k)];
      partial.setZero();
      partial.col(k) = sum.curvature.col(k);
    }
    return kin;
  }

  Vec3 gravity() const { return profile_->gravity; }

 private:
  const AnthropometricProfile* profile_;
  const ChainTable* table_;
};

static_assert(multibody::LumpedBodyModel<ChainBodies>);

inline JointMatrix mass_matrix(const JointVector& theta, const AnthropometricProfile& profile) {
  return multibody::mass_matrix(ChainBodies(profile), theta);
}

inline JointVector coriolis_vector(const JointVector& theta, const JointVector& omega,
                                   const AnthropometricProfile& profile) {
  return multibody::coriolis_vector(ChainBodies(profile), theta, omega);
}

inline JointMatrix christoffel_matrix(const JointVector& theta, const JointVector& omega,
                                      const AnthropometricProfile& profile) {
  return multibody::christoffel_matrix(ChainBodies(profile), theta, omega);
}

inline JointVector gravity_vector(const JointVector& theta, const AnthropometricProfile& profile) {
  return multibody::gravity_vector(ChainBodies(profile), theta);
}

inline double kinetic_energy(const JointVector& theta, const JointVector& omega,
                             const AnthropometricProfile& profile) {
  return multibody::kinetic_energy(ChainBodies(profile), theta, omega);
}

inline double potential_energy(const JointVector& theta, const AnthropometricProfile& profile) {
  return multibody::potential_energy(ChainBodies(profile), theta);
}

/// Joint plus skin friction. Coulomb friction is smoothed with tanh.
inline JointVector friction_torque(const JointVector& omega, const FrictionParameters& fp) {
  JointVector tau;
  for (int k = 0; k < kDof; ++k) {
    const double joint =
        fp.viscous_joint[k] * omega[k] + fp.coulomb_joint[k] * std::tanh(omega[k] / fp.smoothing_eps);
    const double skin = fp.viscous_skin[k] * omega[k];
    tau[k] = joint + skin;
  }
  return tau;
}

struct TorqueBreakdown {
  JointVector inertial = JointVector::Zero();
  JointVector coriolis = JointVector::Zero();
  JointVector gravitational = JointVector::Zero();
  JointVector friction = JointVector::Zero();
  JointVector external = JointVector::Zero();
  JointVector disturbance = JointVector::Zero();
  JointVector total = JointVector::Zero();
};

/// J1^T gamma1 + J2^T gamma2 for the cuff forces.
inline JointVector external_torque(const JointVector& theta, const LinkLengths& L,
                                   const InteractionWrenches& w) {
  return point_jacobian(w.gamma1_point, theta, L).matrix.transpose() * w.gamma1 +
         point_jacobian(w.gamma2_point, theta, L).matrix.transpose() * w.gamma2;
}

inline TorqueBreakdown inverse_dynamics(const JointState& state,
                                        const AnthropometricProfile& profile,
                                        const FrictionParameters& fp = {},
                                        const InteractionWrenches& wrenches = {}) {
  const ChainBodies bodies(profile);
  TorqueBreakdown out;
  out.inertial = multibody::mass_matrix(bodies, state.theta) * state.alpha;
  out.coriolis = multibody::coriolis_vector(bodies, state.theta, state.omega);
  out.gravitational = multibody::gravity_vector(bodies, state.theta);
  out.friction = friction_torque(state.omega, fp);
  out.external = external_torque(state.theta, profile.lengths, wrenches);
  out.disturbance = wrenches.lambda_u;
  out.total = out.inertial + out.coriolis + out.gravitational + out.friction - out.external -
              out.disturbance;
  return out;
}

inline constexpr double kMaxMassCondition = 1e12;

/// theta'' = M^-1 (tau - V - tau_g - tau_f + lambda_u + J1^T g1 + J2^T g2).
inline JointVector forward_acceleration(const JointVector& theta, const JointVector& omega,
                                        const JointVector& tau_applied,
                                        const AnthropometricProfile& profile,
                                        const FrictionParameters& fp,
                                        const InteractionWrenches& wrenches) {
  const ChainBodies bodies(profile);
  const JointMatrix m = multibody::mass_matrix(bodies, theta);
  const Eigen::SelfAdjointEigenSolver<JointMatrix> eig(m, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxMassCondition) {
    throw Error(ErrorCode::SingularMass,
                "mass matrix condition number " + std::to_string(lo > 0.0 ? hi / lo : INFINITY));
  }
  const JointVector rhs = tau_applied - multibody::coriolis_vector(bodies, theta, omega) -
                          multibody::gravity_vector(bodies, theta) - friction_torque(omega, fp) +
                          wrenches.lambda_u + external_torque(theta, profile.lengths, wrenches);
  return m.ldlt().solve(rhs);
}

/// Applied torque as a function of time and state.
using TorqueFunction =
    std::function<JointVector(double t, const JointVector& theta, const JointVector& omega)>;

struct ChainState {
  JointVector theta = JointVector::Zero();
  JointVector omega = JointVector::Zero();
};

/// One classical RK4 step of the second-order joint ODE.
inline ChainState rk4_step(const ChainState& s, double t, double dt, const TorqueFunction& torque,
                           const AnthropometricProfile& profile, const FrictionParameters& fp,
                           const InteractionWrenches& wrenches) {
  if (!(dt > 0.0)) throw Error(ErrorCode::UsageError, "dt must be positive");
  auto accel = [&](double tt, const JointVector& th, const JointVector& om) {
    return forward_acceleration(th, om, torque(tt, th, om), profile, fp, wrenches);
  };
  const JointVector k1v = s.omega;
  const JointVector k1a = accel(t, s.theta, s.omega);
  const JointVector k2v = s.omega + 0.5 * dt * k1a;
  const JointVector k2a = accel(t + 0.5 * dt, s.theta + 0.5 * dt * k1v, k2v);
  const JointVector k3v = s.omega + 0.5 * dt * k2a;
  const JointVector k3a = accel(t + 0.5 * dt, s.theta + 0.5 * dt * k2v, k3v);
  const JointVector k4v = s.omega + dt * k3a;
  const JointVector k4a = accel(t + dt, s.theta + dt * k3v, k4v);
  ChainState next;
  next.theta = s.theta + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  next.omega = s.omega + dt / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
  return next;
}

inline std::pair<JointVector, JointVector> forward_dynamics_step(
    const JointVector& theta, const JointVector& omega, const JointVector& tau_applied,
    const AnthropometricProfile& profile, const FrictionParameters& fp,
    const InteractionWrenches& wrenches, double dt) {
  const auto next = rk4_step({theta, omega}, 0.0, dt,
                             [&](double, const JointVector&, const JointVector&) {
                               return tau_applied;
                             },
                             profile, fp, wrenches);
  return {next.theta, next.omega};
}

struct SimulationSample {
  double t = 0.0;
  JointState state;
};

/// Fixed-step simulation over `steps` steps; sample i is at t0 + i*dt and its
/// alpha is the acceleration evaluated at that state.
inline std::vector<SimulationSample> simulate(const ChainState& initial, double t0, double dt,
                                              int steps, const TorqueFunction& torque,
                                              const AnthropometricProfile& profile,
                                              const FrictionParameters& fp = {},
                                              const InteractionWrenches& wrenches = {}) {
  if (!(dt > 0.0)) throw Error(ErrorCode::UsageError, "dt must be positive");
  std::vector<SimulationSample> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  ChainState s = initial;
  for (int i = 0;; ++i) {
    const double t = t0 + i * dt;
    JointState js{s.theta, s.omega,
                  forward_acceleration(s.theta, s.omega, torque(t, s.theta, s.omega), profile, fp,
                                       wrenches)};
    out.push_back({t, js});
    if (i == steps) break;
    s = rk4_step(s, t, dt, torque, profile, fp, wrenches);
  }
  return out;
}

}  // namespace modukin
