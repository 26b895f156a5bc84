#pragma once

#include "modukin/multibody.hpp"

#include <optional>
#include <variant>

// RRPR SCARA reference arm. Generalised coordinates q = (theta1, theta2, P).
// Its dynamics go through the same multibody sums as the modular chain, which
// makes it an independent second chain for cross-checking that machinery.

namespace modukin::scara {

using Vec = Eigen::Vector3d;
using Mat = Eigen::Matrix3d;

struct ScaraParams {
  double d1 = 0.3;
  double d2 = 0.3;
  double m1 = 1.0;  // link 1 rod
  double m2 = 0.8;  // link 2 rod
  double m3 = 0.5;  // prismatic carriage, point mass at the tool
  double p_max = 0.2;
  Vec3 gravity{0.0, 0.0, -9.81};
};

struct ScaraState {
  Vec q = Vec::Zero();
  Vec qd = Vec::Zero();
  Vec qdd = Vec::Zero();

  double theta1() const { return q[0]; }
  double theta2() const { return q[1]; }
  double p() const { return q[2]; }
};

inline void validate(const ScaraState& s, const ScaraParams& params) {
  if (!s.q.allFinite() || !s.qd.allFinite() || !s.qdd.allFinite()) {
    throw Error(ErrorCode::OutOfRange, "non-finite SCARA state");
  }
  if (!(params.p_max > 0.0)) throw Error(ErrorCode::ConfigError, "p_max must be positive");
  if (s.p() < 0.0 || s.p() > params.p_max) {
    throw Error(ErrorCode::OutOfRange, "prismatic extension " + std::to_string(s.p()) +
                                           " outside [0, " + std::to_string(params.p_max) + "]");
  }
}

/// X = d2 cos(t1+t2) + d1 cos t1, Y = d2 sin(t1+t2) + d1 sin t1, Z = P.
inline Vec scara_fk(const ScaraState& s, double d1, double d2) {
  const double t1 = s.theta1();
  const double t12 = s.theta1() + s.theta2();
  return {d2 * std::cos(t12) + d1 * std::cos(t1), d2 * std::sin(t12) + d1 * std::sin(t1), s.p()};
}

inline Mat scara_jacobian(const ScaraState& s, double d1, double d2) {
  const double s1 = std::sin(s.theta1()), c1 = std::cos(s.theta1());
  const double s12 = std::sin(s.theta1() + s.theta2()), c12 = std::cos(s.theta1() + s.theta2());
  Mat j;
  j << -d1 * s1 - d2 * s12, -d2 * s12, 0.0,
        d1 * c1 + d2 * c12,  d2 * c12, 0.0,
        0.0,                 0.0,      1.0;
  return j;
}

/// Lumped bodies: two horizontal rods and the carriage.
class ScaraBodies {
 public:
  static constexpr int kDofs = 3;

  explicit ScaraBodies(const ScaraParams& params) : params_(params) {}

  int body_count() const { return 3; }

  double body_mass(int b) const {
    return b == 0 ? params_.m1 : b == 1 ? params_.m2 : params_.m3;
  }

  double body_transverse_inertia(int b) const {
    if (b == 0) return params_.m1 * params_.d1 * params_.d1 / 12.0;
    if (b == 1) return params_.m2 * params_.d2 * params_.d2 / 12.0;
    return 0.0;
  }

  multibody::BodyKinematics<3> body_kinematics(int b, const Vec& q) const {
    // COM = f1 d1 u(t1) + f2 d2 u(t1+t2) + lift * P z
    const double f1 = b == 0 ? 0.5 : 1.0;
    const double f2 = b == 0 ? 0.0 : b == 1 ? 0.5 : 1.0;
    const double lift = b == 2 ? 1.0 : 0.0;
    const double a = f1 * params_.d1;
    const double c = f2 * params_.d2;
    const double s1 = std::sin(q[0]), c1 = std::cos(q[0]);
    const double s12 = std::sin(q[0] + q[1]), c12 = std::cos(q[0] + q[1]);

    multibody::BodyKinematics<3> kin;
    kin.com = {a * c1 + c * c12, a * s1 + c * s12, lift * q[2]};
    kin.com_jacobian << -a * s1 - c * s12, -c * s12, 0.0,
                         a * c1 + c * c12,  c * c12, 0.0,
                         0.0,               0.0,     lift;
    if (b == 0) kin.angular_jacobian(2, 0) = 1.0;
    if (b == 1) kin.angular_jacobian.row(2) << 1.0, 1.0, 0.0;

    multibody::BodyJacobian<3> d1 = multibody::BodyJacobian<3>::Zero();
    d1 << -a * c1 - c * c12, -c * c12, 0.0,
          -a * s1 - c * s12, -c * s12, 0.0,
           0.0,               0.0,     0.0;
    multibody::BodyJacobian<3> d2 = multibody::BodyJacobian<3>::Zero();
    d2 << -c * c12, -c * c12, 0.0,
          -c * s12, -c * s12, 0.0,
           0.0,      0.0,     0.0;
    kin.com_jacobian_partials = {d1, d2, multibody::BodyJacobian<3>::Zero()};
    return kin;
  }

  Vec3 gravity() const { return params_.gravity; }

 private:
  ScaraParams params_;
};

static_assert(multibody::LumpedBodyModel<ScaraBodies>);

/// tau = H(q) q'' + C(q, q') q' + tau_g(q) + J(q)^T f_ext
inline Vec scara_inverse_dynamics(const ScaraState& s, const ScaraParams& params,
                                  const Vec3& f_ext = Vec3::Zero()) {
  validate(s, params);
  const ScaraBodies bodies(params);
  return multibody::mass_matrix(bodies, s.q) * s.qdd +
         multibody::coriolis_vector(bodies, s.q, s.qd) + multibody::gravity_vector(bodies, s.q) +
         scara_jacobian(s, params.d1, params.d2).transpose() * f_ext;
}

inline Mat scara_mass_matrix(const Vec& q, const ScaraParams& params) {
  return multibody::mass_matrix(ScaraBodies(params), q);
}

// ---------------------------------------------------------------------------
// Grasped object
// ---------------------------------------------------------------------------

/// Force set on an object held between two jaws. F_y and F_z act on each surface.
struct GraspLoad {
  double m = 0.0;
  double w = 0.0;
  double N_L = 0.0;
  double N_R = 0.0;
  double F_y = 0.0;
  double F_z = 0.0;
};

struct GraspOptions {
  /// Known friction-coefficient range; the worst case (mu_min) bounds each surface.
  std::optional<double> mu_min;
  std::optional<double> mu_max;
  /// Largest normal force a jaw can apply.
  std::optional<double> normal_cap;
};

struct GraspInfeasible {
  std::string reason;
  double required_normal = 0.0;
};

using GraspResult = std::variant<GraspLoad, GraspInfeasible>;

/// Residual of  m x'' = N_L - N_R,  m y'' = 2 F_y,  0 = 2 F_z - w.
inline Vec3 grasp_residual(const GraspLoad& load, const Vec3& accel) {
  return {load.m * accel.x() - (load.N_L - load.N_R), load.m * accel.y() - 2.0 * load.F_y,
          2.0 * load.F_z - load.w};
}

inline void check_normals(const GraspLoad& load) {
  if (load.N_L < 0.0 || load.N_R < 0.0) {
    throw Error(ErrorCode::NegativeNormal, "jaw normal forces must be non-negative");
  }
}

/// Minimal-squeeze force set holding the object at `accel`. The z row is an
/// equilibrium constraint, so accel.z() must be zero.
inline GraspResult grasp_statics(double mass, double weight, const Vec3& accel,
                                 const GraspOptions& opts = {}) {
  if (!(mass >= 0.0) || !std::isfinite(weight)) {
    throw Error(ErrorCode::ConfigError, "object mass must be non-negative");
  }
  if (accel.z() != 0.0) {
    throw Error(ErrorCode::ConstraintViolated, "vertical acceleration must be zero");
  }
  if (opts.mu_min && !(*opts.mu_min > 0.0)) {
    throw Error(ErrorCode::ConfigError, "mu_min must be positive");
  }
  if (opts.mu_min && opts.mu_max && *opts.mu_max < *opts.mu_min) {
    throw Error(ErrorCode::ConfigError, "mu_max below mu_min");
  }
  if (opts.normal_cap && *opts.normal_cap < 0.0) {
    throw Error(ErrorCode::NegativeNormal, "normal force cap must be non-negative");
  }

  GraspLoad load;
  load.m = mass;
  load.w = weight;
  load.F_y = 0.5 * mass * accel.y();
  load.F_z = 0.5 * weight;

  const double friction = std::hypot(load.F_y, load.F_z);
  const double floor = opts.mu_min ? friction / *opts.mu_min : 0.0;
  const double push = mass * accel.x();  // N_L - N_R
  if (push >= 0.0) {
    load.N_R = floor;
    load.N_L = floor + push;
  } else {
    load.N_L = floor;
    load.N_R = floor - push;
  }

  const double required = std::max(load.N_L, load.N_R);
  if (opts.normal_cap && required > *opts.normal_cap) {
    return GraspInfeasible{"required normal force " + std::to_string(required) +
                               " N exceeds actuator cap " + std::to_string(*opts.normal_cap) +
                               " N",
                           required};
  }
  return load;
}

}  // namespace modukin::scara
