#pragma once

#include "modukin/config.hpp"

#include <random>

// Self-verification suite run by `modukin check`. Every analytic quantity is
// compared against a finite-difference or structural reference over seeded
// random states.

namespace modukin::checks {

struct CheckResult {
  std::string name;
  bool passed = false;
  double max_error = 0.0;
  double tolerance = 0.0;
  int samples = 0;
  std::string detail;
};

struct CheckReport {
  std::uint64_t seed = kDefaultSeed;
  std::string profile;
  std::vector<CheckResult> checks;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }

  json to_json() const {
    json arr = json::array();
    for (const auto& c : checks) {
      arr.push_back({{"name", c.name},
                     {"passed", c.passed},
                     {"max_error", c.max_error},
                     {"tolerance", c.tolerance},
                     {"samples", c.samples},
                     {"detail", c.detail}});
    }
    return {{"tool", "modukin"},
            {"seed", seed},
            {"profile", profile},
            {"all_passed", all_passed()},
            {"checks", arr}};
  }
};

inline constexpr int kRandomStates = 100;
inline constexpr double kPositionStep = 1e-6;
inline constexpr double kTimeStep = 1e-5;

/// Relative error with a floor on the reference magnitude.
template <class A, class B>
double rel_err(const A& value, const B& reference, double floor = 1e-8) {
  return (value - reference).norm() / std::max(reference.norm(), floor);
}

/// Angles in (-pi, pi), rates and accelerations in (-5, 5).
class StateSampler {
 public:
  explicit StateSampler(std::uint64_t seed) : rng_(seed) {}

  JointState next() {
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> rate(-5.0, 5.0);
    JointState s;
    for (int k = 0; k < kDof; ++k) s.theta[k] = angle(rng_);
    for (int k = 0; k < kDof; ++k) s.omega[k] = rate(rng_);
    for (int k = 0; k < kDof; ++k) s.alpha[k] = rate(rng_);
    return s;
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

 private:
  std::mt19937_64 rng_;
};

inline CheckResult finish(CheckResult r) {
  r.passed = r.max_error < r.tolerance;
  return r;
}

// ---------------------------------------------------------------------------
// Kinematics. The finite-difference side uses the configured position table,
// the analytic side the compiled-in canonical model.
// ---------------------------------------------------------------------------

inline CheckResult velocity_fd(const RunConfig& cfg) {
  const ChainTable table = cfg.position_table();
  const auto& L = cfg.profile.lengths;
  StateSampler sampler(cfg.seed);
  CheckResult r{"kinematics.velocity_fd", false, 0.0, 1e-6, 0, ""};
  for (int i = 0; i < kRandomStates; ++i) {
    const JointState s = sampler.next();
    const double h = kPositionStep;
    for (auto id : kAllPoints) {
      const Vec3 fd = (canonical_position(id, s.theta + h * s.omega, L, table) -
                       canonical_position(id, s.theta - h * s.omega, L, table)) /
                      (2.0 * h);
      r.max_error = std::max(r.max_error, rel_err(canonical_velocity(id, s, L), fd));
      ++r.samples;
    }
  }
  return finish(r);
}

inline CheckResult acceleration_fd(const RunConfig& cfg) {
  const ChainTable table = cfg.position_table();
  const auto& L = cfg.profile.lengths;
  StateSampler sampler(cfg.seed + 1);
  CheckResult r{"kinematics.acceleration_fd", false, 0.0, 1e-5, 0, ""};
  for (int i = 0; i < kRandomStates; ++i) {
    const JointState s = sampler.next();
    auto at = [&](double t) {
      return JointState{s.theta + s.omega * t + 0.5 * s.alpha * t * t, s.omega + s.alpha * t,
                        s.alpha};
    };
    const double h = kTimeStep;
    for (auto id : kAllPoints) {
      const Vec3 fd =
          (canonical_velocity(id, at(h), L, table) - canonical_velocity(id, at(-h), L, table)) /
          (2.0 * h);
      r.max_error = std::max(r.max_error, rel_err(canonical_acceleration(id, s, L), fd));
      ++r.samples;
    }
  }
  return finish(r);
}

inline CheckResult jacobian_fd(const RunConfig& cfg) {
  const ChainTable table = cfg.position_table();
  const auto& L = cfg.profile.lengths;
  StateSampler sampler(cfg.seed + 2);
  CheckResult r{"kinematics.jacobian_fd", false, 0.0, 1e-6, 0, ""};
  for (int i = 0; i < kRandomStates; ++i) {
    const JointState s = sampler.next();
    for (auto id : kAllPoints) {
      const Jacobian3 j = point_jacobian(id, s.theta, L).matrix;
      for (int k = 0; k < kDof; ++k) {
        JointVector plus = s.theta, minus = s.theta;
        plus[k] += kPositionStep;
        minus[k] -= kPositionStep;
        const Vec3 fd = (canonical_position(id, plus, L, table) -
                         canonical_position(id, minus, L, table)) /
                        (2.0 * kPositionStep);
        r.max_error = std::max(r.max_error, rel_err(Vec3(j.col(k)), fd));
        ++r.samples;
      }
    }
  }
  return finish(r);
}

inline CheckResult rigidity(const RunConfig& cfg) {
  const auto& L = cfg.profile.lengths;
  StateSampler sampler(cfg.seed + 3);
  CheckResult r{"kinematics.rigidity", false, 0.0, 1e-12, 0, ""};
  using P = JointPointId;
  for (int i = 0; i < kRandomStates; ++i) {
    const JointState s = sampler.next();
    const auto pose = full_pose(s, L);
    auto p = [&](P id) { return pose.at(id).position; };
    const double errs[] = {
        (p(P::C) - p(P::B) - Vec3(0, 0, L(3))).norm(),
        (p(P::E) - p(P::D) - Vec3(L(5), 0, 0)).norm(),
        (p(P::P) - p(P::N) - Vec3(0, L(11), 0)).norm(),
        (p(P::T) - p(P::S) - Vec3(-L(15), 0, 0)).norm(),
        std::abs((p(P::B) - Vec3(L(1), 0, 0)).norm() - L(2)),
        std::abs((p(P::D) - p(P::C)).norm() - L(4)),
        std::abs((p(P::G) - p(P::E)).norm() - (L(6) + L(7))),
        std::abs((p(P::M) - p(P::G)).norm() - (L(8) + L(9))),
        std::abs((p(P::N) - p(P::M)).norm() - L(10)),
        std::abs((p(P::Q) - p(P::P)).norm() - L(12)),
        std::abs((p(P::S) - p(P::R) - Vec3(0, 0, L(13))).norm() - L(14)),
        p(P::R) == p(P::Q) ? 0.0 : 1.0,
    };
    for (double e : errs) r.max_error = std::max(r.max_error, e);
    ++r.samples;
  }
  return finish(r);
}

// ---------------------------------------------------------------------------
// Dynamics
// ---------------------------------------------------------------------------

inline CheckResult mass_matrix_spd(const RunConfig& cfg) {
  StateSampler sampler(cfg.seed + 4);
  CheckResult r{"dynamics.mass_matrix_spd", false, 0.0, 1e-12, 0, ""};
  double min_eig = INFINITY;
  for (int i = 0; i < kRandomStates; ++i) {
    const JointMatrix m = mass_matrix(sampler.next().theta, cfg.profile);
    r.max_error = std::max(r.max_error, (m - m.transpose()).cwiseAbs().maxCoeff());
    min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<JointMatrix>(m).eigenvalues().minCoeff());
    ++r.samples;
  }
  r = finish(r);
  r.passed = r.passed && min_eig > 0.0;
  r.detail = "min eigenvalue " + io::format_number(min_eig);
  return r;
}

/// Mdot from central differences of M, C from the analytic Christoffel sums.
inline CheckResult passivity(const RunConfig& cfg) {
  StateSampler sampler(cfg.seed + 5);
  CheckResult r{"dynamics.passivity", false, 0.0, 1e-6, 0, "|w'(Mdot-2C)w| / |w|^2"};
  for (int i = 0; i < kRandomStates; ++i) {
    const JointState s = sampler.next();
    const double h = kPositionStep;
    const JointMatrix mdot = (mass_matrix(s.theta + h * s.omega, cfg.profile) -
                              mass_matrix(s.theta - h * s.omega, cfg.profile)) /
                             (2.0 * h);
    const JointMatrix c = christoffel_matrix(s.theta, s.omega, cfg.profile);
    const double v = s.omega.dot((mdot - 2.0 * c) * s.omega);
    r.max_error = std::max(r.max_error, std::abs(v) / s.omega.squaredNorm());
    ++r.samples;
  }
  return finish(r);
}

inline CheckResult gravity_gradient(const RunConfig& cfg) {
  StateSampler sampler(cfg.seed + 6);
  CheckResult r{"dynamics.gravity_gradient", false, 0.0, 1e-6, 0, ""};
  for (int i = 0; i < kRandomStates; ++i) {
    const JointVector theta = sampler.next().theta;
    JointVector fd;
    for (int k = 0; k < kDof; ++k) {
      JointVector plus = theta, minus = theta;
      plus[k] += kPositionStep;
      minus[k] -= kPositionStep;
      fd[k] = (potential_energy(plus, cfg.profile) - potential_energy(minus, cfg.profile)) /
              (2.0 * kPositionStep);
    }
    r.max_error = std::max(r.max_error, rel_err(gravity_vector(theta, cfg.profile), fd));
    ++r.samples;
  }
  return finish(r);
}

/// Replays inverse-dynamics torques of a seeded quintic reach through RK4.
inline CheckResult id_fd_round_trip(const RunConfig& cfg) {
  StateSampler sampler(cfg.seed + 7);
  JointVector start, end;
  for (int k = 0; k < kDof; ++k) start[k] = sampler.uniform(-0.5, 0.5);
  for (int k = 0; k < kDof; ++k) end[k] = sampler.uniform(-0.5, 0.5);
  const TrajectorySpec spec = quintic_trajectory(start, end, 1.0);
  const auto torque = [&](double t, const JointVector&, const JointVector&) {
    return inverse_dynamics(sample(spec, std::min(t, 1.0)), cfg.profile, cfg.friction,
                            cfg.wrenches)
        .total;
  };
  const JointState s0 = sample(spec, 0.0);
  const auto sim = simulate({s0.theta, s0.omega}, 0.0, 1e-3, 1000, torque, cfg.profile,
                            cfg.friction, cfg.wrenches);
  CheckResult r{"dynamics.id_fd_round_trip", false, 0.0, 1e-4, 0, "max joint error, rad"};
  for (const auto& smp : sim) {
    const JointVector ref = sample(spec, std::min(smp.t, 1.0)).theta;
    r.max_error = std::max(r.max_error, (smp.state.theta - ref).cwiseAbs().maxCoeff());
    ++r.samples;
  }
  return finish(r);
}

inline double energy_drift(const AnthropometricProfile& profile, const ChainState& init,
                           bool with_gravity) {
  const auto zero = [](double, const JointVector&, const JointVector&) {
    return JointVector::Zero().eval();
  };
  const auto sim = simulate(init, 0.0, 1e-3, 1000, zero, profile);
  auto energy = [&](const JointState& s) {
    const double t = kinetic_energy(s.theta, s.omega, profile);
    return with_gravity ? t + potential_energy(s.theta, profile) : t;
  };
  const double e0 = energy(sim.front().state);
  double drift = 0.0;
  for (const auto& smp : sim) drift = std::max(drift, std::abs(energy(smp.state) - e0));
  return drift / std::abs(e0);
}

inline CheckResult energy_conservation(const RunConfig& cfg) {
  StateSampler sampler(cfg.seed + 8);
  ChainState init;
  for (int k = 0; k < kDof; ++k) init.theta[k] = sampler.uniform(-1.0, 1.0);
  for (int k = 0; k < kDof; ++k) init.omega[k] = sampler.uniform(-1.0, 1.0);
  AnthropometricProfile weightless = cfg.profile;
  weightless.gravity = Vec3::Zero();
  const double kinetic = energy_drift(weightless, init, false);
  const double total = energy_drift(cfg.profile, init, true);
  CheckResult r{"dynamics.energy_conservation", false, std::max(kinetic, total), 1e-6, 2,
                "kinetic drift " + io::format_number(kinetic) + ", total drift " +
                    io::format_number(total)};
  return finish(r);
}

// ---------------------------------------------------------------------------
// SCARA and grasp statics
// ---------------------------------------------------------------------------

inline CheckResult scara_suite(const RunConfig& cfg) {
  using namespace scara;
  CheckResult r{"scara.reference", false, 0.0, 1e-6, 0, "fk example, jacobian FD, passivity"};
  ScaraState ex;
  ex.q = {0.0, 0.0, 0.1};
  r.max_error = (scara_fk(ex, 0.3, 0.3) - Vec(0.6, 0.0, 0.1)).norm();

  StateSampler sampler(cfg.seed + 9);
  const ScaraParams& params = cfg.scara;
  for (int i = 0; i < kRandomStates; ++i) {
    ScaraState s;
    s.q = {sampler.uniform(-3.0, 3.0), sampler.uniform(-3.0, 3.0),
           sampler.uniform(0.0, params.p_max)};
    s.qd = {sampler.uniform(-5.0, 5.0), sampler.uniform(-5.0, 5.0), sampler.uniform(-5.0, 5.0)};
    const Mat j = scara_jacobian(s, params.d1, params.d2);
    for (int k = 0; k < 3; ++k) {
      ScaraState plus = s, minus = s;
      plus.q[k] += kPositionStep;
      minus.q[k] -= kPositionStep;
      const Vec fd = (scara_fk(plus, params.d1, params.d2) - scara_fk(minus, params.d1, params.d2)) /
                     (2.0 * kPositionStep);
      r.max_error = std::max(r.max_error, rel_err(Vec(j.col(k)), fd));
    }
    const Mat mdot = (scara_mass_matrix(s.q + kPositionStep * s.qd, params) -
                      scara_mass_matrix(s.q - kPositionStep * s.qd, params)) /
                     (2.0 * kPositionStep);
    const Mat c = multibody::christoffel_matrix(ScaraBodies(params), s.q, s.qd);
    r.max_error = std::max(r.max_error,
                           std::abs(s.qd.dot((mdot - 2.0 * c) * s.qd)) / s.qd.squaredNorm());
    ++r.samples;
  }
  return finish(r);
}

inline CheckResult grasp_suite(const RunConfig&) {
  using namespace scara;
  CheckResult r{"scara.grasp_statics", false, 0.0, 1e-12, 0, ""};
  bool ok = true;

  const auto hold = grasp_statics(1.0, 9.81, Vec3::Zero());
  if (const auto* load = std::get_if<GraspLoad>(&hold)) {
    r.max_error = std::max(r.max_error, std::abs(load->F_z - 4.905));
    r.max_error = std::max(r.max_error, std::abs(load->N_L - load->N_R));
    r.max_error = std::max(r.max_error, grasp_residual(*load, Vec3::Zero()).cwiseAbs().maxCoeff());
  } else {
    ok = false;
  }
  ++r.samples;

  const Vec3 accel(1.5, -0.7, 0.0);
  const auto moving = grasp_statics(0.8, 0.8 * 9.81, accel, {0.5, 0.9, std::nullopt});
  if (const auto* load = std::get_if<GraspLoad>(&moving)) {
    r.max_error = std::max(r.max_error, grasp_residual(*load, accel).cwiseAbs().maxCoeff());
  } else {
    ok = false;
  }
  ++r.samples;

  const auto capped = grasp_statics(1.0, 9.81, Vec3::Zero(), {0.4, std::nullopt, 10.0});
  ok = ok && std::holds_alternative<GraspInfeasible>(capped);
  ++r.samples;

  r = finish(r);
  r.passed = r.passed && ok;
  if (!ok) r.detail = "feasibility classification wrong";
  return r;
}

inline CheckReport run_all(const RunConfig& cfg) {
  CheckReport report;
  report.seed = cfg.seed;
  report.profile = cfg.profile.name;
  for (auto* check : {velocity_fd, acceleration_fd, jacobian_fd, rigidity, mass_matrix_spd,
                      passivity, gravity_gradient, id_fd_round_trip, energy_conservation,
                      scara_suite, grasp_suite}) {
    try {
      report.checks.push_back(check(cfg));
    } catch (const Error& e) {
      report.checks.push_back({"error", false, INFINITY, 0.0, 0, e.what()});
    }
  }
  return report;
}

}  // namespace modukin::checks
