#pragma once

#include "modukin/types.hpp"

#include <numbers>
#include <vector>

namespace modukin {

enum class TrajectoryKind { Quintic, Sinusoidal };

struct QuinticJoint {
  double start = 0.0;
  double end = 0.0;
  double duration = 1.0;
};

struct SinusoidJoint {
  double amplitude = 0.0;
  double frequency_hz = 0.0;
  double phase = 0.0;
  double offset = 0.0;
};

/// Per-DOF joint-space trajectory. Quintic joints reach their end at their own
/// duration and hold there until the longest one finishes.
struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::Sinusoidal;
  std::array<QuinticJoint, kDof> quintic{};
  std::array<SinusoidJoint, kDof> sinusoid{};
  double sample_rate = 100.0;
  /// Length of the sampled window for sinusoids; quintic uses the longest duration.
  double sinusoid_window = 1.0;

  double duration() const {
    if (kind == TrajectoryKind::Sinusoidal) return sinusoid_window;
    double d = 0.0;
    for (const auto& q : quintic) d = std::max(d, q.duration);
    return d;
  }
};

inline void validate(const TrajectorySpec& spec) {
  if (!(spec.sample_rate > 0.0) || !std::isfinite(spec.sample_rate)) {
    throw Error(ErrorCode::ConfigError, "sample_rate must be positive");
  }
  if (spec.kind == TrajectoryKind::Quintic) {
    for (const auto& q : spec.quintic) {
      if (!(q.duration > 0.0) || !std::isfinite(q.start) || !std::isfinite(q.end)) {
        throw Error(ErrorCode::ConfigError, "quintic joints need finite endpoints and duration > 0");
      }
    }
  } else {
    if (!(spec.sinusoid_window > 0.0)) {
      throw Error(ErrorCode::ConfigError, "sinusoid window must be positive");
    }
    for (const auto& s : spec.sinusoid) {
      if (!std::isfinite(s.amplitude) || !std::isfinite(s.frequency_hz) ||
          !std::isfinite(s.phase) || !std::isfinite(s.offset)) {
        throw Error(ErrorCode::ConfigError, "non-finite sinusoid parameter");
      }
    }
  }
}

/// Each DOF k: 0.3 rad, 0.25 Hz, phase k*pi/7, no offset.
inline TrajectorySpec default_demo_trajectory() {
  TrajectorySpec spec;
  spec.kind = TrajectoryKind::Sinusoidal;
  for (int k = 1; k <= kDof; ++k) {
    spec.sinusoid[static_cast<std::size_t>(k - 1)] =
        SinusoidJoint{0.3, 0.25, k * std::numbers::pi / 7.0, 0.0};
  }
  spec.sample_rate = 100.0;
  spec.sinusoid_window = 1.0;
  return spec;
}

inline TrajectorySpec quintic_trajectory(const JointVector& start, const JointVector& end,
                                         double duration, double sample_rate = 100.0) {
  TrajectorySpec spec;
  spec.kind = TrajectoryKind::Quintic;
  for (int k = 0; k < kDof; ++k) {
    spec.quintic[static_cast<std::size_t>(k)] = QuinticJoint{start[k], end[k], duration};
  }
  spec.sample_rate = sample_rate;
  return spec;
}

namespace detail {

/// Minimum-jerk blend s(u) = 10u^3 - 15u^4 + 6u^5 and its first two derivatives in u.
inline std::array<double, 3> quintic_blend(double u) {
  const double u2 = u * u, u3 = u2 * u;
  return {u3 * (10.0 - 15.0 * u + 6.0 * u2), 30.0 * u2 * (1.0 - 2.0 * u + u2),
          60.0 * u * (1.0 - 3.0 * u + 2.0 * u2)};
}

}  // namespace detail

inline JointState sample(const TrajectorySpec& spec, double t) {
  if (!(t >= 0.0) || !std::isfinite(t) ||
      (spec.kind == TrajectoryKind::Quintic && t > spec.duration())) {
    throw Error(ErrorCode::OutOfRange, "t = " + std::to_string(t) + " outside trajectory");
  }
  JointState js;
  for (int k = 0; k < kDof; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    if (spec.kind == TrajectoryKind::Quintic) {
      const auto& q = spec.quintic[idx];
      const double u = std::min(t / q.duration, 1.0);
      const auto [s, ds, dds] = detail::quintic_blend(u);
      const double span = q.end - q.start;
      js.theta[k] = q.start + span * s;
      js.omega[k] = span * ds / q.duration;
      js.alpha[k] = span * dds / (q.duration * q.duration);
    } else {
      const auto& s = spec.sinusoid[idx];
      const double w = 2.0 * std::numbers::pi * s.frequency_hz;
      const double arg = w * t + s.phase;
      js.theta[k] = s.offset + s.amplitude * std::sin(arg);
      js.omega[k] = s.amplitude * w * std::cos(arg);
      js.alpha[k] = -s.amplitude * w * w * std::sin(arg);
    }
  }
  return js;
}

struct TimedState {
  double t = 0.0;
  JointState state;
};

/// Uniform samples at 1/sample_rate from t0 to t1, both ends included.
inline std::vector<TimedState> sample_series(const TrajectorySpec& spec, double t0, double t1) {
  if (!(t0 < t1)) throw Error(ErrorCode::OutOfRange, "t0 must be below t1");
  const double step = 1.0 / spec.sample_rate;
  // Tolerate rounding in (t1 - t0) * rate so a 1 s window at 100 Hz gives 101 samples.
  const auto intervals = static_cast<long>(std::floor((t1 - t0) * spec.sample_rate + 1e-9));
  std::vector<TimedState> out;
  out.reserve(static_cast<std::size_t>(intervals) + 2);
  for (long i = 0; i <= intervals; ++i) {
    const double t = std::min(t0 + static_cast<double>(i) / spec.sample_rate, t1);
    out.push_back({t, sample(spec, t)});
  }
  if (t1 - out.back().t > 1e-9 * step) out.push_back({t1, sample(spec, t1)});
  return out;
}

}  // namespace modukin
