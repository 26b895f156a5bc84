#pragma once

// Reference implementations used only by the tests. Nothing here goes through
// the library's term tables or multibody sums.

#include "modukin/types.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <type_traits>

namespace oracle {

using modukin::JointPointId;
using Vec3 = Eigen::Vector3d;
using Vec7 = Eigen::Matrix<double, 7, 1>;
using Lengths = std::array<double, 15>;

// Straight transcription of the corrected position formulas, point by point.
inline std::map<JointPointId, Vec3> positions(const Vec7& q, const Lengths& l) {
  auto L = [&](int i) { return l[i - 1]; };
  auto th = [&](int k) { return q[k - 1]; };
  using P = JointPointId;
  std::map<P, Vec3> p;
  p[P::O] = Vec3(0, 0, 0);
  p[P::A] = Vec3(L(1), 0, 0);
  p[P::B] = Vec3(L(1) - L(2) * std::cos(th(1)), L(2) * std::sin(th(1)), 0);
  p[P::C] = p[P::B] + Vec3(0, 0, L(3));
  p[P::D] = p[P::C] + Vec3(0, L(4) * std::cos(th(2)), L(4) * std::sin(th(2)));
  p[P::E] = p[P::D] + Vec3(L(5), 0, 0);
  p[P::F] = p[P::E] + Vec3(L(6) * std::sin(th(3)), 0, L(6) * std::cos(th(3)));
  p[P::G] = p[P::E] + Vec3((L(6) + L(7)) * std::sin(th(3)), 0, (L(6) + L(7)) * std::cos(th(3)));
  p[P::H] = p[P::G] + Vec3(L(8) * std::cos(th(4)), 0, L(8) * std::sin(th(4)));
  p[P::M] = p[P::G] + Vec3((L(8) + L(9)) * std::cos(th(4)), 0, (L(8) + L(9)) * std::sin(th(4)));
  p[P::N] = p[P::M] + Vec3(L(10) * std::sin(th(5)), 0, L(10) * std::cos(th(5)));
  p[P::P] = p[P::N] + Vec3(0, L(11), 0);
  p[P::Q] = p[P::P] + Vec3(L(12) * std::cos(th(6)), L(12) * std::sin(th(6)), 0);
  p[P::R] = p[P::Q];
  p[P::S] = p[P::R] + Vec3(0, L(14) * std::cos(th(7)), L(13) + L(14) * std::sin(th(7)));
  p[P::T] = p[P::S] + Vec3(-L(15), 0, 0);
  return p;
}

inline Vec3 position(JointPointId id, const Vec7& q, const Lengths& l) {
  return positions(q, l).at(id);
}

template <class F>
auto central_diff(F f, double h) {
  const auto plus = f(h);
  const auto minus = f(-h);
  if constexpr (std::is_arithmetic_v<std::decay_t<decltype(plus)>>) {
    return (plus - minus) / (2.0 * h);
  } else {
    return decltype(plus)((plus - minus) / (2.0 * h));
  }
}

/// Mass matrix entry from a rod chopped into n point masses along
/// p(s) = a(q) + s (b(q) - a(q)), s in (0, 1).
inline double discretized_rod_inertia(const std::function<Vec3(double, double)>& point_at,
                                      double q, double mass, int n = 10000, double h = 1e-6) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = (i + 0.5) / n;
    const Vec3 dp = (point_at(q + h, s) - point_at(q - h, s)) / (2.0 * h);
    sum += (mass / n) * dp.squaredNorm();
  }
  return sum;
}

/// Euler-Lagrange residual d/dt dT/dw - dT/dq from finite differences of a
/// kinetic-energy function along q(t) = q + w t + a t^2 / 2.
template <int N, class KE>
Eigen::Matrix<double, N, 1> lagrangian_inertial(KE kinetic, const Eigen::Matrix<double, N, 1>& q,
                                                const Eigen::Matrix<double, N, 1>& w,
                                                const Eigen::Matrix<double, N, 1>& a,
                                                double hq = 1e-5, double ht = 1e-4) {
  using V = Eigen::Matrix<double, N, 1>;
  auto dT_dw = [&](const V& qq, const V& ww) {
    V g;
    for (int k = 0; k < N; ++k) {
      V p = ww, m = ww;
      p[k] += hq;
      m[k] -= hq;
      g[k] = (kinetic(qq, p) - kinetic(qq, m)) / (2.0 * hq);
    }
    return g;
  };
  auto along = [&](double t) { return dT_dw(q + w * t + 0.5 * a * t * t, w + a * t); };
  const V ddt = (along(ht) - along(-ht)) / (2.0 * ht);
  V dT_dq;
  for (int k = 0; k < N; ++k) {
    V p = q, m = q;
    p[k] += hq;
    m[k] -= hq;
    dT_dq[k] = (kinetic(p, w) - kinetic(m, w)) / (2.0 * hq);
  }
  return ddt - dT_dq;
}

/// Planar two-rod SCARA with a carriage point mass, kinetic energy written out
/// by hand from the link velocities.
struct Scara {
  double d1, d2, m1, m2, m3;

  double kinetic(const Eigen::Vector3d& q, const Eigen::Vector3d& qd) const {
    const double t1 = q[0], t12 = q[0] + q[1];
    const double w1 = qd[0], w12 = qd[0] + qd[1];
    const Eigen::Vector2d n1(-std::sin(t1), std::cos(t1));
    const Eigen::Vector2d n12(-std::sin(t12), std::cos(t12));
    const Eigen::Vector2d v_elbow = d1 * w1 * n1;
    const Eigen::Vector2d v_c2 = v_elbow + 0.5 * d2 * w12 * n12;
    const Eigen::Vector2d v_tip = v_elbow + d2 * w12 * n12;
    const double rod1 = 0.5 * m1 * (d1 * d1 / 3.0) * w1 * w1;
    const double rod2 = 0.5 * m2 * v_c2.squaredNorm() + 0.5 * (m2 * d2 * d2 / 12.0) * w12 * w12;
    const double carriage = 0.5 * m3 * (v_tip.squaredNorm() + qd[2] * qd[2]);
    return rod1 + rod2 + carriage;
  }
};

}  // namespace oracle
