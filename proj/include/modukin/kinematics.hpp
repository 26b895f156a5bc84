#pragma once

#include "modukin/chain_model.hpp"

#include <map>

namespace modukin {

struct PointKinematics {
  JointPointId point = JointPointId::O;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();
};

struct PointJacobian {
  JointPointId point = JointPointId::O;
  Jacobian3 matrix = Jacobian3::Zero();
};

inline const ChainTable& canonical_table() {
  static const ChainTable table = canonical_chain();
  return table;
}

/// Value, slope and curvature of a weighted sum of chain terms. Column k of
/// `jacobian` is dp/dtheta_k and column k of `curvature` is d2p/dtheta_k^2;
/// mixed partials are identically zero because no term involves two angles.
struct TermSum {
  Vec3 position = Vec3::Zero();
  Jacobian3 jacobian = Jacobian3::Zero();
  Jacobian3 curvature = Jacobian3::Zero();

  void add(const ChainTerm& t, double weight, const JointVector& theta, const LinkLengths& L) {
    const double scale = weight * t.sign * L(t.length);
    if (t.trig == Trig::Const) {
      position[t.axis] += scale;
      return;
    }
    const double s = std::sin(theta[t.dof - 1]);
    const double c = std::cos(theta[t.dof - 1]);
    const int col = t.dof - 1;
    if (t.trig == Trig::Sin) {
      position[t.axis] += scale * s;
      jacobian(t.axis, col) += scale * c;
      curvature(t.axis, col) -= scale * s;
    } else {
      position[t.axis] += scale * c;
      jacobian(t.axis, col) -= scale * s;
      curvature(t.axis, col) -= scale * c;
    }
  }

  Vec3 velocity(const JointVector& omega) const { return jacobian * omega; }

  Vec3 acceleration(const JointVector& omega, const JointVector& alpha) const {
    return jacobian * alpha + curvature * omega.cwiseProduct(omega);
  }
};

inline TermSum point_terms(JointPointId point, const JointVector& theta, const LinkLengths& L,
                           const ChainTable& table = canonical_table()) {
  TermSum sum;
  for (int s = 0; s < index_of(point); ++s) {
    for (const auto& t : table[static_cast<std::size_t>(s)].active()) sum.add(t, 1.0, theta, L);
  }
  return sum;
}

inline Vec3 canonical_position(JointPointId point, const JointVector& theta, const LinkLengths& L,
                               const ChainTable& table = canonical_table()) {
  return point_terms(point, theta, L, table).position;
}

inline Vec3 canonical_velocity(JointPointId point, const JointState& state, const LinkLengths& L,
                               const ChainTable& table = canonical_table()) {
  return point_terms(point, state.theta, L, table).velocity(state.omega);
}

inline Vec3 canonical_acceleration(JointPointId point, const JointState& state,
                                   const LinkLengths& L,
                                   const ChainTable& table = canonical_table()) {
  return point_terms(point, state.theta, L, table).acceleration(state.omega, state.alpha);
}

inline PointJacobian point_jacobian(JointPointId point, const JointVector& theta,
                                    const LinkLengths& L,
                                    const ChainTable& table = canonical_table()) {
  return {point, point_terms(point, theta, L, table).jacobian};
}

using FullPose = std::map<JointPointId, PointKinematics>;

/// All 16 points in one sweep down the chain.
inline FullPose full_pose(const JointState& state, const LinkLengths& L,
                          const ChainTable& table = canonical_table()) {
  FullPose out;
  TermSum sum;
  for (auto id : kAllPoints) {
    if (index_of(id) > 0) {
      for (const auto& t : table[static_cast<std::size_t>(index_of(id) - 1)].active()) {
        sum.add(t, 1.0, state.theta, L);
      }
    }
    out[id] = PointKinematics{id, sum.position, sum.velocity(state.omega),
                              sum.acceleration(state.omega, state.alpha)};
  }
  return out;
}

/// Centre-of-mass terms of one moving link: the proximal point, plus any
/// leading offset in its segment, plus `fraction` of the rod vector.
inline TermSum rod_terms(const RodSpec& rod, double fraction, const JointVector& theta,
                         const LinkLengths& L, const ChainTable& table = canonical_table()) {
  const auto& seg = table[static_cast<std::size_t>(rod.segment)];
  TermSum sum = point_terms(seg.from, theta, L, table);
  for (int i = 0; i < rod.end; ++i) {
    sum.add(seg.terms[static_cast<std::size_t>(i)], i < rod.begin ? 1.0 : fraction, theta, L);
  }
  return sum;
}

}  // namespace modukin
