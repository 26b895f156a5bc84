#pragma once

#include "modukin/types.hpp"

#include <algorithm>
#include <numeric>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace modukin {

/// Geometric offsets l1..l15 of the chain, in metres.
class LinkLengths {
 public:
  LinkLengths() { values_.fill(0.1); }
  explicit LinkLengths(const std::array<double, kLinkLengthCount>& values) : values_(values) {}

  /// 1-based, matching l1..l15.
  double operator()(int i) const { return values_.at(static_cast<std::size_t>(i - 1)); }
  double& operator()(int i) { return values_.at(static_cast<std::size_t>(i - 1)); }

  const std::array<double, kLinkLengthCount>& values() const { return values_; }

  friend bool operator==(const LinkLengths&, const LinkLengths&) = default;

 private:
  std::array<double, kLinkLengthCount> values_{};
};

enum class InertiaModel { PointMassAtDistalEnd, UniformSlenderRod };

/// Moving link i (0-based) is the rigid rod of length l_{i+2}; there are 14 of them.
struct LinkInertia {
  std::array<double, kMovingLinkCount> masses{};
  InertiaModel model = InertiaModel::UniformSlenderRod;

  double total_mass() const { return std::accumulate(masses.begin(), masses.end(), 0.0); }

  friend bool operator==(const LinkInertia&, const LinkInertia&) = default;
};

struct AnthropometricProfile {
  std::string name = "custom";
  LinkLengths lengths;
  LinkInertia inertia;
  Vec3 gravity{0.0, 0.0, -9.81};

  friend bool operator==(const AnthropometricProfile& a, const AnthropometricProfile& b) {
    return a.name == b.name && a.lengths == b.lengths && a.inertia == b.inertia &&
           a.gravity == b.gravity;
  }
};

struct FrictionParameters {
  JointVector viscous_joint = JointVector::Zero();
  JointVector coulomb_joint = JointVector::Zero();
  JointVector viscous_skin = JointVector::Zero();
  double smoothing_eps = 1e-3;
};

/// Cuff forces and the lumped disturbance torque. Forces carry no moments.
struct InteractionWrenches {
  Vec3 gamma1 = Vec3::Zero();
  JointPointId gamma1_point = JointPointId::M;
  Vec3 gamma2 = Vec3::Zero();
  JointPointId gamma2_point = JointPointId::T;
  JointVector lambda_u = JointVector::Zero();
};

// ---------------------------------------------------------------------------
// Canonical chain table
//
// Every coordinate of every joint point is a sum of terms sign * l_i * f(theta_k)
// with f one of {1, sin, cos}. The chain is stored as 15 consecutive segments
// O->A, A->B, ..., S->T; the position of a point is the sum of all segments
// leading to it.
// ---------------------------------------------------------------------------

enum class Trig { Const, Sin, Cos };

struct ChainTerm {
  int axis = 0;  // 0 = x, 1 = y, 2 = z
  double sign = 1.0;
  int length = 1;  // l index, 1..15
  int dof = 0;     // 0 when constant
  Trig trig = Trig::Const;

  friend bool operator==(const ChainTerm&, const ChainTerm&) = default;
};

struct ChainSegment {
  JointPointId from;
  JointPointId to;
  std::array<ChainTerm, 3> terms{};
  int term_count = 0;

  std::span<const ChainTerm> active() const {
    return {terms.data(), static_cast<std::size_t>(term_count)};
  }

  friend bool operator==(const ChainSegment&, const ChainSegment&) = default;
};

/// Rigid rod of a moving link: terms [begin, end) of one segment. Terms before
/// `begin` in the same segment offset its proximal end.
struct RodSpec {
  int segment = 0;
  int begin = 0;
  int end = 0;
  int length = 0;  // nominal l index, also the rod length
  int dof = 0;     // DOF that turns the rod, 0 for a fixed direction
};

using ChainTable = std::array<ChainSegment, kJointPointCount - 1>;

namespace detail {

inline constexpr ChainTerm term(int axis, double sign, int length, int dof = 0,
                                Trig trig = Trig::Const) {
  return ChainTerm{axis, sign, length, dof, trig};
}

inline ChainSegment segment(JointPointId from, JointPointId to, std::initializer_list<ChainTerm> ts) {
  ChainSegment s{from, to, {}, 0};
  for (const auto& t : ts) s.terms[static_cast<std::size_t>(s.term_count++)] = t;
  return s;
}

}  // namespace detail

/// The typo-corrected position model. docs/corrections.json lists every place
/// it departs from the printed appendix.
inline ChainTable canonical_chain() {
  using detail::segment;
  using detail::term;
  using P = JointPointId;
  constexpr int x = 0, y = 1, z = 2;
  return ChainTable{
      segment(P::O, P::A, {term(x, 1, 1)}),
      segment(P::A, P::B, {term(x, -1, 2, 1, Trig::Cos), term(y, 1, 2, 1, Trig::Sin)}),
      segment(P::B, P::C, {term(z, 1, 3)}),
      segment(P::C, P::D, {term(y, 1, 4, 2, Trig::Cos), term(z, 1, 4, 2, Trig::Sin)}),
      segment(P::D, P::E, {term(x, 1, 5)}),
      segment(P::E, P::F, {term(x, 1, 6, 3, Trig::Sin), term(z, 1, 6, 3, Trig::Cos)}),
      segment(P::F, P::G, {term(x, 1, 7, 3, Trig::Sin), term(z, 1, 7, 3, Trig::Cos)}),
      segment(P::G, P::H, {term(x, 1, 8, 4, Trig::Cos), term(z, 1, 8, 4, Trig::Sin)}),
      segment(P::H, P::M, {term(x, 1, 9, 4, Trig::Cos), term(z, 1, 9, 4, Trig::Sin)}),
      segment(P::M, P::N, {term(x, 1, 10, 5, Trig::Sin), term(z, 1, 10, 5, Trig::Cos)}),
      segment(P::N, P::P, {term(y, 1, 11)}),
      segment(P::P, P::Q, {term(x, 1, 12, 6, Trig::Cos), term(y, 1, 12, 6, Trig::Sin)}),
      segment(P::Q, P::R, {}),
      segment(P::R, P::S,
              {term(z, 1, 13), term(y, 1, 14, 7, Trig::Cos), term(z, 1, 14, 7, Trig::Sin)}),
      segment(P::S, P::T, {term(x, -1, 15)}),
  };
}

/// Rods of the 14 moving links, ordered l2..l15. The R->S segment holds two
/// rods: the fixed l13 riser and the l14 link turned by DOF 7.
inline constexpr std::array<RodSpec, kMovingLinkCount> kRods = {{
    {1, 0, 2, 2, 1},
    {2, 0, 1, 3, 0},
    {3, 0, 2, 4, 2},
    {4, 0, 1, 5, 0},
    {5, 0, 2, 6, 3},
    {6, 0, 2, 7, 3},
    {7, 0, 2, 8, 4},
    {8, 0, 2, 9, 4},
    {9, 0, 2, 10, 5},
    {10, 0, 1, 11, 0},
    {11, 0, 2, 12, 6},
    {13, 0, 1, 13, 0},
    {13, 1, 3, 14, 7},
    {14, 0, 1, 15, 0},
}};

/// Rotation axis of DOF k (1-based), normal to the plane its terms move in.
inline Vec3 joint_axis(int k) {
  check_dof(k);
  switch (k) {
    case 1:
    case 6: return Vec3::UnitZ();
    case 2:
    case 7: return Vec3::UnitX();
    default: return Vec3::UnitY();
  }
}

// ---------------------------------------------------------------------------
// Profiles
// ---------------------------------------------------------------------------

enum class IssueKind {
  NonPositiveLength,
  NegativeMass,
  ZeroTotalMass,
  BadSmoothingEps,
  NegativeFriction,
  NonFiniteGravity,
  EmptyName,
};

struct ProfileIssue {
  IssueKind kind;
  int index = 0;  // 1-based l index, moving-link index or DOF; 0 when not applicable

  std::string describe() const {
    switch (kind) {
      case IssueKind::NonPositiveLength: return "NonPositiveLength(" + std::to_string(index) + ")";
      case IssueKind::NegativeMass: return "NegativeMass(" + std::to_string(index) + ")";
      case IssueKind::ZeroTotalMass: return "ZeroTotalMass";
      case IssueKind::BadSmoothingEps: return "BadSmoothingEps";
      case IssueKind::NegativeFriction: return "NegativeFriction(" + std::to_string(index) + ")";
      case IssueKind::NonFiniteGravity: return "NonFiniteGravity";
      case IssueKind::EmptyName: return "EmptyName";
    }
    return "Unknown";
  }

  friend bool operator==(const ProfileIssue&, const ProfileIssue&) = default;
};

/// Collects every violated invariant, not just the first.
inline std::vector<ProfileIssue> profile_issues(const AnthropometricProfile& profile,
                                                const FrictionParameters& friction = {}) {
  std::vector<ProfileIssue> issues;
  if (profile.name.empty()) issues.push_back({IssueKind::EmptyName});
  for (int i = 1; i <= kLinkLengthCount; ++i) {
    const double l = profile.lengths(i);
    if (!std::isfinite(l) || l <= 0.0) issues.push_back({IssueKind::NonPositiveLength, i});
  }
  bool any_positive = false;
  for (int i = 0; i < kMovingLinkCount; ++i) {
    const double m = profile.inertia.masses[static_cast<std::size_t>(i)];
    if (!std::isfinite(m) || m < 0.0) issues.push_back({IssueKind::NegativeMass, i + 1});
    if (m > 0.0) any_positive = true;
  }
  if (!any_positive) issues.push_back({IssueKind::ZeroTotalMass});
  if (!profile.gravity.allFinite()) issues.push_back({IssueKind::NonFiniteGravity});
  if (!(friction.smoothing_eps > 0.0) || !std::isfinite(friction.smoothing_eps)) {
    issues.push_back({IssueKind::BadSmoothingEps});
  }
  for (int k = 0; k < kDof; ++k) {
    const bool bad = !(friction.viscous_joint[k] >= 0.0) || !(friction.coulomb_joint[k] >= 0.0) ||
                     !(friction.viscous_skin[k] >= 0.0);
    if (bad) issues.push_back({IssueKind::NegativeFriction, k + 1});
  }
  return issues;
}

using ProfileValidation = std::variant<AnthropometricProfile, std::vector<ProfileIssue>>;

inline ProfileValidation validate_profile(const AnthropometricProfile& profile,
                                          const FrictionParameters& friction = {}) {
  auto issues = profile_issues(profile, friction);
  if (issues.empty()) return profile;
  return issues;
}

/// Throwing form used by the pipelines.
inline const AnthropometricProfile& require_valid(const AnthropometricProfile& profile,
                                                  const FrictionParameters& friction = {}) {
  const auto issues = profile_issues(profile, friction);
  if (!issues.empty()) {
    std::string msg = "profile '" + profile.name + "':";
    for (const auto& issue : issues) msg += " " + issue.describe();
    throw Error(ErrorCode::InvalidProfile, msg);
  }
  return profile;
}

inline constexpr std::array<double, kLinkLengthCount> kBaseLengths = {
    0.05, 0.10, 0.04, 0.12, 0.03, 0.06, 0.06, 0.08, 0.08, 0.10, 0.03, 0.12, 0.03, 0.08, 0.04};

/// Scaled copy of the base lengths with `total_mass` spread over the moving
/// links in proportion to their lengths.
inline AnthropometricProfile scaled_profile(std::string name, double scale, double total_mass,
                                            InertiaModel model = InertiaModel::UniformSlenderRod) {
  AnthropometricProfile p;
  p.name = std::move(name);
  std::array<double, kLinkLengthCount> l{};
  std::transform(kBaseLengths.begin(), kBaseLengths.end(), l.begin(),
                 [scale](double v) { return v * scale; });
  p.lengths = LinkLengths(l);
  const double moving = std::accumulate(l.begin() + 1, l.end(), 0.0);
  for (int i = 0; i < kMovingLinkCount; ++i) {
    p.inertia.masses[static_cast<std::size_t>(i)] =
        total_mass * l[static_cast<std::size_t>(i + 1)] / moving;
  }
  p.inertia.model = model;
  return p;
}

inline AnthropometricProfile builtin_profile(std::string_view name) {
  if (name == "small") return scaled_profile("small", 0.8, 1.2);
  if (name == "medium") return scaled_profile("medium", 1.0, 2.0);
  if (name == "large") return scaled_profile("large", 1.2, 3.0);
  throw Error(ErrorCode::UnknownProfile, std::string(name));
}

inline constexpr std::array<std::string_view, 3> kBuiltinProfiles = {"small", "medium", "large"};

}  // namespace modukin
