#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace modukin {

inline constexpr int kDof = 7;
inline constexpr int kLinkLengthCount = 15;
inline constexpr int kMovingLinkCount = 14;
inline constexpr int kJointPointCount = 16;

using Vec3 = Eigen::Vector3d;
using JointVector = Eigen::Matrix<double, kDof, 1>;
using JointMatrix = Eigen::Matrix<double, kDof, kDof>;
using Jacobian3 = Eigen::Matrix<double, 3, kDof>;

/// Error categories shared by every module. The CLI maps them onto exit codes.
enum class ErrorCode {
  BadIndex,
  UnknownProfile,
  InvalidProfile,
  IllPosed,
  SingularMass,
  OutOfRange,
  ConstraintViolated,
  Infeasible,
  NegativeNormal,
  ConfigError,
  IoError,
  UsageError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::UnknownProfile: return "UnknownProfile";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::IllPosed: return "IllPosed";
    case ErrorCode::SingularMass: return "SingularMass";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ConstraintViolated: return "ConstraintViolated";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::NegativeNormal: return "NegativeNormal";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Labeled points of the modular chain. I, J, K and L are not used.
enum class JointPointId : int { O, A, B, C, D, E, F, G, H, M, N, P, Q, R, S, T };

inline constexpr std::array<JointPointId, kJointPointCount> kAllPoints = {
    JointPointId::O, JointPointId::A, JointPointId::B, JointPointId::C,
    JointPointId::D, JointPointId::E, JointPointId::F, JointPointId::G,
    JointPointId::H, JointPointId::M, JointPointId::N, JointPointId::P,
    JointPointId::Q, JointPointId::R, JointPointId::S, JointPointId::T};

inline constexpr int index_of(JointPointId id) { return static_cast<int>(id); }

inline constexpr char label_of(JointPointId id) {
  constexpr std::string_view labels = "OABCDEFGHMNPQRST";
  return labels[static_cast<std::size_t>(index_of(id))];
}

inline std::optional<JointPointId> parse_point(std::string_view label) {
  if (label.size() != 1) return std::nullopt;
  for (auto id : kAllPoints) {
    if (label_of(id) == label[0]) return id;
  }
  return std::nullopt;
}

enum class JointKind { PinMotor, Fixed };

/// Kind of a labeled joint; O is the ground reference and has none.
inline constexpr std::optional<JointKind> joint_kind(JointPointId id) {
  switch (id) {
    case JointPointId::O: return std::nullopt;
    case JointPointId::A:
    case JointPointId::C:
    case JointPointId::E:
    case JointPointId::G:
    case JointPointId::M:
    case JointPointId::P:
    case JointPointId::R: return JointKind::PinMotor;
    default: return JointKind::Fixed;
  }
}

/// Angles, rates and accelerations of the seven actuated DOFs. Index 0 is DOF 1.
struct JointState {
  JointVector theta = JointVector::Zero();
  JointVector omega = JointVector::Zero();
  JointVector alpha = JointVector::Zero();

  bool finite() const {
    return theta.allFinite() && omega.allFinite() && alpha.allFinite();
  }
};

inline void check_dof(int k) {
  if (k < 1 || k > kDof) {
    throw Error(ErrorCode::BadIndex, "DOF index " + std::to_string(k) + " outside 1..7");
  }
}

}  // namespace modukin
