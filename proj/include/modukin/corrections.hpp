#pragma once

#include "modukin/chain_model.hpp"

#include <optional>
#include <string_view>

namespace modukin {

enum class CorrectionKind {
  /// A printed position term was changed; the change can be reverted in the table.
  Position,
  /// A printed velocity/acceleration expression disagrees with the position
  /// model; the shipped value comes from differentiating the position model.
  DerivedByDifferentiation,
};

/// How to put a position correction back to its printed form in the chain table.
struct TermRevert {
  int segment = 0;
  int term = 0;
  std::optional<int> printed_length;
  std::optional<int> printed_dof;
};

struct Correction {
  std::string_view id;
  std::string_view points;
  std::string_view printed;
  std::string_view corrected;
  CorrectionKind kind;
  std::optional<TermRevert> revert;
};

// clang-format off
inline constexpr std::array<Correction, 16> kCorrections = {{
    {"x-angle-B", "B,C", "x = l1 - l2 cos(theta2)", "x = l1 - l2 cos(theta1)",
     CorrectionKind::Position, TermRevert{1, 0, std::nullopt, 2}},
    {"x-angle-N", "N,P,Q,R,S", "x = ... - l2 cos(theta2) ...", "x = ... - l2 cos(theta1) ...",
     CorrectionKind::Position, TermRevert{1, 0, std::nullopt, 2}},
    {"x-angle-T", "T", "x = ... - l2 cos(theta2) ...", "x = ... - l2 cos(theta1) ...",
     CorrectionKind::Position, TermRevert{1, 0, std::nullopt, 2}},
    {"y-length-G", "G", "y = l2 sin(theta1) + l1 cos(theta2)", "y = l2 sin(theta1) + l4 cos(theta2)",
     CorrectionKind::Position, TermRevert{3, 0, 1, std::nullopt}},
    {"z-length-G", "G", "z = l3 + l2 sin(theta2) + ...", "z = l3 + l4 sin(theta2) + ...",
     CorrectionKind::Position, TermRevert{3, 1, 2, std::nullopt}},
    {"x-length-H", "H", "x = ... + l4 cos(theta4)", "x = ... + l8 cos(theta4)",
     CorrectionKind::Position, TermRevert{7, 0, 4, std::nullopt}},
    {"z-length-N", "N", "z = ... + (l7 + l8) cos(theta3) ...", "z = ... + (l6 + l7) cos(theta3) ...",
     CorrectionKind::Position, TermRevert{5, 1, 8, std::nullopt}},
    {"y-angle-Q", "Q", "y = ... + l12 sin(theta3)", "y = ... + l12 sin(theta6)",
     CorrectionKind::Position, TermRevert{11, 1, std::nullopt, 3}},
    {"vy-length-T", "T", "vy = l4 w1 cos(theta1) ...", "vy = l2 w1 cos(theta1) ...",
     CorrectionKind::DerivedByDifferentiation, std::nullopt},
    {"v-C", "C", "vx = l1 w1 sin(theta1), vy = l2 w1 sin(theta1)",
     "vx = l2 w1 sin(theta1), vy = l2 w1 cos(theta1)",
     CorrectionKind::DerivedByDifferentiation, std::nullopt},
    {"v-D", "D", "vy = l2 w1 sin(theta1), vz = l4 w2 sin(theta1)",
     "vy = l2 w1 cos(theta1) - l4 w2 sin(theta2), vz = l4 w2 cos(theta2)",
     CorrectionKind::DerivedByDifferentiation, std::nullopt},
    {"vy-length-F", "F", "vy = l3 w1 cos(theta1) ...", "vy = l2 w1 cos(theta1) ...",
     CorrectionKind::DerivedByDifferentiation, std::nullopt},
    {"vx-length-H", "H", "vx = ... - l2 w4 sin(theta4)", "vx = ... - l8 w4 sin(theta4)",
     CorrectionKind::DerivedByDifferentiation, std::nullopt},
    {"vy-length-PQRS", "P,Q,R,S", "vy = l4 w1 cos(theta1) ...", "vy = l2 w1 cos(theta1) ...",
     CorrectionKind::DerivedByDifferentiation, std::nullopt},
    {"vz-rate-PQR", "P,Q,R", "vz = ... - l10 w3 sin(theta5)", "vz = ... - l10 w5 sin(theta5)",
     CorrectionKind::DerivedByDifferentiation, std::nullopt},
    {"az-terms-PQRST", "P,Q,R,S,T",
     "az = l4 a1 cos(theta1) - l2 w1^2 sin(theta1) ... (l10 and l14 terms garbled or missing)",
     "az = l4 a2 cos(theta2) - l4 w2^2 sin(theta2) ... (exact second derivative of z)",
     CorrectionKind::DerivedByDifferentiation, std::nullopt},
}};
// clang-format on

inline const Correction* find_correction(std::string_view id) {
  for (const auto& c : kCorrections) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

/// Chain table with the named position corrections put back to their printed form.
/// Only for fault injection: the result is not a consistent model.
inline ChainTable revert_corrections(ChainTable table, std::span<const std::string> ids) {
  for (const auto& id : ids) {
    const Correction* c = find_correction(id);
    if (c == nullptr) throw Error(ErrorCode::ConfigError, "unknown correction '" + id + "'");
    if (!c->revert) {
      throw Error(ErrorCode::ConfigError,
                  "correction '" + id + "' is derived by differentiation and cannot be reverted");
    }
    auto& t = table[static_cast<std::size_t>(c->revert->segment)]
                  .terms[static_cast<std::size_t>(c->revert->term)];
    if (c->revert->printed_length) t.length = *c->revert->printed_length;
    if (c->revert->printed_dof) t.dof = *c->revert->printed_dof;
  }
  return table;
}

}  // namespace modukin
