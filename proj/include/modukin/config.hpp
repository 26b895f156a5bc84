#pragma once

#include "modukin/corrections.hpp"
#include "modukin/dynamics.hpp"
#include "modukin/io.hpp"
#include "modukin/scara.hpp"
#include "modukin/trajectory.hpp"

#include <json.hpp>

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <set>

namespace modukin {

using json = nlohmann::json;

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

/// Everything a pipeline run needs, resolved from a JSON config file.
struct RunConfig {
  AnthropometricProfile profile = builtin_profile("medium");
  FrictionParameters friction;
  InteractionWrenches wrenches;
  TrajectorySpec trajectory = default_demo_trajectory();
  scara::ScaraParams scara;
  std::uint64_t seed = kDefaultSeed;
  std::vector<std::string> revert_corrections;
  std::optional<ChainState> initial_state;
  /// The document this config was parsed from, kept verbatim for manifests.
  json source = json::object();

  /// Position table used by the self-check; differs from the canonical one only
  /// under fault injection.
  ChainTable position_table() const {
    return ::modukin::revert_corrections(canonical_chain(), revert_corrections);
  }
};

namespace config_detail {

inline void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                           const std::string& where) {
  if (!obj.is_object()) throw Error(ErrorCode::ConfigError, where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) {
      throw Error(ErrorCode::ConfigError,
                  "unknown key '" + (where.empty() ? key : where + "." + key) + "'");
    }
  }
}

inline double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw Error(ErrorCode::ConfigError, where + " must be a number");
  return v.get<double>();
}

template <std::size_t N>
std::array<double, N> fixed_array(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != N) {
    throw Error(ErrorCode::ConfigError, where + " must be an array of " + std::to_string(N));
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = number(v[i], where);
  return out;
}

/// A 7-vector given either as an array or as one number broadcast to all DOFs.
inline JointVector joint_vector(const json& v, const std::string& where) {
  JointVector out;
  if (v.is_number()) {
    out.setConstant(v.get<double>());
    return out;
  }
  const auto a = fixed_array<kDof>(v, where);
  for (int k = 0; k < kDof; ++k) out[k] = a[static_cast<std::size_t>(k)];
  return out;
}

inline Vec3 vec3(const json& v, const std::string& where) {
  const auto a = fixed_array<3>(v, where);
  return {a[0], a[1], a[2]};
}

inline JointPointId point(const json& v, const std::string& where) {
  if (!v.is_string()) throw Error(ErrorCode::ConfigError, where + " must be a point label");
  const auto id = parse_point(v.get<std::string>());
  if (!id) throw Error(ErrorCode::ConfigError, where + ": no joint point '" + v.get<std::string>() + "'");
  return *id;
}

inline TrajectorySpec parse_trajectory(const json& t) {
  if (!t.is_object() || !t.contains("kind") || !t["kind"].is_string()) {
    throw Error(ErrorCode::ConfigError, "trajectory needs a string 'kind'");
  }
  const auto kind = t["kind"].get<std::string>();
  TrajectorySpec spec;
  auto rate = [&] {
    return t.contains("sample_rate_hz") ? number(t["sample_rate_hz"], "trajectory.sample_rate_hz")
                                        : 100.0;
  };
  if (kind == "demo") {
    reject_unknown(t, {"kind", "sample_rate_hz", "duration_s"}, "trajectory");
    spec = default_demo_trajectory();
    spec.sample_rate = rate();
    if (t.contains("duration_s")) spec.sinusoid_window = number(t["duration_s"], "trajectory.duration_s");
  } else if (kind == "sinusoidal" || kind == "hold") {
    if (kind == "sinusoidal") {
      reject_unknown(t, {"kind", "amplitude_rad", "frequency_hz", "phase_rad", "offset_rad",
                         "sample_rate_hz", "duration_s"},
                     "trajectory");
    } else {
      reject_unknown(t, {"kind", "theta_rad", "sample_rate_hz", "duration_s"}, "trajectory");
    }
    auto field = [&](const char* key) {
      return t.contains(key) ? joint_vector(t[key], std::string("trajectory.") + key)
                             : JointVector::Zero().eval();
    };
    const JointVector amp = field("amplitude_rad");
    const JointVector freq = field("frequency_hz");
    const JointVector phase = field("phase_rad");
    const JointVector offset = kind == "hold" ? field("theta_rad") : field("offset_rad");
    spec.kind = TrajectoryKind::Sinusoidal;
    for (int k = 0; k < kDof; ++k) {
      spec.sinusoid[static_cast<std::size_t>(k)] = {amp[k], freq[k], phase[k], offset[k]};
    }
    spec.sample_rate = rate();
    spec.sinusoid_window =
        t.contains("duration_s") ? number(t["duration_s"], "trajectory.duration_s") : 1.0;
  } else if (kind == "quintic") {
    reject_unknown(t, {"kind", "start_rad", "end_rad", "duration_s", "sample_rate_hz"},
                   "trajectory");
    if (!t.contains("start_rad") || !t.contains("end_rad")) {
      throw Error(ErrorCode::ConfigError, "quintic trajectory needs start_rad and end_rad");
    }
    const JointVector start = joint_vector(t["start_rad"], "trajectory.start_rad");
    const JointVector end = joint_vector(t["end_rad"], "trajectory.end_rad");
    const JointVector duration = t.contains("duration_s")
                                     ? joint_vector(t["duration_s"], "trajectory.duration_s")
                                     : JointVector::Ones().eval();
    spec.kind = TrajectoryKind::Quintic;
    for (int k = 0; k < kDof; ++k) {
      spec.quintic[static_cast<std::size_t>(k)] = {start[k], end[k], duration[k]};
    }
    spec.sample_rate = rate();
  } else {
    throw Error(ErrorCode::ConfigError, "unknown trajectory kind '" + kind + "'");
  }
  validate(spec);
  return spec;
}

}  // namespace config_detail

inline RunConfig parse_config(const json& doc) {
  using namespace config_detail;
  reject_unknown(doc,
                 {"profile", "name", "lengths_m", "masses_kg", "inertia_model", "gravity_mps2",
                  "friction", "wrenches", "trajectory", "scara", "seed", "initial_state",
                  "fault_injection"},
                 "");
  RunConfig cfg;
  cfg.source = doc;

  if (doc.contains("profile")) {
    if (!doc["profile"].is_string()) throw Error(ErrorCode::ConfigError, "profile must be a string");
    try {
      cfg.profile = builtin_profile(doc["profile"].get<std::string>());
    } catch (const Error& e) {
      throw Error(ErrorCode::ConfigError, e.what());
    }
  }
  const bool custom_geometry = doc.contains("lengths_m") || doc.contains("masses_kg");
  if (doc.contains("lengths_m")) {
    cfg.profile.lengths = LinkLengths(fixed_array<kLinkLengthCount>(doc["lengths_m"], "lengths_m"));
  }
  if (doc.contains("masses_kg")) {
    cfg.profile.inertia.masses = fixed_array<kMovingLinkCount>(doc["masses_kg"], "masses_kg");
  }
  if (doc.contains("inertia_model")) {
    const auto m = doc["inertia_model"].is_string() ? doc["inertia_model"].get<std::string>() : "";
    if (m == "uniform_slender_rod") {
      cfg.profile.inertia.model = InertiaModel::UniformSlenderRod;
    } else if (m == "point_mass_distal") {
      cfg.profile.inertia.model = InertiaModel::PointMassAtDistalEnd;
    } else {
      throw Error(ErrorCode::ConfigError,
                  "inertia_model must be 'uniform_slender_rod' or 'point_mass_distal'");
    }
  }
  if (doc.contains("gravity_mps2")) cfg.profile.gravity = vec3(doc["gravity_mps2"], "gravity_mps2");
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw Error(ErrorCode::ConfigError, "name must be a string");
    cfg.profile.name = doc["name"].get<std::string>();
  } else if (custom_geometry) {
    cfg.profile.name = "custom";
  }

  if (doc.contains("friction")) {
    const auto& f = doc["friction"];
    reject_unknown(f, {"viscous_joint", "coulomb_joint", "viscous_skin", "smoothing_eps"},
                   "friction");
    if (f.contains("viscous_joint")) cfg.friction.viscous_joint = joint_vector(f["viscous_joint"], "friction.viscous_joint");
    if (f.contains("coulomb_joint")) cfg.friction.coulomb_joint = joint_vector(f["coulomb_joint"], "friction.coulomb_joint");
    if (f.contains("viscous_skin")) cfg.friction.viscous_skin = joint_vector(f["viscous_skin"], "friction.viscous_skin");
    if (f.contains("smoothing_eps")) cfg.friction.smoothing_eps = number(f["smoothing_eps"], "friction.smoothing_eps");
  }

  if (doc.contains("wrenches")) {
    const auto& w = doc["wrenches"];
    reject_unknown(w, {"gamma1_N", "gamma1_point", "gamma2_N", "gamma2_point", "lambda_u_Nm"},
                   "wrenches");
    if (w.contains("gamma1_N")) cfg.wrenches.gamma1 = vec3(w["gamma1_N"], "wrenches.gamma1_N");
    if (w.contains("gamma1_point")) cfg.wrenches.gamma1_point = point(w["gamma1_point"], "wrenches.gamma1_point");
    if (w.contains("gamma2_N")) cfg.wrenches.gamma2 = vec3(w["gamma2_N"], "wrenches.gamma2_N");
    if (w.contains("gamma2_point")) cfg.wrenches.gamma2_point = point(w["gamma2_point"], "wrenches.gamma2_point");
    if (w.contains("lambda_u_Nm")) cfg.wrenches.lambda_u = joint_vector(w["lambda_u_Nm"], "wrenches.lambda_u_Nm");
  }

  if (doc.contains("trajectory")) cfg.trajectory = parse_trajectory(doc["trajectory"]);

  if (doc.contains("scara")) {
    const auto& s = doc["scara"];
    reject_unknown(s, {"d1_m", "d2_m", "m1_kg", "m2_kg", "m3_kg", "p_max_m"}, "scara");
    if (s.contains("d1_m")) cfg.scara.d1 = number(s["d1_m"], "scara.d1_m");
    if (s.contains("d2_m")) cfg.scara.d2 = number(s["d2_m"], "scara.d2_m");
    if (s.contains("m1_kg")) cfg.scara.m1 = number(s["m1_kg"], "scara.m1_kg");
    if (s.contains("m2_kg")) cfg.scara.m2 = number(s["m2_kg"], "scara.m2_kg");
    if (s.contains("m3_kg")) cfg.scara.m3 = number(s["m3_kg"], "scara.m3_kg");
    if (s.contains("p_max_m")) cfg.scara.p_max = number(s["p_max_m"], "scara.p_max_m");
  }
  cfg.scara.gravity = cfg.profile.gravity;

  if (doc.contains("seed")) {
    const json& seed = doc["seed"];
    if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0)) {
      throw Error(ErrorCode::ConfigError, "seed must be a non-negative integer");
    }
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }

  if (doc.contains("initial_state")) {
    const auto& s = doc["initial_state"];
    reject_unknown(s, {"theta_rad", "omega_radps"}, "initial_state");
    ChainState init;
    if (s.contains("theta_rad")) init.theta = joint_vector(s["theta_rad"], "initial_state.theta_rad");
    if (s.contains("omega_radps")) init.omega = joint_vector(s["omega_radps"], "initial_state.omega_radps");
    cfg.initial_state = init;
  }

  if (doc.contains("fault_injection")) {
    const auto& f = doc["fault_injection"];
    reject_unknown(f, {"revert_corrections"}, "fault_injection");
    if (f.contains("revert_corrections")) {
      if (!f["revert_corrections"].is_array()) {
        throw Error(ErrorCode::ConfigError, "fault_injection.revert_corrections must be an array");
      }
      for (const auto& id : f["revert_corrections"]) {
        if (!id.is_string()) throw Error(ErrorCode::ConfigError, "correction ids are strings");
        cfg.revert_corrections.push_back(id.get<std::string>());
      }
      (void)revert_corrections(canonical_chain(), cfg.revert_corrections);
    }
  }

  try {
    require_valid(cfg.profile, cfg.friction);
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

inline json profile_json(const AnthropometricProfile& p) {
  return json{{"name", p.name},
              {"lengths_m", p.lengths.values()},
              {"masses_kg", p.inertia.masses},
              {"inertia_model", p.inertia.model == InertiaModel::UniformSlenderRod
                                    ? "uniform_slender_rod"
                                    : "point_mass_distal"},
              {"gravity_mps2", {p.gravity.x(), p.gravity.y(), p.gravity.z()}}};
}

}  // namespace modukin
