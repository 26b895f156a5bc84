#pragma once

#include "modukin/checks.hpp"
#include "modukin/config.hpp"

#include <future>

// Batch pipelines behind the CLI subcommands. Each writes plot-ready CSV/JSON
// into an output directory together with a manifest that reproduces the run.

namespace modukin {

inline constexpr std::string_view kToolVersion = "1.0.0";

namespace fs = std::filesystem;

inline json trajectory_json(const TrajectorySpec& spec) {
  json j;
  j["sample_rate_hz"] = spec.sample_rate;
  json joints = json::array();
  if (spec.kind == TrajectoryKind::Quintic) {
    j["kind"] = "quintic";
    for (const auto& q : spec.quintic) joints.push_back({q.start, q.end, q.duration});
  } else {
    j["kind"] = "sinusoidal";
    j["duration_s"] = spec.sinusoid_window;
    for (const auto& s : spec.sinusoid) joints.push_back({s.amplitude, s.frequency_hz, s.phase, s.offset});
  }
  j["joints"] = joints;
  return j;
}

inline std::string trajectory_hash(const TrajectorySpec& spec) {
  return io::fnv1a_hex(trajectory_json(spec).dump());
}

/// Inputs of one run beyond the config itself.
struct RunOptions {
  std::string subcommand;
  std::string config_path;
  // fdyn
  std::string torque_source = "zero";
  double duration = 1.0;
  double dt = 1e-3;
};

inline json manifest_json(const RunConfig& cfg, const RunOptions& opts, const fs::path& out) {
  json m;
  m["tool"] = "modukin";
  m["tool_version"] = kToolVersion;
  m["subcommand"] = opts.subcommand;
  m["config_path"] = opts.config_path;
  m["profile"] = cfg.profile.name;
  m["trajectory_hash"] = trajectory_hash(cfg.trajectory);
  m["output_dir"] = out.generic_string();
  m["seed"] = cfg.seed;
  if (opts.subcommand == "fdyn") {
    m["fdyn"] = {{"torque", opts.torque_source}, {"duration_s", opts.duration}, {"dt_s", opts.dt}};
  }
  m["config"] = cfg.source;
  return m;
}

inline void write_manifest(const RunConfig& cfg, const RunOptions& opts, const fs::path& out) {
  io::write_file(out / "manifest.json", manifest_json(cfg, opts, out).dump(2) + "\n");
}

inline std::vector<TimedState> trajectory_series(const TrajectorySpec& spec) {
  return sample_series(spec, 0.0, spec.duration());
}

// ---------------------------------------------------------------------------
// fk
// ---------------------------------------------------------------------------

inline std::vector<std::string> point_columns() {
  std::vector<std::string> cols{"t"};
  for (auto id : kAllPoints) {
    for (const char* axis : {"x", "y", "z"}) cols.push_back(std::string(1, label_of(id)) + "_" + axis);
  }
  return cols;
}

inline std::vector<std::string> joint_state_columns() {
  std::vector<std::string> cols{"t"};
  for (const char* name : {"theta", "omega", "alpha"}) {
    for (int k = 1; k <= kDof; ++k) cols.push_back(name + std::to_string(k));
  }
  return cols;
}

inline std::vector<double> joint_state_row(double t, const JointState& s) {
  std::vector<double> row{t};
  for (const auto* v : {&s.theta, &s.omega, &s.alpha}) {
    for (int k = 0; k < kDof; ++k) row.push_back((*v)[k]);
  }
  return row;
}

inline void run_fk(const RunConfig& cfg, const fs::path& out) {
  io::CsvWriter pos(point_columns()), vel(point_columns()), acc(point_columns());
  io::CsvWriter joints(joint_state_columns());
  for (const auto& [t, state] : trajectory_series(cfg.trajectory)) {
    const auto pose = full_pose(state, cfg.profile.lengths);
    std::vector<double> p{t}, v{t}, a{t};
    for (const auto& [id, pk] : pose) {
      for (int i = 0; i < 3; ++i) {
        p.push_back(pk.position[i]);
        v.push_back(pk.velocity[i]);
        a.push_back(pk.acceleration[i]);
      }
    }
    pos.numbers(p);
    vel.numbers(v);
    acc.numbers(a);
    joints.numbers(joint_state_row(t, state));
  }
  io::write_file(out / "points_position.csv", pos.str());
  io::write_file(out / "points_velocity.csv", vel.str());
  io::write_file(out / "points_acceleration.csv", acc.str());
  io::write_file(out / "joints_state.csv", joints.str());
}

// ---------------------------------------------------------------------------
// idyn
// ---------------------------------------------------------------------------

struct TorquePeaks {
  JointVector inertial = JointVector::Zero();
  JointVector coriolis = JointVector::Zero();
  JointVector gravitational = JointVector::Zero();
  JointVector friction = JointVector::Zero();
  JointVector external = JointVector::Zero();
  JointVector total = JointVector::Zero();
};

inline TorquePeaks run_idyn(const RunConfig& cfg, const fs::path& out) {
  io::CsvWriter csv({"t", "dof", "inertial", "coriolis", "gravitational", "friction", "external",
                     "total"});
  TorquePeaks peaks;
  for (const auto& [t, state] : trajectory_series(cfg.trajectory)) {
    const auto b = inverse_dynamics(state, cfg.profile, cfg.friction, cfg.wrenches);
    for (int k = 0; k < kDof; ++k) {
      csv.row({io::format_number(t), std::to_string(k + 1), io::format_number(b.inertial[k]),
               io::format_number(b.coriolis[k]), io::format_number(b.gravitational[k]),
               io::format_number(b.friction[k]), io::format_number(b.external[k] + b.disturbance[k]),
               io::format_number(b.total[k])});
    }
    peaks.inertial = peaks.inertial.cwiseMax(b.inertial.cwiseAbs());
    peaks.coriolis = peaks.coriolis.cwiseMax(b.coriolis.cwiseAbs());
    peaks.gravitational = peaks.gravitational.cwiseMax(b.gravitational.cwiseAbs());
    peaks.friction = peaks.friction.cwiseMax(b.friction.cwiseAbs());
    peaks.external = peaks.external.cwiseMax((b.external + b.disturbance).cwiseAbs());
    peaks.total = peaks.total.cwiseMax(b.total.cwiseAbs());
  }
  io::write_file(out / "torques.csv", csv.str());

  auto vec = [](const JointVector& v) {
    std::vector<double> out(v.data(), v.data() + kDof);
    return out;
  };
  const json summary = {{"profile", cfg.profile.name},
                        {"units", "N*m"},
                        {"peak_abs",
                         {{"inertial", vec(peaks.inertial)},
                          {"coriolis", vec(peaks.coriolis)},
                          {"gravitational", vec(peaks.gravitational)},
                          {"friction", vec(peaks.friction)},
                          {"external", vec(peaks.external)},
                          {"total", vec(peaks.total)}}}};
  io::write_file(out / "torques_summary.json", summary.dump(2) + "\n");
  return peaks;
}

// ---------------------------------------------------------------------------
// fdyn
// ---------------------------------------------------------------------------

/// Per-DOF torque samples on a time grid, read from a long-format torques.csv
/// and interpolated with Catmull-Rom cubics. Held constant outside the grid.
class TorqueSchedule {
 public:
  static TorqueSchedule from_csv(const io::CsvTable& table) {
    const int tc = table.column("t");
    const int dc = table.column("dof");
    const int vc = table.column("total");
    std::map<double, JointVector> by_time;
    std::map<double, int> filled;
    for (const auto& row : table.rows) {
      const double t = io::parse_number(row[static_cast<std::size_t>(tc)]);
      const int dof = static_cast<int>(io::parse_number(row[static_cast<std::size_t>(dc)]));
      check_dof(dof);
      auto [it, inserted] = by_time.try_emplace(t, JointVector::Zero());
      it->second[dof - 1] = io::parse_number(row[static_cast<std::size_t>(vc)]);
      ++filled[t];
    }
    TorqueSchedule s;
    for (const auto& [t, v] : by_time) {
      if (filled[t] != kDof) {
        throw Error(ErrorCode::ConfigError, "torque CSV missing DOFs at t = " + io::format_number(t));
      }
      s.times_.push_back(t);
      s.values_.push_back(v);
    }
    if (s.times_.empty()) throw Error(ErrorCode::ConfigError, "torque CSV has no rows");
    return s;
  }

  JointVector operator()(double t) const {
    const std::size_t n = times_.size();
    if (n == 1 || t <= times_.front()) return values_.front();
    if (t >= times_.back()) return values_.back();
    const auto upper = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t i = static_cast<std::size_t>(upper - times_.begin()) - 1;
    const double t0 = times_[i], t1 = times_[i + 1];
    const double h = t1 - t0;
    const double u = (t - t0) / h;
    auto slope = [&](std::size_t j) -> JointVector {
      const std::size_t lo = j == 0 ? 0 : j - 1;
      const std::size_t hi = j + 1 >= n ? n - 1 : j + 1;
      return (values_[hi] - values_[lo]) / (times_[hi] - times_[lo]);
    };
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * values_[i] + (u3 - 2 * u2 + u) * h * slope(i) +
           (-2 * u3 + 3 * u2) * values_[i + 1] + (u3 - u2) * h * slope(i + 1);
  }

 private:
  std::vector<double> times_;
  std::vector<JointVector> values_;
};

inline void run_fdyn(const RunConfig& cfg, const RunOptions& opts, const fs::path& out) {
  if (!(opts.dt > 0.0) || !std::isfinite(opts.dt)) throw Error(ErrorCode::UsageError, "dt must be > 0");
  if (!(opts.duration > 0.0)) throw Error(ErrorCode::UsageError, "duration must be > 0");

  TorqueFunction torque;
  if (opts.torque_source == "zero") {
    torque = [](double, const JointVector&, const JointVector&) { return JointVector::Zero().eval(); };
  } else {
    auto schedule = std::make_shared<TorqueSchedule>(
        TorqueSchedule::from_csv(io::parse_csv(io::read_file(opts.torque_source))));
    torque = [schedule](double t, const JointVector&, const JointVector&) { return (*schedule)(t); };
  }

  ChainState init;
  if (cfg.initial_state) {
    init = *cfg.initial_state;
  } else {
    const JointState s0 = sample(cfg.trajectory, 0.0);
    init = {s0.theta, s0.omega};
  }

  const auto steps = static_cast<int>(std::llround(opts.duration / opts.dt));
  const auto sim = simulate(init, 0.0, opts.dt, steps, torque, cfg.profile, cfg.friction, cfg.wrenches);

  io::CsvWriter state_csv(joint_state_columns());
  io::CsvWriter energy_csv({"t", "kinetic", "potential", "total"});
  for (const auto& [t, s] : sim) {
    state_csv.numbers(joint_state_row(t, s));
    const double ke = kinetic_energy(s.theta, s.omega, cfg.profile);
    const double pe = potential_energy(s.theta, cfg.profile);
    energy_csv.numbers({t, ke, pe, ke + pe});
  }
  io::write_file(out / "sim_state.csv", state_csv.str());
  io::write_file(out / "energy.csv", energy_csv.str());
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

inline checks::CheckReport run_check(const RunConfig& cfg, const fs::path& out) {
  auto report = checks::run_all(cfg);
  io::write_file(out / "check_report.json", report.to_json().dump(2) + "\n");
  return report;
}

// ---------------------------------------------------------------------------
// Dispatch, manifests and profile sweeps
// ---------------------------------------------------------------------------

/// Runs one subcommand into `out` and writes its manifest. Returns false only
/// when a check run found failures.
inline bool run_subcommand(const RunConfig& cfg, const RunOptions& opts, const fs::path& out,
                           std::ostream* log = nullptr) {
  fs::create_directories(out);
  bool ok = true;
  if (opts.subcommand == "fk") {
    run_fk(cfg, out);
  } else if (opts.subcommand == "idyn") {
    run_idyn(cfg, out);
  } else if (opts.subcommand == "fdyn") {
    run_fdyn(cfg, opts, out);
  } else if (opts.subcommand == "check") {
    const auto report = run_check(cfg, out);
    if (log) {
      for (const auto& c : report.checks) {
        *log << (c.passed ? "PASS " : "FAIL ") << c.name << "  max_error=" << io::format_number(c.max_error)
             << "  tol=" << io::format_number(c.tolerance) << "\n";
      }
    }
    ok = report.all_passed();
  } else {
    throw Error(ErrorCode::UsageError, "unknown subcommand '" + opts.subcommand + "'");
  }
  write_manifest(cfg, opts, out);
  return ok;
}

/// The config with its profile swapped for a built-in one, keeping everything else.
inline RunConfig with_builtin_profile(const RunConfig& cfg, const std::string& name) {
  json doc = cfg.source;
  doc.erase("lengths_m");
  doc.erase("masses_kg");
  doc.erase("name");
  doc["profile"] = name;
  return parse_config(doc);
}

/// Runs the subcommand once per profile into sibling directories out/<profile>.
inline bool run_sweep(const RunConfig& cfg, const RunOptions& opts, const fs::path& out,
                      const std::vector<std::string>& profiles) {
  std::vector<RunConfig> configs;
  for (const auto& name : profiles) configs.push_back(with_builtin_profile(cfg, name));
  std::vector<std::future<bool>> jobs;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    jobs.push_back(std::async(std::launch::async, [&, i] {
      return run_subcommand(configs[i], opts, out / profiles[i]);
    }));
  }
  bool ok = true;
  for (auto& j : jobs) ok = j.get() && ok;
  return ok;
}

/// Re-executes a run from its manifest into `out`.
inline bool rerun_manifest(const fs::path& manifest_path, const fs::path& out) {
  json m;
  try {
    m = json::parse(io::read_file(manifest_path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  if (!m.contains("config") || !m.contains("subcommand")) {
    throw Error(ErrorCode::ConfigError, "manifest lacks config or subcommand");
  }
  const RunConfig cfg = parse_config(m["config"]);
  RunOptions opts;
  opts.subcommand = m["subcommand"].get<std::string>();
  opts.config_path = m.value("config_path", "");
  if (m.contains("fdyn")) {
    opts.torque_source = m["fdyn"]["torque"].get<std::string>();
    opts.duration = m["fdyn"]["duration_s"].get<double>();
    opts.dt = m["fdyn"]["dt_s"].get<double>();
  }
  return run_subcommand(cfg, opts, out);
}

}  // namespace modukin
