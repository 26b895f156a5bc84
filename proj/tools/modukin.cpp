// modukin: kinematics/dynamics pipelines for the modular upper-limb chain.
//
// Exit codes: 0 success, 1 verification or runtime failure, 2 usage/config error.

#include "modukin/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace modukin;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::UsageError:
    case ErrorCode::UnknownProfile:
    case ErrorCode::InvalidProfile:
    case ErrorCode::BadIndex:
    case ErrorCode::OutOfRange:
    case ErrorCode::ConstraintViolated:
    case ErrorCode::NegativeNormal: return 2;
    default: return 1;
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct ScaraArgs {
  double theta1 = 0.0, theta2 = 0.0, p = 0.0;
  double dtheta1 = 0.0, dtheta2 = 0.0, dp = 0.0;
  double ddtheta1 = 0.0, ddtheta2 = 0.0, ddp = 0.0;
  std::optional<double> d1, d2, m1, m2, m3, p_max;
  std::vector<double> fext{0.0, 0.0, 0.0};
  double mass = 0.0;
  std::optional<double> weight;
  double accel_x = 0.0, accel_y = 0.0, accel_z = 0.0;
  std::optional<double> mu_min, mu_max, normal_cap;
};

void add_scara_geometry(CLI::App* cmd, ScaraArgs& a) {
  cmd->add_option("--theta1", a.theta1, "joint 1 angle, rad");
  cmd->add_option("--theta2", a.theta2, "joint 2 angle, rad");
  cmd->add_option("--p", a.p, "prismatic extension, m");
  cmd->add_option("--d1", a.d1, "link 1 length, m");
  cmd->add_option("--d2", a.d2, "link 2 length, m");
  cmd->add_option("--p-max", a.p_max, "prismatic stroke, m");
}

std::string run_scara(const std::string& action, const ScaraArgs& a, const RunConfig& cfg) {
  using namespace scara;
  ScaraParams params = cfg.scara;
  if (a.d1) params.d1 = *a.d1;
  if (a.d2) params.d2 = *a.d2;
  if (a.m1) params.m1 = *a.m1;
  if (a.m2) params.m2 = *a.m2;
  if (a.m3) params.m3 = *a.m3;
  if (a.p_max) params.p_max = *a.p_max;

  ScaraState s;
  s.q = {a.theta1, a.theta2, a.p};
  s.qd = {a.dtheta1, a.dtheta2, a.dp};
  s.qdd = {a.ddtheta1, a.ddtheta2, a.ddp};

  json out;
  if (action == "fk") {
    validate(s, params);
    const Vec x = scara_fk(s, params.d1, params.d2);
    out = {{"X", x.x()}, {"Y", x.y()}, {"Z", x.z()}};
  } else if (action == "jac") {
    validate(s, params);
    const Mat j = scara_jacobian(s, params.d1, params.d2);
    out["J"] = json::array();
    for (int r = 0; r < 3; ++r) out["J"].push_back({j(r, 0), j(r, 1), j(r, 2)});
  } else if (action == "idyn") {
    const Vec tau = scara_inverse_dynamics(s, params, Vec3(a.fext[0], a.fext[1], a.fext[2]));
    out = {{"tau", {tau[0], tau[1], tau[2]}}};
  } else {
    const double weight = a.weight.value_or(a.mass * params.gravity.norm());
    const auto res = grasp_statics(a.mass, weight, Vec3(a.accel_x, a.accel_y, a.accel_z),
                                   GraspOptions{a.mu_min, a.mu_max, a.normal_cap});
    if (const auto* load = std::get_if<GraspLoad>(&res)) {
      out = {{"N_L", load->N_L}, {"N_R", load->N_R}, {"F_y", load->F_y}, {"F_z", load->F_z}};
    } else {
      out = {{"infeasible", std::get<GraspInfeasible>(res).reason}};
    }
  }
  return out.dump();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"modukin - kinematics and dynamics of a modular upper-limb rehabilitation chain"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string profiles;
  std::optional<std::uint64_t> seed;
  RunOptions opts;
  std::string manifest_path;
  ScaraArgs scara_args;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--profiles", profiles, "comma-separated built-in profiles to sweep");
    cmd->add_option("--seed", seed, "seed for randomized checks");
  };

  auto* fk = app.add_subcommand("fk", "point positions, velocities and accelerations along the trajectory");
  auto* idyn = app.add_subcommand("idyn", "inverse-dynamics torque breakdown along the trajectory");
  auto* fdyn = app.add_subcommand("fdyn", "forward-dynamics simulation with RK4");
  auto* check = app.add_subcommand("check", "run the self-verification oracle suite");
  for (auto* cmd : {fk, idyn, fdyn, check}) add_common(cmd);
  fdyn->add_option("--torque", opts.torque_source, "torques.csv from idyn, or 'zero'");
  fdyn->add_option("--duration", opts.duration, "simulated time, s");
  fdyn->add_option("--dt", opts.dt, "integration step, s");

  auto* rerun = app.add_subcommand("rerun", "re-execute a run from its manifest.json");
  rerun->add_option("--manifest", manifest_path, "manifest.json of an earlier run")
      ->required()
      ->check(CLI::ExistingFile);
  rerun->add_option("--out", out_dir, "output directory");

  auto* scara_cmd = app.add_subcommand("scara", "SCARA reference model");
  scara_cmd->require_subcommand(1);
  scara_cmd->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  auto* s_fk = scara_cmd->add_subcommand("fk", "tool position");
  auto* s_jac = scara_cmd->add_subcommand("jac", "Jacobian");
  auto* s_idyn = scara_cmd->add_subcommand("idyn", "joint torques/force");
  auto* s_grasp = scara_cmd->add_subcommand("grasp", "jaw forces holding an object");
  for (auto* cmd : {s_fk, s_jac, s_idyn}) add_scara_geometry(cmd, scara_args);
  s_idyn->add_option("--dtheta1", scara_args.dtheta1);
  s_idyn->add_option("--dtheta2", scara_args.dtheta2);
  s_idyn->add_option("--dp", scara_args.dp);
  s_idyn->add_option("--ddtheta1", scara_args.ddtheta1);
  s_idyn->add_option("--ddtheta2", scara_args.ddtheta2);
  s_idyn->add_option("--ddp", scara_args.ddp);
  s_idyn->add_option("--m1", scara_args.m1);
  s_idyn->add_option("--m2", scara_args.m2);
  s_idyn->add_option("--m3", scara_args.m3);
  s_idyn->add_option("--fext", scara_args.fext, "external force x y z, N")->expected(3);
  s_grasp->add_option("--mass", scara_args.mass, "object mass, kg")->required();
  s_grasp->add_option("--weight", scara_args.weight, "object weight, N (default m*|g|)");
  s_grasp->add_option("--accel-x", scara_args.accel_x);
  s_grasp->add_option("--accel-y", scara_args.accel_y);
  s_grasp->add_option("--accel-z", scara_args.accel_z);
  s_grasp->add_option("--mu-min", scara_args.mu_min);
  s_grasp->add_option("--mu-max", scara_args.mu_max);
  s_grasp->add_option("--normal-cap", scara_args.normal_cap, "largest jaw normal force, N");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (rerun->parsed()) {
      return rerun_manifest(manifest_path, out_dir) ? 0 : 1;
    }

    json doc = json::object();
    if (!config_path.empty()) {
      try {
        doc = json::parse(io::read_file(config_path));
      } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ConfigError, config_path + ": " + e.what());
      }
    }
    if (seed) doc["seed"] = *seed;
    const RunConfig cfg = parse_config(doc);

    if (scara_cmd->parsed()) {
      std::string action = "grasp";
      if (s_fk->parsed()) action = "fk";
      if (s_jac->parsed()) action = "jac";
      if (s_idyn->parsed()) action = "idyn";
      std::cout << run_scara(action, scara_args, cfg) << "\n";
      return 0;
    }

    for (auto* cmd : {fk, idyn, fdyn, check}) {
      if (cmd->parsed()) opts.subcommand = cmd->get_name();
    }
    opts.config_path = config_path.empty() ? "" : fs::absolute(config_path).generic_string();
    if (opts.torque_source != "zero") {
      opts.torque_source = fs::absolute(opts.torque_source).generic_string();
    }
    if (opts.subcommand == "fdyn" && !(opts.dt > 0.0)) {
      std::cerr << "error: --dt must be positive\n";
      return 2;
    }

    bool ok = true;
    if (!profiles.empty()) {
      ok = run_sweep(cfg, opts, out_dir, split_list(profiles));
    } else {
      ok = run_subcommand(cfg, opts, out_dir, &std::cout);
    }
    if (opts.subcommand == "check") std::cout << (ok ? "all checks passed\n" : "checks FAILED\n");
    return ok ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
