#include "vms_cli/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vms/dynamics.hpp"
#include "vms/inertia.hpp"
#include "vms/kinematics.hpp"
#include "vms/validation.hpp"

namespace vms::cli {

namespace {

using Eigen::VectorXd;
using json = nlohmann::json;

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* key : allowed) ok = ok || it.key() == key;
    if (!ok) throw std::runtime_error(where + ": unknown key '" + it.key() + "'");
  }
}

VectorXd vector_field(const json& obj, const char* key, int size, const std::string& where) {
  if (!obj.contains(key)) return VectorXd::Zero(size);
  const std::vector<double> v = obj.at(key).get<std::vector<double>>();
  if (static_cast<int>(v.size()) != size) {
    throw std::runtime_error(where + "." + key + ": expected " + std::to_string(size) + " values, got " +
                             std::to_string(v.size()));
  }
  return Eigen::Map<const VectorXd>(v.data(), size);
}

JointConfig parse_base(const VmsModel& model, const json& h) {
  switch (model.base.joint.type) {
    case JointType::Floating: {
      reject_unknown(h, {"rotation", "translation"}, "init.h");
      Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
      if (h.contains("rotation")) {
        const auto rows = h.at("rotation").get<std::vector<std::vector<double>>>();
        if (rows.size() != 3) throw std::runtime_error("init.h.rotation: expected 3 rows");
        for (int i = 0; i < 3; ++i) {
          if (rows[static_cast<size_t>(i)].size() != 3) throw std::runtime_error("init.h.rotation: expected 3 columns");
          for (int j = 0; j < 3; ++j) R(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
        if (!is_rotation(R, 1e-9)) throw std::runtime_error("init.h.rotation: not a rotation matrix");
      }
      const VectorXd t = vector_field(h, "translation", 3, "init.h");
      return Pose(R, t).normalized();
    }
    case JointType::Planar: {
      const std::vector<double> c = h.get<std::vector<double>>();
      if (c.size() != 3) throw std::runtime_error("init.h: planar base expects [theta, x, y]");
      return PlanarConfig{c[0], c[1], c[2]};
    }
    default:
      throw std::runtime_error("init.h: fixed base has no configuration");
  }
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_matrix(std::ostream& out, const std::string& name, const Eigen::MatrixXd& M) {
  static const Eigen::IOFormat format(Eigen::FullPrecision, 0, "  ", "\n", "  ", "", "", "");
  out << name << " (" << M.rows() << "x" << M.cols() << ")\n" << M.format(format) << "\n";
}

JointConfig base_from_list(const VmsModel& model, const std::string& text) {
  if (text.empty()) return zero_config(model.base.joint);
  const std::vector<double> v = parse_list(text);
  switch (model.base.joint.type) {
    case JointType::Floating: {
      if (v.size() != 6) throw UsageError("--base expects 6 twist coordinates for a floating base");
      return exp_se3(Twist(Eigen::Map<const VectorXd>(v.data(), 6)), 1.0);
    }
    case JointType::Planar:
      if (v.size() != 3) throw UsageError("--base expects theta,x,y for a planar base");
      return PlanarConfig{v[0], v[1], v[2]};
    default:
      throw UsageError("--base is not accepted for a fixed base");
  }
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  if (text.find_first_not_of(" \t") == std::string::npos) return values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("malformed number '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) throw UsageError("malformed number '" + item + "'");
    values.push_back(v);
  }
  return values;
}

State initial_state(const VmsModel& model, const std::optional<std::filesystem::path>& init, std::uint64_t seed) {
  const int b = model.b();
  const int n = model.n();
  JointConfig h = zero_config(model.base.joint);
  VectorXd q = VectorXd::Zero(n);
  VectorXd v;
  VectorXd qdot;
  if (init) {
    const json doc = read_json(*init);
    reject_unknown(doc, {"h", "q", "v", "qdot"}, init->string());
    if (doc.contains("h")) h = parse_base(model, doc.at("h"));
    q = vector_field(doc, "q", n, "init");
    v = vector_field(doc, "v", b, "init");
    qdot = vector_field(doc, "qdot", n, "init");
  } else {
    StateSampler sampler(model, seed);
    v = 0.5 * sampler.normal(b);
    qdot = 0.5 * sampler.normal(n);
  }
  return state_from_velocities(model, h, q, v, qdot);
}

InputSchedule load_schedule(const VmsModel& model, const std::filesystem::path& path) {
  const json doc = read_json(path);
  reject_unknown(doc, {"segments"}, path.string());
  InputSchedule schedule;
  const json& segments = doc.at("segments");
  for (size_t i = 0; i < segments.size(); ++i) {
    const json& s = segments[i];
    const std::string where = "segments[" + std::to_string(i) + "]";
    reject_unknown(s, {"start", "base_wrench", "joint_torque", "ee_wrench"}, where);
    Inputs in;
    in.base_wrench = vector_field(s, "base_wrench", model.b(), where);
    in.joint_torque = vector_field(s, "joint_torque", model.n(), where);
    in.ee_wrench = vector_field(s, "ee_wrench", 6, where);
    schedule.add(s.value("start", 0.0), in);
  }
  return schedule;
}

std::string csv_header(const VmsModel& model) {
  std::string h = "t";
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) h += ",R" + std::to_string(i) + std::to_string(j);
  h += ",x,y,z";
  for (int i = 1; i <= model.n(); ++i) h += ",q" + std::to_string(i);
  for (int i = 1; i <= model.b(); ++i) h += ",p" + std::to_string(i);
  for (int i = 1; i <= model.n(); ++i) h += ",pi" + std::to_string(i);
  h += ",H_kin,H_pot,power_in";
  for (int i = 1; i <= model.b(); ++i) h += ",momentum" + std::to_string(i);
  return h;
}

void write_csv(const VmsModel& model, const std::vector<TrajectoryRecord>& records, std::ostream& out) {
  out << csv_header(model) << "\n";
  for (const TrajectoryRecord& r : records) {
    const Pose H = base_pose(model, r.state.h);
    std::string line = fmt17(r.t);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) line += "," + fmt17(H.rotation()(i, j));
    for (int i = 0; i < 3; ++i) line += "," + fmt17(H.translation()(i));
    for (Eigen::Index i = 0; i < r.state.q.size(); ++i) line += "," + fmt17(r.state.q(i));
    for (Eigen::Index i = 0; i < r.state.p.size(); ++i) line += "," + fmt17(r.state.p(i));
    for (Eigen::Index i = 0; i < r.state.pi.size(); ++i) line += "," + fmt17(r.state.pi(i));
    line += "," + fmt17(r.H_kin) + "," + fmt17(r.H_pot) + "," + fmt17(r.power_in);
    for (Eigen::Index i = 0; i < r.momentum_transport.size(); ++i) line += "," + fmt17(r.momentum_transport(i));
    out << line << "\n";
  }
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (!(config.dt > 0.0)) {
    err << "error: --dt must be positive\n";
    return kUsage;
  }
  if (!(config.duration >= config.dt)) {
    err << "error: --duration must be at least --dt\n";
    return kUsage;
  }
  try {
    const VmsModel model = load_model(config.model);
    const State x0 = initial_state(model, config.init, config.seed);
    InputSchedule schedule = config.inputs ? load_schedule(model, *config.inputs) : InputSchedule(Inputs::Zero());
    schedule.set_gravity(config.gravity);
    const auto records = simulate(model, config.formulation, x0, schedule, config.dt, config.duration);
    std::ofstream file(config.out);
    if (!file) throw std::runtime_error("cannot write " + config.out.string());
    write_csv(model, records, file);
    out << "wrote " << records.size() << " rows to " << config.out.string() << "\n";
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

int cmd_validate(const std::filesystem::path& model_path, int samples, std::uint64_t seed, std::ostream& out,
                 std::ostream& err) {
  if (samples < 1) {
    err << "error: --samples must be at least 1\n";
    return kUsage;
  }
  try {
    const VmsModel model = load_model(model_path);
    const ValidationReport report = validate(model, samples, seed);
    out << "model " << model_path.string() << "\n" << report.format();
    if (report.all_pass()) return kOk;
    err << "failed checks:";
    for (const CheckResult& c : report.checks) {
      if (!c.pass()) err << " " << c.name;
    }
    err << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

int cmd_inspect(const std::filesystem::path& model_path, const std::string& q_spec, const std::string& h_spec,
                std::ostream& out, std::ostream& err) {
  VmsModel model;
  try {
    model = load_model(model_path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  VectorXd q;
  JointConfig h;
  try {
    const std::vector<double> values = parse_list(q_spec);
    if (static_cast<int>(values.size()) != model.n()) {
      throw UsageError("--q has " + std::to_string(values.size()) + " values, model has " + std::to_string(model.n()) +
                       " joints");
    }
    q = Eigen::Map<const VectorXd>(values.data(), model.n());
    h = base_from_list(model, h_spec);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }
  try {
    const FkCache cache = forward_kinematics(model, h, q);
    const MassBlocks blocks = mass_blocks(model, cache);
    out << "base " << to_string(model.base.joint.type) << " b=" << model.b() << " n=" << model.n() << "\n";
    if (model.b() > 0) print_matrix(out, "M_b", blocks.Mb);
    if (model.b() > 0 && model.n() > 0) {
      print_matrix(out, "M_bm", blocks.Mbm);
      print_matrix(out, "A", blocks.A);
    }
    if (model.n() > 0) {
      print_matrix(out, "M_m", blocks.Mm);
      if (model.b() > 0) print_matrix(out, "M_m_hat", blocks.Mm_hat);
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(blocks.full(), Eigen::EigenvaluesOnly);
    print_matrix(out, "eigenvalues", eig.eigenvalues().transpose());
    print_matrix(out, "pose base", cache.base.matrix());
    for (int i = 0; i < model.n(); ++i) {
      print_matrix(out, "pose " + model.links[static_cast<size_t>(i)].name, (cache.base * cache.links[static_cast<size_t>(i)]).matrix());
    }
    print_matrix(out, "pose end_effector", (cache.base * cache.end_effector).matrix());
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamics of vehicle-manipulator systems", "vms"};
  app.require_subcommand(1);

  RunConfig config;
  std::string formulation = "ph-decoupled";
  std::string init;
  std::string inputs;
  bool no_gravity = false;
  auto* sim = app.add_subcommand("simulate", "Integrate a trajectory and write it as CSV");
  sim->add_option("--model", config.model, "Model file (JSON)")->required();
  sim->add_option("--formulation", formulation, "ph, ph-decoupled or lagrangian")
      ->check(CLI::IsMember({"ph", "ph-decoupled", "lagrangian"}));
  sim->add_option("--dt", config.dt, "Time step [s]")->required();
  sim->add_option("--duration", config.duration, "Simulated time [s]")->required();
  sim->add_option("--out", config.out, "Output CSV path")->required();
  sim->add_option("--seed", config.seed, "Seed for the default initial velocities");
  sim->add_flag("--no-gravity", no_gravity, "Disable the gravity potential");
  sim->add_option("--init", init, "Initial state file (JSON)");
  sim->add_option("--inputs", inputs, "Piecewise-constant input schedule (JSON)");

  std::string val_model;
  int samples = 100;
  std::uint64_t seed = 1;
  auto* val = app.add_subcommand("validate", "Check formulation equivalences and invariants on random states");
  val->add_option("--model", val_model, "Model file (JSON)")->required();
  val->add_option("--samples", samples, "Number of random samples");
  val->add_option("--seed", seed, "PRNG seed");

  std::string ins_model;
  std::string q_spec;
  std::string h_spec;
  auto* ins = app.add_subcommand("inspect", "Print mass matrices and poses at a configuration");
  ins->add_option("--model", ins_model, "Model file (JSON)")->required();
  ins->add_option("--q", q_spec, "Joint positions, comma separated");
  ins->add_option("--base", h_spec, "Base configuration: twist (floating) or theta,x,y (planar)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  if (*sim) {
    config.formulation = parse_formulation(formulation);
    config.gravity = !no_gravity;
    if (!init.empty()) config.init = init;
    if (!inputs.empty()) config.inputs = inputs;
    return cmd_simulate(config, out, err);
  }
  if (*val) return cmd_validate(val_model, samples, seed, out, err);
  return cmd_inspect(ins_model, q_spec, h_spec, out, err);
}

}  // namespace vms::cli
