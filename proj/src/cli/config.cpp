// Copyright 2026 The fblpg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fblpg/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace fblpg::cli {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const std::string& s : items) out += "\n  " + s;
  return out;
}

std::string child_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

template <typename T>
const char* type_name() {
  if constexpr (std::is_same_v<T, double>) return "a number";
  else if constexpr (std::is_same_v<T, std::string>) return "a string";
  else if constexpr (std::is_integral_v<T>) return "an integer";
  else return "a list";
}

class Reader {
 public:
  std::vector<std::string> problems;

  void check_keys(const YAML::Node& node, const std::string& path,
                  std::initializer_list<const char*> allowed) {
    if (!node.IsMap()) {
      problems.push_back((path.empty() ? "config" : path) + ": expected a mapping");
      return;
    }
    for (const auto& kv : node) {
      const std::string key = kv.first.as<std::string>();
      bool known = false;
      for (const char* a : allowed) known = known || key == a;
      if (!known) problems.push_back(child_path(path, key) + ": unknown key");
    }
  }

  template <typename T>
  void get(const YAML::Node& node, const char* key, const std::string& path, T& out) {
    const YAML::Node v = node[key];
    if (!v) return;
    try {
      out = v.as<T>();
    } catch (const YAML::Exception&) {
      problems.push_back(child_path(path, key) + ": expected " + type_name<T>());
    }
  }

  template <typename E>
  void get_enum(const YAML::Node& node, const char* key, const std::string& path,
                std::initializer_list<std::pair<const char*, E>> names, E& out) {
    std::string text;
    const std::size_t before = problems.size();
    get(node, key, path, text);
    if (text.empty() || problems.size() != before) return;
    std::string options;
    for (const auto& [name, value] : names) {
      if (text == name) {
        out = value;
        return;
      }
      options += options.empty() ? name : std::string(", ") + name;
    }
    problems.push_back(child_path(path, key) + ": '" + text + "' is not one of " + options);
  }

  void require(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
};

const std::initializer_list<std::pair<const char*, ScenarioKind>> kScenarios = {
    {"double_pendulum", ScenarioKind::kDoublePendulum},
    {"inspan_synthetic", ScenarioKind::kInSpanSynthetic},
    {"linear_test", ScenarioKind::kLinearTest}};
const std::initializer_list<std::pair<const char*, BaselineKind>> kBaselines = {
    {"none", BaselineKind::kNone},
    {"sum_of_past", BaselineKind::kSumOfPast},
    {"mean_of_past", BaselineKind::kMeanOfPast}};
const std::initializer_list<std::pair<const char*, MeasurementMode>> kMeasurements = {
    {"exact", MeasurementMode::kExact},
    {"numerical_differentiation", MeasurementMode::kNumericalDifferentiation}};
const std::initializer_list<std::pair<const char*, BasisKind>> kBases = {
    {"rbf", BasisKind::kGaussianRbf}, {"polynomial", BasisKind::kPolynomial}};
const std::initializer_list<std::pair<const char*, InitialMode>> kInitial = {
    {"rest", InitialMode::kRest},
    {"on_reference", InitialMode::kOnReference},
    {"explicit", InitialMode::kExplicit}};

template <typename E>
const char* enum_name(std::initializer_list<std::pair<const char*, E>> names, E value) {
  for (const auto& [name, v] : names) {
    if (v == value) return name;
  }
  return "";
}

void set_path(YAML::Node node, const std::vector<std::string>& keys, std::size_t i,
              const YAML::Node& value) {
  if (i + 1 == keys.size()) {
    node[keys[i]] = value;
    return;
  }
  if (!node[keys[i]] || !node[keys[i]].IsMap()) node[keys[i]] = YAML::Node(YAML::NodeType::Map);
  set_path(node[keys[i]], keys, i + 1, value);
}

void apply_override(YAML::Node& root, const std::string& text,
                    std::vector<std::string>& problems) {
  const std::size_t eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    problems.push_back("override '" + text + "': expected KEY=VALUE");
    return;
  }
  std::vector<std::string> keys;
  std::stringstream ss(text.substr(0, eq));
  for (std::string part; std::getline(ss, part, '.');) {
    if (part.empty()) {
      problems.push_back("override '" + text + "': empty key segment");
      return;
    }
    keys.push_back(part);
  }
  try {
    set_path(root, keys, 0, YAML::Load(text.substr(eq + 1)));
  } catch (const YAML::Exception& e) {
    problems.push_back("override '" + text + "': " + e.what());
  }
}

void read_matrix(Reader& r, const YAML::Node& node, const char* key,
                 const std::string& path, std::vector<std::vector<double>>& out,
                 std::size_t rows, std::size_t cols) {
  r.get(node, key, path, out);
  if (!node[key]) return;
  bool ok = out.size() == rows;
  for (const auto& row : out) ok = ok && row.size() == cols;
  r.require(ok, child_path(path, key) + ": expected a " + std::to_string(rows) + "x" +
                    std::to_string(cols) + " matrix");
}

bool positive(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("invalid configuration:" + join(problems)),
      problems_(std::move(problems)) {}

std::string scenario_name(ScenarioKind kind) { return enum_name(kScenarios, kind); }

ExperimentConfig default_config(ScenarioKind kind) {
  ExperimentConfig c;
  c.scenario = kind;
  c.reference = default_reference(2);
  c.linear.L_true = {{-1.5, 0.2, 0.8, 0.0}, {0.3, 0.0, -0.5, 0.4}};
  c.linear.D_true = {{1.2, 0.1}, {-0.2, 0.9}};
  c.linear.L_nominal = {{-1.0, 0.0, 0.5, 0.0}, {0.0, 0.5, -1.0, 0.0}};
  c.linear.D_nominal = {{1.0, 0.0}, {0.0, 1.0}};
  c.basis.lower = {-1.0, -1.0, -1.5, -1.5};
  c.basis.upper = {1.0, 1.0, 1.5, 1.5};
  c.mc.dt_list = {0.04, 0.02, 0.01};
  c.mc.sigma2_list = {0.01, 0.02};
  c.mc.bias_dt_list = {0.04, 0.02, 0.01};
  switch (kind) {
    case ScenarioKind::kDoublePendulum:
      c.basis.counts = {5, 5, 2, 2};
      c.basis.amplitude = 0.05;
      c.initial.mode = InitialMode::kRest;
      break;
    case ScenarioKind::kInSpanSynthetic:
      c.basis.counts = {1, 1, 1, 1};
      c.basis.amplitude = 0.3;
      c.control.dt = 0.02;
      c.control.sigma2 = 0.01;
      c.initial.mode = InitialMode::kOnReference;
      break;
    case ScenarioKind::kLinearTest:
      c.basis.kind = BasisKind::kPolynomial;
      c.basis.degree = 1;
      c.control.dt = 0.02;
      c.control.sigma2 = 0.01;
      c.initial.mode = InitialMode::kOnReference;
      break;
  }
  return c;
}

ExperimentConfig parse_config(const std::string& yaml_text,
                              const std::vector<std::string>& overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError({std::string("config: ") + e.what()});
  }
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  std::vector<std::string> override_problems;
  if (root.IsMap()) {
    for (const std::string& o : overrides) apply_override(root, o, override_problems);
  }
  if (!override_problems.empty()) throw ConfigError(override_problems);

  Reader r;
  r.check_keys(root, "", {"scenario", "seed", "plant", "nominal", "basis", "reference",
                          "control", "initial_state", "linear", "inspan", "mc", "diag"});
  if (!r.problems.empty() && !root.IsMap()) throw ConfigError(r.problems);
  if (!root["scenario"]) r.problems.push_back("scenario: required");
  ScenarioKind kind = ScenarioKind::kDoublePendulum;
  r.get_enum(root, "scenario", "", kScenarios, kind);
  ExperimentConfig c = default_config(kind);
  r.get(root, "seed", "", c.seed);

  if (const YAML::Node n = root["plant"]) {
    r.check_keys(n, "plant", {"m1", "m2", "l1", "l2", "gravity"});
    r.get(n, "m1", "plant", c.plant.m1);
    r.get(n, "m2", "plant", c.plant.m2);
    r.get(n, "l1", "plant", c.plant.l1);
    r.get(n, "l2", "plant", c.plant.l2);
    r.get(n, "gravity", "plant", c.plant.gravity);
  }
  if (const YAML::Node n = root["nominal"]) {
    r.check_keys(n, "nominal", {"scale"});
    r.get(n, "scale", "nominal", c.nominal_scale);
  }
  if (const YAML::Node n = root["basis"]) {
    r.check_keys(n, "basis", {"kind", "counts", "lower", "upper", "width_rule", "amplitude", "degree"});
    r.get_enum(n, "kind", "basis", kBases, c.basis.kind);
    r.get(n, "counts", "basis", c.basis.counts);
    r.get(n, "lower", "basis", c.basis.lower);
    r.get(n, "upper", "basis", c.basis.upper);
    r.get(n, "width_rule", "basis", c.basis.width_rule);
    r.get(n, "amplitude", "basis", c.basis.amplitude);
    r.get(n, "degree", "basis", c.basis.degree);
  }
  if (const YAML::Node n = root["reference"]) {
    r.check_keys(n, "reference", {"channels"});
    if (const YAML::Node ch = n["channels"]) {
      if (!ch.IsSequence()) {
        r.problems.push_back("reference.channels: expected a list of term lists");
      } else {
        c.reference.channels.clear();
        for (std::size_t j = 0; j < ch.size(); ++j) {
          const std::string path = "reference.channels[" + std::to_string(j) + "]";
          std::vector<SinusoidTerm> terms;
          if (!ch[j].IsSequence()) {
            r.problems.push_back(path + ": expected a list of terms");
            continue;
          }
          for (std::size_t i = 0; i < ch[j].size(); ++i) {
            const std::string tp = path + "[" + std::to_string(i) + "]";
            SinusoidTerm t;
            r.check_keys(ch[j][i], tp, {"amplitude", "frequency", "phase"});
            if (ch[j][i].IsMap()) {
              r.get(ch[j][i], "amplitude", tp, t.amplitude);
              r.get(ch[j][i], "frequency", tp, t.frequency);
              r.get(ch[j][i], "phase", tp, t.phase);
            }
            r.require(t.frequency >= 0.0, tp + ".frequency: must be >= 0");
            terms.push_back(t);
          }
          c.reference.channels.push_back(terms);
        }
      }
    }
  }
  if (const YAML::Node n = root["control"]) {
    r.check_keys(n, "control", {"dt", "sigma2", "noise_clip", "pole", "substeps", "horizon_s",
                                "baseline", "measurement"});
    r.get(n, "dt", "control", c.control.dt);
    r.get(n, "sigma2", "control", c.control.sigma2);
    r.get(n, "noise_clip", "control", c.control.noise_clip);
    r.get(n, "pole", "control", c.control.pole);
    r.get(n, "substeps", "control", c.control.substeps);
    r.get(n, "horizon_s", "control", c.control.horizon_s);
    r.get_enum(n, "baseline", "control", kBaselines, c.control.baseline);
    r.get_enum(n, "measurement", "control", kMeasurements, c.control.measurement);
  }
  if (const YAML::Node n = root["initial_state"]) {
    r.check_keys(n, "initial_state", {"mode", "x"});
    r.get_enum(n, "mode", "initial_state", kInitial, c.initial.mode);
    r.get(n, "x", "initial_state", c.initial.x);
  }
  if (const YAML::Node n = root["linear"]) {
    r.check_keys(n, "linear", {"L_true", "D_true", "L_nominal", "D_nominal"});
    read_matrix(r, n, "L_true", "linear", c.linear.L_true, 2, 4);
    read_matrix(r, n, "D_true", "linear", c.linear.D_true, 2, 2);
    read_matrix(r, n, "L_nominal", "linear", c.linear.L_nominal, 2, 4);
    read_matrix(r, n, "D_nominal", "linear", c.linear.D_nominal, 2, 2);
  }
  if (const YAML::Node n = root["inspan"]) {
    r.check_keys(n, "inspan", {"theta_seed", "theta1_scale", "theta2_scale"});
    r.get(n, "theta_seed", "inspan", c.inspan.theta_seed);
    r.get(n, "theta1_scale", "inspan", c.inspan.theta1_scale);
    r.get(n, "theta2_scale", "inspan", c.inspan.theta2_scale);
  }
  if (const YAML::Node n = root["mc"]) {
    r.check_keys(n, "mc", {"trials", "dt_list", "sigma2_list", "lambda_list", "confidence_lambda",
                           "eval_time", "bias_dt_list", "bias_horizon_s", "bias_tail_fraction",
                           "workers"});
    r.get(n, "trials", "mc", c.mc.trials);
    r.get(n, "dt_list", "mc", c.mc.dt_list);
    r.get(n, "sigma2_list", "mc", c.mc.sigma2_list);
    r.get(n, "lambda_list", "mc", c.mc.lambda_list);
    r.get(n, "confidence_lambda", "mc", c.mc.confidence_lambda);
    r.get(n, "eval_time", "mc", c.mc.eval_time);
    r.get(n, "bias_dt_list", "mc", c.mc.bias_dt_list);
    r.get(n, "bias_horizon_s", "mc", c.mc.bias_horizon_s);
    r.get(n, "bias_tail_fraction", "mc", c.mc.bias_tail_fraction);
    r.get(n, "workers", "mc", c.mc.workers);
  }
  if (const YAML::Node n = root["diag"]) {
    r.check_keys(n, "diag", {"horizon_s", "window", "tau_max", "tau_step", "start_spacing", "step"});
    r.get(n, "horizon_s", "diag", c.diag.horizon_s);
    r.get(n, "window", "diag", c.diag.window);
    r.get(n, "tau_max", "diag", c.diag.tau_max);
    r.get(n, "tau_step", "diag", c.diag.tau_step);
    r.get(n, "start_spacing", "diag", c.diag.start_spacing);
    r.get(n, "step", "diag", c.diag.step);
  }

  // value checks
  r.require(positive(c.plant.m1) && positive(c.plant.m2), "plant: masses must be > 0");
  r.require(positive(c.plant.l1) && positive(c.plant.l2), "plant: lengths must be > 0");
  r.require(c.plant.gravity >= 0.0, "plant.gravity: must be >= 0");
  r.require(positive(c.nominal_scale), "nominal.scale: must be > 0");
  if (c.basis.kind == BasisKind::kGaussianRbf) {
    r.require(c.basis.counts.size() == 4, "basis.counts: expected 4 entries");
    for (int n : c.basis.counts) r.require(n >= 1, "basis.counts: entries must be >= 1");
    r.require(c.basis.lower.size() == 4 && c.basis.upper.size() == 4,
              "basis.lower/upper: expected 4 entries each");
    for (std::size_t d = 0; d < std::min(c.basis.lower.size(), c.basis.upper.size()); ++d) {
      r.require(c.basis.upper[d] > c.basis.lower[d], "basis: upper must exceed lower");
    }
    r.require(positive(c.basis.width_rule), "basis.width_rule: must be > 0");
    r.require(positive(c.basis.amplitude), "basis.amplitude: must be > 0");
  } else {
    r.require(c.basis.degree >= 0, "basis.degree: must be >= 0");
  }
  r.require(c.reference.channels.size() == 2, "reference.channels: expected 2 channels");
  r.require(positive(c.control.dt), "control.dt: must be > 0");
  r.require(c.control.sigma2 >= 0.0 && std::isfinite(c.control.sigma2), "control.sigma2: must be >= 0");
  r.require(positive(c.control.noise_clip), "control.noise_clip: must be > 0");
  r.require(c.control.pole < 0.0, "control.pole: must be < 0");
  r.require(c.control.substeps >= 1, "control.substeps: must be >= 1");
  r.require(positive(c.control.horizon_s), "control.horizon_s: must be > 0");
  if (c.initial.mode == InitialMode::kExplicit) {
    r.require(c.initial.x.size() == 4, "initial_state.x: expected 4 entries");
  }
  r.require(c.inspan.theta1_scale >= 0.0 && c.inspan.theta2_scale >= 0.0,
            "inspan: scales must be >= 0");
  r.require(c.mc.trials >= 2, "mc.trials: must be >= 2");
  for (double v : c.mc.dt_list) r.require(positive(v), "mc.dt_list: entries must be > 0");
  for (double v : c.mc.bias_dt_list) r.require(positive(v), "mc.bias_dt_list: entries must be > 0");
  for (double v : c.mc.sigma2_list) r.require(positive(v), "mc.sigma2_list: entries must be > 0");
  for (double v : c.mc.lambda_list) r.require(v > 0.0 && v < 1.0, "mc.lambda_list: entries must be in (0, 1)");
  r.require(c.mc.confidence_lambda > 0.0 && c.mc.confidence_lambda < 1.0,
            "mc.confidence_lambda: must be in (0, 1)");
  r.require(c.mc.eval_time >= 0.0, "mc.eval_time: must be >= 0");
  r.require(positive(c.mc.bias_horizon_s), "mc.bias_horizon_s: must be > 0");
  r.require(c.mc.bias_tail_fraction > 0.0 && c.mc.bias_tail_fraction <= 1.0,
            "mc.bias_tail_fraction: must be in (0, 1]");
  r.require(c.mc.workers >= 0, "mc.workers: must be >= 0");
  r.require(positive(c.diag.horizon_s) && positive(c.diag.window) && positive(c.diag.tau_step) &&
                positive(c.diag.start_spacing) && positive(c.diag.step) && c.diag.tau_max >= 0.0,
            "diag: horizon_s, window, tau_step, start_spacing and step must be > 0");
  r.require(c.diag.window <= c.diag.horizon_s, "diag.window: longer than diag.horizon_s");

  if (!r.problems.empty()) throw ConfigError(r.problems);
  return c;
}

ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"config: cannot read '" + path + "'"});
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides);
}

namespace {

YAML::Emitter& flow(YAML::Emitter& out) { return out << YAML::Flow; }

template <typename T>
void emit_list(YAML::Emitter& out, const char* key, const std::vector<T>& v) {
  out << YAML::Key << key << YAML::Value;
  flow(out) << v;
}

void emit_matrix(YAML::Emitter& out, const char* key,
                 const std::vector<std::vector<double>>& m) {
  out << YAML::Key << key << YAML::Value << YAML::BeginSeq;
  for (const auto& row : m) flow(out) << row;
  out << YAML::EndSeq;
}

}  // namespace

std::string to_yaml(const ExperimentConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "scenario" << YAML::Value << scenario_name(c.scenario);
  out << YAML::Key << "seed" << YAML::Value << c.seed;

  out << YAML::Key << "plant" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "m1" << YAML::Value << c.plant.m1;
  out << YAML::Key << "m2" << YAML::Value << c.plant.m2;
  out << YAML::Key << "l1" << YAML::Value << c.plant.l1;
  out << YAML::Key << "l2" << YAML::Value << c.plant.l2;
  out << YAML::Key << "gravity" << YAML::Value << c.plant.gravity;
  out << YAML::EndMap;

  out << YAML::Key << "nominal" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "scale" << YAML::Value << c.nominal_scale << YAML::EndMap;

  out << YAML::Key << "basis" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << enum_name(kBases, c.basis.kind);
  emit_list(out, "counts", c.basis.counts);
  emit_list(out, "lower", c.basis.lower);
  emit_list(out, "upper", c.basis.upper);
  out << YAML::Key << "width_rule" << YAML::Value << c.basis.width_rule;
  out << YAML::Key << "amplitude" << YAML::Value << c.basis.amplitude;
  out << YAML::Key << "degree" << YAML::Value << c.basis.degree;
  out << YAML::EndMap;

  out << YAML::Key << "reference" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "channels" << YAML::Value << YAML::BeginSeq;
  for (const auto& channel : c.reference.channels) {
    out << YAML::BeginSeq;
    for (const SinusoidTerm& t : channel) {
      out << YAML::Flow << YAML::BeginMap;
      out << YAML::Key << "amplitude" << YAML::Value << t.amplitude;
      out << YAML::Key << "frequency" << YAML::Value << t.frequency;
      out << YAML::Key << "phase" << YAML::Value << t.phase;
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }
  out << YAML::EndSeq << YAML::EndMap;

  out << YAML::Key << "control" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dt" << YAML::Value << c.control.dt;
  out << YAML::Key << "sigma2" << YAML::Value << c.control.sigma2;
  out << YAML::Key << "noise_clip" << YAML::Value << c.control.noise_clip;
  out << YAML::Key << "pole" << YAML::Value << c.control.pole;
  out << YAML::Key << "substeps" << YAML::Value << c.control.substeps;
  out << YAML::Key << "horizon_s" << YAML::Value << c.control.horizon_s;
  out << YAML::Key << "baseline" << YAML::Value << enum_name(kBaselines, c.control.baseline);
  out << YAML::Key << "measurement" << YAML::Value
      << enum_name(kMeasurements, c.control.measurement);
  out << YAML::EndMap;

  out << YAML::Key << "initial_state" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "mode" << YAML::Value << enum_name(kInitial, c.initial.mode);
  emit_list(out, "x", c.initial.x);
  out << YAML::EndMap;

  out << YAML::Key << "linear" << YAML::Value << YAML::BeginMap;
  emit_matrix(out, "L_true", c.linear.L_true);
  emit_matrix(out, "D_true", c.linear.D_true);
  emit_matrix(out, "L_nominal", c.linear.L_nominal);
  emit_matrix(out, "D_nominal", c.linear.D_nominal);
  out << YAML::EndMap;

  out << YAML::Key << "inspan" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "theta_seed" << YAML::Value << c.inspan.theta_seed;
  out << YAML::Key << "theta1_scale" << YAML::Value << c.inspan.theta1_scale;
  out << YAML::Key << "theta2_scale" << YAML::Value << c.inspan.theta2_scale;
  out << YAML::EndMap;

  out << YAML::Key << "mc" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "trials" << YAML::Value << c.mc.trials;
  emit_list(out, "dt_list", c.mc.dt_list);
  emit_list(out, "sigma2_list", c.mc.sigma2_list);
  emit_list(out, "lambda_list", c.mc.lambda_list);
  out << YAML::Key << "confidence_lambda" << YAML::Value << c.mc.confidence_lambda;
  out << YAML::Key << "eval_time" << YAML::Value << c.mc.eval_time;
  emit_list(out, "bias_dt_list", c.mc.bias_dt_list);
  out << YAML::Key << "bias_horizon_s" << YAML::Value << c.mc.bias_horizon_s;
  out << YAML::Key << "bias_tail_fraction" << YAML::Value << c.mc.bias_tail_fraction;
  out << YAML::Key << "workers" << YAML::Value << c.mc.workers;
  out << YAML::EndMap;

  out << YAML::Key << "diag" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "horizon_s" << YAML::Value << c.diag.horizon_s;
  out << YAML::Key << "window" << YAML::Value << c.diag.window;
  out << YAML::Key << "tau_max" << YAML::Value << c.diag.tau_max;
  out << YAML::Key << "tau_step" << YAML::Value << c.diag.tau_step;
  out << YAML::Key << "start_spacing" << YAML::Value << c.diag.start_spacing;
  out << YAML::Key << "step" << YAML::Value << c.diag.step;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace fblpg::cli
