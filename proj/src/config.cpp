#include "higgslab/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace higgslab {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Strip a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& s) {
  bool in_string = false;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_string = !in_string;
    if (s[i] == '#' && !in_string) return s.substr(0, i);
  }
  return s;
}

ConfigTree::Value parse_scalar(const std::string& tok, int line) {
  ConfigTree::Value v;
  v.line = line;
  if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"') {
    v.kind = ConfigTree::Value::Kind::string;
    v.str = tok.substr(1, tok.size() - 2);
    return v;
  }
  if (tok == "true" || tok == "false") {
    v.kind = ConfigTree::Value::Kind::boolean;
    v.flag = tok == "true";
    return v;
  }
  if (tok == "inf") {
    v.kind = ConfigTree::Value::Kind::number;
    v.num = std::numeric_limits<double>::infinity();
    return v;
  }
  try {
    size_t used = 0;
    double num = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    v.kind = ConfigTree::Value::Kind::number;
    v.num = num;
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config line " + std::to_string(line) + ": cannot parse value '" +
                      tok + "'");
  }
}

ConfigTree::Value parse_value(const std::string& raw, int line) {
  std::string tok = trim(raw);
  if (tok.empty())
    throw ConfigError("config line " + std::to_string(line) + ": missing value");
  if (tok.front() == '[') {
    if (tok.back() != ']')
      throw ConfigError("config line " + std::to_string(line) + ": unterminated array");
    ConfigTree::Value v;
    v.kind = ConfigTree::Value::Kind::array;
    v.line = line;
    std::string body = tok.substr(1, tok.size() - 2);
    std::string item;
    std::istringstream in(body);
    while (std::getline(in, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      v.items.push_back(parse_scalar(item, line));
    }
    return v;
  }
  return parse_scalar(tok, line);
}

}  // namespace

ConfigTree ConfigTree::parse_string(const std::string& text) {
  ConfigTree tree;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": malformed table header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty())
        throw ConfigError("config line " + std::to_string(line_no) + ": empty table name");
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    std::string key = trim(s.substr(0, eq));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    std::string dotted = section.empty() ? key : section + "." + key;
    if (tree.entries_.count(dotted))
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" +
                        dotted + "'");
    tree.entries_[dotted] = parse_value(s.substr(eq + 1), line_no);
  }
  return tree;
}

ConfigTree ConfigTree::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

const ConfigTree::Value& ConfigTree::require(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing config field '" + key + "'");
  return it->second;
}

bool ConfigTree::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string ConfigTree::get_string(const std::string& key) const {
  const Value& v = require(key);
  if (v.kind != Value::Kind::string)
    throw ConfigError("config field '" + key + "' must be a string");
  return v.str;
}

std::string ConfigTree::get_string_or(const std::string& key,
                                      const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double ConfigTree::get_number(const std::string& key) const {
  const Value& v = require(key);
  if (v.kind != Value::Kind::number)
    throw ConfigError("config field '" + key + "' must be a number");
  return v.num;
}

double ConfigTree::get_number_or(const std::string& key, double fallback) const {
  return has(key) ? get_number(key) : fallback;
}

long ConfigTree::get_integer(const std::string& key) const {
  double v = get_number(key);
  long l = static_cast<long>(std::llround(v));
  if (std::abs(v - l) > 1e-9)
    throw ConfigError("config field '" + key + "' must be an integer");
  return l;
}

long ConfigTree::get_integer_or(const std::string& key, long fallback) const {
  return has(key) ? get_integer(key) : fallback;
}

bool ConfigTree::get_bool_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const Value& v = require(key);
  if (v.kind != Value::Kind::boolean)
    throw ConfigError("config field '" + key + "' must be true or false");
  return v.flag;
}

std::vector<double> ConfigTree::get_number_list(const std::string& key) const {
  const Value& v = require(key);
  if (v.kind == Value::Kind::number) return {v.num};
  if (v.kind != Value::Kind::array)
    throw ConfigError("config field '" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& item : v.items) {
    if (item.kind != Value::Kind::number)
      throw ConfigError("config field '" + key + "' must contain only numbers");
    out.push_back(item.num);
  }
  return out;
}

std::vector<long> ConfigTree::get_integer_list(const std::string& key) const {
  std::vector<long> out;
  for (double v : get_number_list(key)) {
    long l = static_cast<long>(std::llround(v));
    if (std::abs(v - l) > 1e-9)
      throw ConfigError("config field '" + key + "' must contain only integers");
    out.push_back(l);
  }
  return out;
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::ed_sweep: return "ed_sweep";
    case ExperimentKind::vqe_sweep: return "vqe_sweep";
    case ExperimentKind::vqe_blockwise: return "vqe_blockwise";
    case ExperimentKind::mps_sweep: return "mps_sweep";
    case ExperimentKind::phase_report: return "phase_report";
    case ExperimentKind::oracle_suite: return "oracle_suite";
  }
  return "unknown";
}

namespace {

ExperimentKind parse_kind(const std::string& s) {
  for (auto k : {ExperimentKind::ed_sweep, ExperimentKind::vqe_sweep,
                 ExperimentKind::vqe_blockwise, ExperimentKind::mps_sweep,
                 ExperimentKind::phase_report, ExperimentKind::oracle_suite})
    if (to_string(k) == s) return k;
  throw ConfigError("experiment.kind: unknown kind '" + s + "'");
}

Formulation parse_formulation(const std::string& s) {
  if (s == "effective") return Formulation::effective;
  if (s == "hobm") return Formulation::hobm;
  if (s == "spin") return Formulation::spin;
  throw ConfigError("model.formulation: must be effective, hobm or spin, got '" + s + "'");
}

OptimizerKind parse_optimizer(const std::string& s) {
  if (s == "mads") return OptimizerKind::mads;
  if (s == "nelder_mead") return OptimizerKind::nelder_mead;
  if (s == "spsa") return OptimizerKind::spsa;
  throw ConfigError("vqe.optimizer: must be mads, nelder_mead or spsa, got '" + s + "'");
}

std::vector<double> resolve_grid(const ConfigTree& t) {
  if (t.has("grid.eps0_list")) return t.get_number_list("grid.eps0_list");
  if (!t.has("grid.eps0_start"))
    throw ConfigError("grid: need eps0_list or eps0_start/eps0_stop/eps0_step");
  double start = t.get_number("grid.eps0_start");
  double stop = t.get_number("grid.eps0_stop");
  double step = t.get_number("grid.eps0_step");
  if (step <= 0.0) throw ConfigError("grid.eps0_step: must be positive");
  std::vector<double> out;
  for (double x = start; x <= stop + 1e-12; x += step) out.push_back(x);
  if (out.empty()) throw ConfigError("grid: empty background-field grid");
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_tree(const ConfigTree& t) {
  ExperimentConfig c;
  c.kind = parse_kind(t.get_string("experiment.kind"));
  c.output_dir = t.get_string_or("experiment.output_dir", "out");
  c.seed = static_cast<std::uint64_t>(t.get_integer_or("experiment.seed", 1));

  c.model.sites = static_cast<int>(t.get_integer_or("model.sites", 4));
  c.model.beta = t.get_number_or("model.beta", 1.0);
  c.model.rsq = t.get_number_or("model.rsq", 0.3);
  c.model.eps0 = t.get_number_or("model.eps0", 0.0);
  c.model.ell = t.get_number_or("model.ell", 0.0);
  c.model.n0 = static_cast<int>(t.get_integer_or("model.n0", 2));
  c.model.trunc = static_cast<int>(t.get_integer_or("model.trunc", 2 * c.model.n0 + 1));
  c.formulation = parse_formulation(t.get_string_or("model.formulation", "effective"));

  if (c.kind != ExperimentKind::oracle_suite) {
    c.eps0_grid = resolve_grid(t);
  }

  if (c.kind == ExperimentKind::vqe_sweep || c.kind == ExperimentKind::vqe_blockwise) {
    c.vqe.optimizer = parse_optimizer(t.get_string_or("vqe.optimizer", "mads"));
    c.vqe.max_evals = static_cast<int>(t.get_integer_or("vqe.max_evals", 1000));
    c.vqe.restarts = static_cast<int>(t.get_integer_or("vqe.restarts", 15));
    c.vqe.layers = static_cast<int>(t.get_integer_or("vqe.layers", 3));
    c.vqe.seed = c.seed;
    std::string init = t.get_string_or("vqe.init", "uniform");
    if (init == "zeros") {
      c.vqe.init = InitStrategy::zeros;
    } else if (init == "uniform") {
      c.vqe.init = InitStrategy::uniform_random;
    } else {
      throw ConfigError("vqe.init: must be zeros or uniform, got '" + init + "'");
    }
    c.vqe.theta_range = t.get_number_or("vqe.theta_range", 0.5);
    c.vqe.omega_range = t.get_number_or("vqe.omega_range", 1.0);
    c.shots_pre = t.get_number_or("vqe.shots_pre", 1e3);
    c.shots_post = t.get_number_or("vqe.shots_post", 1e5);
    c.switch_eps0 = t.get_number_or("vqe.switch_eps0",
                                    std::numeric_limits<double>::quiet_NaN());
    c.export_traces = t.get_bool_or("vqe.export_traces", true);
    if (t.has("vqe.shots_list")) c.shots_list = t.get_number_list("vqe.shots_list");
    c.blocks.n_blocks = static_cast<int>(t.get_integer_or("vqe.blocks", 5));
    c.blocks.layers_first = static_cast<int>(t.get_integer_or("vqe.layers_first", 2));
    c.blocks.layers_rest = static_cast<int>(t.get_integer_or("vqe.layers_rest", 3));
  }

  if (c.kind == ExperimentKind::mps_sweep) {
    auto as_int = [](const std::vector<long>& v) {
      return std::vector<int>(v.begin(), v.end());
    };
    c.n_list = as_int(t.get_integer_list("mps.n_list"));
    c.s_list = t.has("mps.s_list") ? as_int(t.get_integer_list("mps.s_list"))
                                   : std::vector<int>{1};
    c.chi_list = t.has("mps.chi_list") ? as_int(t.get_integer_list("mps.chi_list"))
                                       : std::vector<int>{16, 32};
    c.rsq_list = t.has("mps.rsq_list") ? t.get_number_list("mps.rsq_list")
                                       : std::vector<double>{c.model.rsq};
    c.mps_ell = t.get_number_or("mps.ell", -1.0);
    c.sweep_tol = t.get_number_or("mps.sweep_tol", 1e-9);
    if (c.n_list.empty()) throw ConfigError("mps.n_list: must not be empty");
    if (c.chi_list.empty()) throw ConfigError("mps.chi_list: must not be empty");
  }

  // basic invariants
  if (c.kind != ExperimentKind::oracle_suite && c.eps0_grid.empty())
    throw ConfigError("grid: empty background-field grid");
  c.model.validate();
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  return from_tree(ConfigTree::parse_file(path));
}

}  // namespace higgslab
