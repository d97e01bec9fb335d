#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "higgslab/exact.hpp"
#include "higgslab/mps.hpp"
#include "higgslab/vqe.hpp"

namespace higgslab {

/// Parse/validation failure with the offending line or field named.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Minimal strict TOML-style reader: [table] headers, key = value with
/// strings, numbers, booleans and flat arrays; # comments.
class ConfigTree {
 public:
  struct Value {
    enum class Kind { string, number, boolean, array };
    Kind kind = Kind::string;
    std::string str;
    double num = 0.0;
    bool flag = false;
    std::vector<Value> items;
    int line = 0;
  };

  static ConfigTree parse_file(const std::string& path);
  static ConfigTree parse_string(const std::string& text);

  bool has(const std::string& dotted_key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string_or(const std::string& key, const std::string& fallback) const;
  double get_number(const std::string& key) const;
  double get_number_or(const std::string& key, double fallback) const;
  long get_integer(const std::string& key) const;
  long get_integer_or(const std::string& key, long fallback) const;
  bool get_bool_or(const std::string& key, bool fallback) const;
  std::vector<double> get_number_list(const std::string& key) const;
  std::vector<long> get_integer_list(const std::string& key) const;

  const std::map<std::string, Value>& entries() const { return entries_; }

 private:
  std::map<std::string, Value> entries_;
  const Value& require(const std::string& key) const;
};

enum class ExperimentKind {
  ed_sweep,
  vqe_sweep,
  vqe_blockwise,
  mps_sweep,
  phase_report,
  oracle_suite
};

std::string to_string(ExperimentKind kind);

/// Fully resolved experiment description; one file determines one run.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::ed_sweep;
  std::string output_dir = "out";
  std::uint64_t seed = 1;

  ModelParams model;
  Formulation formulation = Formulation::effective;

  std::vector<double> eps0_grid;

  // vqe_sweep / vqe_blockwise
  VqeConfig vqe;
  double shots_pre = 1e3;
  double shots_post = 1e5;
  double switch_eps0 = std::numeric_limits<double>::quiet_NaN();  // NaN: use predict_jump
  BlockSpec blocks;
  std::vector<double> shots_list;  // blockwise curves, inf allowed
  bool export_traces = true;

  // mps_sweep
  std::vector<int> n_list{4};
  std::vector<int> s_list{1};
  std::vector<int> chi_list{16, 32};
  std::vector<double> rsq_list;
  double mps_ell = -1.0;
  double sweep_tol = 1e-9;

  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_tree(const ConfigTree& tree);
};

}  // namespace higgslab
