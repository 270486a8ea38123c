#pragma once

// Experiment driver: instance enumeration, the experiment catalogue, and
// CSV / JSON emission.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "matpow/budget.hpp"
#include "matpow/catmap.hpp"
#include "matpow/matgrp.hpp"

namespace matpow::harness {

enum class ClassFilter { Split, Irreducible, All };

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t p_min = 5;
  std::uint64_t p_max = 31;
  std::vector<std::uint64_t> primes;  // overrides the range when non-empty
  int degree = 1;
  int n = 2;
  ClassFilter class_filter = ClassFilter::All;
  bool include_nondiagonalizable = false;
  std::uint64_t tau_min = 1;
  std::uint64_t tau_max = UINT64_MAX;
  std::uint64_t max_instances_per_prime = 0;  // 0: all
  int samples = 4;
  std::vector<std::pair<int, int>> holder_pairs{{2, 2}, {2, 3}, {3, 3}};
  std::vector<int> nus{2, 3};
  int moment = 6;
  std::uint64_t s_max = 10;
  std::uint64_t curve_pairs = 8;
  std::uint64_t exhaustive_p_max = 31;
  std::uint64_t exclusion_p_max = 13;
  std::uint64_t extension_p_max = 0;  // largest p for the F_{p^2} counts; 0 disables
  std::uint64_t extension_k_max = 2;
  int k_max = 8;
  std::vector<cat::IntPair> observable_modes{{1, 0}, {0, 1}};
  std::vector<cat::IntPair> vectors{{1, 0}, {0, 1}, {1, 1}};
  std::int64_t cat[4] = {2, 1, 3, 2};
  bool timing = false;
  int workers = 1;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  Budget budget = Budget::from_env();
  /// The key = value pairs as read, in file order.
  std::vector<std::pair<std::string, std::string>> echo;

  std::vector<std::uint64_t> prime_list() const;
};

/// Parses flat `key = value` text (# comments, blank lines allowed) on top of
/// the defaults for `experiment`. Throws Error(ConfigError) for unknown
/// experiments, unknown keys and malformed values.
ExperimentConfig parse_config(std::string_view text, const std::string& experiment);
ExperimentConfig load_config(const std::string& path, const std::string& experiment);
/// Default settings of an experiment (before any config file).
ExperimentConfig default_config(const std::string& experiment);

const std::vector<std::string>& experiment_names();

enum class Sl2Class { Split, Irreducible, NonDiagonalizable };
std::string to_string(Sl2Class c);

struct Sl2Instance {
  std::uint64_t trace = 0;
  Sl2Class cls = Sl2Class::Split;
  mat::MatEntity entity;
};

/// One companion matrix [[0, -1], [1, u]] per trace u in F_q, classified by
/// u^2 - 4: a non-zero square is split, a non-square irreducible, zero
/// (u = +-2) non-diagonalizable and excluded unless requested.
std::vector<Sl2Instance> scan_sl2(const ff::Field& f, ClassFilter filter, bool include_nondiagonalizable = false);
std::vector<Sl2Instance> scan_sl2(std::uint64_t p, ClassFilter filter, bool include_nondiagonalizable = false);

struct Row {
  std::string experiment;
  std::uint64_t p = 0;
  std::uint64_t q = 0;
  int n = 0;
  std::string trace;
  std::string cls;
  std::uint64_t tau = 0;
  std::uint64_t t = 0;
  std::string quantity;
  double value_re = 0.0;
  double value_im = 0.0;
  double abs = 0.0;
  std::string bound_name;
  std::optional<double> bound_value;
  std::string status = "report";
  double seconds = 0.0;

  /// abs / bound_value when a non-zero bound is present.
  std::optional<double> ratio() const;
};

struct RunResult {
  std::vector<Row> rows;
  int exit_code = 0;
};

RunResult run_experiment(const ExperimentConfig& cfg);

extern const char* const kCsvHeader;
std::string to_csv(const std::vector<Row>& rows);
std::string summary_json(const ExperimentConfig& cfg, const RunResult& r);
/// Writes <out>/<experiment>.csv and <out>/<experiment>.summary.json.
void write_outputs(const ExperimentConfig& cfg, const RunResult& r);

/// The matpow-lab command line; returns the process exit status.
int run_cli(int argc, const char* const* argv);

}  // namespace matpow::harness
