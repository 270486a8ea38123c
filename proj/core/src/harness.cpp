#include "matpow/harness.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "harness_internal.hpp"
#include "matpow/error.hpp"
#include "matpow/prng.hpp"

namespace matpow::harness {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) config_error("bad value for " + key + ": '" + v + "'");
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) config_error("bad value for " + key + ": '" + v + "'");
    return d;
  } catch (const std::logic_error&) {
    config_error("bad value for " + key + ": '" + v + "'");
  }
}

double parse_cap(const std::string& key, const std::string& v) {
  const double d = parse_double(key, v);
  if (!(d > 0)) config_error(key + " must be positive");
  return d;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  config_error("bad boolean for " + key + ": '" + v + "'");
}

std::vector<cat::IntPair> parse_pairs(const std::string& key, const std::string& v) {
  std::vector<cat::IntPair> out;
  for (const auto& item : split(v, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) config_error("expected a1:a2 items in " + key);
    out.push_back({parse_number<std::int64_t>(key, parts[0]), parse_number<std::int64_t>(key, parts[1])});
  }
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> m;
    auto u64 = [](std::uint64_t ExperimentConfig::*field) {
      return [field](ExperimentConfig& c, const std::string& k, const std::string& v) {
        c.*field = parse_number<std::uint64_t>(k, v);
      };
    };
    auto i32 = [](int ExperimentConfig::*field) {
      return [field](ExperimentConfig& c, const std::string& k, const std::string& v) {
        c.*field = parse_number<int>(k, v);
      };
    };
    auto cap = [](double Budget::*field) {
      return [field](ExperimentConfig& c, const std::string& k, const std::string& v) {
        c.budget.*field = parse_cap(k, v);
      };
    };
    m["p_min"] = u64(&ExperimentConfig::p_min);
    m["p_max"] = u64(&ExperimentConfig::p_max);
    m["primes"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.primes.clear();
      for (const auto& x : split(v, ',')) c.primes.push_back(parse_number<std::uint64_t>(k, x));
    };
    m["degree"] = i32(&ExperimentConfig::degree);
    m["n"] = i32(&ExperimentConfig::n);
    m["class"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      if (v == "split") {
        c.class_filter = ClassFilter::Split;
      } else if (v == "irreducible") {
        c.class_filter = ClassFilter::Irreducible;
      } else if (v == "all") {
        c.class_filter = ClassFilter::All;
      } else {
        config_error("bad value for " + k + ": '" + v + "' (split | irreducible | all)");
      }
    };
    m["include_nondiagonalizable"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.include_nondiagonalizable = parse_bool(k, v);
    };
    m["tau_min"] = u64(&ExperimentConfig::tau_min);
    m["tau_max"] = u64(&ExperimentConfig::tau_max);
    m["max_instances_per_prime"] = u64(&ExperimentConfig::max_instances_per_prime);
    m["samples"] = i32(&ExperimentConfig::samples);
    m["holder_pairs"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.holder_pairs.clear();
      for (const auto& pr : parse_pairs(k, v)) {
        c.holder_pairs.emplace_back(static_cast<int>(pr.a1), static_cast<int>(pr.a2));
      }
    };
    m["nus"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.nus.clear();
      for (const auto& x : split(v, ',')) c.nus.push_back(parse_number<int>(k, x));
    };
    m["moment"] = i32(&ExperimentConfig::moment);
    m["s_max"] = u64(&ExperimentConfig::s_max);
    m["curve_pairs"] = u64(&ExperimentConfig::curve_pairs);
    m["exhaustive_p_max"] = u64(&ExperimentConfig::exhaustive_p_max);
    m["exclusion_p_max"] = u64(&ExperimentConfig::exclusion_p_max);
    m["extension_p_max"] = u64(&ExperimentConfig::extension_p_max);
    m["extension_k_max"] = u64(&ExperimentConfig::extension_k_max);
    m["k_max"] = i32(&ExperimentConfig::k_max);
    m["observable_modes"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.observable_modes = parse_pairs(k, v);
    };
    m["vectors"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.vectors = parse_pairs(k, v);
    };
    m["cat_matrix"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      const auto parts = split(v, ',');
      if (parts.size() != 4) config_error(k + " needs four integers a11,a12,a21,a22");
      for (int i = 0; i < 4; ++i) c.cat[i] = parse_number<std::int64_t>(k, parts[static_cast<std::size_t>(i)]);
    };
    m["timing"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.timing = parse_bool(k, v);
    };
    m["workers"] = i32(&ExperimentConfig::workers);
    m["seed"] = u64(&ExperimentConfig::seed);
    m["out_dir"] = [](ExperimentConfig& c, const std::string&, const std::string& v) { c.out_dir = v; };
    m["cap_q2"] = cap(&Budget::q2);
    m["cap_q3"] = cap(&Budget::q3);
    m["cap_orbit"] = cap(&Budget::orbit);
    m["cap_sumset"] = cap(&Budget::sumset);
    m["cap_cover_space"] = cap(&Budget::cover_space);
    m["cap_product_eq"] = cap(&Budget::product_eq);
    m["cap_exp_sum"] = cap(&Budget::exp_sum);
    m["cap_moment"] = cap(&Budget::moment);
    m["cap_points"] = cap(&Budget::points);
    m["max_quantum_dim"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.budget.max_quantum_dim = parse_number<int>(k, v);
    };
    return m;
  }();
  return table;
}

void validate(const ExperimentConfig& c) {
  if (c.primes.empty() && c.p_min > c.p_max) config_error("empty prime range");
  if (c.prime_list().empty()) config_error("the prime range contains no odd prime");
  if (c.degree != 1 && c.degree != 2) config_error("degree must be 1 or 2");
  if (c.n != 2 && c.n != 3) config_error("n must be 2 or 3");
  if (c.tau_min > c.tau_max) config_error("empty tau range");
  if (c.samples < 1) config_error("samples must be positive");
  if (c.workers < 1) config_error("workers must be positive");
  if (c.moment < 2 || c.moment % 2 != 0) config_error("moment must be even and >= 2");
  if (c.k_max < 1) config_error("k_max must be positive");
  if (c.budget.max_quantum_dim < 1) config_error("max_quantum_dim must be positive");
  for (const auto& [k, l] : c.holder_pairs) {
    if (k < 1 || l < 1) config_error("holder pairs must be positive");
  }
  for (int nu : c.nus) {
    if (nu != 2 && nu != 3) config_error("nus entries must be 2 or 3");
  }
  for (const auto& p : c.primes) {
    if (!ff::is_prime(p) || p == 2) config_error(std::to_string(p) + " is not an odd prime");
  }
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<std::uint64_t> ExperimentConfig::prime_list() const {
  if (!primes.empty()) return primes;
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = std::max<std::uint64_t>(p_min, 3); p <= p_max; ++p) {
    if (ff::is_prime(p)) out.push_back(p);
  }
  return out;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"energy", "q3", "sums", "kloosterman", "gauss",
                                              "curves", "orbit", "catmap", "lemma81"};
  return names;
}

ExperimentConfig default_config(const std::string& experiment) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), experiment) == names.end()) {
    config_error("unknown experiment '" + experiment + "'");
  }
  ExperimentConfig c;
  c.experiment = experiment;
  if (experiment == "energy") {
    c.p_min = 5;
    c.p_max = 101;
  } else if (experiment == "q3") {
    c.p_min = 5;
    c.p_max = 61;
  } else if (experiment == "sums") {
    c.p_min = 5;
    c.p_max = 61;
    c.samples = 3;
  } else if (experiment == "kloosterman") {
    c.p_min = 3;
    c.p_max = 101;
    c.samples = 3;
  } else if (experiment == "gauss") {
    c.p_min = 3;
    c.p_max = 61;
    c.degree = 2;
    c.samples = 3;
  } else if (experiment == "curves") {
    c.p_min = 5;
    c.p_max = 199;
    c.extension_p_max = 23;
  } else if (experiment == "orbit") {
    c.p_min = 5;
    c.p_max = 61;
    c.class_filter = ClassFilter::Irreducible;
    c.samples = 2;
  } else if (experiment == "catmap") {
    c.p_min = 3;
    c.p_max = 199;
  } else if (experiment == "lemma81") {
    c.p_min = 3;
    c.p_max = 61;
  }
  return c;
}

ExperimentConfig parse_config(std::string_view text, const std::string& experiment) {
  ExperimentConfig c = default_config(experiment);
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) config_error("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) config_error("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (value.empty()) config_error("line " + std::to_string(line_no) + ": empty value for '" + key + "'");
    it->second(c, key, value);
    c.echo.emplace_back(key, value);
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path, const std::string& experiment) {
  std::ifstream in(path);
  if (!in) config_error("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), experiment);
}

std::string to_string(Sl2Class c) {
  switch (c) {
    case Sl2Class::Split: return "split";
    case Sl2Class::Irreducible: return "irreducible";
    case Sl2Class::NonDiagonalizable: return "nondiagonalizable";
  }
  return "?";
}

std::vector<Sl2Instance> scan_sl2(const ff::Field& f, ClassFilter filter, bool include_nondiagonalizable) {
  std::vector<Sl2Instance> out;
  const ff::Elem four = f.from_int(4);
  for (std::uint64_t i = 0; i < f.size(); ++i) {
    const ff::Elem u = f.element_at(i);
    const ff::Elem disc = f.sub(f.mul(u, u), four);
    Sl2Class cls;
    if (disc == f.zero()) {
      cls = Sl2Class::NonDiagonalizable;
      if (!include_nondiagonalizable) continue;
    } else {
      cls = f.is_square(disc) ? Sl2Class::Split : Sl2Class::Irreducible;
      if (filter == ClassFilter::Split && cls != Sl2Class::Split) continue;
      if (filter == ClassFilter::Irreducible && cls != Sl2Class::Irreducible) continue;
    }
    out.push_back({i, cls, mat::MatEntity(mat::companion_sl2(f, u))});
  }
  return out;
}

std::vector<Sl2Instance> scan_sl2(std::uint64_t p, ClassFilter filter, bool include_nondiagonalizable) {
  return scan_sl2(ff::Field::make(p, 1), filter, include_nondiagonalizable);
}

std::optional<double> Row::ratio() const {
  if (!bound_value || *bound_value == 0.0) return std::nullopt;
  return abs / *bound_value;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  const auto tasks = detail::plan(cfg);
  std::vector<std::vector<Row>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      Xorshift64Star rng = instance_rng(cfg.seed, i);
      const auto start = std::chrono::steady_clock::now();
      results[i] = tasks[i](rng);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      for (auto& r : results[i]) r.seconds = cfg.timing ? secs : 0.0;
    }
  };
  const int nthreads = std::max(1, std::min<int>(cfg.workers, static_cast<int>(tasks.size())));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  RunResult r;
  for (auto& v : results) {
    for (auto& row : v) {
      if (row.status == "fail") r.exit_code = 1;
      r.rows.push_back(std::move(row));
    }
  }
  return r;
}

const char* const kCsvHeader =
    "experiment,p,q,n,trace,class,tau,t,quantity,value_re,value_im,abs,bound_name,bound_value,ratio,status,seconds";

std::string to_csv(const std::vector<Row>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += csv_field(r.experiment) + ',' + std::to_string(r.p) + ',' + std::to_string(r.q) + ',' +
           std::to_string(r.n) + ',' + csv_field(r.trace) + ',' + csv_field(r.cls) + ',' + std::to_string(r.tau) +
           ',' + std::to_string(r.t) + ',' + csv_field(r.quantity) + ',' + fmt_double(r.value_re) + ',' +
           fmt_double(r.value_im) + ',' + fmt_double(r.abs) + ',' + csv_field(r.bound_name) + ',' +
           (r.bound_value ? fmt_double(*r.bound_value) : std::string()) + ',' +
           (r.ratio() ? fmt_double(*r.ratio()) : std::string()) + ',' + r.status + ',' + fmt_double(r.seconds) +
           '\n';
  }
  return out;
}

std::string summary_json(const ExperimentConfig& cfg, const RunResult& r) {
  using nlohmann::ordered_json;
  struct Agg {
    std::uint64_t count = 0, pass = 0, fail = 0, report = 0;
    double min = 0, max = 0, sum = 0;
    std::uint64_t with_ratio = 0;
  };
  std::map<std::string, Agg> aggs;
  std::vector<std::string> order;
  ordered_json failures = ordered_json::array();
  std::uint64_t skipped = 0, errors = 0;
  for (const auto& row : r.rows) {
    if (row.quantity == "skipped") ++skipped;
    if (row.quantity == "error") ++errors;
    if (row.bound_name.empty() || row.quantity == "skipped" || row.quantity == "error") continue;
    const std::string key = row.bound_name;
    if (!aggs.count(key)) order.push_back(key);
    Agg& a = aggs[key];
    ++a.count;
    if (row.status == "pass") ++a.pass;
    if (row.status == "fail") ++a.fail;
    if (row.status == "report") ++a.report;
    if (const auto ratio = row.ratio()) {
      if (a.with_ratio == 0) {
        a.min = a.max = *ratio;
      } else {
        a.min = std::min(a.min, *ratio);
        a.max = std::max(a.max, *ratio);
      }
      a.sum += *ratio;
      ++a.with_ratio;
    }
    if (row.status == "fail") {
      failures.push_back({{"p", row.p}, {"q", row.q}, {"trace", row.trace}, {"class", row.cls},
                          {"quantity", row.quantity}, {"abs", row.abs}, {"bound_name", row.bound_name},
                          {"bound_value", row.bound_value.value_or(0.0)}});
    }
  }
  ordered_json bounds = ordered_json::object();
  for (const auto& name : order) {
    const Agg& a = aggs[name];
    ordered_json b = {{"count", a.count}, {"pass", a.pass}, {"fail", a.fail}, {"report", a.report}};
    if (a.with_ratio > 0) {
      b["min_ratio"] = a.min;
      b["max_ratio"] = a.max;
      b["mean_ratio"] = a.sum / static_cast<double>(a.with_ratio);
    }
    bounds[name] = b;
  }
  ordered_json config = ordered_json::object();
  for (const auto& [k, v] : cfg.echo) config[k] = v;
  ordered_json j = {{"experiment", cfg.experiment},
                    {"seed", cfg.seed},
                    {"rows", r.rows.size()},
                    {"exit_code", r.exit_code},
                    {"skipped", skipped},
                    {"errors", errors},
                    {"bounds", bounds},
                    {"failures", failures},
                    {"config", config}};
  return j.dump(2) + "\n";
}

void write_outputs(const ExperimentConfig& cfg, const RunResult& r) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const fs::path base = fs::path(cfg.out_dir);
  {
    std::ofstream out(base / (cfg.experiment + ".csv"), std::ios::binary);
    out << to_csv(r.rows);
  }
  {
    std::ofstream out(base / (cfg.experiment + ".summary.json"), std::ios::binary);
    out << summary_json(cfg, r);
  }
}

}  // namespace matpow::harness
