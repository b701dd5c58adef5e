// Copyright 2026 The zrace Authors
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

#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zrace/constants.hpp"
#include "zrace/errors.hpp"
#include "zrace/eta1.hpp"
#include "zrace/eta2.hpp"
#include "zrace/primes.hpp"
#include "zrace/races.hpp"
#include "zrace/sampling.hpp"
#include "zrace/svg.hpp"
#include "zrace/zero_catalog.hpp"

#ifndef ZRACE_DEFAULT_ZEROS
#define ZRACE_DEFAULT_ZEROS "data/zeros_10k.txt"
#endif

namespace zrace {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitPrecondition = 3,
  kExitCatalog = 4,
  kExitConsistency = 5,
};

struct RunConfig {
  std::string command;
  std::map<std::string, std::string> params;
  std::string zeros;
  std::string cache;
  std::string output;
  unsigned threads = 0;
};

namespace cli {

struct OptionSpec {
  const char* name;
  const char* help;
};

// Options per command; every value is captured as text and typed later so
// that flags, config files and defaults share one validation path.
inline const std::map<std::string, std::vector<OptionSpec>>& command_options() {
  static const std::map<std::string, std::vector<OptionSpec>> opts = {
      {"fetch-zeros", {{"source", "text catalog to ingest (defaults to --zeros)"}, {"min-digits", "minimum decimal digits per line"}}},
      {"constants", {{"prime-limit", "sieve limit for the Mertens constants"}}},
      {"eta2",
       {{"profile", "paper or fast"},
        {"epsilon", "lattice spacing"},
        {"cx", "C_x"},
        {"cy", "C_y"},
        {"height", "truncation height T"},
        {"j", "override J"},
        {"k", "override K"}}},
      {"eta1",
       {{"sigma", "threshold"},
        {"epsilon", "node spacing"},
        {"c", "truncation radius"},
        {"height", "truncation height T"},
        {"target", "escalate until the halfwidth is below this"}}},
      {"sample",
       {{"kind", "v1, v2 or nine"}, {"n", "number of samples"}, {"zeros-used", "zeros per sample"}, {"seed", "64-bit seed"}}},
      {"race",
       {{"f", "first function"},
        {"g", "second function"},
        {"xmin", "smallest x"},
        {"xmax", "largest x"},
        {"points", "grid size"},
        {"plot", "SVG output path"},
        {"prime-limit", "sieve limit for the Mertens constants"}}},
  };
  return opts;
}

inline const char* command_help(const std::string& name) {
  static const std::map<std::string, const char*> help = {
      {"fetch-zeros", "validate a text catalog and write the binary cache"},
      {"constants", "print w, B1, B2, B4 and the Mertens constants"},
      {"eta2", "opposite-sign density of the planar distribution with rigorous bounds"},
      {"eta1", "tail probability Pr(V1 > sigma) by Fourier inversion"},
      {"sample", "Monte Carlo estimates from random zero phases"},
      {"race", "normalized error terms of two prime counting functions as CSV"},
  };
  auto it = help.find(name);
  return it == help.end() ? "" : it->second;
}

inline std::string trim(const std::string& s) { return detail::trim(s); }

// Reads "key = value" lines; '#' and ';' start comments, [section] headers
// restrict the following keys to that command.
inline std::map<std::string, std::string> read_config_file(const std::string& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(path + ":" + std::to_string(lineno) + ": bad section header");
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (val.size() >= 2 && (val.front() == '"' || val.front() == '\'') && val.back() == val.front())
      val = val.substr(1, val.size() - 2);
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    if (!section.empty() && section != command) continue;
    out[key] = val;
  }
  return out;
}

inline double to_double(const std::map<std::string, std::string>& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  const std::string& s = it->second;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw ConfigError("parameter '" + key + "': not a number: '" + s + "'");
  return v;
}

inline std::uint64_t to_count(const std::map<std::string, std::string>& p, const std::string& key,
                              std::uint64_t fallback) {
  if (!p.count(key)) return fallback;
  double v = to_double(p, key, 0.0);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1.8e19)
    throw ConfigError("parameter '" + key + "': expected a non-negative integer");
  return static_cast<std::uint64_t>(v);
}

inline std::uint64_t to_seed(const std::map<std::string, std::string>& p, const std::string& key,
                             std::uint64_t fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  try {
    std::size_t pos = 0;
    auto v = std::stoull(it->second, &pos, 0);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("parameter '" + key + "': expected a 64-bit integer");
  }
}

inline std::string to_string(const std::map<std::string, std::string>& p, const std::string& key,
                             const std::string& fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

inline std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline nlohmann::json catalog_json(const ZeroCatalog& cat) {
  return {{"fingerprint", hex64(cat.fingerprint())},
          {"count", cat.size()},
          {"source_digits", cat.source_digits()},
          {"max_ordinate", cat.max_ordinate()}};
}

inline ZeroCatalog load_catalog(const RunConfig& cfg, int min_digits = 9) {
  if (!cfg.cache.empty()) {
    std::ifstream probe(cfg.cache, std::ios::binary);
    if (probe) return load_zeros_file(cfg.cache, min_digits);
  }
  return load_zeros_file(cfg.zeros.empty() ? ZRACE_DEFAULT_ZEROS : cfg.zeros, min_digits);
}

inline void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty() || cfg.output == "-") {
    out << text;
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + cfg.output + "'");
  f << text;
}

inline nlohmann::json tails_json(const TailConstants& t) {
  return {{"P_T", t.P_T}, {"Q_T", t.Q_T}, {"R_T", t.R_T}, {"T", t.T}, {"inv_q_tail", t.inv_q_tail}};
}

inline int run_fetch(const RunConfig& cfg, std::ostream& out) {
  int digits = static_cast<int>(to_count(cfg.params, "min-digits", 9));
  std::string source = to_string(cfg.params, "source", cfg.zeros.empty() ? ZRACE_DEFAULT_ZEROS : cfg.zeros);
  ZeroCatalog cat = load_zeros_file(source, digits);
  if (cfg.cache.empty()) throw ConfigError("fetch-zeros needs --cache");
  {
    std::ofstream f(cfg.cache, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + cfg.cache + "'");
    write_cache(cat, f);
  }
  nlohmann::json j = {{"command", "fetch-zeros"},
                      {"params", {{"source", source}, {"min_digits", digits}, {"cache", cfg.cache}}},
                      {"catalog", catalog_json(cat)}};
  emit(cfg, j.dump(2) + "\n", out);
  return kExitOk;
}

inline int run_constants(const RunConfig& cfg, std::ostream& out) {
  auto limit = to_count(cfg.params, "prime-limit", 10000000);
  ConstantSet c = constants();
  MertensConstants m = mertens_constants(limit);
  const char* lit = "embedded 40-digit literal (mpmath oracle, tools/scripts/oracle_constants.py)";
  nlohmann::json j = {
      {"command", "constants"},
      {"params", {{"prime_limit", limit}}},
      {"result",
       {{"w", {{"value", c.w}, {"provenance", "2 + C0 - log(4 pi), 50-digit evaluation"}}},
        {"B1", {{"value", c.B1}, {"provenance", "C0 + 2 - log(4 pi), 50-digit evaluation"}}},
        {"B2", {{"value", c.B2}, {"provenance", "closed form in zeta''(0), 50-digit evaluation"}}},
        {"B4", {{"value", c.B4}, {"provenance", "closed form in zeta''(0), zeta'''(0), zeta''''(0), 50-digit evaluation"}}},
        {"C0", {{"value", m.c0}, {"provenance", lit}}},
        {"C1", {{"value", m.c1}, {"remainder", m.c1_remainder}, {"provenance", "prime sum to the limit plus prime-zeta tail"}}},
        {"C2", {{"value", m.c2}, {"remainder", m.c2_remainder}, {"provenance", "prime sum to the limit plus prime-zeta tail"}}}}}};
  emit(cfg, j.dump(2) + "\n", out);
  return kExitOk;
}

inline int run_eta2(const RunConfig& cfg, std::ostream& out) {
  std::string profile = to_string(cfg.params, "profile", "paper");
  QuadratureParams p;
  if (profile == "paper")
    p = paper_profile();
  else if (profile == "fast")
    p = fast_profile();
  else
    throw ConfigError("unknown profile '" + profile + "' (expected paper or fast)");
  p.epsilon = to_double(cfg.params, "epsilon", p.epsilon);
  p.c_x = to_double(cfg.params, "cx", p.c_x);
  p.c_y = to_double(cfg.params, "cy", p.c_y);
  p.t_height = to_double(cfg.params, "height", p.t_height);
  p.j = static_cast<int>(to_count(cfg.params, "j", 0));
  p.k = static_cast<int>(to_count(cfg.params, "k", 0));
  validate_epsilon(p.epsilon);
  ZeroCatalog cat = load_catalog(cfg);
  Eta2Result r = eta2(p, cat, cfg.threads);
  nlohmann::json j = {
      {"command", "eta2"},
      {"params",
       {{"profile", profile},
        {"epsilon", r.params.epsilon},
        {"c_x", r.params.c_x},
        {"c_y", r.params.c_y},
        {"t_height", r.params.t_height},
        {"j", r.params.j},
        {"k", r.params.k}}},
      {"catalog", catalog_json(cat)},
      {"result",
       {{"value", r.value},
        {"rigorous_halfwidth", r.rigorous_halfwidth},
        {"err1", r.err1},
        {"err2", r.err2},
        {"err3", r.err3},
        {"lattice_sum", r.lattice_sum},
        {"mu2_q1", r.mu2_q1},
        {"mu2_q1_halfwidth", r.mu2_q1_halfwidth},
        {"tails", tails_json(r.tails)},
        {"reference_value", r.reference_value},
        {"reference_delta", r.reference_delta}}}};
  emit(cfg, j.dump(2) + "\n", out);
  return kExitOk;
}

inline int run_eta1(const RunConfig& cfg, std::ostream& out) {
  Eta1Params p;
  p.sigma = to_double(cfg.params, "sigma", 1.0);
  p.epsilon = to_double(cfg.params, "epsilon", p.epsilon);
  p.c = to_double(cfg.params, "c", p.c);
  p.t_height = to_double(cfg.params, "height", p.t_height);
  require(p.epsilon > 0.0, "eta1: require ε > 0");
  ZeroCatalog cat = load_catalog(cfg);
  DensityResult<Eta1Params> r;
  if (cfg.params.count("target"))
    r = eta1_auto(p, cat, to_double(cfg.params, "target", 5e-7), cfg.threads);
  else
    r = eta1(p, cat, cfg.threads);
  nlohmann::json j = {{"command", "eta1"},
                      {"params",
                       {{"sigma", r.params.sigma},
                        {"epsilon", r.params.epsilon},
                        {"c", r.params.c},
                        {"t_height", r.params.t_height}}},
                      {"catalog", catalog_json(cat)},
                      {"result",
                       {{"value", r.value},
                        {"rigorous_halfwidth", r.rigorous_halfwidth},
                        {"err1", r.err1},
                        {"err2", r.err2},
                        {"err3", r.err3}}}};
  emit(cfg, j.dump(2) + "\n", out);
  return kExitOk;
}

inline int run_sample(const RunConfig& cfg, std::ostream& out) {
  std::string kind = to_string(cfg.params, "kind", "v2");
  auto n = to_count(cfg.params, "n", 1000000);
  auto nz = static_cast<std::size_t>(to_count(cfg.params, "zeros-used", 2000));
  auto seed = to_seed(cfg.params, "seed", 42);
  ZeroCatalog cat = load_catalog(cfg);
  SampleBatch b;
  if (kind == "v1")
    b = sample_v1(n, nz, seed, cat, {0.5, 1.0, 1.5, 2.0}, cfg.threads);
  else if (kind == "v2")
    b = sample_v2(n, nz, seed, cat, cfg.threads);
  else if (kind == "nine")
    b = sample_nine(n, nz, seed, cat, cfg.threads);
  else
    throw ConfigError("unknown sample kind '" + kind + "' (expected v1, v2 or nine)");
  nlohmann::json est = nlohmann::json::object();
  for (const auto& [k, e] : b.estimates) est[k] = {{"mean", e.mean}, {"std_error", e.std_error}};
  nlohmann::json j = {{"command", "sample"},
                      {"params", {{"kind", kind}, {"n_samples", n}, {"n_zeros", nz}, {"seed", seed}}},
                      {"catalog", catalog_json(cat)},
                      {"result",
                       {{"estimates", est},
                        {"counts", b.counts},
                        {"truncation_bias", b.truncation_bias},
                        {"support_bound", b.support_bound},
                        {"support_violations", b.support_violations},
                        {"max_affine_deviation", b.max_affine_deviation}}}};
  emit(cfg, j.dump(2) + "\n", out);
  return kExitOk;
}

inline int run_race(const RunConfig& cfg, std::ostream& out) {
  PrimeFunction f = parse_prime_function(to_string(cfg.params, "f", "psi"));
  PrimeFunction g = parse_prime_function(to_string(cfg.params, "g", "psi_r"));
  double xmin = to_double(cfg.params, "xmin", 1e2);
  double xmax = to_double(cfg.params, "xmax", 1e8);
  auto points = static_cast<std::size_t>(to_count(cfg.params, "points", 400));
  auto limit = to_count(cfg.params, "prime-limit", 10000000);
  require(xmin >= 2.0 && xmax >= xmin, "race: require 2 ≤ xmin ≤ xmax");
  auto grid = points == 0 ? std::vector<double>{} : log_grid(xmin, xmax, points);
  PrimeSieve sieve(static_cast<std::uint64_t>(std::floor(xmax)));
  MertensConstants m = mertens_constants(limit);
  auto samples = race_scan(f, g, grid, sieve, m);
  std::ostringstream csv;
  csv << "x,ef,eg\n";
  char buf[96];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.x, s.ef, s.eg);
    csv << buf;
  }
  emit(cfg, csv.str(), out);
  if (cfg.params.count("plot")) {
    std::string path = cfg.params.at("plot");
    if (path.empty()) path = (cfg.output.empty() || cfg.output == "-" ? std::string("race") : cfg.output) + ".svg";
    std::ofstream svg(path);
    if (!svg) throw std::runtime_error("cannot write '" + path + "'");
    write_race_svg(svg, samples, constants().w);
  }
  return kExitOk;
}

}  // namespace cli

// Dispatches one command. Returns the process exit status.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    if (cfg.command == "fetch-zeros") return cli::run_fetch(cfg, out);
    if (cfg.command == "constants") return cli::run_constants(cfg, out);
    if (cfg.command == "eta2") return cli::run_eta2(cfg, out);
    if (cfg.command == "eta1") return cli::run_eta1(cfg, out);
    if (cfg.command == "sample") return cli::run_sample(cfg, out);
    if (cfg.command == "race") return cli::run_race(cfg, out);
    throw ConfigError("unknown command '" + cfg.command + "'");
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const CatalogError& e) {
    err << "catalog error: " << e.what() << "\n";
    return kExitCatalog;
  } catch (const ConsistencyError& e) {
    err << "consistency error: " << e.what() << "\n";
    return kExitConsistency;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

// Builds a RunConfig from argv. Precedence: flags, then the --config file,
// then the environment (ZEROS_PATH, ZRACE_THREADS). Returns an exit status
// when the process should stop (help or a parse error).
inline std::optional<int> parse_command_line(int argc, const char* const* argv, RunConfig& cfg,
                                             std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Prime number races with zeta zeros: densities, bounds and sieve data", "zrace"};
  app.require_subcommand(1);
  std::string zeros, cache, output, config_path, threads;
  app.add_option("--zeros", zeros, "zero catalog (text or binary cache); env ZEROS_PATH");
  app.add_option("--cache", cache, "binary catalog cache");
  app.add_option("--out,-o", output, "output file (default stdout)");
  app.add_option("--config", config_path, "key = value file; flags override it");
  app.add_option("--threads", threads, "worker threads (0 = all cores); env ZRACE_THREADS");

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, specs] : cli::command_options()) {
    CLI::App* sub = app.add_subcommand(name, cli::command_help(name));
    subs[name] = sub;
    for (const auto& spec : specs) {
      std::string key = spec.name;
      auto* opt = sub->add_option("--" + key, values[name][key], spec.help);
      if (key == "plot") opt->expected(0, 1);
    }
    // Global options may also follow the subcommand.
    sub->fallthrough();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  for (const auto& [name, sub] : subs) {
    if (!sub->parsed()) continue;
    cfg.command = name;
    for (const auto& spec : cli::command_options().at(name)) {
      auto* opt = sub->get_option("--" + std::string(spec.name));
      if (opt->count() > 0) cfg.params[spec.name] = values[name][spec.name];
    }
  }
  try {
    std::map<std::string, std::string> file;
    if (!config_path.empty()) file = cli::read_config_file(config_path, cfg.command);
    auto pick = [&](const std::string& flag, const std::string& key, const char* env) {
      if (!flag.empty()) return flag;
      if (auto it = file.find(key); it != file.end()) return it->second;
      if (env) {
        if (const char* v = std::getenv(env)) return std::string(v);
      }
      return std::string();
    };
    cfg.zeros = pick(zeros, "zeros", "ZEROS_PATH");
    cfg.cache = pick(cache, "cache", nullptr);
    cfg.output = pick(output, "out", nullptr);
    std::string t = pick(threads, "threads", "ZRACE_THREADS");
    cfg.threads = t.empty() ? 0 : static_cast<unsigned>(cli::to_count({{"threads", t}}, "threads", 0));
    for (const auto& spec : cli::command_options().at(cfg.command)) {
      if (cfg.params.count(spec.name)) continue;
      if (auto it = file.find(spec.name); it != file.end()) cfg.params[spec.name] = it->second;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return std::nullopt;
}

}  // namespace zrace
