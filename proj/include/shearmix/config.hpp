#pragma once

// Run configuration: defaults, plain `key = value` config files with `#`
// comments, and command-line flags. Precedence: flags > config file >
// defaults. Unknown keys are errors.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "shearmix/fft.hpp"
#include "shearmix/torus.hpp"

namespace shearmix {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double tau = 1.0;
  std::uint64_t seed = 12345;
  int grid = 256;
  int steps = 60;
  double s = 1.0;
  std::vector<double> q_list = {0.0, -0.05, 0.05, 0.1};
  double p = 0.1;
  double s_star = 0.5;  // min(0.5, injectivity radius / 4)
  std::string output_dir = ".";
  int threads = 0;  // 0 = hardware default

  // spectral operator resolution
  int nx = 32, ny = 32, nv = 64;
  int mc_samples = 64;
  int max_iter = 200;
  double tol = 1e-3;

  // drift check
  int pairs = 500;
  int mc_per_pair = 256;

  // steering
  std::string mode = "one";  // one | projective | two
  double eps = 0.05;
  double x1 = 1.0, x2 = 1.0;
  double y1 = 4.0, y2 = 5.0;
  double xt1 = 2.0, xt2 = 3.0;
  double yt1 = 5.0, yt2 = 1.0;
  double v1 = 1.0, v2 = 0.0;
  double vt1 = 0.0, vt2 = 1.0;

  // lyapunov
  int ensemble = 32;
  long lyap_steps = 100000;
};

namespace detail {

inline void assign_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  auto parse_double = [&](double& dst) {
    std::size_t pos = 0;
    try {
      dst = std::stod(value, &pos);
    } catch (const std::exception&) {
      throw ConfigError("invalid value for `" + key + "`: " + value);
    }
    if (pos != value.size()) throw ConfigError("invalid value for `" + key + "`: " + value);
  };
  auto parse_int = [&](auto& dst) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(value, &pos);
    } catch (const std::exception&) {
      throw ConfigError("invalid value for `" + key + "`: " + value);
    }
    if (pos != value.size()) throw ConfigError("invalid value for `" + key + "`: " + value);
    dst = static_cast<std::remove_reference_t<decltype(dst)>>(v);
  };
  auto parse_u64 = [&](std::uint64_t& dst) {
    std::size_t pos = 0;
    try {
      dst = std::stoull(value, &pos);
    } catch (const std::exception&) {
      throw ConfigError("invalid value for `" + key + "`: " + value);
    }
    if (pos != value.size()) throw ConfigError("invalid value for `" + key + "`: " + value);
  };

  if (key == "tau") parse_double(cfg.tau);
  else if (key == "seed") parse_u64(cfg.seed);
  else if (key == "grid") parse_int(cfg.grid);
  else if (key == "steps") parse_int(cfg.steps);
  else if (key == "s") parse_double(cfg.s);
  else if (key == "p") parse_double(cfg.p);
  else if (key == "s_star") parse_double(cfg.s_star);
  else if (key == "output_dir") cfg.output_dir = value;
  else if (key == "threads") parse_int(cfg.threads);
  else if (key == "nx") parse_int(cfg.nx);
  else if (key == "ny") parse_int(cfg.ny);
  else if (key == "nv") parse_int(cfg.nv);
  else if (key == "mc_samples") parse_int(cfg.mc_samples);
  else if (key == "max_iter") parse_int(cfg.max_iter);
  else if (key == "tol") parse_double(cfg.tol);
  else if (key == "pairs") parse_int(cfg.pairs);
  else if (key == "mc_per_pair") parse_int(cfg.mc_per_pair);
  else if (key == "mode") cfg.mode = value;
  else if (key == "eps") parse_double(cfg.eps);
  else if (key == "x1") parse_double(cfg.x1);
  else if (key == "x2") parse_double(cfg.x2);
  else if (key == "y1") parse_double(cfg.y1);
  else if (key == "y2") parse_double(cfg.y2);
  else if (key == "xt1") parse_double(cfg.xt1);
  else if (key == "xt2") parse_double(cfg.xt2);
  else if (key == "yt1") parse_double(cfg.yt1);
  else if (key == "yt2") parse_double(cfg.yt2);
  else if (key == "v1") parse_double(cfg.v1);
  else if (key == "v2") parse_double(cfg.v2);
  else if (key == "vt1") parse_double(cfg.vt1);
  else if (key == "vt2") parse_double(cfg.vt2);
  else if (key == "ensemble") parse_int(cfg.ensemble);
  else if (key == "lyap_steps") parse_int(cfg.lyap_steps);
  else if (key == "q_list") {
    cfg.q_list.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) throw ConfigError("invalid value for `q_list`: " + value);
      std::size_t pos = 0;
      double q = 0;
      try {
        q = std::stod(item, &pos);
      } catch (const std::exception&) {
        throw ConfigError("invalid value for `q_list`: " + value);
      }
      if (pos != item.size()) throw ConfigError("invalid value for `q_list`: " + value);
      cfg.q_list.push_back(q);
    }
    if (cfg.q_list.empty()) throw ConfigError("invalid value for `q_list`: " + value);
  } else {
    throw ConfigError("unknown key `" + key + "`");
  }
}

inline void load_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string& s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
    };
    trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected `key = value`");
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    trim(key);
    trim(value);
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    assign_key(cfg, key, value);
  }
}

inline void validate(const RunConfig& cfg) {
  if (cfg.tau < 0.0) throw ConfigError("invalid value for `tau`: must be >= 0");
  if (cfg.grid < 32 || !is_power_of_two(static_cast<unsigned>(cfg.grid)))
    throw ConfigError("invalid value for `grid`: must be a power of two >= 32");
  if (cfg.steps < 1) throw ConfigError("invalid value for `steps`: must be >= 1");
}

}  // namespace detail

// argv excludes the subcommand; a `--config <file>` pair may appear anywhere.
inline RunConfig parse_config(const std::vector<std::string>& argv) {
  RunConfig cfg;
  if (const char* env = std::getenv("MIXER_OUTPUT_DIR")) cfg.output_dir = env;

  // config file first (flags override)
  for (std::size_t i = 0; i < argv.size(); ++i) {
    if (argv[i] == "--config") {
      if (i + 1 >= argv.size()) throw ConfigError("--config requires a file path");
      detail::load_config_file(cfg, argv[i + 1]);
    }
  }
  for (std::size_t i = 0; i < argv.size(); ++i) {
    const std::string& a = argv[i];
    if (a.rfind("--", 0) != 0) throw ConfigError("unexpected argument `" + a + "`");
    std::string key = a.substr(2);
    for (auto& ch : key)
      if (ch == '-') ch = '_';
    if (i + 1 >= argv.size()) throw ConfigError("flag `" + a + "` requires a value");
    const std::string& value = argv[++i];
    if (key == "config") continue;  // already applied
    detail::assign_key(cfg, key, value);
  }
  detail::validate(cfg);
  return cfg;
}

}  // namespace shearmix
