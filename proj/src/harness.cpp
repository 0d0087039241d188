#include "kpzlab/harness.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "kpzlab/parallel.hpp"

namespace kpz {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("KPZLAB_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? int(hw) : 1;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

int64_t parse_i64(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    int64_t x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw std::invalid_argument("config: bad integer for '" + key + "': " + v);
  }
}

double parse_f64(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw std::invalid_argument("config: bad number for '" + key + "': " + v);
  }
}

}  // namespace

void apply_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "experiment") {
    cfg.experiment = value;
  } else if (key == "n") {
    cfg.n = parse_i64(value, key);
  } else if (key == "N") {
    cfg.N = parse_i64(value, key);
  } else if (key == "replicas") {
    cfg.replicas = parse_i64(value, key);
  } else if (key == "t") {
    cfg.t = parse_f64(value, key);
  } else if (key == "gamma") {
    cfg.gamma = parse_f64(value, key);
  } else if (key == "rho") {
    cfg.rho = parse_f64(value, key);
  } else if (key == "w") {
    cfg.w = parse_f64(value, key);
  } else if (key == "kappa") {
    cfg.kappa = parse_f64(value, key);
  } else if (key == "M") {
    cfg.M = parse_f64(value, key);
  } else if (key == "delta") {
    cfg.delta = parse_f64(value, key);
  } else if (key == "nu") {
    cfg.nu = parse_f64(value, key);
  } else if (key == "eps") {
    cfg.eps = parse_f64(value, key);
  } else if (key == "seed") {
    cfg.seed = uint64_t(std::stoull(value));
  } else if (key == "threads") {
    cfg.threads = int(parse_i64(value, key));
  } else if (key == "out") {
    cfg.out = value;
  } else {
    cfg.extra[key] = value;
  }
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  ExperimentConfig cfg;
  std::string line;
  while (std::getline(in, line)) {
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key=value, got: " + line);
    apply_config_key(cfg, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
  }
  return cfg;
}

}  // namespace kpz
