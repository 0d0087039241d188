#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kpz {

struct ExperimentConfig {
  std::string experiment;
  std::optional<int64_t> n, N, replicas;
  std::optional<double> t, gamma, rho, w, kappa, M, delta, nu, eps;
  uint64_t seed = 1;
  int threads = 0;  // 0 = KPZLAB_THREADS env or hardware count
  std::string out;  // default "<experiment>.csv"
  std::map<std::string, std::string> extra;  // config-file keys without CLI flags
};

// key=value lines, '#' comments; unknown keys land in extra.
ExperimentConfig load_config_file(const std::string& path);
void apply_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);

struct ExperimentOutcome {
  bool pass = false;
  double ks = std::numeric_limits<double>::quiet_NaN();
  int64_t n_samples = 0;
  std::string message;
  std::string csv_path, summary_path;
};

// Dispatches on cfg.experiment, writes the CSV and <out>.summary.json,
// returns the claim verdict. Throws std::invalid_argument on bad
// parameters/usage.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

// --- sample builders, shared with the acceptance suite -------------------

std::vector<double> point_gue_samples(double gamma, int64_t n, int64_t replicas, uint64_t seed,
                                      int threads);

struct FlatGoeData {
  std::vector<double> L;
  std::vector<double> s;  // rescaled fluctuation
  std::vector<double> v;  // argmax start location in v-units
  int64_t edge_hits = 0;  // argmax within one v-unit of the truncation edge
};
FlatGoeData flat_goe_samples(double rho, double w, int64_t N, double vmax, int64_t replicas,
                             uint64_t seed, int threads);

std::vector<int64_t> tasep_current_samples(double rho, double t, int64_t replicas, uint64_t seed,
                                           int threads, bool kmc_mode);

std::vector<double> slowdec_diffs(int64_t ell, double nu, int64_t replicas, uint64_t seed,
                                  int threads);

// per replica, one modulus value per delta
std::vector<std::vector<double>> modulus_samples(double gamma, int64_t n, double M,
                                                 std::span<const double> deltas, int64_t replicas,
                                                 uint64_t seed, int threads);

}  // namespace kpz
