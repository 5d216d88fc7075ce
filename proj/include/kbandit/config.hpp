#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "kbandit/environment.hpp"
#include "kbandit/kernel.hpp"

namespace kbandit {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Algorithm { diskernel_exact, approx_diskernel, dislinucb, one_kernelucb, n_kernelucb };
enum class AlphaModeCfg { grid_constant, theory };
enum class EnvKind { synthetic, arm_pool };

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::diskernel_exact;
  long clients = 5;
  long rounds = 20;
  int dim = 20;

  KernelSpec kernel = KernelSpec{KernelFamily::gaussian, 1.0};
  double lambda = 1.0;
  double d_threshold = 20.0;  // default 5 when the algorithm is approx_diskernel
  AlphaModeCfg alpha_mode = AlphaModeCfg::grid_constant;
  double alpha = 1.0;

  double epsilon = 0.25;
  double delta = 0.05;
  double qbar = 0.0;  // <= 0: use the theory value
  bool rls_sample_all = false;

  EnvKind env_kind = EnvKind::synthetic;
  RewardFn reward = RewardFn::f1;
  double noise_std = 0.1;
  int candidate_size = 20;
  std::string arm_pool_path;
  CandidatePolicy pool_policy = CandidatePolicy::uniform_k;

  double theta_norm_bound = 1.0;
  double noise_R = 0.1;
  double arm_norm_bound = 1.0;

  std::uint64_t seed = 0;
  int replicates = 3;
};

// Flat key = value grammar with [section] headers prefixing keys as
// "section.key"; '#' starts a comment.
std::map<std::string, std::string> parse_flat_file(const std::string& path);
std::map<std::string, std::string> parse_flat_text(const std::string& text);

ExperimentConfig config_from_kv(const std::map<std::string, std::string>& kv);
ExperimentConfig load_config(const std::string& path);
void validate(const ExperimentConfig& config);

const char* algorithm_name(Algorithm a);

}  // namespace kbandit
