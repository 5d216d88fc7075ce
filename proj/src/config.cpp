#include "kbandit/config.hpp"

#include <fstream>
#include <sstream>

namespace kbandit {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: '" + key + "' expects an integer, got '" + value + "'");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config: '" + key + "' expects a boolean, got '" + value + "'");
}

}  // namespace

std::map<std::string, std::string> parse_flat_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  std::string section;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config: malformed section header at line " + std::to_string(line_no));
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: expected 'key = value' at line " + std::to_string(line_no));
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config: empty key at line " + std::to_string(line_no));
    }
    if (!section.empty()) key = section + "." + key;
    kv[key] = value;
  }
  return kv;
}

std::map<std::string, std::string> parse_flat_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_flat_text(ss.str());
}

ExperimentConfig config_from_kv(const std::map<std::string, std::string>& kv) {
  ExperimentConfig c;
  bool d_threshold_given = false;

  static const std::map<std::string, Algorithm> algos = {
      {"diskernel_exact", Algorithm::diskernel_exact},
      {"approx_diskernel", Algorithm::approx_diskernel},
      {"dislinucb", Algorithm::dislinucb},
      {"one_kernelucb", Algorithm::one_kernelucb},
      {"n_kernelucb", Algorithm::n_kernelucb}};

  for (const auto& [key, value] : kv) {
    if (key == "algorithm") {
      const auto it = algos.find(value);
      if (it == algos.end()) throw ConfigError("config: unknown algorithm '" + value + "'");
      c.algorithm = it->second;
    } else if (key == "seed") {
      c.seed = static_cast<std::uint64_t>(parse_long(key, value));
    } else if (key == "replicates") {
      c.replicates = static_cast<int>(parse_long(key, value));
    } else if (key == "problem.clients") {
      c.clients = parse_long(key, value);
    } else if (key == "problem.rounds") {
      c.rounds = parse_long(key, value);
    } else if (key == "problem.dim") {
      c.dim = static_cast<int>(parse_long(key, value));
    } else if (key == "kernel.family") {
      if (value == "gaussian") {
        c.kernel.family = KernelFamily::gaussian;
      } else if (value == "linear") {
        c.kernel.family = KernelFamily::linear;
      } else {
        throw ConfigError("config: unknown kernel family '" + value + "'");
      }
    } else if (key == "kernel.gamma") {
      c.kernel.gamma = parse_double(key, value);
    } else if (key == "model.lambda") {
      c.lambda = parse_double(key, value);
    } else if (key == "model.d_threshold") {
      c.d_threshold = parse_double(key, value);
      d_threshold_given = true;
    } else if (key == "model.alpha") {
      c.alpha = parse_double(key, value);
    } else if (key == "model.alpha_mode") {
      if (value == "grid_constant") {
        c.alpha_mode = AlphaModeCfg::grid_constant;
      } else if (value == "theory") {
        c.alpha_mode = AlphaModeCfg::theory;
      } else {
        throw ConfigError("config: unknown alpha_mode '" + value + "'");
      }
    } else if (key == "approx.epsilon") {
      c.epsilon = parse_double(key, value);
    } else if (key == "approx.delta") {
      c.delta = parse_double(key, value);
    } else if (key == "approx.qbar") {
      c.qbar = value == "auto" ? 0.0 : parse_double(key, value);
    } else if (key == "approx.sample_all") {
      c.rls_sample_all = parse_bool(key, value);
    } else if (key == "env.kind") {
      if (value == "synthetic") {
        c.env_kind = EnvKind::synthetic;
      } else if (value == "arm_pool") {
        c.env_kind = EnvKind::arm_pool;
      } else {
        throw ConfigError("config: unknown env kind '" + value + "'");
      }
    } else if (key == "env.reward") {
      if (value == "f1") {
        c.reward = RewardFn::f1;
      } else if (value == "f2") {
        c.reward = RewardFn::f2;
      } else {
        throw ConfigError("config: unknown reward function '" + value + "'");
      }
    } else if (key == "env.noise_std") {
      c.noise_std = parse_double(key, value);
    } else if (key == "env.candidate_size") {
      c.candidate_size = static_cast<int>(parse_long(key, value));
    } else if (key == "env.path") {
      c.arm_pool_path = value;
    } else if (key == "env.policy") {
      if (value == "uniform_k") {
        c.pool_policy = CandidatePolicy::uniform_k;
      } else if (value == "one_positive") {
        c.pool_policy = CandidatePolicy::one_positive_rest_negative;
      } else {
        throw ConfigError("config: unknown candidate policy '" + value + "'");
      }
    } else if (key == "theory.theta_norm_bound") {
      c.theta_norm_bound = parse_double(key, value);
    } else if (key == "theory.reward_sub_gaussian") {
      c.noise_R = parse_double(key, value);
    } else if (key == "theory.arm_norm_bound") {
      c.arm_norm_bound = parse_double(key, value);
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }

  if (!d_threshold_given) {
    c.d_threshold = c.algorithm == Algorithm::approx_diskernel ? 5.0 : 20.0;
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  return config_from_kv(parse_flat_file(path));
}

void validate(const ExperimentConfig& c) {
  if (c.clients < 1) throw ConfigError("config: clients must be >= 1");
  if (c.rounds < 0) throw ConfigError("config: rounds must be >= 0");
  if (c.dim < 1) throw ConfigError("config: dim must be >= 1");
  if (c.kernel.family == KernelFamily::gaussian && !(c.kernel.gamma > 0.0)) {
    throw ConfigError("config: gaussian kernel needs gamma > 0");
  }
  if (!(c.lambda > 0.0)) throw ConfigError("config: lambda must be positive");
  if (c.d_threshold < 0.0) throw ConfigError("config: d_threshold must be nonnegative");
  if (c.candidate_size < 1) throw ConfigError("config: candidate_size must be >= 1");
  if (c.noise_std < 0.0) throw ConfigError("config: noise_std must be nonnegative");
  if (c.replicates < 1) throw ConfigError("config: replicates must be >= 1");
  if (c.algorithm == Algorithm::approx_diskernel) {
    if (!(c.delta > 0.0 && c.delta < 1.0)) throw ConfigError("config: delta must be in (0,1)");
    if (c.qbar <= 0.0 && !c.rls_sample_all && !(c.epsilon > 0.0 && c.epsilon < 1.0)) {
      throw ConfigError("config: epsilon must be in (0,1) to derive qbar");
    }
    if (c.alpha_mode == AlphaModeCfg::theory) {
      if (!(c.epsilon >= 0.0 && c.epsilon < 1.0 / 3.0)) {
        throw ConfigError("config: theory alpha requires epsilon in [0, 1/3)");
      }
      const double ratio = (1.0 + c.epsilon) / (1.0 - c.epsilon);
      if (!(-c.epsilon + 1.0 / (1.0 + ratio * c.d_threshold) > 0.0)) {
        throw ConfigError(
            "config: theory alpha requires -eps + 1/(1 + (1+eps)/(1-eps)*D) > 0");
      }
    }
  }
  if (c.env_kind == EnvKind::arm_pool && c.arm_pool_path.empty()) {
    throw ConfigError("config: arm_pool environment needs env.path");
  }
}

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::diskernel_exact: return "diskernel_exact";
    case Algorithm::approx_diskernel: return "approx_diskernel";
    case Algorithm::dislinucb: return "dislinucb";
    case Algorithm::one_kernelucb: return "one_kernelucb";
    case Algorithm::n_kernelucb: return "n_kernelucb";
  }
  return "unknown";
}

}  // namespace kbandit
