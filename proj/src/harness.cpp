#include "kbandit/harness.hpp"

#include <filesystem>
#include <fstream>

#include "kbandit/baselines.hpp"
#include "kbandit/info_gain.hpp"

namespace kbandit {

std::unique_ptr<Environment> make_environment(const ExperimentConfig& config,
                                              std::uint64_t seed) {
  const std::uint64_t env_seed = derive_seed(seed, 1);
  if (config.env_kind == EnvKind::synthetic) {
    return std::make_unique<SyntheticEnv>(config.dim, config.reward, config.noise_std,
                                          config.candidate_size, env_seed);
  }
  ArmPool pool = load_arm_pool(config.arm_pool_path);
  return std::make_unique<ArmPoolEnv>(std::move(pool), config.pool_policy, config.noise_std,
                                      config.candidate_size, env_seed);
}

std::unique_ptr<BanditAlgorithm> make_algorithm(const ExperimentConfig& config,
                                                std::uint64_t seed) {
  AlgoParams p;
  p.kernel = config.kernel;
  p.lambda = config.lambda;
  p.d_threshold = config.d_threshold;
  p.alpha_mode =
      config.alpha_mode == AlphaModeCfg::theory ? AlphaMode::theory : AlphaMode::grid_constant;
  p.alpha = config.alpha;
  p.theta_norm_bound = config.theta_norm_bound;
  p.noise_R = config.noise_R;
  p.delta = config.delta;
  p.clients = config.clients;
  p.rounds = config.rounds;
  p.epsilon = config.epsilon;
  p.qbar = config.qbar;
  p.rls_sample_all = config.rls_sample_all;

  switch (config.algorithm) {
    case Algorithm::diskernel_exact:
      return std::make_unique<DisKernelUcb>(p);
    case Algorithm::approx_diskernel:
      return std::make_unique<ApproxDisKernelUcb>(p, derive_seed(seed, 2));
    case Algorithm::dislinucb:
      return std::make_unique<DisLinUcb>(p, config.dim);
    case Algorithm::one_kernelucb:
      return std::make_unique<OneKernelUcb>(p);
    case Algorithm::n_kernelucb:
      return std::make_unique<NKernelUcb>(p);
  }
  throw ConfigError("unknown algorithm");
}

MetricsTrace run_single(const ExperimentConfig& config, std::uint64_t seed) {
  validate(config);
  auto env = make_environment(config, seed);
  auto alg = make_algorithm(config, seed);
  InfoGainTracker gain(config.kernel, config.lambda);

  MetricsTrace trace;
  const long total = config.clients * config.rounds;
  trace.t.reserve(total);
  trace.regret.reserve(total);
  trace.cum_regret.reserve(total);
  trace.cum_scalars.reserve(total);
  trace.chosen.reserve(total);
  trace.chosen_features.resize(total, env->dim());

  double cum_regret = 0.0;
  for (long l = 1; l <= config.rounds; ++l) {
    for (int i = 1; i <= static_cast<int>(config.clients); ++i) {
      const long t = global_time(config.clients, l, i);
      const Candidates cands = env->draw_candidates();
      const int chosen = alg->choose(i, cands.features);
      const double inst_regret = cands.means.maxCoeff() - cands.means(chosen);
      const double y = env->observe_mean(cands.means(chosen));
      const long syncs_before = alg->ledger().sync_count();
      alg->observe(i, t, cands.features.row(chosen).transpose(), y);

      cum_regret += inst_regret;
      trace.t.push_back(t);
      trace.regret.push_back(inst_regret);
      trace.cum_regret.push_back(cum_regret);
      trace.cum_scalars.push_back(alg->ledger().cumulative_scalars);
      trace.chosen.push_back(chosen);
      trace.chosen_features.row(t - 1) = cands.features.row(chosen);
      gain.add(cands.features.row(chosen).transpose());

      for (long s = syncs_before; s < alg->ledger().sync_count(); ++s) {
        trace.syncs.push_back(SyncEvent{alg->ledger().sync_times[s],
                                        alg->ledger().per_sync_scalars[s],
                                        alg->dictionary_size()});
      }
    }
  }
  trace.gamma_hat = gain.gain();
  return trace;
}

std::vector<MetricsTrace> run_replicates(const ExperimentConfig& config) {
  std::vector<MetricsTrace> traces;
  traces.reserve(config.replicates);
  for (int r = 0; r < config.replicates; ++r) {
    traces.push_back(run_single(config, config.seed + static_cast<std::uint64_t>(r)));
  }
  return traces;
}

std::vector<std::string> emit_replicates(const std::vector<MetricsTrace>& traces,
                                         const std::string& out_dir, TraceFormat format) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> paths;
  for (std::size_t r = 0; r < traces.size(); ++r) {
    const std::string stem = out_dir + "/trace_r" + std::to_string(r);
    if (format == TraceFormat::csv) {
      write_trace_csv(traces[r], stem + ".csv");
      paths.push_back(stem + ".csv");
    } else {
      write_trace_json(traces[r], stem + ".json");
      paths.push_back(stem + ".json");
    }
  }
  return paths;
}

namespace {

void cartesian(const std::vector<std::pair<std::string, std::vector<std::string>>>& axes,
               std::size_t at, std::map<std::string, std::string>& acc,
               std::vector<std::map<std::string, std::string>>& out) {
  if (at == axes.size()) {
    out.push_back(acc);
    return;
  }
  for (const std::string& v : axes[at].second) {
    acc[axes[at].first] = v;
    cartesian(axes, at + 1, acc, out);
  }
  acc.erase(axes[at].first);
}

}  // namespace

int run_sweep(const std::string& config_path, const std::string& grid_path,
              const std::string& out_dir, TraceFormat format) {
  auto base_kv = parse_flat_file(config_path);
  auto grid_kv = parse_flat_file(grid_path);

  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  for (const auto& [key, value] : grid_kv) {
    std::vector<std::string> values;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto b = item.find_first_not_of(" \t");
      const auto e = item.find_last_not_of(" \t");
      if (b == std::string::npos) continue;
      values.push_back(item.substr(b, e - b + 1));
    }
    if (values.empty()) {
      throw ConfigError("sweep: grid key '" + key + "' has no values");
    }
    axes.emplace_back(key, std::move(values));
  }

  std::vector<std::map<std::string, std::string>> combos;
  std::map<std::string, std::string> acc;
  cartesian(axes, 0, acc, combos);

  std::filesystem::create_directories(out_dir);
  std::ofstream manifest(out_dir + "/manifest.csv", std::ios::binary);
  manifest << "combo";
  for (const auto& axis : axes) manifest << "," << axis.first;
  manifest << "\n";

  int combo_id = 0;
  for (const auto& combo : combos) {
    auto kv = base_kv;
    for (const auto& [key, value] : combo) kv[key] = value;
    const ExperimentConfig config = config_from_kv(kv);
    const auto traces = run_replicates(config);
    emit_replicates(traces, out_dir + "/combo_" + std::to_string(combo_id), format);
    manifest << combo_id;
    for (const auto& axis : axes) manifest << "," << combo.at(axis.first);
    manifest << "\n";
    ++combo_id;
  }
  return combo_id;
}

}  // namespace kbandit
