#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <vector>

#include "kbandit/comm.hpp"
#include "kbandit/exact_posterior.hpp"
#include "kbandit/kernel.hpp"
#include "kbandit/nystrom.hpp"
#include "kbandit/rng.hpp"

namespace kbandit {

struct DataPoint {
  long t = 0;
  int owner = 0;  // client id in [1, N]
  Eigen::VectorXd x;
  double y = 0.0;
};

enum class AlphaMode { grid_constant, theory };

// Knobs shared by every algorithm in the star network.
struct AlgoParams {
  KernelSpec kernel;
  double lambda = 1.0;
  double d_threshold = 20.0;
  AlphaMode alpha_mode = AlphaMode::grid_constant;
  double alpha = 1.0;
  // Theory-mode inputs.
  double theta_norm_bound = 1.0;
  double noise_R = 0.1;
  double delta = 0.05;
  long clients = 1;
  long rounds = 1;
  // Approximate mode.
  double epsilon = 0.25;
  double qbar = 0.0;  // <= 0 resolves to the theory value
  bool rls_sample_all = false;
};

class BanditAlgorithm {
 public:
  explicit BanditAlgorithm(AlgoParams params) : params_(std::move(params)) {}
  virtual ~BanditAlgorithm() = default;

  // Argmax of the UCB score over candidate rows; ties go to the lowest index.
  int choose(int client, const Eigen::Ref<const Eigen::MatrixXd>& candidates) const;

  // Reward arrival: local update, trigger evaluation, synchronous sync.
  virtual void observe(int client, long t, const Eigen::Ref<const Eigen::VectorXd>& x,
                       double y) = 0;

  virtual double score(int client, const Eigen::Ref<const Eigen::VectorXd>& x) const = 0;
  virtual MeanStd mean_std(int client, const Eigen::Ref<const Eigen::VectorXd>& x) const = 0;

  const CommLedger& ledger() const { return ledger_; }
  const AlgoParams& params() const { return params_; }
  virtual long dictionary_size() const { return 0; }

 protected:
  AlgoParams params_;
  CommLedger ledger_;
};

// Exact raw-data protocol: dual-form posteriors per client, determinant-ratio
// trigger, full raw synchronization.
class DisKernelUcb : public BanditAlgorithm {
 public:
  explicit DisKernelUcb(AlgoParams params);

  void observe(int client, long t, const Eigen::Ref<const Eigen::VectorXd>& x,
               double y) override;
  double score(int client, const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  MeanStd mean_std(int client, const Eigen::Ref<const Eigen::VectorXd>& x) const override;

  bool trigger(int client) const;
  // Global raw-data synchronization at time t (normally driven by the trigger).
  void sync_exact(long t);

  const ExactPosterior& posterior(int client) const { return clients_[client - 1].model; }
  long upload_buffer_size(int client) const {
    return static_cast<long>(clients_[client - 1].buffer.size());
  }

 private:
  struct Client {
    ExactPosterior model;
    std::vector<DataPoint> buffer;  // own points since the last sync
    double logdet_at_sync = 0.0;
    long count_at_sync = 0;
  };
  std::vector<Client> clients_;

  double alpha_for(const Client& c) const;
};

// Nystrom protocol: shared dictionary + embedded statistics, frozen-variance
// trigger, four-phase synchronization with RLS dictionary resampling.
class ApproxDisKernelUcb : public BanditAlgorithm {
 public:
  ApproxDisKernelUcb(AlgoParams params, std::uint64_t seed);

  void observe(int client, long t, const Eigen::Ref<const Eigen::VectorXd>& x,
               double y) override;
  double score(int client, const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  MeanStd mean_std(int client, const Eigen::Ref<const Eigen::VectorXd>& x) const override;

  long dictionary_size() const override { return dict_ ? dict_->size() : 0; }
  bool trigger(int client) const;
  // Four-phase dictionary + embedded-statistics synchronization at time t.
  void sync_approx(long t);

  double trigger_accumulator(int client) const { return clients_[client - 1].accumulator; }
  long t_last() const { return t_last_; }
  double qbar() const { return qbar_; }
  const EmbeddedStats& stats(int client) const { return clients_[client - 1].live.stats(); }
  const std::shared_ptr<const Dictionary>& dictionary() const { return dict_; }

 private:
  struct Client {
    std::vector<DataPoint> log;       // own interactions, arrival order
    std::vector<double> frozen_var;   // sigma~^2 under the frozen model, per log entry
    ApproxScorer live;
    ApproxScorer frozen;
    double accumulator = 0.0;
    Rng rng;
  };
  std::shared_ptr<const Dictionary> dict_;
  std::vector<Client> clients_;
  long t_last_ = 0;
  double qbar_ = 0.0;

  double alpha_for(const Client& c) const;
};

// t = N(l-1) + i bookkeeping for the round-robin schedule.
inline long global_time(long clients, long round, int client) {
  return clients * (round - 1) + client;
}

}  // namespace kbandit
