#pragma once

#include <Eigen/Core>
#include <vector>

#include "kbandit/protocol.hpp"

namespace kbandit {

// Event-triggered linear baseline sharing d x d sufficient statistics.
class DisLinUcb : public BanditAlgorithm {
 public:
  DisLinUcb(AlgoParams params, int dim);

  void observe(int client, long t, const Eigen::Ref<const Eigen::VectorXd>& x,
               double y) override;
  double score(int client, const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  MeanStd mean_std(int client, const Eigen::Ref<const Eigen::VectorXd>& x) const override;

  bool trigger(int client) const;

 private:
  struct Client {
    Eigen::MatrixXd lower;  // factor of A = Phi^T Phi + lambda I
    Eigen::VectorXd b;
    long count = 0;
    double logdet_at_sync = 0.0;
    long count_at_sync = 0;
    Eigen::MatrixXd delta_A;  // raw statistics gathered since the last sync
    Eigen::VectorXd delta_b;
  };
  int dim_;
  std::vector<Client> clients_;
  Eigen::MatrixXd shared_A_;  // aggregate at the last sync, lambda included
  Eigen::VectorXd shared_b_;
  long shared_count_ = 0;

  void sync(long t);
  double logdet_(const Client& c) const;
  double alpha_for(const Client& c) const;
};

// Raw-point broadcast after every single interaction; one shared posterior.
class OneKernelUcb : public BanditAlgorithm {
 public:
  explicit OneKernelUcb(AlgoParams params);

  void observe(int client, long t, const Eigen::Ref<const Eigen::VectorXd>& x,
               double y) override;
  double score(int client, const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  MeanStd mean_std(int client, const Eigen::Ref<const Eigen::VectorXd>& x) const override;

  const ExactPosterior& posterior() const { return model_; }

 private:
  ExactPosterior model_;
  double alpha_for_() const;
};

// Fully local learning, no communication ever.
class NKernelUcb : public BanditAlgorithm {
 public:
  explicit NKernelUcb(AlgoParams params);

  void observe(int client, long t, const Eigen::Ref<const Eigen::VectorXd>& x,
               double y) override;
  double score(int client, const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  MeanStd mean_std(int client, const Eigen::Ref<const Eigen::VectorXd>& x) const override;

  const ExactPosterior& posterior(int client) const { return models_[client - 1]; }

 private:
  std::vector<ExactPosterior> models_;
};

}  // namespace kbandit
