#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>

#include "kbandit/rng.hpp"

namespace kbandit {

double f1(const Eigen::Ref<const Eigen::VectorXd>& x,
          const Eigen::Ref<const Eigen::VectorXd>& theta);
double f2(const Eigen::Ref<const Eigen::VectorXd>& x,
          const Eigen::Ref<const Eigen::VectorXd>& theta);

// One round's candidate set. True means stay on the environment side of the
// fence; algorithms only ever see the feature rows.
struct Candidates {
  Eigen::MatrixXd features;  // candidate_size x d
  Eigen::VectorXd means;
};

class Environment {
 public:
  virtual ~Environment() = default;
  virtual int dim() const = 0;
  virtual Candidates draw_candidates() = 0;
  // Reward draw for an arm whose true mean is known from draw_candidates().
  virtual double observe_mean(double true_mean) = 0;
};

enum class RewardFn { f1, f2 };

class SyntheticEnv : public Environment {
 public:
  SyntheticEnv(int dim, RewardFn reward, double noise_std, int candidate_size,
               std::uint64_t seed);

  int dim() const override { return dim_; }
  Candidates draw_candidates() override;
  double observe_mean(double true_mean) override;

  // f(x) + noise, for direct probing of the reward process.
  double observe(const Eigen::Ref<const Eigen::VectorXd>& x);
  double true_mean(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  const Eigen::VectorXd& theta_star() const { return theta_; }

 private:
  int dim_;
  RewardFn reward_;
  double noise_std_;
  int candidate_size_;
  Rng rng_;
  Eigen::VectorXd theta_;

  Eigen::VectorXd sample_unit_ball_();
};

enum class CandidatePolicy { uniform_k, one_positive_rest_negative };

struct ArmPool {
  Eigen::MatrixXd features;
  Eigen::VectorXd rewards;  // per-arm mean reward
};

// CSV with header f0,...,f{d-1},reward. Rejects NaN/Inf and malformed rows
// with the offending line number.
ArmPool load_arm_pool(const std::string& path);
void write_arm_pool(const std::string& path, const ArmPool& pool);

class ArmPoolEnv : public Environment {
 public:
  ArmPoolEnv(ArmPool pool, CandidatePolicy policy, double noise_std, int candidate_size,
             std::uint64_t seed);

  int dim() const override { return static_cast<int>(pool_.features.cols()); }
  Candidates draw_candidates() override;
  double observe_mean(double true_mean) override;

  long pool_size() const { return pool_.features.rows(); }

 private:
  ArmPool pool_;
  CandidatePolicy policy_;
  double noise_std_;
  int candidate_size_;
  Rng rng_;
  std::vector<long> positive_, zero_;
};

}  // namespace kbandit
