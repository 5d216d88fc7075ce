#include "kbandit/baselines.hpp"

#include <cmath>

#include "kbandit/linalg.hpp"

namespace kbandit {

DisLinUcb::DisLinUcb(AlgoParams params, int dim)
    : BanditAlgorithm(std::move(params)), dim_(dim) {
  shared_A_ = params_.lambda * Eigen::MatrixXd::Identity(dim_, dim_);
  shared_b_ = Eigen::VectorXd::Zero(dim_);
  const Eigen::MatrixXd lower0 =
      std::sqrt(params_.lambda) * Eigen::MatrixXd::Identity(dim_, dim_);
  const double logdet0 = static_cast<double>(dim_) * std::log(params_.lambda);
  clients_.reserve(params_.clients);
  for (long i = 0; i < params_.clients; ++i) {
    clients_.push_back(Client{lower0, Eigen::VectorXd::Zero(dim_), 0, logdet0, 0,
                              Eigen::MatrixXd::Zero(dim_, dim_), Eigen::VectorXd::Zero(dim_)});
  }
}

double DisLinUcb::logdet_(const Client& c) const {
  return 2.0 * c.lower.diagonal().array().log().sum();
}

double DisLinUcb::alpha_for(const Client& c) const {
  if (params_.alpha_mode == AlphaMode::grid_constant) {
    return params_.alpha;
  }
  // log det(I + Phi^T Phi / lambda) = log det(A) - d log(lambda).
  const double logdet =
      logdet_(c) - static_cast<double>(dim_) * std::log(params_.lambda);
  return theory_alpha_exact(params_.lambda, params_.theta_norm_bound, params_.noise_R,
                            params_.delta, params_.clients, logdet);
}

MeanStd DisLinUcb::mean_std(int client, const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const Client& c = clients_[client - 1];
  Eigen::VectorXd w = c.lower.triangularView<Eigen::Lower>().solve(x);
  Eigen::VectorXd ainv_x = c.lower.transpose().triangularView<Eigen::Upper>().solve(w);
  return {ainv_x.dot(c.b), std::sqrt(std::max(0.0, w.squaredNorm()))};
}

double DisLinUcb::score(int client, const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const Client& c = clients_[client - 1];
  const MeanStd ms = mean_std(client, x);
  return ms.mean + alpha_for(c) * ms.std;
}

bool DisLinUcb::trigger(int client) const {
  const Client& c = clients_[client - 1];
  const long grown = c.count - c.count_at_sync;
  if (grown == 0) return false;
  return static_cast<double>(grown) * (logdet_(c) - c.logdet_at_sync) > params_.d_threshold;
}

void DisLinUcb::observe(int client, long t, const Eigen::Ref<const Eigen::VectorXd>& x,
                        double y) {
  Client& c = clients_[client - 1];
  chol_rank_one_update(c.lower, x);
  c.b.noalias() += y * x;
  c.delta_A.noalias() += x * x.transpose();
  c.delta_b.noalias() += y * x;
  ++c.count;
  if (trigger(client)) {
    sync(t);
  }
}

void DisLinUcb::sync(long t) {
  ledger_.begin_sync(t);
  const long per_client = static_cast<long>(dim_) * dim_ + dim_;
  for (Client& c : clients_) {
    ledger_.record(Direction::up, PayloadKind::embedded_stats, per_client);
    shared_A_ += c.delta_A;
    shared_b_ += c.delta_b;
    shared_count_ += c.count - c.count_at_sync;
  }
  SymFactor fac = spd_factor(shared_A_, 0.0);
  for (Client& c : clients_) {
    ledger_.record(Direction::down, PayloadKind::aggregated_stats, per_client);
    c.lower = fac.lower;
    c.b = shared_b_;
    c.count = shared_count_;
    c.delta_A.setZero();
    c.delta_b.setZero();
    c.logdet_at_sync = logdet_(c);
    c.count_at_sync = c.count;
  }
}

OneKernelUcb::OneKernelUcb(AlgoParams params)
    : BanditAlgorithm(std::move(params)), model_(params_.kernel, params_.lambda) {}

double OneKernelUcb::alpha_for_() const {
  if (params_.alpha_mode == AlphaMode::grid_constant) {
    return params_.alpha;
  }
  return theory_alpha_exact(params_.lambda, params_.theta_norm_bound, params_.noise_R,
                            params_.delta, params_.clients, model_.regularized_logdet());
}

MeanStd OneKernelUcb::mean_std(int, const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return model_.mean_std(x);
}

double OneKernelUcb::score(int, const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const MeanStd ms = model_.mean_std(x);
  return ms.mean + alpha_for_() * ms.std;
}

void OneKernelUcb::observe(int, long t, const Eigen::Ref<const Eigen::VectorXd>& x, double y) {
  model_.append(x, y);
  // Immediate aggregation: one upload plus a relay to the other N-1 clients.
  const long d = x.size();
  ledger_.begin_sync(t);
  ledger_.record(Direction::up, PayloadKind::raw_points, raw_point_scalars(1, d));
  ledger_.record(Direction::down, PayloadKind::raw_points,
                 raw_point_scalars(params_.clients - 1, d));
}

NKernelUcb::NKernelUcb(AlgoParams params) : BanditAlgorithm(std::move(params)) {
  models_.reserve(params_.clients);
  for (long i = 0; i < params_.clients; ++i) {
    models_.emplace_back(params_.kernel, params_.lambda);
  }
}

MeanStd NKernelUcb::mean_std(int client, const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return models_[client - 1].mean_std(x);
}

double NKernelUcb::score(int client, const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const MeanStd ms = models_[client - 1].mean_std(x);
  double alpha = params_.alpha;
  if (params_.alpha_mode == AlphaMode::theory) {
    alpha = theory_alpha_exact(params_.lambda, params_.theta_norm_bound, params_.noise_R,
                               params_.delta, params_.clients,
                               models_[client - 1].regularized_logdet());
  }
  return ms.mean + alpha * ms.std;
}

void NKernelUcb::observe(int client, long, const Eigen::Ref<const Eigen::VectorXd>& x,
                         double y) {
  models_[client - 1].append(x, y);
}

}  // namespace kbandit
