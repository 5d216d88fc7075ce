#include "kbandit/protocol.hpp"

#include <algorithm>
#include <stdexcept>

#include "kbandit/rls.hpp"

namespace kbandit {

int BanditAlgorithm::choose(int client,
                            const Eigen::Ref<const Eigen::MatrixXd>& candidates) const {
  if (candidates.rows() < 1) {
    throw std::invalid_argument("choose: empty candidate set");
  }
  int best = 0;
  double best_score = score(client, candidates.row(0).transpose());
  for (int a = 1; a < candidates.rows(); ++a) {
    const double s = score(client, candidates.row(a).transpose());
    if (s > best_score) {
      best_score = s;
      best = a;
    }
  }
  return best;
}

DisKernelUcb::DisKernelUcb(AlgoParams params) : BanditAlgorithm(std::move(params)) {
  clients_.reserve(params_.clients);
  for (long i = 0; i < params_.clients; ++i) {
    clients_.push_back(Client{ExactPosterior(params_.kernel, params_.lambda), {}, 0.0, 0});
  }
}

double DisKernelUcb::alpha_for(const Client& c) const {
  if (params_.alpha_mode == AlphaMode::grid_constant) {
    return params_.alpha;
  }
  return theory_alpha_exact(params_.lambda, params_.theta_norm_bound, params_.noise_R,
                            params_.delta, params_.clients, c.model.regularized_logdet());
}

MeanStd DisKernelUcb::mean_std(int client, const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return clients_[client - 1].model.mean_std(x);
}

double DisKernelUcb::score(int client, const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const Client& c = clients_[client - 1];
  const MeanStd ms = c.model.mean_std(x);
  return ms.mean + alpha_for(c) * ms.std;
}

bool DisKernelUcb::trigger(int client) const {
  const Client& c = clients_[client - 1];
  const long grown = c.model.count() - c.count_at_sync;
  if (grown == 0) {
    return false;
  }
  const double ratio = c.model.regularized_logdet() - c.logdet_at_sync;
  return static_cast<double>(grown) * ratio > params_.d_threshold;
}

void DisKernelUcb::observe(int client, long t, const Eigen::Ref<const Eigen::VectorXd>& x,
                           double y) {
  Client& c = clients_[client - 1];
  c.model.append(x, y);
  c.buffer.push_back(DataPoint{t, client, x, y});
  if (trigger(client)) {
    sync_exact(t);
  }
}

void DisKernelUcb::sync_exact(long t) {
  const long d = clients_[0].buffer.empty() ? clients_[0].model.points().cols()
                                            : clients_[0].buffer[0].x.size();
  ledger_.begin_sync(t);

  // Every client ships its upload buffer; the merged epoch is the union.
  std::vector<const DataPoint*> epoch;
  for (Client& c : clients_) {
    ledger_.record(Direction::up, PayloadKind::raw_points,
                   raw_point_scalars(static_cast<long>(c.buffer.size()), d));
    for (const DataPoint& p : c.buffer) {
      epoch.push_back(&p);
    }
  }
  std::sort(epoch.begin(), epoch.end(),
            [](const DataPoint* a, const DataPoint* b) { return a->t < b->t; });

  // Each client receives only the points it lacks, in global time order.
  for (std::size_t i = 0; i < clients_.size(); ++i) {
    Client& c = clients_[i];
    long received = 0;
    for (const DataPoint* p : epoch) {
      if (p->owner != static_cast<int>(i) + 1) {
        c.model.append(p->x, p->y);
        ++received;
      }
    }
    ledger_.record(Direction::down, PayloadKind::raw_points, raw_point_scalars(received, d));
  }

  for (Client& c : clients_) {
    c.buffer.clear();
    c.logdet_at_sync = c.model.regularized_logdet();
    c.count_at_sync = c.model.count();
  }
}

ApproxDisKernelUcb::ApproxDisKernelUcb(AlgoParams params, std::uint64_t seed)
    : BanditAlgorithm(std::move(params)) {
  dict_ = std::make_shared<const Dictionary>(params_.kernel, Eigen::MatrixXd(0, 0),
                                             std::vector<long>{});
  qbar_ = params_.qbar > 0.0
              ? params_.qbar
              : qbar_from_theory(params_.epsilon, params_.delta, params_.clients,
                                 params_.rounds);
  clients_.reserve(params_.clients);
  for (long i = 0; i < params_.clients; ++i) {
    clients_.push_back(Client{{},
                              {},
                              ApproxScorer(dict_, EmbeddedStats(), params_.lambda),
                              ApproxScorer(dict_, EmbeddedStats(), params_.lambda),
                              0.0,
                              Rng(derive_seed(seed, 1000 + static_cast<std::uint64_t>(i)))});
  }
}

double ApproxDisKernelUcb::alpha_for(const Client& c) const {
  if (params_.alpha_mode == AlphaMode::grid_constant) {
    return params_.alpha;
  }
  // Plug-in information gain measured on the embedded statistics.
  const double gamma_hat = 0.5 * c.live.regularized_logdet();
  return theory_alpha_approx(params_.lambda, params_.theta_norm_bound, params_.noise_R,
                             params_.delta, params_.clients, params_.epsilon,
                             params_.d_threshold, gamma_hat);
}

MeanStd ApproxDisKernelUcb::mean_std(int client,
                                     const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return clients_[client - 1].live.mean_std(x);
}

double ApproxDisKernelUcb::score(int client, const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const Client& c = clients_[client - 1];
  const MeanStd ms = c.live.mean_std(x);
  return ms.mean + alpha_for(c) * ms.std;
}

bool ApproxDisKernelUcb::trigger(int client) const {
  return clients_[client - 1].accumulator > params_.d_threshold;
}

void ApproxDisKernelUcb::observe(int client, long t,
                                 const Eigen::Ref<const Eigen::VectorXd>& x, double y) {
  Client& c = clients_[client - 1];
  // Frozen-model variance is accumulated before the live update of the point.
  const double fv = c.frozen.variance(x);
  c.accumulator += fv;
  c.log.push_back(DataPoint{t, client, x, y});
  c.frozen_var.push_back(fv);
  c.live.accumulate(x, y);
  if (trigger(client)) {
    sync_approx(t);
  }
}

void ApproxDisKernelUcb::sync_approx(long t) {
  ledger_.begin_sync(t);
  const long d = clients_[0].log.empty() ? 0 : clients_[0].log[0].x.size();

  // Phase 1: each client RLS-samples its full local history and uploads the
  // sampled raw points.
  std::vector<const DataPoint*> union_points;
  for (std::size_t i = 0; i < clients_.size(); ++i) {
    Client& c = clients_[i];
    std::vector<long> local_indices(c.log.size());
    for (std::size_t s = 0; s < c.log.size(); ++s) local_indices[s] = c.log[s].t;
    std::vector<long> sampled;
    if (params_.rls_sample_all) {
      sampled = local_indices;
    } else {
      sampled = rls_sample(local_indices, c.frozen_var, qbar_, c.rng);
    }
    ledger_.record(Direction::up, PayloadKind::dictionary_points,
                   raw_point_scalars(static_cast<long>(sampled.size()), d));
    // Both sequences are in arrival order, so a single walk recovers the rows.
    std::size_t pos = 0;
    for (long ts : sampled) {
      while (pos < c.log.size() && c.log[pos].t != ts) ++pos;
      union_points.push_back(&c.log[pos]);
    }
  }

  // Phase 2: server unions the samples into the new dictionary and sends it
  // to every client.
  std::sort(union_points.begin(), union_points.end(),
            [](const DataPoint* a, const DataPoint* b) { return a->t < b->t; });
  Eigen::MatrixXd feats(static_cast<long>(union_points.size()), d);
  std::vector<long> indices(union_points.size());
  for (std::size_t s = 0; s < union_points.size(); ++s) {
    feats.row(static_cast<long>(s)) = union_points[s]->x.transpose();
    indices[s] = union_points[s]->t;
  }
  auto new_dict = std::make_shared<const Dictionary>(params_.kernel, std::move(feats),
                                                     std::move(indices));
  for (std::size_t i = 0; i < clients_.size(); ++i) {
    ledger_.record(Direction::down, PayloadKind::dictionary_points,
                   raw_point_scalars(new_dict->size(), d));
  }

  // Phase 3: every client re-embeds its entire local history under the new
  // dictionary and uploads the embedded statistics.
  std::vector<EmbeddedStats> local_stats;
  std::vector<Eigen::MatrixXd> local_rows(clients_.size());
  local_stats.reserve(clients_.size());
  for (std::size_t i = 0; i < clients_.size(); ++i) {
    Client& c = clients_[i];
    Eigen::MatrixXd rows(static_cast<long>(c.log.size()), d);
    Eigen::VectorXd ys(static_cast<long>(c.log.size()));
    for (std::size_t s = 0; s < c.log.size(); ++s) {
      rows.row(static_cast<long>(s)) = c.log[s].x.transpose();
      ys(static_cast<long>(s)) = c.log[s].y;
    }
    Eigen::MatrixXd Z = new_dict->embed_rows(rows);
    EmbeddedStats st(new_dict->size());
    st.gram.noalias() = Z.transpose() * Z;
    st.moment.noalias() = Z.transpose() * ys;
    st.count = static_cast<long>(c.log.size());
    ledger_.record(Direction::up, PayloadKind::embedded_stats,
                   embedded_stats_scalars(new_dict->size()));
    local_stats.push_back(std::move(st));
    local_rows[i] = std::move(rows);
  }

  // Phase 4: server sums in client order and broadcasts the aggregate. The
  // factorization of the aggregate is identical for every client, so it is
  // computed once and copied.
  EmbeddedStats aggregate(new_dict->size());
  for (const EmbeddedStats& st : local_stats) {
    aggregate += st;
  }
  dict_ = new_dict;
  const ApproxScorer shared(dict_, aggregate, params_.lambda);
  for (std::size_t i = 0; i < clients_.size(); ++i) {
    Client& c = clients_[i];
    ledger_.record(Direction::down, PayloadKind::aggregated_stats,
                   embedded_stats_scalars(new_dict->size()));
    c.live = shared;
    c.frozen = shared;
    c.accumulator = 0.0;
    // The frozen-variance cache must reflect the newly installed model.
    const Eigen::VectorXd fv = shared.variances(local_rows[i]);
    for (std::size_t s = 0; s < c.log.size(); ++s) c.frozen_var[s] = fv(static_cast<long>(s));
  }
  t_last_ = t;
}

}  // namespace kbandit
