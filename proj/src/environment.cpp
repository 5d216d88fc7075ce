#include "kbandit/environment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace kbandit {

double f1(const Eigen::Ref<const Eigen::VectorXd>& x,
          const Eigen::Ref<const Eigen::VectorXd>& theta) {
  if (x.size() != theta.size()) {
    throw std::invalid_argument("f1: dimension mismatch");
  }
  return std::cos(3.0 * x.dot(theta));
}

double f2(const Eigen::Ref<const Eigen::VectorXd>& x,
          const Eigen::Ref<const Eigen::VectorXd>& theta) {
  if (x.size() != theta.size()) {
    throw std::invalid_argument("f2: dimension mismatch");
  }
  const double u = x.dot(theta);
  return u * u * u - 3.0 * u * u - u + 3.0;
}

SyntheticEnv::SyntheticEnv(int dim, RewardFn reward, double noise_std, int candidate_size,
                           std::uint64_t seed)
    : dim_(dim), reward_(reward), noise_std_(noise_std), candidate_size_(candidate_size),
      rng_(seed) {
  if (dim < 1) throw std::invalid_argument("SyntheticEnv: dim must be >= 1");
  if (candidate_size < 1) throw std::invalid_argument("SyntheticEnv: candidate_size must be >= 1");
  if (noise_std < 0.0) throw std::invalid_argument("SyntheticEnv: noise_std must be >= 0");
  theta_ = sample_unit_ball_();
}

Eigen::VectorXd SyntheticEnv::sample_unit_ball_() {
  Eigen::VectorXd g(dim_);
  for (int i = 0; i < dim_; ++i) g(i) = rng_.normal();
  const double norm = g.norm();
  if (norm == 0.0) return Eigen::VectorXd::Zero(dim_);
  const double radius = std::pow(rng_.uniform(), 1.0 / static_cast<double>(dim_));
  return g * (radius / norm);
}

double SyntheticEnv::true_mean(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return reward_ == RewardFn::f1 ? f1(x, theta_) : f2(x, theta_);
}

Candidates SyntheticEnv::draw_candidates() {
  Candidates c;
  c.features.resize(candidate_size_, dim_);
  c.means.resize(candidate_size_);
  for (int a = 0; a < candidate_size_; ++a) {
    Eigen::VectorXd x = sample_unit_ball_();
    c.features.row(a) = x.transpose();
    c.means(a) = true_mean(x);
  }
  return c;
}

double SyntheticEnv::observe_mean(double true_mean) {
  return true_mean + noise_std_ * rng_.normal();
}

double SyntheticEnv::observe(const Eigen::Ref<const Eigen::VectorXd>& x) {
  return observe_mean(true_mean(x));
}

namespace {

double parse_strict_double(const std::string& field, long line_no) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("arm pool: malformed number '" + field + "' at line " +
                             std::to_string(line_no));
  }
  if (pos != field.size()) {
    throw std::runtime_error("arm pool: malformed number '" + field + "' at line " +
                             std::to_string(line_no));
  }
  if (!std::isfinite(v)) {
    throw std::runtime_error("arm pool: non-finite value at line " + std::to_string(line_no));
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

ArmPool load_arm_pool(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("arm pool: cannot open " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("arm pool: empty file " + path);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = split_csv_line(line);
  if (header.empty() || header.back() != "reward") {
    throw std::runtime_error("arm pool: schema error, last column must be 'reward'");
  }
  const long d = static_cast<long>(header.size()) - 1;
  if (d < 1) {
    throw std::runtime_error("arm pool: schema error, no feature columns");
  }

  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rewards;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = split_csv_line(line);
    if (static_cast<long>(fields.size()) != d + 1) {
      throw std::runtime_error("arm pool: expected " + std::to_string(d + 1) +
                               " fields at line " + std::to_string(line_no));
    }
    Eigen::VectorXd x(d);
    for (long j = 0; j < d; ++j) x(j) = parse_strict_double(fields[j], line_no);
    rows.push_back(std::move(x));
    rewards.push_back(parse_strict_double(fields[d], line_no));
  }
  if (rows.empty()) {
    throw std::runtime_error("arm pool: no arms in " + path);
  }
  ArmPool pool;
  pool.features.resize(static_cast<long>(rows.size()), d);
  pool.rewards.resize(static_cast<long>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    pool.features.row(static_cast<long>(i)) = rows[i].transpose();
    pool.rewards(static_cast<long>(i)) = rewards[i];
  }
  return pool;
}

void write_arm_pool(const std::string& path, const ArmPool& pool) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("arm pool: cannot write " + path);
  }
  const long d = pool.features.cols();
  for (long j = 0; j < d; ++j) out << "f" << j << ",";
  out << "reward\n";
  char buf[64];
  for (long i = 0; i < pool.features.rows(); ++i) {
    for (long j = 0; j < d; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", pool.features(i, j));
      out << buf << ",";
    }
    std::snprintf(buf, sizeof(buf), "%.17g", pool.rewards(i));
    out << buf << "\n";
  }
}

ArmPoolEnv::ArmPoolEnv(ArmPool pool, CandidatePolicy policy, double noise_std,
                       int candidate_size, std::uint64_t seed)
    : pool_(std::move(pool)), policy_(policy), noise_std_(noise_std),
      candidate_size_(candidate_size), rng_(seed) {
  if (candidate_size_ < 1 || candidate_size_ > pool_.features.rows()) {
    throw std::invalid_argument("ArmPoolEnv: candidate_size must be in [1, pool size]");
  }
  if (noise_std_ < 0.0) throw std::invalid_argument("ArmPoolEnv: noise_std must be >= 0");
  if (policy_ == CandidatePolicy::one_positive_rest_negative) {
    for (long i = 0; i < pool_.rewards.size(); ++i) {
      if (pool_.rewards(i) == 1.0) positive_.push_back(i);
      if (pool_.rewards(i) == 0.0) zero_.push_back(i);
    }
    if (positive_.empty() || static_cast<long>(zero_.size()) < candidate_size_ - 1) {
      throw std::invalid_argument(
          "ArmPoolEnv: one_positive policy needs >=1 arm with reward 1 and >= "
          "candidate_size-1 arms with reward 0");
    }
  }
}

Candidates ArmPoolEnv::draw_candidates() {
  std::vector<long> picks(candidate_size_);
  if (policy_ == CandidatePolicy::uniform_k) {
    for (int a = 0; a < candidate_size_; ++a) picks[a] = rng_.below(pool_.features.rows());
  } else {
    picks[0] = positive_[rng_.below(static_cast<long>(positive_.size()))];
    for (int a = 1; a < candidate_size_; ++a) {
      picks[a] = zero_[rng_.below(static_cast<long>(zero_.size()))];
    }
    // Fisher-Yates so the positive arm does not sit at a fixed slot.
    for (int a = candidate_size_ - 1; a > 0; --a) {
      const long b = rng_.below(a + 1);
      std::swap(picks[a], picks[b]);
    }
  }
  Candidates c;
  c.features.resize(candidate_size_, dim());
  c.means.resize(candidate_size_);
  for (int a = 0; a < candidate_size_; ++a) {
    c.features.row(a) = pool_.features.row(picks[a]);
    c.means(a) = pool_.rewards(picks[a]);
  }
  return c;
}

double ArmPoolEnv::observe_mean(double true_mean) {
  return true_mean + noise_std_ * rng_.normal();
}

}  // namespace kbandit
