#include "kbandit/rls.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kbandit {

double qbar_from_theory(double epsilon, double delta, long clients, long rounds) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("qbar_from_theory: epsilon must be in (0,1)");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("qbar_from_theory: delta must be in (0,1)");
  }
  const double nt = static_cast<double>(clients) * static_cast<double>(rounds);
  if (nt < 1.0) {
    throw std::invalid_argument("qbar_from_theory: NT must be at least 1");
  }
  return 6.0 * (1.0 + epsilon) / (1.0 - epsilon) * std::log(4.0 * nt / delta) /
         (epsilon * epsilon);
}

std::vector<long> rls_sample(const std::vector<long>& indices,
                             const std::vector<double>& variances, double qbar, Rng& rng) {
  if (indices.size() != variances.size()) {
    throw std::invalid_argument("rls_sample: indices/variances size mismatch");
  }
  std::vector<long> sampled;
  sampled.reserve(indices.size());
  double best_p = -1.0;
  long best_index = 0;
  for (std::size_t s = 0; s < indices.size(); ++s) {
    if (variances[s] < 0.0) {
      throw std::invalid_argument("rls_sample: variances must be nonnegative");
    }
    const double p = std::min(1.0, qbar * variances[s]);
    if (p > best_p || (p == best_p && indices[s] < best_index)) {
      best_p = p;
      best_index = indices[s];
    }
    if (rng.uniform() < p) {
      sampled.push_back(indices[s]);
    }
  }
  if (sampled.empty() && !indices.empty()) {
    sampled.push_back(best_index);
  }
  return sampled;
}

}  // namespace kbandit
