#pragma once

#include <vector>

#include "kbandit/rng.hpp"

namespace kbandit {

// Oversampling factor 6*(1+eps)/(1-eps)*ln(4NT/delta)/eps^2 (natural log).
double qbar_from_theory(double epsilon, double delta, long clients, long rounds);

// Independent Bernoulli(min(1, qbar*variance_s)) draw per index, in input
// order. A nonempty input never yields an empty sample: the index with the
// largest inclusion probability (ties -> smallest index) is force-included.
std::vector<long> rls_sample(const std::vector<long>& indices,
                             const std::vector<double>& variances, double qbar, Rng& rng);

}  // namespace kbandit
