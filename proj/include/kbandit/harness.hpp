#pragma once

#include <memory>
#include <string>
#include <vector>

#include "kbandit/config.hpp"
#include "kbandit/environment.hpp"
#include "kbandit/protocol.hpp"
#include "kbandit/trace.hpp"

namespace kbandit {

std::unique_ptr<Environment> make_environment(const ExperimentConfig& config,
                                              std::uint64_t seed);
std::unique_ptr<BanditAlgorithm> make_algorithm(const ExperimentConfig& config,
                                                std::uint64_t seed);

// One deterministic run at the given seed.
MetricsTrace run_single(const ExperimentConfig& config, std::uint64_t seed);

// Replicates run at seed, seed+1, ...
std::vector<MetricsTrace> run_replicates(const ExperimentConfig& config);

// Writes trace_r<k>.{csv|json} under out_dir for every replicate.
std::vector<std::string> emit_replicates(const std::vector<MetricsTrace>& traces,
                                         const std::string& out_dir, TraceFormat format);

// Cartesian sweep over the grid file's comma-separated value lists. Returns
// the number of grid combinations executed.
int run_sweep(const std::string& config_path, const std::string& grid_path,
              const std::string& out_dir, TraceFormat format);

}  // namespace kbandit
