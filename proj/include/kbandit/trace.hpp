#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace kbandit {

struct SyncEvent {
  long t = 0;
  long scalars = 0;
  long dict_size = 0;
};

// Per-step regret/communication trace of one run, plus the sync events and
// the realized information gain. Chosen arms are kept for in-process analysis
// and are not part of the emitted files.
struct MetricsTrace {
  std::vector<long> t;
  std::vector<double> regret;
  std::vector<double> cum_regret;
  std::vector<long> cum_scalars;
  std::vector<SyncEvent> syncs;

  std::vector<int> chosen;
  Eigen::MatrixXd chosen_features;

  double gamma_hat = 0.0;

  long steps() const { return static_cast<long>(t.size()); }
  long sync_count() const { return static_cast<long>(syncs.size()); }
};

enum class TraceFormat { csv, json };

// CSV columns exactly t,regret,cum_regret,cum_comm_scalars; LF newlines;
// floats printed with 17 significant digits.
void write_trace_csv(const MetricsTrace& trace, const std::string& path);
void write_trace_json(const MetricsTrace& trace, const std::string& path);

// Parses a file produced by write_trace_csv (test/analysis support).
MetricsTrace read_trace_csv(const std::string& path);

}  // namespace kbandit
