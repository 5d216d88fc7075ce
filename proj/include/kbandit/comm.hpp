#pragma once

#include <vector>

namespace kbandit {

enum class Direction { up, down };
enum class PayloadKind { raw_points, dictionary_points, embedded_stats, aggregated_stats };

// A raw or dictionary point costs its feature entries plus the reward.
inline long raw_point_scalars(long n_points, long dim) { return n_points * (dim + 1); }
// Gram matrix + moment vector + the count itself.
inline long embedded_stats_scalars(long dict_size) {
  return dict_size * dict_size + dict_size + 1;
}

struct SyncMessage {
  Direction direction;
  PayloadKind kind;
  long scalar_count;
};

// Per-scalar accounting for the star network. Every transferred scalar goes
// through record(); cumulative_scalars is the sum over all messages.
struct CommLedger {
  long cumulative_scalars = 0;
  std::vector<long> sync_times;
  std::vector<long> per_sync_scalars;
  std::vector<SyncMessage> messages;

  void begin_sync(long t) {
    sync_times.push_back(t);
    per_sync_scalars.push_back(0);
  }

  void record(Direction direction, PayloadKind kind, long scalars) {
    messages.push_back({direction, kind, scalars});
    cumulative_scalars += scalars;
    per_sync_scalars.back() += scalars;
  }

  long sync_count() const { return static_cast<long>(sync_times.size()); }
};

}  // namespace kbandit
