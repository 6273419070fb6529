#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "webseq/errors.hpp"
#include "webseq/rules.hpp"
#include "webseq/sessions.hpp"

namespace webseq {

struct StreamEvent {
  std::string user;
  int page = 0;
  double timestamp = 0.0;
};

struct SimMetrics {
  std::int64_t requests = 0;
  std::int64_t hits = 0;
  std::int64_t misses = 0;
  std::int64_t prefetches_issued = 0;
  std::int64_t prefetches_useful = 0;
  std::int64_t prefetches_wasted = 0;
  bool operator==(const SimMetrics&) const = default;
};

/// Per-event hit/miss outcomes, aligned with the input stream.
struct SimTrace {
  std::vector<bool> hit;
};

/// Replay a request stream against the depository with one unbounded cache
/// per user. A request of page a at time t is a hit when a is cached with
/// fetched_at <= t < evict_at; every rule matching a then schedules its
/// consequent at fetched_at = t + P - 1 (floored at t) with evict_at = t + C.
/// Re-triggering an already-cached page only extends its eviction time and
/// issues nothing new. Entries that expire (or survive to the end) unused
/// count as wasted. Throws UnsortedStream if a user's timestamps go
/// backwards.
SimMetrics simulate(const std::vector<StreamEvent>& stream, const RuleDepository& dep,
                    SimTrace* trace = nullptr);

/// Flatten a timestamped session database into a globally time-ordered
/// stream (stable per user). Throws NoTimestamps on synthetic data.
std::vector<StreamEvent> stream_from_db(const SessionDatabase& db);

std::string format_metrics_csv(const SimMetrics& m);
std::string format_metrics_text(const SimMetrics& m);

}  // namespace webseq
