#include "webseq/simulate.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <unordered_map>

namespace webseq {

namespace {

struct CacheEntry {
  double fetched_at = 0.0;
  double evict_at = 0.0;  // > fetched_at
  bool used = false;
};

using UserCache = std::unordered_map<int, CacheEntry>;

}  // namespace

SimMetrics simulate(const std::vector<StreamEvent>& stream, const RuleDepository& dep,
                    SimTrace* trace) {
  SimMetrics m;
  if (trace) {
    trace->hit.clear();
    trace->hit.reserve(stream.size());
  }
  std::map<std::string, UserCache> caches;
  std::map<std::string, double> last_seen;

  auto retire = [&m](const CacheEntry& e) {
    if (e.used)
      ++m.prefetches_useful;
    else
      ++m.prefetches_wasted;
  };

  for (const StreamEvent& ev : stream) {
    auto [it, fresh] = last_seen.try_emplace(ev.user, ev.timestamp);
    if (!fresh && ev.timestamp < it->second)
      throw UnsortedStream("user " + ev.user + " goes back in time at t=" +
                           std::to_string(ev.timestamp));
    it->second = ev.timestamp;

    UserCache& cache = caches[ev.user];
    ++m.requests;
    bool hit = false;
    auto ce = cache.find(ev.page);
    if (ce != cache.end()) {
      if (ce->second.evict_at <= ev.timestamp) {  // lazily expire
        retire(ce->second);
        cache.erase(ce);
        ce = cache.end();
      } else if (ce->second.fetched_at <= ev.timestamp) {
        hit = true;
        ce->second.used = true;
      }
    }
    if (hit)
      ++m.hits;
    else
      ++m.misses;
    if (trace) trace->hit.push_back(hit);

    for (const PrefetchRule& r : dep.match(ev.page)) {
      double fetched = ev.timestamp + std::max<double>(0.0, static_cast<double>(r.periodicity_s) - 1.0);
      double evict = ev.timestamp + static_cast<double>(r.cyclic_s);
      auto entry = cache.find(r.consequent);
      if (entry != cache.end() && entry->second.evict_at > ev.timestamp) {
        // already cached: extend the retention window, no new fetch
        entry->second.evict_at = std::max(entry->second.evict_at, evict);
      } else {
        if (entry != cache.end()) {
          retire(entry->second);
          cache.erase(entry);
        }
        ++m.prefetches_issued;
        cache.emplace(r.consequent, CacheEntry{fetched, evict, false});
      }
    }
  }

  for (auto& [user, cache] : caches)
    for (auto& [page, entry] : cache) retire(entry);
  return m;
}

std::vector<StreamEvent> stream_from_db(const SessionDatabase& db) {
  if (db.synthetic_timestamps)
    throw NoTimestamps("stream replay needs real timestamps");
  std::vector<StreamEvent> out;
  for (const UserSequence& u : db.users)
    for (const Session& s : u.sessions)
      for (const PageEvent& e : s.events) out.push_back({u.user, e.page_id, e.timestamp});
  std::stable_sort(out.begin(), out.end(),
                   [](const StreamEvent& a, const StreamEvent& b) { return a.timestamp < b.timestamp; });
  return out;
}

std::string format_metrics_csv(const SimMetrics& m) {
  std::ostringstream out;
  out << "requests,hits,misses,prefetches_issued,prefetches_useful,prefetches_wasted\n"
      << m.requests << ',' << m.hits << ',' << m.misses << ',' << m.prefetches_issued << ','
      << m.prefetches_useful << ',' << m.prefetches_wasted << '\n';
  return out.str();
}

std::string format_metrics_text(const SimMetrics& m) {
  std::ostringstream out;
  double hit_rate = m.requests > 0 ? static_cast<double>(m.hits) / static_cast<double>(m.requests)
                                   : 0.0;
  double useful_rate = m.prefetches_issued > 0 ? static_cast<double>(m.prefetches_useful) /
                                                     static_cast<double>(m.prefetches_issued)
                                               : 0.0;
  char buf[64];
  out << "requests:          " << m.requests << '\n'
      << "hits:              " << m.hits << '\n'
      << "misses:            " << m.misses << '\n'
      << "prefetches issued: " << m.prefetches_issued << '\n'
      << "  useful:          " << m.prefetches_useful << '\n'
      << "  wasted:          " << m.prefetches_wasted << '\n';
  std::snprintf(buf, sizeof(buf), "hit rate:          %.4f\n", hit_rate);
  out << buf;
  std::snprintf(buf, sizeof(buf), "prefetch accuracy: %.4f\n", useful_rate);
  out << buf;
  return out.str();
}

}  // namespace webseq
