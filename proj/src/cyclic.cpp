#include "webseq/cyclic.hpp"

#include <algorithm>
#include <cmath>

namespace webseq {

const char* tendency_name(Tendency t) {
  switch (t) {
    case Tendency::Increasing: return "Increasing";
    case Tendency::Decreasing: return "Decreasing";
    case Tendency::Flat: return "Flat";
  }
  return "?";
}

Tendency parse_tendency(std::string_view name) {
  if (name == "Increasing") return Tendency::Increasing;
  if (name == "Decreasing") return Tendency::Decreasing;
  if (name == "Flat") return Tendency::Flat;
  throw Error("unknown tendency '" + std::string(name) + "'");
}

GapSeries extract_gaps(const SessionDatabase& db, int antecedent, int consequent) {
  if (db.synthetic_timestamps)
    throw NoTimestamps("database carries synthetic timestamps; cyclic analysis needs real ones");
  GapSeries gs;
  gs.antecedent = antecedent;
  gs.consequent = consequent;
  for (const UserSequence& u : db.users) {
    std::vector<PageEvent> events;
    for (const Session& s : u.sessions) events.insert(events.end(), s.events.begin(), s.events.end());
    std::size_t i = 0;
    while (i < events.size()) {
      if (events[i].page_id != antecedent) {
        ++i;
        continue;
      }
      // episode: consequent accesses strictly before the next antecedent access
      std::vector<double> elapsed;
      double last = 0.0;
      std::size_t j = i + 1;
      for (; j < events.size() && events[j].page_id != antecedent; ++j) {
        if (events[j].page_id != consequent) continue;
        double e = events[j].timestamp - events[i].timestamp;
        if (e > last) {  // keep elapsed values strictly increasing
          elapsed.push_back(e);
          last = e;
        }
      }
      if (!elapsed.empty()) gs.episodes.push_back(std::move(elapsed));
      i = j;
    }
  }
  if (gs.episodes.empty())
    throw PairUnobserved("(" + std::to_string(antecedent) + ", " + std::to_string(consequent) +
                         ")");
  return gs;
}

namespace {

std::vector<double> pooled_intervals(const GapSeries& gs) {
  std::vector<double> intervals;
  for (const auto& ep : gs.episodes) {
    double prev = 0.0;
    for (double e : ep) {
      intervals.push_back(e - prev);
      prev = e;
    }
  }
  return intervals;
}

}  // namespace

std::int64_t periodicity(const GapSeries& gs) {
  std::vector<double> intervals = pooled_intervals(gs);
  if (intervals.empty()) throw Error("gap series has no episodes");
  std::sort(intervals.begin(), intervals.end());
  std::size_t n = intervals.size();
  double med = (n % 2 == 1) ? intervals[n / 2] : 0.5 * (intervals[n / 2 - 1] + intervals[n / 2]);
  return std::max<std::int64_t>(1, std::llround(med));
}

Tendency tendency(const GapSeries& gs, double flat_band) {
  // Least squares with a per-episode intercept: center the interval index
  // within each episode so episodes of different lengths cannot bias the
  // shared slope. Reversing an episode's intervals exactly negates it.
  double sxy = 0.0, sxx = 0.0;
  for (const auto& ep : gs.episodes) {
    std::size_t n = ep.size();
    if (n < 2) continue;
    double xbar = 0.5 * static_cast<double>(n + 1);
    double ybar = 0.0, prev = 0.0;
    std::vector<double> iv(n);
    for (std::size_t k = 0; k < n; ++k) {
      iv[k] = ep[k] - prev;
      prev = ep[k];
      ybar += iv[k];
    }
    ybar /= static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      double dx = static_cast<double>(k + 1) - xbar;
      sxy += dx * (iv[k] - ybar);
      sxx += dx * dx;
    }
  }
  double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  double band = flat_band * static_cast<double>(periodicity(gs));
  if (slope > band) return Tendency::Increasing;
  if (slope < -band) return Tendency::Decreasing;
  return Tendency::Flat;
}

std::int64_t cyclic_threshold(const GapSeries& gs, std::int64_t period_s) {
  if (period_s <= 0) throw Error("periodicity must be positive");
  bool repeats = false;
  double max_last = 0.0;
  for (const auto& ep : gs.episodes) {
    if (ep.size() >= 2) repeats = true;
    max_last = std::max(max_last, ep.back());
  }
  if (!repeats) return period_s;
  auto cycles = static_cast<std::int64_t>(
      std::ceil(max_last / static_cast<double>(period_s) - 1e-9));
  return std::max<std::int64_t>(1, cycles) * period_s;
}

AnalyzeResult analyze(const std::vector<PairSupport>& pairs, const SessionDatabase& db,
                      double flat_band) {
  if (db.synthetic_timestamps)
    throw NoTimestamps("database carries synthetic timestamps; cyclic analysis needs real ones");
  AnalyzeResult res;
  for (const PairSupport& p : pairs) {
    GapSeries gs;
    try {
      gs = extract_gaps(db, p.antecedent, p.consequent);
    } catch (const PairUnobserved&) {
      res.skipped.push_back(p);
      continue;
    }
    PrefetchRule rule;
    rule.antecedent = p.antecedent;
    rule.consequent = p.consequent;
    rule.support = p.support;
    rule.periodicity_s = periodicity(gs);
    rule.tendency = tendency(gs, flat_band);
    rule.cyclic_s = cyclic_threshold(gs, rule.periodicity_s);
    res.rules.push_back(rule);
  }
  auto by_pair = [](const auto& a, const auto& b) {
    return std::pair{a.antecedent, a.consequent} < std::pair{b.antecedent, b.consequent};
  };
  std::sort(res.rules.begin(), res.rules.end(), by_pair);
  std::sort(res.skipped.begin(), res.skipped.end(), by_pair);
  return res;
}

}  // namespace webseq
