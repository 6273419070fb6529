#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "webseq/errors.hpp"
#include "webseq/sessions.hpp"

namespace webseq {

enum class Tendency { Increasing, Decreasing, Flat };

const char* tendency_name(Tendency t);
Tendency parse_tendency(std::string_view name);

/// Elapsed-time observations for one (antecedent, consequent) page pair.
/// Each episode lists, for one antecedent access, the elapsed seconds of the
/// consequent accesses that followed it (strictly increasing, cut at the
/// user's next antecedent access).
struct GapSeries {
  int antecedent = 0;
  int consequent = 0;
  std::vector<std::vector<double>> episodes;
};

struct PrefetchRule {
  int antecedent = 0;
  int consequent = 0;
  int support = 0;
  std::int64_t periodicity_s = 0;   // P >= 1
  Tendency tendency = Tendency::Flat;
  std::int64_t cyclic_s = 0;        // C >= P
  bool operator==(const PrefetchRule&) const = default;
};

struct PairSupport {
  int antecedent = 0;
  int consequent = 0;
  int support = 0;
};

/// Collect the gap series of a page pair from a timestamped database.
/// Throws NoTimestamps on synthetic-timestamp data and PairUnobserved when
/// no antecedent access is ever followed by a consequent access.
GapSeries extract_gaps(const SessionDatabase& db, int antecedent, int consequent);

/// P: median of the within-episode inter-access intervals (the first
/// interval is the first elapsed value), pooled over episodes, rounded to
/// the nearest second, at least 1.
std::int64_t periodicity(const GapSeries& gs);

/// Sign of the least-squares slope of interval length against the interval's
/// index within its episode, fit with a per-episode intercept. Slopes within
/// +-flat_band * P count as Flat.
Tendency tendency(const GapSeries& gs, double flat_band = 0.01);

/// C: largest elapsed time from an antecedent to the final consequent of its
/// episode, rounded up to the next multiple of P; P itself when no episode
/// ever repeats the consequent.
std::int64_t cyclic_threshold(const GapSeries& gs, std::int64_t period_s);

struct AnalyzeResult {
  std::vector<PrefetchRule> rules;      // sorted by (antecedent, consequent)
  std::vector<PairSupport> skipped;     // pairs with no observable gap series
};

/// One rule per observable pair; unobservable pairs are reported in
/// `skipped`, never dropped. Throws NoTimestamps on synthetic data.
AnalyzeResult analyze(const std::vector<PairSupport>& pairs, const SessionDatabase& db,
                      double flat_band = 0.01);

}  // namespace webseq
