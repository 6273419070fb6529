#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "webseq/cyclic.hpp"
#include "webseq/log.hpp"
#include "webseq/miner.hpp"
#include "webseq/rules.hpp"
#include "webseq/sessions.hpp"

namespace webseq {

/// Page-level pairs for cyclic analysis: each transformed-id pair expands to
/// the Cartesian product of its itemsets' pages (support carried over,
/// duplicates keep the larger support), sorted by (antecedent, consequent).
std::vector<PairSupport> page_pairs(const std::vector<std::pair<int, int>>& id_pairs,
                                    const std::vector<Pattern>& wp, const TransformTable& table);

struct PipelineConfig {
  std::string input_path;
  LogFormat format = LogFormat::SESSIONS;
  double minsup = 2;           // >= 1: absolute count; in (0,1): fraction of tuples
  double session_gap_s = 900;  // log formats only
  std::string out_dir;
  std::string denylist_path;   // optional
  double flat_band = 0.01;
};

struct PipelineResult {
  std::size_t records_parsed = 0;
  std::size_t records_malformed = 0;
  std::size_t records_kept = 0;
  std::size_t users = 0;
  std::size_t sessions = 0;
  int minsup = 0;  // resolved absolute value
  std::size_t pattern_count = 0;
  std::size_t maximal_count = 0;
  std::size_t pair_count = 0;
  std::size_t rule_count = 0;
  std::size_t skipped_pairs = 0;
  bool analysis_skipped = false;  // synthetic timestamps
  std::string sessions_file, patterns_file, maximal_file, pairs_file, rules_file, metrics_file;
};

/// Full run: ingest (log formats) -> sessionize -> mine -> maximal ->
/// 2-sequences -> cyclic analysis (skipped with a notice when timestamps are
/// synthetic) -> rule depository. Every stage's output is persisted under
/// cfg.out_dir; stage errors are rethrown with the stage name prepended.
PipelineResult run_pipeline(const PipelineConfig& cfg);

/// Resolve a --minsup value against a database size (fractions by ceiling).
int resolve_minsup(double minsup, std::size_t tuple_count);

struct BenchRow {
  std::size_t data_size = 0;
  int minsup = 0;
  double runtime_ms = 0.0;
  std::size_t pattern_count = 0;
  int max_recursion_depth = 0;
};

/// One row per (size, minsup): mine the prefix-truncation of db to `size`
/// tuples and record runtime (best of `repeats`), pattern count and the
/// instrumented recursion depth.
std::vector<BenchRow> bench(const SessionDatabase& db, const std::vector<std::size_t>& sizes,
                            const std::vector<double>& minsups, int repeats = 1);

std::string format_bench_csv(const std::vector<BenchRow>& rows);

}  // namespace webseq
