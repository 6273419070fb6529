#include "webseq/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace webseq {

namespace {

namespace fs = std::filesystem;

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(std::string(name) + ": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::string itemset_text(const std::vector<int>& itemset) {
  std::ostringstream out;
  for (std::size_t i = 0; i < itemset.size(); ++i) {
    if (i) out << ',';
    out << itemset[i];
  }
  return out.str();
}

}  // namespace

std::vector<PairSupport> page_pairs(const std::vector<std::pair<int, int>>& id_pairs,
                                    const std::vector<Pattern>& wp, const TransformTable& table) {
  std::map<std::pair<int, int>, int> support_of;
  for (const Pattern& p : wp)
    if (p.ids.size() == 2) support_of[{p.ids[0], p.ids[1]}] = static_cast<int>(p.occ.size());

  std::map<std::pair<int, int>, int> expanded;
  for (const auto& [i, j] : id_pairs) {
    auto it = support_of.find({i, j});
    int sup = it != support_of.end() ? it->second : 0;
    for (int a : table.itemset_of(i)) {
      for (int b : table.itemset_of(j)) {
        if (a == b && i != j) continue;  // same page across two different itemsets
        auto& slot = expanded[{a, b}];
        slot = std::max(slot, sup);
      }
    }
  }
  std::vector<PairSupport> out;
  out.reserve(expanded.size());
  for (const auto& [pair, sup] : expanded) out.push_back({pair.first, pair.second, sup});
  return out;
}

int resolve_minsup(double minsup, std::size_t tuple_count) {
  if (minsup >= 1.0) {
    if (minsup != std::floor(minsup)) throw Error("absolute minsup must be an integer");
    return static_cast<int>(minsup);
  }
  if (minsup > 0.0)
    return std::max(1, static_cast<int>(std::ceil(minsup * static_cast<double>(tuple_count))));
  throw Error("minsup must be a positive count or a fraction in (0,1)");
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  PipelineResult res;
  fs::create_directories(cfg.out_dir);
  auto out_path = [&](const char* name) { return (fs::path(cfg.out_dir) / name).string(); };

  SessionDatabase db;
  if (cfg.format == LogFormat::SESSIONS || cfg.format == LogFormat::MSNBC) {
    db = stage("load", [&] { return load_sequences_file(cfg.input_path, cfg.format); });
    res.records_kept = total_events(db);
  } else {
    ParseStats stats;
    Denylist deny;
    if (!cfg.denylist_path.empty())
      deny = stage("denylist", [&] { return load_denylist(cfg.denylist_path); });
    auto records = stage("ingest", [&] {
      auto recs = parse_log_file(cfg.input_path, cfg.format, &stats);
      return clean(std::move(recs), deny);
    });
    res.records_parsed = stats.parsed;
    res.records_malformed = stats.malformed;
    res.records_kept = records.size();
    db = stage("sessionize", [&] { return sessionize(records, cfg.session_gap_s); });
  }
  res.users = db.users.size();
  res.sessions = total_sessions(db);

  res.sessions_file = out_path("sessions.txt");
  write_file(res.sessions_file, serialize_sessions(db));
  if (!db.table.empty()) {
    std::ostringstream urls;
    for (int id = 1; id <= db.table.size(); ++id) urls << id << '\t' << db.table.decode(id) << '\n';
    write_file(out_path("urls.tsv"), urls.str());
  }

  res.minsup = resolve_minsup(cfg.minsup, db.users.size());
  MineOutput mined = stage("mine", [&] { return mine(db, res.minsup); });
  res.pattern_count = mined.patterns.size();
  res.patterns_file = out_path("patterns.txt");
  write_file(res.patterns_file, format_patterns(mined.patterns, mined.transformed));

  std::ostringstream ttab;
  for (int id = 1; id <= mined.table.size(); ++id)
    ttab << id << '\t' << itemset_text(mined.table.itemset_of(id)) << '\n';
  write_file(out_path("transform_table.tsv"), ttab.str());

  std::vector<Pattern> wpmax = stage("maximal", [&] { return maximal(mined.patterns); });
  res.maximal_count = wpmax.size();
  res.maximal_file = out_path("maximal.txt");
  write_file(res.maximal_file, format_patterns(wpmax, mined.transformed));

  auto id_pairs = stage("two-sequences", [&] { return two_sequences(wpmax); });
  auto pairs = page_pairs(id_pairs, mined.patterns, mined.table);
  res.pair_count = pairs.size();
  std::ostringstream pairs_csv;
  pairs_csv << "antecedent,consequent,support\n";
  for (const PairSupport& p : pairs)
    pairs_csv << p.antecedent << ',' << p.consequent << ',' << p.support << '\n';
  res.pairs_file = out_path("pairs.csv");
  write_file(res.pairs_file, pairs_csv.str());

  if (db.synthetic_timestamps) {
    res.analysis_skipped = true;
  } else {
    AnalyzeResult analyzed =
        stage("analyze", [&] { return analyze(pairs, db, cfg.flat_band); });
    res.rule_count = analyzed.rules.size();
    res.skipped_pairs = analyzed.skipped.size();
    RuleDepository dep =
        stage("rules", [&] { return RuleDepository::from_rules(analyzed.rules); });
    res.rules_file = out_path("rules.csv");
    save_rules_file(dep, res.rules_file);
    if (!db.table.empty()) {
      std::ofstream decoded(out_path("rules_urls.csv"));
      save_rules_decoded(dep, db.table, decoded);
    }
    if (!analyzed.skipped.empty()) {
      std::ostringstream sk;
      sk << "antecedent,consequent,support\n";
      for (const PairSupport& p : analyzed.skipped)
        sk << p.antecedent << ',' << p.consequent << ',' << p.support << '\n';
      write_file(out_path("skipped_pairs.csv"), sk.str());
    }
  }

  std::ostringstream metrics;
  metrics << "records_parsed\t" << res.records_parsed << '\n'
          << "records_malformed\t" << res.records_malformed << '\n'
          << "records_kept\t" << res.records_kept << '\n'
          << "users\t" << res.users << '\n'
          << "sessions\t" << res.sessions << '\n'
          << "minsup\t" << res.minsup << '\n'
          << "patterns\t" << res.pattern_count << '\n'
          << "maximal\t" << res.maximal_count << '\n'
          << "pairs\t" << res.pair_count << '\n'
          << "rules\t" << res.rule_count << '\n'
          << "skipped_pairs\t" << res.skipped_pairs << '\n'
          << "analysis_skipped\t" << (res.analysis_skipped ? 1 : 0) << '\n';
  res.metrics_file = out_path("metrics.txt");
  write_file(res.metrics_file, metrics.str());
  return res;
}

std::vector<BenchRow> bench(const SessionDatabase& db, const std::vector<std::size_t>& sizes,
                            const std::vector<double>& minsups, int repeats) {
  std::vector<BenchRow> rows;
  for (std::size_t size : sizes) {
    SessionDatabase sub;
    sub.synthetic_timestamps = db.synthetic_timestamps;
    std::size_t n = std::min(size, db.users.size());
    sub.users.assign(db.users.begin(), db.users.begin() + static_cast<long>(n));
    for (double ms : minsups) {
      BenchRow row;
      row.data_size = n;
      row.minsup = resolve_minsup(ms, n);
      double best_ms = -1.0;
      for (int rep = 0; rep < std::max(1, repeats); ++rep) {
        auto t0 = std::chrono::steady_clock::now();
        MineOutput out = mine(sub, row.minsup);
        auto t1 = std::chrono::steady_clock::now();
        double elapsed = std::chrono::duration<double, std::milli>(t1 - t0).count();
        if (best_ms < 0 || elapsed < best_ms) best_ms = elapsed;
        row.pattern_count = out.patterns.size();
        row.max_recursion_depth = out.stats.max_depth;
      }
      row.runtime_ms = best_ms;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string format_bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "data_size,minsup,runtime_ms,pattern_count,max_recursion_depth\n";
  for (const BenchRow& r : rows) {
    char ms[32];
    std::snprintf(ms, sizeof(ms), "%.3f", r.runtime_ms);
    out << r.data_size << ',' << r.minsup << ',' << ms << ',' << r.pattern_count << ','
        << r.max_recursion_depth << '\n';
  }
  return out.str();
}

}  // namespace webseq
