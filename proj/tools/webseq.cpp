#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "webseq/cyclic.hpp"
#include "webseq/log.hpp"
#include "webseq/miner.hpp"
#include "webseq/pipeline.hpp"
#include "webseq/rules.hpp"
#include "webseq/sessions.hpp"
#include "webseq/simulate.hpp"

namespace {

using namespace webseq;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ','))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::vector<LogRecord> ingest_records(const std::string& input, LogFormat format,
                                      const std::string& denylist_path, ParseStats* stats) {
  Denylist deny;
  if (!denylist_path.empty()) deny = load_denylist(denylist_path);
  auto records = parse_log_file(input, format, stats);
  return clean(std::move(records), deny);
}

std::vector<PairSupport> load_pairs_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open pairs file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw BadHeader("empty pairs file");
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
  if (line != "antecedent,consequent,support")
    throw BadHeader("expected 'antecedent,consequent,support', got '" + line + "'");
  std::vector<PairSupport> pairs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    PairSupport p;
    if (std::sscanf(line.c_str(), "%d,%d,%d", &p.antecedent, &p.consequent, &p.support) != 3)
      throw Error("bad pairs row: '" + line + "'");
    pairs.push_back(p);
  }
  return pairs;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"web access pattern mining and prefetch-rule toolkit"};
  app.require_subcommand(1);

  std::string input, out, format_name = "sessions", denylist, rules_path, pairs_path, table_out;
  double minsup = 2, gap = 900, flat_band = 0.01;
  std::string sizes_arg, minsups_arg;
  int repeats = 1;

  auto* ingest = app.add_subcommand("ingest", "parse and clean a raw log");
  ingest->add_option("--input,-i", input, "log file")->required();
  ingest->add_option("--format", format_name, "clf|eclf|proxy")->required();
  ingest->add_option("--out,-o", out, "cleaned log output ('-' for stdout)");
  ingest->add_option("--denylist", denylist, "client denylist file");

  auto* sess = app.add_subcommand("sessionize", "clean a raw log and build the session database");
  sess->add_option("--input,-i", input, "log file")->required();
  sess->add_option("--format", format_name, "clf|eclf|proxy")->required();
  sess->add_option("--session-gap-secs", gap, "session gap threshold (default 900)");
  sess->add_option("--out,-o", out, "sessions output ('-' for stdout)");
  sess->add_option("--table", table_out, "url table output (tsv)");
  sess->add_option("--denylist", denylist, "client denylist file");

  auto* mine_cmd = app.add_subcommand("mine", "mine sequential access patterns");
  mine_cmd->add_option("--input,-i", input, "sessions/msnbc file")->required();
  mine_cmd->add_option("--format", format_name, "sessions|msnbc");
  mine_cmd->add_option("--minsup", minsup, "absolute count or fraction in (0,1)");
  mine_cmd->add_option("--out,-o", out, "pattern output ('-' for stdout)");
  std::string maximal_out, pairs_out;
  mine_cmd->add_option("--maximal-out", maximal_out, "maximal pattern output");
  mine_cmd->add_option("--pairs-out", pairs_out, "page-level 2-sequence csv output");

  auto* analyze_cmd = app.add_subcommand("analyze", "derive prefetching rules for 2-sequences");
  analyze_cmd->add_option("--input,-i", input, "timestamped sessions file")->required();
  analyze_cmd->add_option("--pairs", pairs_path, "pairs csv (default: mine them)");
  analyze_cmd->add_option("--minsup", minsup, "minsup when mining pairs");
  analyze_cmd->add_option("--flat-band", flat_band, "flat tendency dead-band (fraction of P)");
  analyze_cmd->add_option("--out,-o", out, "rule csv output ('-' for stdout)");

  auto* sim = app.add_subcommand("simulate", "replay a request stream against a rule depository");
  sim->add_option("--input,-i", input, "timestamped sessions file")->required();
  sim->add_option("--rules", rules_path, "rule csv")->required();
  sim->add_option("--out,-o", out, "metrics csv output (default: text to stdout)");

  auto* bench_cmd = app.add_subcommand("bench", "mining runtime/pattern-count benchmark");
  bench_cmd->add_option("--input,-i", input, "sessions/msnbc file")->required();
  bench_cmd->add_option("--format", format_name, "sessions|msnbc");
  bench_cmd->add_option("--sizes", sizes_arg, "comma-separated tuple counts")->required();
  bench_cmd->add_option("--minsups", minsups_arg, "comma-separated minsup values")->required();
  bench_cmd->add_option("--repeats", repeats, "timing repeats per row (best kept)");
  bench_cmd->add_option("--out,-o", out, "csv output ('-' for stdout)");

  auto* pipe = app.add_subcommand("pipeline", "run the full pipeline");
  pipe->add_option("--input,-i", input, "input file")->required();
  pipe->add_option("--format", format_name, "clf|eclf|proxy|sessions|msnbc")->required();
  pipe->add_option("--minsup", minsup, "absolute count or fraction in (0,1)");
  pipe->add_option("--session-gap-secs", gap, "session gap threshold (default 900)");
  pipe->add_option("--denylist", denylist, "client denylist file");
  pipe->add_option("--flat-band", flat_band, "flat tendency dead-band (fraction of P)");
  pipe->add_option("--out,-o", out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    LogFormat format = parse_format(format_name);

    if (*ingest) {
      ParseStats stats;
      auto records = ingest_records(input, format, denylist, &stats);
      std::ostringstream text;
      for (const LogRecord& r : records) text << render_line(r, format) << '\n';
      write_or_print(out, text.str());
      std::cerr << "parsed " << stats.parsed << " records (" << stats.malformed
                << " malformed skipped), kept " << records.size() << " after cleaning\n";
    } else if (*sess) {
      ParseStats stats;
      auto records = ingest_records(input, format, denylist, &stats);
      SessionDatabase db = sessionize(records, gap);
      write_or_print(out, serialize_sessions(db));
      if (!table_out.empty()) {
        std::ostringstream urls;
        for (int id = 1; id <= db.table.size(); ++id)
          urls << id << '\t' << db.table.decode(id) << '\n';
        write_or_print(table_out, urls.str());
      }
      std::cerr << "users: " << db.users.size() << ", sessions: " << total_sessions(db)
                << ", malformed skipped: " << stats.malformed << '\n';
    } else if (*mine_cmd) {
      SessionDatabase db = load_sequences_file(input, format);
      int ms = resolve_minsup(minsup, db.users.size());
      MineOutput mined = mine(db, ms);
      write_or_print(out, format_patterns(mined.patterns, mined.transformed));
      std::vector<Pattern> wpmax = maximal(mined.patterns);
      if (!maximal_out.empty())
        write_or_print(maximal_out, format_patterns(wpmax, mined.transformed));
      if (!pairs_out.empty()) {
        auto pairs = page_pairs(two_sequences(wpmax), mined.patterns, mined.table);
        std::ostringstream csv;
        csv << "antecedent,consequent,support\n";
        for (const PairSupport& p : pairs)
          csv << p.antecedent << ',' << p.consequent << ',' << p.support << '\n';
        write_or_print(pairs_out, csv.str());
      }
      std::cerr << "minsup " << ms << ": " << mined.patterns.size() << " patterns, "
                << wpmax.size() << " maximal, depth " << mined.stats.max_depth << '\n';
    } else if (*analyze_cmd) {
      SessionDatabase db = load_sequences_file(input, LogFormat::SESSIONS);
      std::vector<PairSupport> pairs;
      if (!pairs_path.empty()) {
        pairs = load_pairs_csv(pairs_path);
      } else {
        int ms = resolve_minsup(minsup, db.users.size());
        MineOutput mined = mine(db, ms);
        pairs = page_pairs(two_sequences(maximal(mined.patterns)), mined.patterns, mined.table);
      }
      AnalyzeResult res = analyze(pairs, db, flat_band);
      RuleDepository dep = RuleDepository::from_rules(res.rules);
      std::ostringstream csv;
      save_rules(dep, csv);
      write_or_print(out, csv.str());
      for (const PairSupport& p : res.skipped)
        std::cerr << "skipped unobserved pair (" << p.antecedent << ", " << p.consequent << ")\n";
      std::cerr << res.rules.size() << " rules, " << res.skipped.size() << " pairs skipped\n";
    } else if (*sim) {
      SessionDatabase db = load_sequences_file(input, LogFormat::SESSIONS);
      RuleDepository dep = load_rules_file(rules_path);
      SimMetrics m = simulate(stream_from_db(db), dep);
      if (out.empty())
        std::cout << format_metrics_text(m);
      else
        write_or_print(out, format_metrics_csv(m));
    } else if (*bench_cmd) {
      SessionDatabase db = load_sequences_file(input, format);
      std::vector<std::size_t> sizes;
      for (const std::string& s : split_list(sizes_arg)) sizes.push_back(std::stoull(s));
      std::vector<double> minsups;
      for (const std::string& s : split_list(minsups_arg)) minsups.push_back(std::stod(s));
      auto rows = bench(db, sizes, minsups, repeats);
      write_or_print(out, format_bench_csv(rows));
    } else if (*pipe) {
      PipelineConfig cfg;
      cfg.input_path = input;
      cfg.format = format;
      cfg.minsup = minsup;
      cfg.session_gap_s = gap;
      cfg.out_dir = out;
      cfg.denylist_path = denylist;
      cfg.flat_band = flat_band;
      PipelineResult res = run_pipeline(cfg);
      std::cerr << "users: " << res.users << ", sessions: " << res.sessions << ", patterns: "
                << res.pattern_count << ", maximal: " << res.maximal_count << ", pairs: "
                << res.pair_count << '\n';
      if (res.analysis_skipped)
        std::cerr << "cyclic analysis skipped: input has no real timestamps\n";
      else
        std::cerr << "rules: " << res.rule_count << ", skipped pairs: " << res.skipped_pairs
                  << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
