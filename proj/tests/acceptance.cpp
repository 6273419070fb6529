// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "generators.hpp"
#include "webseq/cyclic.hpp"
#include "webseq/miner.hpp"
#include "webseq/pipeline.hpp"
#include "webseq/rules.hpp"
#include "webseq/simulate.hpp"

using namespace webseq;
using Clock = std::chrono::steady_clock;

namespace {

int g_failed = 0;
std::vector<std::string> g_notes;

void note(const std::string& msg) { g_notes.push_back(msg); }

void report(int number, const char* name, bool ok, double seconds) {
  std::printf("%s  criterion %d  %-28s (%.2fs)\n", ok ? "PASS" : "FAIL", number, name, seconds);
  for (const std::string& msg : g_notes) std::printf("      - %s\n", msg.c_str());
  g_notes.clear();
  if (!ok) ++g_failed;
}

bool expect(bool ok, const std::string& what) {
  if (!ok) note("failed: " + what);
  return ok;
}

double elapsed_s(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool same_split(const std::vector<EncodedSequence>& got,
                const std::vector<std::vector<std::vector<int>>>& want) {
  if (got.size() != want.size()) return false;
  for (std::size_t i = 0; i < got.size(); ++i)
    if (got[i].elements != want[i]) return false;
  return true;
}

// ---------------------------------------------------------------- criterion 1
bool worked_example() {
  auto t0 = Clock::now();
  bool ok = true;
  auto db = fx::ex1();

  std::vector<std::pair<std::vector<int>, int>> fe_want{
      {{1}, 4}, {{1, 3}, 2}, {{2}, 4}, {{2, 4}, 2}, {{3}, 4}, {{4}, 5}, {{5}, 3}, {{6}, 2}};
  ok &= expect(frequent_elements(db, 2) == fe_want, "frequent elements");

  auto [tdb, table] = transform(db, 2);
  ok &= expect(tdb == fx::ex1_transformed(), "transformed database rows");

  auto pd6 = project(tdb, 6);
  ok &= expect(occurrences(pd6.tuples, {}) == fx::rows("pqst"), "projected database 6D");

  auto s6 = split_pre_suf(pd6);
  ok &= expect(same_split(s6.prefixes, {{{1}, {2}, {3}}, {{1}}, {{5, 7}}, {{1}, {3}, {5}}}),
               "Pre(6D)");
  ok &= expect(same_split(s6.suffixes, {{{7, 8}}, {{7}}}), "Suf(6D)");

  auto pp1 = split_pre_suf(project(s6.prefixes, 1));
  ok &= expect(pp1.prefixes.empty() && same_split(pp1.suffixes, {{{2}, {3}}, {{3}, {5}}}), "PP1");
  auto pp3 = split_pre_suf(project(s6.prefixes, 3));
  ok &= expect(same_split(pp3.prefixes, {{{1}, {2}}, {{1}}}) &&
                   same_split(pp3.suffixes, {{{5}}}),
               "PP3");
  auto pp5 = split_pre_suf(project(s6.prefixes, 5));
  ok &= expect(same_split(pp5.prefixes, {{{1}, {3}}}) && pp5.suffixes.empty(), "PP5");
  auto ps7 = split_pre_suf(project(s6.suffixes, 7));
  ok &= expect(ps7.prefixes.empty() && ps7.suffixes.empty(), "PS7");

  std::vector<Pattern> wp6_want{
      fx::pat({6}, "pqst"),     fx::pat({1, 6}, "pqt"), fx::pat({3, 6}, "pt"),
      fx::pat({5, 6}, "st"),    fx::pat({6, 7}, "qt"),  fx::pat({1, 3, 6}, "pt"),
      fx::pat({1, 6, 7}, "qt"),
  };
  ok &= expect(mine_root(pd6, 2) == wp6_want, "WP6 with occurrence sets");

  auto mined = mine(db, 2);
  ok &= expect(mined.patterns == fx::ex1_wp(), "WP (14 patterns, occurrence sets)");
  ok &= expect(maximal(mined.patterns) == fx::ex1_wpmax(), "WP(max)");
  ok &= expect(two_sequences(fx::ex1_wpmax()) == fx::ex1_two_sequences(), "2-sequence set");

  double secs = elapsed_s(t0);
  ok &= expect(secs < 1.0, "runtime under 1 s");
  report(1, "worked-example exactness", ok, secs);
  return ok;
}

// ------------------------------------------------------- criteria 2 and 3
bool oracle_equivalence_and_depth() {
  auto t0 = Clock::now();
  bool ok2 = true, ok3 = true;
  std::mt19937 rng(20260810);
  int checked = 0;
  std::size_t patterns_total = 0, longest_seen = 0;
  for (int i = 0; i < 200; ++i) {
    SessionDatabase db = gen::random_session_db(rng, 8, 6, 6, 3);
    for (int minsup : {2, 3}) {
      auto [tdb, table] = transform(db, minsup);
      MineStats stats;
      auto mined = mine_sequences(tdb, minsup, &stats);
      auto want = oracle_mine_sequences(tdb, minsup);
      if (mined != want) {
        ok2 = false;
        note("db " + std::to_string(i) + " minsup " + std::to_string(minsup) +
             ": mine != oracle (" + std::to_string(mined.size()) + " vs " +
             std::to_string(want.size()) + " patterns)");
      }
      ++checked;
      patterns_total += mined.size();
      std::size_t longest = 0;
      for (const Pattern& p : mined) longest = std::max(longest, p.ids.size());
      longest_seen = std::max(longest_seen, longest);
      if (longest > 0) {
        int bound = static_cast<int>(std::floor(std::log2(static_cast<double>(longest)))) + 1;
        if (stats.max_depth > bound) {
          ok3 = false;
          note("db " + std::to_string(i) + ": depth " + std::to_string(stats.max_depth) +
               " exceeds floor(log2 " + std::to_string(longest) + ")+1 = " +
               std::to_string(bound));
        }
      }
    }
  }
  double secs = elapsed_s(t0);
  ok2 &= expect(secs < 30.0, "runtime under 30 s");
  note(std::to_string(checked) + " (db, minsup) runs compared, " +
       std::to_string(patterns_total) + " patterns, longest " + std::to_string(longest_seen));
  report(2, "oracle equivalence", ok2, secs);
  report(3, "recursion-depth bound", ok3, secs);
  return ok2 && ok3;
}

// ---------------------------------------------------------------- criterion 4
bool planted_recovery(RuleDepository& recovered) {
  auto t0 = Clock::now();
  bool ok = true;
  gen::PlantedOptions opt;  // 50 users, period 10 +- 0.5, stop 80, 30% noise
  auto events = gen::planted_events(opt);
  auto db = gen::db_from_events(events);

  std::size_t planted = 0, total = events.size();
  for (const StreamEvent& e : events)
    if (e.page == opt.antecedent || e.page == opt.consequent) ++planted;
  double noise_share = 1.0 - static_cast<double>(planted) / static_cast<double>(total);
  ok &= expect(noise_share > 0.25 && noise_share < 0.35, "noise share near 30%");

  AnalyzeResult res = analyze({{opt.antecedent, opt.consequent, opt.users}}, db);
  ok &= expect(res.rules.size() == 1 && res.skipped.empty(), "one rule recovered");
  if (res.rules.size() == 1) {
    const PrefetchRule& r = res.rules[0];
    note("recovered P=" + std::to_string(r.periodicity_s) + "s, C=" + std::to_string(r.cyclic_s) +
         "s, tendency=" + tendency_name(r.tendency));
    ok &= expect(r.periodicity_s >= 9 && r.periodicity_s <= 11, "P in [9, 11]");
    ok &= expect(r.cyclic_s >= 70 && r.cyclic_s <= 90, "C in [70, 90]");
    ok &= expect(r.tendency == Tendency::Flat, "tendency Flat");
    recovered = RuleDepository::from_rules(res.rules);
  }
  double secs = elapsed_s(t0);
  ok &= expect(secs < 5.0, "runtime under 5 s");
  report(4, "planted-pair recovery", ok, secs);
  return ok;
}

// ---------------------------------------------------------------- criterion 5
bool simulator_fidelity(const RuleDepository& recovered) {
  auto t0 = Clock::now();
  bool ok = true;
  gen::PlantedOptions opt;
  auto events = gen::planted_events(opt);

  if (recovered.size() != 1) {
    report(5, "simulator fidelity", false, elapsed_s(t0));
    return false;
  }
  const PrefetchRule rule = recovered.rules()[0];

  SimTrace trace;
  SimMetrics m = simulate(events, recovered, &trace);
  ok &= expect(m.hits + m.misses == m.requests, "hits + misses = requests");
  ok &= expect(m.prefetches_useful + m.prefetches_wasted == m.prefetches_issued,
               "useful + wasted = issued");

  // in-window consequent requests: elapsed from the user's latest antecedent
  // access in [P, C), computed independently of the simulator
  std::map<std::string, double> last_antecedent;
  std::int64_t in_window = 0, in_window_hits = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const StreamEvent& e = events[i];
    if (e.page == opt.antecedent) last_antecedent[e.user] = e.timestamp;
    if (e.page != opt.consequent) continue;
    auto it = last_antecedent.find(e.user);
    if (it == last_antecedent.end()) continue;
    double gap = e.timestamp - it->second;
    if (gap >= static_cast<double>(rule.periodicity_s) &&
        gap < static_cast<double>(rule.cyclic_s)) {
      ++in_window;
      if (trace.hit[i]) ++in_window_hits;
    }
  }
  double rate = in_window > 0 ? static_cast<double>(in_window_hits) /
                                    static_cast<double>(in_window)
                              : 0.0;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "in-window hit rate %.3f (%lld of %lld requests)", rate,
                static_cast<long long>(in_window_hits), static_cast<long long>(in_window));
  note(buf);
  ok &= expect(in_window > 0, "in-window requests exist");
  ok &= expect(rate >= 0.9, "in-window hit rate >= 0.9");

  SimMetrics none = simulate(events, RuleDepository{});
  ok &= expect(none.prefetches_issued == 0 && none.hits == 0, "empty depository: no prefetches");
  ok &= expect(none.hits + none.misses == none.requests, "conservation without rules");

  double secs = elapsed_s(t0);
  report(5, "simulator fidelity", ok, secs);
  return ok;
}

// ---------------------------------------------------------------- criterion 6
bool parser_conformance() {
  auto t0 = Clock::now();
  bool ok = true;

  LogRecord r1 = parse_line(fx::kFig4Line1, LogFormat::PROXY);
  ok &= expect(r1.client_ip == "30.0.1.2" && std::abs(r1.timestamp - 1307775248.816) < 1e-6 &&
                   r1.method == "GET" &&
                   r1.url == "http://www.facebook.com/ajax/typeahead/search.php?" &&
                   r1.status == 200 && r1.bytes == 960 &&
                   r1.content_type == "application/x-javascript" &&
                   r1.referrer_ip == "30.0.7.254",
               "first proxy line fields");
  LogRecord r2 = parse_line(fx::kFig4Line2, LogFormat::PROXY);
  ok &= expect(r2.client_ip == "30.0.0.223" && std::abs(r2.timestamp - 1307775249.609) < 1e-6 &&
                   r2.method == "POST" && r2.url == "http://channel.tvunetworks.com/list/all" &&
                   r2.status == 200 && r2.bytes == 397 && r2.content_type == "text/html" &&
                   r2.referrer_ip == "30.0.7.254",
               "second proxy line fields");

  auto kept = clean({r1, r2});
  ok &= expect(kept.size() == 1 && kept[0].url == r2.url, "clean drops line 1, keeps line 2");

  const char* clf =
      "30.0.1.2 http://www.example.com [11/Jun/2011:12:25:06 +0000] GET /index.html HTTP/1.1 "
      "200 960";
  const char* eclf =
      "30.0.1.7 http://www.example.com [12/Jun/2011:00:01:02 +0530] POST /post.php HTTP/1.1 "
      "302 128 30.0.7.254";
  LogRecord c = parse_line(clf, LogFormat::CLF);
  ok &= expect(parse_line(render_line(c, LogFormat::CLF), LogFormat::CLF) == c,
               "CLF fixture round-trips");
  LogRecord e = parse_line(eclf, LogFormat::ECLF);
  ok &= expect(parse_line(render_line(e, LogFormat::ECLF), LogFormat::ECLF) == e,
               "ECLF fixture round-trips");

  double secs = elapsed_s(t0);
  report(6, "parser/cleaner conformance", ok, secs);
  return ok;
}

// ---------------------------------------------------------------- criterion 7
bool scalability() {
  auto t0 = Clock::now();
  bool ok = true;
  SessionDatabase db = gen::scale_db(71, 2000);

  // mining each size at minsup = 2% of its tuples must stay under 10 s
  for (std::size_t size : {std::size_t{500}, std::size_t{1000}, std::size_t{2000}}) {
    auto rows = bench(db, {size}, {0.02}, 1);
    char buf[120];
    std::snprintf(buf, sizeof(buf), "size %zu @ minsup %d: %.0f ms, %zu patterns", size,
                  rows[0].minsup, rows[0].runtime_ms, rows[0].pattern_count);
    note(buf);
    ok &= expect(rows[0].runtime_ms < 10000.0, "mine under 10 s");
  }

  // Figure-10 trend: pattern count non-increasing in minsup at fixed size
  auto by_minsup = bench(db, {2000}, {0.01, 0.02, 0.04, 0.08}, 1);
  for (std::size_t i = 1; i < by_minsup.size(); ++i)
    ok &= expect(by_minsup[i].pattern_count <= by_minsup[i - 1].pattern_count,
                 "pattern count non-increasing in minsup");

  // Figure-8 trend: runtime non-decreasing in data size at fixed minsup
  auto by_size = bench(db, {500, 1000, 2000}, {40}, 3);
  char buf[120];
  std::snprintf(buf, sizeof(buf), "runtimes at minsup 40: %.1f / %.1f / %.1f ms",
                by_size[0].runtime_ms, by_size[1].runtime_ms, by_size[2].runtime_ms);
  note(buf);
  for (std::size_t i = 1; i < by_size.size(); ++i)
    ok &= expect(by_size[i].runtime_ms >= by_size[i - 1].runtime_ms,
                 "runtime non-decreasing in data size");

  double secs = elapsed_s(t0);
  report(7, "scalability properties", ok, secs);
  return ok;
}

// ---------------------------------------------------------------- criterion 8
bool round_trips() {
  auto t0 = Clock::now();
  bool ok = true;

  std::mt19937 rng(515);
  std::uniform_int_distribution<long long> ms(0, 4102444800000LL);
  std::uniform_int_distribution<int> gap_ms(1, 5000000);
  for (int i = 0; i < 50; ++i) {
    SessionDatabase db = gen::random_session_db(rng);
    if (i % 2 == 1) {  // half the corpus carries real timestamps
      db.synthetic_timestamps = false;
      long long t = ms(rng);
      for (auto& u : db.users)
        for (auto& s : u.sessions)
          for (auto& e : s.events) {
            t += gap_ms(rng);
            e.timestamp = static_cast<double>(t) / 1000.0;
          }
    }
    std::istringstream in(serialize_sessions(db));
    SessionDatabase back = load_sequences(in, LogFormat::SESSIONS);
    if (!same_sessions(db, back)) {
      ok = false;
      note("sessions round-trip failed on db " + std::to_string(i));
    }
  }

  std::uniform_int_distribution<int> page(1, 200), sup(1, 99), td(0, 2), extra(0, 1000);
  std::uniform_int_distribution<std::int64_t> period(1, 900);
  std::set<std::pair<int, int>> seen;
  std::vector<PrefetchRule> rules;
  while (rules.size() < 1000) {
    int a = page(rng), b = page(rng);
    if (!seen.insert({a, b}).second) continue;
    std::int64_t p = period(rng);
    rules.push_back({a, b, sup(rng), p, static_cast<Tendency>(td(rng)), p + extra(rng)});
  }
  RuleDepository dep = RuleDepository::from_rules(rules);
  std::ostringstream csv;
  save_rules(dep, csv);
  std::istringstream in(csv.str());
  RuleDepository back = load_rules(in);
  ok &= expect(back.rules() == dep.rules(), "1000-rule csv identity");

  double secs = elapsed_s(t0);
  report(8, "round-trips", ok, secs);
  return ok;
}

}  // namespace

int main() {
  worked_example();
  oracle_equivalence_and_depth();
  RuleDepository recovered;
  planted_recovery(recovered);
  simulator_fidelity(recovered);
  parser_conformance();
  scalability();
  round_trips();
  if (g_failed == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance check(s) failed\n", g_failed);
  return 1;
}
