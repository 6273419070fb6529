#include "webseq/miner.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace webseq {

namespace {

bool element_contains(const std::vector<int>& elem, int id) {
  return std::binary_search(elem.begin(), elem.end(), id);
}

// Internal mining result: pattern plus the derivation depth and the length
// of the prefix-side part of the decomposition it was discovered with.
struct MinedPattern {
  std::vector<int> ids;
  std::vector<int> occ;
  int depth = 1;
  int up_len = 0;
};

using PatternAcc = std::map<std::vector<int>, MinedPattern>;

void merge_pattern(PatternAcc& acc, MinedPattern&& p) {
  auto it = acc.find(p.ids);
  if (it == acc.end()) {
    acc.emplace(p.ids, std::move(p));
  } else if (p.depth < it->second.depth) {
    it->second.depth = p.depth;
    it->second.up_len = p.up_len;
  }
}

std::vector<int> intersect_sorted(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<MinedPattern> mine_all_core(const std::vector<EncodedSequence>& tuples, int minsup);

// Patterns containing `root`, mined from the tuples of its projected
// database by prefix/suffix partitioning and verified recombination.
std::vector<MinedPattern> mine_root_core(const std::vector<EncodedSequence>& pd, int root,
                                         int minsup) {
  std::vector<MinedPattern> out;
  if (static_cast<int>(pd.size()) < minsup) return out;

  std::vector<int> root_rows;
  std::vector<EncodedSequence> pre, suf;
  root_rows.reserve(pd.size());
  for (const EncodedSequence& t : pd) {
    std::size_t first = t.elements.size(), last = t.elements.size();
    for (std::size_t i = 0; i < t.elements.size(); ++i) {
      if (element_contains(t.elements[i], root)) {
        if (first == t.elements.size()) first = i;
        last = i;
      }
    }
    if (first == t.elements.size()) continue;  // projected databases never hit this
    root_rows.push_back(t.row);
    // Keep everything before the last root element so a repeated root can
    // still be matched on the prefix side (and symmetrically for suffixes);
    // the verification pass below discards unsound recombinations.
    if (last > 0)
      pre.push_back({t.row, t.tuple_id,
                     {t.elements.begin(), t.elements.begin() + static_cast<long>(last)}});
    if (first + 1 < t.elements.size())
      suf.push_back({t.row, t.tuple_id,
                     {t.elements.begin() + static_cast<long>(first) + 1, t.elements.end()}});
  }
  std::sort(root_rows.begin(), root_rows.end());

  std::vector<MinedPattern> up = mine_all_core(pre, minsup);
  std::vector<MinedPattern> down = mine_all_core(suf, minsup);

  std::unordered_map<int, const EncodedSequence*> by_row;
  by_row.reserve(pd.size());
  for (const EncodedSequence& t : pd) by_row.emplace(t.row, &t);

  PatternAcc acc;
  merge_pattern(acc, MinedPattern{{root}, root_rows, 1, 0});
  for (const MinedPattern& x : up) {
    std::vector<int> ids = x.ids;
    ids.push_back(root);
    merge_pattern(acc, MinedPattern{std::move(ids), x.occ, 1 + x.depth,
                                    static_cast<int>(x.ids.size())});
  }
  for (const MinedPattern& y : down) {
    std::vector<int> ids{root};
    ids.insert(ids.end(), y.ids.begin(), y.ids.end());
    merge_pattern(acc, MinedPattern{std::move(ids), y.occ, 1 + y.depth, 0});
  }
  for (const MinedPattern& x : up) {
    for (const MinedPattern& y : down) {
      std::vector<int> inter = intersect_sorted(x.occ, y.occ);
      if (static_cast<int>(inter.size()) < minsup) continue;
      std::vector<int> ids = x.ids;
      ids.push_back(root);
      ids.insert(ids.end(), y.ids.begin(), y.ids.end());
      std::vector<int> occ;
      for (int row : inter)
        if (contains_pattern(*by_row.at(row), ids)) occ.push_back(row);
      if (static_cast<int>(occ.size()) < minsup) continue;
      merge_pattern(acc, MinedPattern{std::move(ids), std::move(occ),
                                      1 + std::max(x.depth, y.depth),
                                      static_cast<int>(x.ids.size())});
    }
  }

  out.reserve(acc.size());
  for (auto& [ids, p] : acc) out.push_back(std::move(p));
  return out;
}

// All frequent patterns of an element-list database: the union over every
// present id of its root mining, shallowest derivation kept on rediscovery.
std::vector<MinedPattern> mine_all_core(const std::vector<EncodedSequence>& tuples, int minsup) {
  std::set<int> alphabet;
  for (const EncodedSequence& t : tuples)
    for (const auto& elem : t.elements) alphabet.insert(elem.begin(), elem.end());

  PatternAcc acc;
  for (int id : alphabet) {
    std::vector<EncodedSequence> pd;
    for (const EncodedSequence& t : tuples) {
      for (const auto& elem : t.elements) {
        if (element_contains(elem, id)) {
          pd.push_back(t);
          break;
        }
      }
    }
    for (MinedPattern& p : mine_root_core(pd, id, minsup)) merge_pattern(acc, std::move(p));
  }
  std::vector<MinedPattern> out;
  out.reserve(acc.size());
  for (auto& [ids, p] : acc) out.push_back(std::move(p));
  return out;
}

bool pattern_less(const Pattern& a, const Pattern& b) {
  if (a.ids.size() != b.ids.size()) return a.ids.size() < b.ids.size();
  return a.ids < b.ids;
}

void sort_canonical(std::vector<Pattern>& ps) { std::sort(ps.begin(), ps.end(), pattern_less); }

bool mined_less(const MinedPattern& a, const MinedPattern& b) {
  if (a.ids.size() != b.ids.size()) return a.ids.size() < b.ids.size();
  return a.ids < b.ids;
}

}  // namespace

TransformTable TransformTable::from_itemsets(std::vector<std::vector<int>> itemsets) {
  std::sort(itemsets.begin(), itemsets.end());
  itemsets.erase(std::unique(itemsets.begin(), itemsets.end()), itemsets.end());
  TransformTable t;
  t.itemsets_ = std::move(itemsets);
  return t;
}

int TransformTable::id_of(const std::vector<int>& itemset) const {
  auto it = std::lower_bound(itemsets_.begin(), itemsets_.end(), itemset);
  if (it == itemsets_.end() || *it != itemset) return 0;
  return static_cast<int>(it - itemsets_.begin()) + 1;
}

const std::vector<int>& TransformTable::itemset_of(int id) const {
  if (id < 1 || id > size()) throw UnknownId("transformed id " + std::to_string(id));
  return itemsets_[static_cast<std::size_t>(id) - 1];
}

bool contains_pattern(const EncodedSequence& tuple, const std::vector<int>& pattern) {
  std::size_t k = 0;
  for (const auto& elem : tuple.elements) {
    if (k == pattern.size()) break;
    if (element_contains(elem, pattern[k])) ++k;
  }
  return k == pattern.size();
}

int support(const std::vector<EncodedSequence>& tuples, const std::vector<int>& pattern) {
  int n = 0;
  for (const EncodedSequence& t : tuples)
    if (contains_pattern(t, pattern)) ++n;
  return n;
}

std::vector<int> occurrences(const std::vector<EncodedSequence>& tuples,
                             const std::vector<int>& pattern) {
  std::vector<int> occ;
  for (const EncodedSequence& t : tuples)
    if (contains_pattern(t, pattern)) occ.push_back(t.row);
  std::sort(occ.begin(), occ.end());
  return occ;
}

bool is_subsequence(const std::vector<int>& needle, const std::vector<int>& haystack) {
  std::size_t k = 0;
  for (int id : haystack) {
    if (k == needle.size()) break;
    if (id == needle[k]) ++k;
  }
  return k == needle.size();
}

std::vector<std::pair<std::vector<int>, int>> frequent_elements(const SessionDatabase& db,
                                                                int minsup) {
  if (minsup < 1) throw Error("minsup must be >= 1");

  // Candidate multi-page itemsets are exactly the distinct whole sessions.
  std::set<std::vector<int>> candidates;
  std::vector<std::set<int>> user_pages(db.users.size());
  std::vector<std::vector<std::vector<int>>> user_sessions(db.users.size());
  for (std::size_t ui = 0; ui < db.users.size(); ++ui) {
    for (const Session& s : db.users[ui].sessions) {
      std::vector<int> t;
      t.reserve(s.events.size());
      for (const PageEvent& e : s.events) t.push_back(e.page_id);
      std::sort(t.begin(), t.end());
      t.erase(std::unique(t.begin(), t.end()), t.end());
      user_pages[ui].insert(t.begin(), t.end());
      if (t.size() >= 2) candidates.insert(t);
      user_sessions[ui].push_back(std::move(t));
    }
  }

  std::map<int, int> single_count;
  std::map<std::vector<int>, int> multi_count;
  for (std::size_t ui = 0; ui < db.users.size(); ++ui) {
    for (int p : user_pages[ui]) ++single_count[p];
    std::set<std::vector<int>> matched;
    for (const std::vector<int>& t : user_sessions[ui]) {
      if (t.size() < 2) continue;
      if (t.size() <= 10) {
        // enumerate subsets of the session and keep those that are candidates
        const unsigned n = static_cast<unsigned>(t.size());
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
          if (__builtin_popcount(mask) < 2) continue;
          std::vector<int> sub;
          for (unsigned b = 0; b < n; ++b)
            if (mask & (1u << b)) sub.push_back(t[b]);
          if (candidates.count(sub)) matched.insert(std::move(sub));
        }
      } else {
        for (const std::vector<int>& s : candidates)
          if (std::includes(t.begin(), t.end(), s.begin(), s.end())) matched.insert(s);
      }
    }
    for (const std::vector<int>& s : matched) ++multi_count[s];
  }

  std::vector<std::pair<std::vector<int>, int>> out;
  for (const auto& [p, n] : single_count)
    if (n >= minsup) out.push_back({{p}, n});
  for (const auto& [s, n] : multi_count)
    if (n >= minsup) out.push_back({s, n});
  std::sort(out.begin(), out.end());
  return out;
}

std::pair<std::vector<EncodedSequence>, TransformTable> transform(const SessionDatabase& db,
                                                                  int minsup) {
  auto fe = frequent_elements(db, minsup);
  std::vector<std::vector<int>> itemsets;
  itemsets.reserve(fe.size());
  for (auto& [s, n] : fe) itemsets.push_back(s);
  TransformTable table = TransformTable::from_itemsets(std::move(itemsets));

  std::vector<EncodedSequence> out;
  for (const UserSequence& u : db.users) {
    EncodedSequence seq;
    seq.tuple_id = u.user;
    for (const Session& s : u.sessions) {
      std::vector<int> t;
      t.reserve(s.events.size());
      for (const PageEvent& e : s.events) t.push_back(e.page_id);
      std::sort(t.begin(), t.end());
      t.erase(std::unique(t.begin(), t.end()), t.end());
      std::vector<int> element;
      if (int id = table.id_of(t); id != 0) {
        element.push_back(id);  // session is itself a frequent itemset
      } else {
        for (int p : t)
          if (int sid = table.id_of({p}); sid != 0) element.push_back(sid);
        std::sort(element.begin(), element.end());
      }
      if (!element.empty()) seq.elements.push_back(std::move(element));
    }
    if (!seq.elements.empty()) {
      seq.row = static_cast<int>(out.size());
      out.push_back(std::move(seq));
    }
  }
  return {std::move(out), std::move(table)};
}

ProjectedDatabase project(const std::vector<EncodedSequence>& tdb, int root) {
  ProjectedDatabase pd;
  pd.root = root;
  for (const EncodedSequence& t : tdb) {
    for (const auto& elem : t.elements) {
      if (element_contains(elem, root)) {
        pd.tuples.push_back(t);
        break;
      }
    }
  }
  return pd;
}

SplitDatabases split_pre_suf(const ProjectedDatabase& pd) {
  SplitDatabases out;
  for (const EncodedSequence& t : pd.tuples) {
    std::size_t first = t.elements.size(), last = t.elements.size();
    for (std::size_t i = 0; i < t.elements.size(); ++i) {
      if (element_contains(t.elements[i], pd.root)) {
        if (first == t.elements.size()) first = i;
        last = i;
      }
    }
    if (first == t.elements.size()) continue;
    if (last > 0)
      out.prefixes.push_back({t.row, t.tuple_id,
                              {t.elements.begin(), t.elements.begin() + static_cast<long>(last)}});
    if (first + 1 < t.elements.size())
      out.suffixes.push_back(
          {t.row, t.tuple_id,
           {t.elements.begin() + static_cast<long>(first) + 1, t.elements.end()}});
  }
  return out;
}

std::vector<Pattern> mine_root(const ProjectedDatabase& pd, int minsup, RootDag* dag,
                               MineStats* stats) {
  std::vector<MinedPattern> mined = mine_root_core(pd.tuples, pd.root, minsup);
  std::sort(mined.begin(), mined.end(), mined_less);

  if (stats) {
    stats->max_depth = 0;
    for (const MinedPattern& p : mined) stats->max_depth = std::max(stats->max_depth, p.depth);
  }
  if (dag) {
    dag->root = pd.root;
    dag->nodes.clear();
    std::map<std::vector<int>, int> node_of;
    for (const MinedPattern& p : mined) {
      node_of.emplace(p.ids, static_cast<int>(dag->nodes.size()));
      dag->nodes.push_back(DagNode{Pattern{p.ids, p.occ}, {}, {}});
    }
    for (std::size_t i = 0; i < mined.size(); ++i) {
      const MinedPattern& p = mined[i];
      std::vector<int> x(p.ids.begin(), p.ids.begin() + p.up_len);
      std::vector<int> y(p.ids.begin() + p.up_len + 1, p.ids.end());
      DagNode& node = dag->nodes[i];
      if (!x.empty() && !y.empty()) {
        std::vector<int> upk = x;
        upk.push_back(pd.root);
        std::vector<int> downk{pd.root};
        downk.insert(downk.end(), y.begin(), y.end());
        node.up_parents.push_back(node_of.at(upk));
        node.down_parents.push_back(node_of.at(downk));
      } else if (!x.empty()) {
        // pure prefix-side node: parents drop one prefix element each
        std::set<int> parents;
        for (std::size_t j = 0; j < x.size(); ++j) {
          std::vector<int> xr;
          for (std::size_t k = 0; k < x.size(); ++k)
            if (k != j) xr.push_back(x[k]);
          xr.push_back(pd.root);
          parents.insert(node_of.at(xr));
        }
        node.up_parents.assign(parents.begin(), parents.end());
      } else if (!y.empty()) {
        std::set<int> parents;
        for (std::size_t j = 0; j < y.size(); ++j) {
          std::vector<int> yr{pd.root};
          for (std::size_t k = 0; k < y.size(); ++k)
            if (k != j) yr.push_back(y[k]);
          parents.insert(node_of.at(yr));
        }
        node.down_parents.assign(parents.begin(), parents.end());
      }
    }
  }

  std::vector<Pattern> out;
  out.reserve(mined.size());
  for (MinedPattern& p : mined) out.push_back(Pattern{std::move(p.ids), std::move(p.occ)});
  return out;
}

std::vector<Pattern> mine_sequences(const std::vector<EncodedSequence>& tdb, int minsup,
                                    MineStats* stats) {
  if (minsup < 1) throw Error("minsup must be >= 1");
  std::vector<MinedPattern> mined = mine_all_core(tdb, minsup);
  if (stats) {
    stats->max_depth = 0;
    for (const MinedPattern& p : mined) stats->max_depth = std::max(stats->max_depth, p.depth);
  }
  std::vector<Pattern> out;
  out.reserve(mined.size());
  for (MinedPattern& p : mined) out.push_back(Pattern{std::move(p.ids), std::move(p.occ)});
  sort_canonical(out);
  return out;
}

MineOutput mine(const SessionDatabase& db, int minsup) {
  MineOutput out;
  auto [tdb, table] = transform(db, minsup);
  out.transformed = std::move(tdb);
  out.table = std::move(table);
  out.patterns = mine_sequences(out.transformed, minsup, &out.stats);
  return out;
}

std::vector<Pattern> oracle_mine_sequences(const std::vector<EncodedSequence>& tdb, int minsup) {
  if (minsup < 1) throw Error("minsup must be >= 1");
  std::set<int> alphabet;
  std::size_t max_len = 0;
  for (const EncodedSequence& t : tdb) {
    max_len = std::max(max_len, t.elements.size());
    for (const auto& elem : t.elements) alphabet.insert(elem.begin(), elem.end());
  }
  if (tdb.size() > 16 || alphabet.size() > 24 || max_len > 10)
    throw TooLarge(std::to_string(tdb.size()) + " tuples, " + std::to_string(alphabet.size()) +
                   " ids, length " + std::to_string(max_len));

  std::vector<Pattern> out;
  std::vector<int> seq;
  // depth-first enumeration; a sequence is extended only while frequent,
  // which discards exactly the supersequences the support definition rules out
  auto grow = [&](auto&& self) -> void {
    for (int id : alphabet) {
      seq.push_back(id);
      std::vector<int> occ = occurrences(tdb, seq);
      if (static_cast<int>(occ.size()) >= minsup) {
        out.push_back(Pattern{seq, std::move(occ)});
        if (seq.size() < max_len) self(self);
      }
      seq.pop_back();
    }
  };
  grow(grow);
  sort_canonical(out);
  return out;
}

std::vector<Pattern> oracle_mine(const SessionDatabase& db, int minsup) {
  auto [tdb, table] = transform(db, minsup);
  return oracle_mine_sequences(tdb, minsup);
}

std::vector<Pattern> maximal(const std::vector<Pattern>& wp) {
  std::vector<Pattern> out;
  for (const Pattern& p : wp) {
    bool dominated = false;
    for (const Pattern& q : wp) {
      if (&p == &q || p.ids == q.ids) continue;
      if (is_subsequence(p.ids, q.ids)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(p);
  }
  return out;
}

std::vector<std::pair<int, int>> two_sequences(const std::vector<Pattern>& wpmax) {
  std::set<std::pair<int, int>> pairs;
  for (const Pattern& p : wpmax)
    for (std::size_t i = 0; i < p.ids.size(); ++i)
      for (std::size_t j = i + 1; j < p.ids.size(); ++j) pairs.insert({p.ids[i], p.ids[j]});
  return {pairs.begin(), pairs.end()};
}

std::string format_patterns(const std::vector<Pattern>& patterns,
                            const std::vector<EncodedSequence>& tdb) {
  std::unordered_map<int, const std::string*> id_of_row;
  for (const EncodedSequence& t : tdb) id_of_row.emplace(t.row, &t.tuple_id);
  std::ostringstream out;
  for (const Pattern& p : patterns) {
    out << '<';
    for (std::size_t i = 0; i < p.ids.size(); ++i) {
      if (i) out << ' ';
      out << p.ids[i];
    }
    out << ">\t" << p.occ.size() << '\t';
    for (std::size_t i = 0; i < p.occ.size(); ++i) {
      if (i) out << ',';
      auto it = id_of_row.find(p.occ[i]);
      out << (it != id_of_row.end() ? *it->second : std::to_string(p.occ[i]));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace webseq
