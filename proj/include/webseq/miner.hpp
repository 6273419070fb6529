#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "webseq/errors.hpp"
#include "webseq/sessions.hpp"

namespace webseq {

/// One tuple of the transformed database: the user's sessions rewritten to
/// sets of transformed ids. `row` is the tuple's index in the transformed
/// database and is preserved through projection and splitting, so occurrence
/// sets from different mining branches stay comparable.
struct EncodedSequence {
  int row = 0;
  std::string tuple_id;
  std::vector<std::vector<int>> elements;  // each sorted ascending, non-empty
  bool operator==(const EncodedSequence&) const = default;
};

/// Bijection frequent itemset (sorted page ids) <-> transformed id.
/// Ids run from 1 in lexicographic itemset order.
class TransformTable {
public:
  TransformTable() = default;
  /// Itemsets must be sorted vectors; they are deduplicated and ordered here.
  static TransformTable from_itemsets(std::vector<std::vector<int>> itemsets);

  /// Id of an itemset, or 0 when unmapped.
  int id_of(const std::vector<int>& itemset) const;
  /// Itemset of an id. Throws UnknownId.
  const std::vector<int>& itemset_of(int id) const;
  int size() const { return static_cast<int>(itemsets_.size()); }
  /// itemsets()[i] is the itemset of id i+1.
  const std::vector<std::vector<int>>& itemsets() const { return itemsets_; }

private:
  std::vector<std::vector<int>> itemsets_;
};

/// A mined sequential pattern: ordered transformed ids plus the exact set of
/// tuples containing it (as rows of the mined database, sorted).
struct Pattern {
  std::vector<int> ids;
  std::vector<int> occ;
  bool operator==(const Pattern&) const = default;
};

/// The tuples whose some element contains `root`, unmodified.
struct ProjectedDatabase {
  int root = 0;
  std::vector<EncodedSequence> tuples;
};

/// Prefix/suffix partition of a projected database. For each tuple the
/// prefix keeps the elements strictly before the last element containing the
/// root and the suffix the elements strictly after the first one; elements
/// containing the root go to neither side, and tuples whose side is empty are
/// omitted from that side.
struct SplitDatabases {
  std::vector<EncodedSequence> prefixes;
  std::vector<EncodedSequence> suffixes;
};

/// Node of the up/down growth DAG for one root: the pattern, plus the nodes
/// it extends on the prefix side (up) and the suffix side (down).
struct DagNode {
  Pattern pattern;
  std::vector<int> up_parents;
  std::vector<int> down_parents;
};
struct RootDag {
  int root = 0;
  std::vector<DagNode> nodes;  // nodes[0] is <root>
};

struct MineStats {
  /// Deepest prefix/suffix assembly level needed by any emitted pattern
  /// (a bare root counts 1; a combination costs one level on top of the
  /// deeper of its two sides; rediscoveries keep the shallowest derivation).
  int max_depth = 0;
};

/// Number of tuples containing `pattern` under the strictly-increasing
/// element-position containment rule; each tuple counts at most once.
/// An empty pattern is contained in every tuple.
int support(const std::vector<EncodedSequence>& tuples, const std::vector<int>& pattern);
/// Rows of the tuples containing `pattern`, sorted.
std::vector<int> occurrences(const std::vector<EncodedSequence>& tuples,
                             const std::vector<int>& pattern);
bool contains_pattern(const EncodedSequence& tuple, const std::vector<int>& pattern);

/// Plain subsequence test on id lists (patterns have single-id elements).
bool is_subsequence(const std::vector<int>& needle, const std::vector<int>& haystack);

/// Frequent elements of a session database: every singleton page with
/// support >= minsup plus every distinct whole multi-page session S whose
/// superset-support (#users with some session containing all of S) reaches
/// minsup. Sorted lexicographically.
std::vector<std::pair<std::vector<int>, int>> frequent_elements(const SessionDatabase& db,
                                                                int minsup);

/// Rewrite each session as the single id of the frequent itemset it exactly
/// equals, else as the ids of its frequent singleton members; drop emptied
/// sessions and tuples.
std::pair<std::vector<EncodedSequence>, TransformTable> transform(const SessionDatabase& db,
                                                                  int minsup);

ProjectedDatabase project(const std::vector<EncodedSequence>& tdb, int root);

SplitDatabases split_pre_suf(const ProjectedDatabase& pd);

/// All frequent patterns containing pd.root: combinations x·root·y of
/// prefix-side and suffix-side patterns, prefiltered by occurrence-set
/// intersection and verified by full containment before emission.
/// Skips (returns nothing) when |pd| < minsup. Optionally materializes the
/// growth DAG for inspection.
std::vector<Pattern> mine_root(const ProjectedDatabase& pd, int minsup, RootDag* dag = nullptr,
                               MineStats* stats = nullptr);

/// Union of mine_root over every id of the transformed database,
/// deduplicated and in canonical (length, then lexicographic) order.
std::vector<Pattern> mine_sequences(const std::vector<EncodedSequence>& tdb, int minsup,
                                    MineStats* stats = nullptr);

struct MineOutput {
  TransformTable table;
  std::vector<EncodedSequence> transformed;
  std::vector<Pattern> patterns;  // WP
  MineStats stats;
};
MineOutput mine(const SessionDatabase& db, int minsup);

/// Definitional test oracle: depth-first enumeration of id sequences with
/// support recomputed from the containment definition for every candidate;
/// no projection or prefix/suffix machinery. Guarded by TooLarge.
std::vector<Pattern> oracle_mine_sequences(const std::vector<EncodedSequence>& tdb, int minsup);
std::vector<Pattern> oracle_mine(const SessionDatabase& db, int minsup);

/// Patterns that are not subsequences of any other member.
std::vector<Pattern> maximal(const std::vector<Pattern>& wp);

/// All ordered id pairs (i, j) with i strictly before j in some maximal
/// pattern; equals the set of length-2 patterns of WP. Sorted.
std::vector<std::pair<int, int>> two_sequences(const std::vector<Pattern>& wpmax);

/// One pattern per line: `<1 6 7>\t2\tq,t` (ids, support, occurrence tuple
/// ids resolved through the database the patterns were mined from).
std::string format_patterns(const std::vector<Pattern>& patterns,
                            const std::vector<EncodedSequence>& tdb);

}  // namespace webseq
