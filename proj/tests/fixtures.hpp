#pragma once

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "webseq/cyclic.hpp"
#include "webseq/log.hpp"
#include "webseq/miner.hpp"
#include "webseq/rules.hpp"
#include "webseq/sessions.hpp"

// Shared worked-example data. The five-user example database uses pages
// A..F encoded as 1..6; its users map to the row letters p..t in tuple order.
namespace fx {

using namespace webseq;

inline constexpr const char* kEx1Sessions =
    "1.0.1.2\t1;1,3;2;4\n"    // <A (A,C) B D>
    "1.0.1.3\t1;4;5,6\n"      // <A D (E,F)>
    "1.0.1.4\t2,4;3;6\n"      // <(B,D) C F>
    "1.0.1.5\t3,5;1,2,3,4\n"  // <(C,E) (A,B,C,D)>
    "1.0.1.6\t1;2;3;4;5\n";   // <A B C D E>

inline SessionDatabase ex1() {
  std::istringstream in(kEx1Sessions);
  return load_sequences(in, LogFormat::SESSIONS);
}

/// "pqst" -> rows {0,1,3,4}
inline std::vector<int> rows(std::string_view letters) {
  std::vector<int> out;
  for (char c : letters) out.push_back(c - 'p');
  return out;
}

inline Pattern pat(std::vector<int> ids, std::string_view letters) {
  return Pattern{std::move(ids), rows(letters)};
}

/// The transformed example database (frequent-element ids 1..8 assigned in
/// lexicographic itemset order: (A)-1 (A,C)-2 (B)-3 (B,D)-4 (C)-5 (D)-6
/// (E)-7 (F)-8).
inline std::vector<EncodedSequence> ex1_transformed() {
  return {
      {0, "1.0.1.2", {{1}, {2}, {3}, {6}}},
      {1, "1.0.1.3", {{1}, {6}, {7, 8}}},
      {2, "1.0.1.4", {{4}, {5}, {8}}},
      {3, "1.0.1.5", {{5, 7}, {1, 3, 5, 6}}},
      {4, "1.0.1.6", {{1}, {3}, {5}, {6}, {7}}},
  };
}

/// The complete 14-pattern set of the example, canonical order, with
/// occurrence sets.
inline std::vector<Pattern> ex1_wp() {
  return {
      pat({1}, "pqst"), pat({3}, "pst"),      pat({5}, "rst"),   pat({6}, "pqst"),
      pat({7}, "qst"),  pat({8}, "qr"),       pat({1, 3}, "pt"), pat({1, 6}, "pqt"),
      pat({1, 7}, "qt"), pat({3, 6}, "pt"),   pat({5, 6}, "st"), pat({6, 7}, "qt"),
      pat({1, 3, 6}, "pt"), pat({1, 6, 7}, "qt"),
  };
}

inline std::vector<Pattern> ex1_wpmax() {
  return {pat({8}, "qr"), pat({5, 6}, "st"), pat({1, 3, 6}, "pt"), pat({1, 6, 7}, "qt")};
}

inline std::vector<std::pair<int, int>> ex1_two_sequences() {
  return {{1, 3}, {1, 6}, {1, 7}, {3, 6}, {5, 6}, {6, 7}};
}

inline constexpr const char* kFig4Line1 =
    "web-proxy, debug, packet 1307775248.816 363 30.0.1.2 TCP_MISS/200 960 GET "
    "http://www.facebook.com/ajax/typeahead/search.php? - DIRECT/66.220.146.32 "
    "application/x-javascript in 11-Jun 12:25:6.76 from 30.0.7.254";

inline constexpr const char* kFig4Line2 =
    "web-proxy, debug, packet 1307775249.609 586 30.0.0.223 TCP_MISS/200 397 POST "
    "http://channel.tvunetworks.com/list/all - DIRECT/38.103.62.170 text/html in 11-Jun "
    "12:25:7.69 from 30.0.7.254";

/// The six example prefetching rules (antecedent/consequent in the example's
/// frequent-element ids, supports from the example occurrence sets).
inline std::vector<PrefetchRule> example_rules() {
  return {
      {1, 3, 2, 9, Tendency::Flat, 57},  {1, 6, 3, 5, Tendency::Flat, 93},
      {3, 6, 2, 7, Tendency::Flat, 134}, {1, 7, 2, 3, Tendency::Flat, 68},
      {6, 7, 2, 8, Tendency::Flat, 74},  {5, 6, 2, 4, Tendency::Flat, 101},
  };
}

inline RuleDepository example_depository() { return RuleDepository::from_rules(example_rules()); }

}  // namespace fx
