#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "webseq/cyclic.hpp"
#include "webseq/errors.hpp"
#include "webseq/sessions.hpp"

namespace webseq {

/// Prefetching-rule depository, indexed by antecedent page. Immutable once
/// built; (antecedent, consequent) pairs are unique and every rule satisfies
/// P >= 1 and C >= P.
class RuleDepository {
public:
  RuleDepository() = default;
  /// Validates the rules. Throws DuplicatePair / NonPositivePeriod.
  static RuleDepository from_rules(std::vector<PrefetchRule> rules);

  const std::vector<PrefetchRule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }

  /// All rules triggered by `page` (antecedent = page), most urgent first
  /// (ascending periodicity, ties by consequent).
  std::vector<PrefetchRule> match(int page) const;

private:
  std::vector<PrefetchRule> rules_;
  std::unordered_map<int, std::vector<std::size_t>> by_antecedent_;
};

inline std::vector<PrefetchRule> match_rules(const RuleDepository& dep, int page) {
  return dep.match(page);
}

constexpr const char* kRuleCsvHeader =
    "antecedent,consequent,support,periodicity_s,tendency,cyclic_behaviour_s";

/// CSV round trip: load_rules(save_rules(dep)) == dep.
void save_rules(const RuleDepository& dep, std::ostream& out);
void save_rules_file(const RuleDepository& dep, const std::string& path);
RuleDepository load_rules(std::istream& in);         // throws BadHeader/...
RuleDepository load_rules_file(const std::string& path);

/// Decoded variant with URL columns, for human consumption.
void save_rules_decoded(const RuleDepository& dep, const EncodingTable& table, std::ostream& out);

}  // namespace webseq
