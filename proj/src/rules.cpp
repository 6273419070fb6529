#include "webseq/rules.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace webseq {

namespace {

long long whole_number(const std::string& field, std::size_t lineno) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(field, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != field.size())
    throw Error("rule file line " + std::to_string(lineno) + ": bad numeric field '" + field +
                "'");
  return v;
}

}  // namespace

RuleDepository RuleDepository::from_rules(std::vector<PrefetchRule> rules) {
  RuleDepository dep;
  dep.rules_ = std::move(rules);
  for (std::size_t i = 0; i < dep.rules_.size(); ++i) {
    const PrefetchRule& r = dep.rules_[i];
    if (r.periodicity_s < 1)
      throw NonPositivePeriod("rule (" + std::to_string(r.antecedent) + ", " +
                              std::to_string(r.consequent) + ") has periodicity " +
                              std::to_string(r.periodicity_s));
    if (r.cyclic_s < r.periodicity_s)
      throw NonPositivePeriod("rule (" + std::to_string(r.antecedent) + ", " +
                              std::to_string(r.consequent) + ") has cyclic threshold " +
                              std::to_string(r.cyclic_s) + " < periodicity " +
                              std::to_string(r.periodicity_s));
    for (std::size_t idx : dep.by_antecedent_[r.antecedent]) {
      if (dep.rules_[idx].consequent == r.consequent)
        throw DuplicatePair("(" + std::to_string(r.antecedent) + ", " +
                            std::to_string(r.consequent) + ")");
    }
    dep.by_antecedent_[r.antecedent].push_back(i);
  }
  return dep;
}

std::vector<PrefetchRule> RuleDepository::match(int page) const {
  std::vector<PrefetchRule> out;
  auto it = by_antecedent_.find(page);
  if (it == by_antecedent_.end()) return out;
  for (std::size_t idx : it->second) out.push_back(rules_[idx]);
  std::sort(out.begin(), out.end(), [](const PrefetchRule& a, const PrefetchRule& b) {
    if (a.periodicity_s != b.periodicity_s) return a.periodicity_s < b.periodicity_s;
    return a.consequent < b.consequent;
  });
  return out;
}

void save_rules(const RuleDepository& dep, std::ostream& out) {
  out << kRuleCsvHeader << '\n';
  for (const PrefetchRule& r : dep.rules()) {
    out << r.antecedent << ',' << r.consequent << ',' << r.support << ',' << r.periodicity_s << ','
        << tendency_name(r.tendency) << ',' << r.cyclic_s << '\n';
  }
}

void save_rules_file(const RuleDepository& dep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write rule file: " + path);
  save_rules(dep, out);
}

RuleDepository load_rules(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw BadHeader("empty rule file");
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
  if (line != kRuleCsvHeader)
    throw BadHeader("expected '" + std::string(kRuleCsvHeader) + "', got '" + line + "'");
  std::vector<PrefetchRule> rules;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 6)
      throw Error("rule file line " + std::to_string(lineno) + ": expected 6 fields");
    PrefetchRule r;
    r.antecedent = static_cast<int>(whole_number(fields[0], lineno));
    r.consequent = static_cast<int>(whole_number(fields[1], lineno));
    r.support = static_cast<int>(whole_number(fields[2], lineno));
    r.periodicity_s = whole_number(fields[3], lineno);
    r.tendency = parse_tendency(fields[4]);
    r.cyclic_s = whole_number(fields[5], lineno);
    rules.push_back(r);
  }
  return RuleDepository::from_rules(std::move(rules));
}

RuleDepository load_rules_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open rule file: " + path);
  return load_rules(in);
}

void save_rules_decoded(const RuleDepository& dep, const EncodingTable& table, std::ostream& out) {
  out << "antecedent_url,consequent_url,support,periodicity_s,tendency,cyclic_behaviour_s\n";
  for (const PrefetchRule& r : dep.rules()) {
    out << table.decode(r.antecedent) << ',' << table.decode(r.consequent) << ',' << r.support
        << ',' << r.periodicity_s << ',' << tendency_name(r.tendency) << ',' << r.cyclic_s << '\n';
  }
}

}  // namespace webseq
