#include "treerewrite/rule_engine.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <utility>

#include "treerewrite/tree.h"

namespace treerewrite {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Splits on `sep`, ignoring separators inside /.../ pattern literals.
std::vector<std::string_view> split_items(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  bool in_pattern = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\\') {
      ++i;
      continue;
    }
    if (c == '/') {
      if (!in_pattern && i > 0 && text[i - 1] == '=') {
        in_pattern = true;
      } else if (in_pattern &&
                 (i + 1 == text.size() || text[i + 1] == ';' || text[i + 1] == '&')) {
        in_pattern = false;
      }
      continue;
    }
    if (c == sep && !in_pattern) {
      parts.push_back(trim(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  parts.push_back(trim(text.substr(start)));
  return parts;
}

std::optional<int> parse_index(std::string_view s) {
  if (s.size() < 2 || s.front() != '#') return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data() + 1, s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::pair<Attribute, std::string> parse_attribute(std::string_view key) {
  if (key == "func") return {Attribute::kFunc, {}};
  if (key == "pos") return {Attribute::kPos, {}};
  if (key == "cpos") return {Attribute::kCpos, {}};
  if (key == "lemma") return {Attribute::kLemma, {}};
  if (key == "text") return {Attribute::kText, {}};
  return {Attribute::kMisc, std::string(key)};
}

bool valid_key(std::string_view key) {
  if (key.empty()) return false;
  return std::all_of(key.begin(), key.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

Condition parse_condition(std::string_view text, int line) {
  const std::size_t eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw RuleFileError(line, "malformed condition '" + std::string(text) + "'");
  }
  bool negated = text[eq - 1] == '!';
  std::string_view key = trim(text.substr(0, negated ? eq - 1 : eq));
  std::string_view value = trim(text.substr(eq + 1));
  if (!valid_key(key)) {
    throw RuleFileError(line, "bad attribute key '" + std::string(key) + "'");
  }
  if (value.size() >= 2 && value.front() == '/' && value.back() == '/') {
    value = value.substr(1, value.size() - 2);
  }
  auto [attribute, misc_key] = parse_attribute(key);
  try {
    return Condition{attribute, std::move(misc_key), negated,
                     Pattern(std::string(value))};
  } catch (const std::regex_error &e) {
    throw RuleFileError(line, "pattern /" + std::string(value) +
                                  "/ does not compile: " + e.what());
  }
}

void check_index(int index, std::size_t clauses, int line) {
  if (index < 1 || static_cast<std::size_t>(index) > clauses) {
    throw RuleFileError(line, "#" + std::to_string(index) +
                                  " does not name a token (rule has " +
                                  std::to_string(clauses) + " clause(s))");
  }
}

RelationConstraint parse_relation(std::string_view text, std::size_t clauses, int line) {
  RelationKind kind;
  std::size_t op_pos;
  std::size_t op_len;
  if ((op_pos = text.find(".*")) != std::string_view::npos) {
    kind = RelationKind::kPrecedes;
    op_len = 2;
  } else if ((op_pos = text.find('>')) != std::string_view::npos) {
    kind = RelationKind::kDominates;
    op_len = 1;
  } else if ((op_pos = text.find('.')) != std::string_view::npos) {
    kind = RelationKind::kImmediatelyPrecedes;
    op_len = 1;
  } else {
    throw RuleFileError(line, "malformed relation '" + std::string(text) + "'");
  }
  auto from = parse_index(trim(text.substr(0, op_pos)));
  auto to = parse_index(trim(text.substr(op_pos + op_len)));
  if (!from || !to) {
    throw RuleFileError(line, "malformed relation '" + std::string(text) + "'");
  }
  check_index(*from, clauses, line);
  check_index(*to, clauses, line);
  if (*from == *to) {
    throw RuleFileError(line, "relation '" + std::string(text) + "' relates a token to itself");
  }
  return RelationConstraint{kind, *from, *to};
}

Action parse_action(std::string_view text, std::size_t clauses, int line) {
  Action action;
  const std::size_t colon = text.find(':');
  if (colon != std::string_view::npos) {
    auto target = parse_index(trim(text.substr(0, colon)));
    std::string_view assignment = text.substr(colon + 1);
    const std::size_t eq = assignment.find('=');
    if (!target || eq == std::string_view::npos) {
      throw RuleFileError(line, "malformed action '" + std::string(text) + "'");
    }
    std::string_view key = trim(assignment.substr(0, eq));
    if (!valid_key(key)) {
      throw RuleFileError(line, "bad attribute key '" + std::string(key) + "'");
    }
    check_index(*target, clauses, line);
    auto [attribute, misc_key] = parse_attribute(key);
    action.kind = ActionKind::kSetAttribute;
    action.target = *target;
    action.attribute = attribute;
    action.misc_key = std::move(misc_key);
    action.value = std::string(trim(assignment.substr(eq + 1)));
    return action;
  }
  const std::size_t gt = text.find('>');
  if (gt == std::string_view::npos) {
    throw RuleFileError(line, "malformed action '" + std::string(text) + "'");
  }
  auto head = parse_index(trim(text.substr(0, gt)));
  auto dependent = parse_index(trim(text.substr(gt + 1)));
  if (!head || !dependent) {
    throw RuleFileError(line, "malformed action '" + std::string(text) + "'");
  }
  check_index(*head, clauses, line);
  check_index(*dependent, clauses, line);
  if (*head == *dependent) {
    throw RuleFileError(line, "action '" + std::string(text) + "' attaches a token to itself");
  }
  action.kind = ActionKind::kReattach;
  action.target = *head;
  action.dependent = *dependent;
  return action;
}

Rule parse_rule_line(std::string_view line, int line_no) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (start <= line.size()) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) tab = line.size();
    std::string_view field = trim(line.substr(start, tab - start));
    if (!field.empty()) fields.push_back(field);
    start = tab + 1;
  }
  if (fields.size() != 3) {
    throw RuleFileError(line_no, "expected 3 TAB-separated fields, found " +
                                     std::to_string(fields.size()));
  }

  Rule rule;
  rule.source_line = line_no;
  for (std::string_view clause : split_items(fields[0], ';')) {
    if (clause.empty()) throw RuleFileError(line_no, "empty token clause");
    TokenPattern pattern;
    for (std::string_view cond : split_items(clause, '&')) {
      pattern.conditions.push_back(parse_condition(cond, line_no));
    }
    rule.clauses.push_back(std::move(pattern));
  }

  std::vector<std::string_view> relations = split_items(fields[1], ';');
  if (relations.size() == 1 && relations[0] == "none") {
    // No constraints.
  } else {
    for (std::string_view rel : relations) {
      if (rel == "none") {
        throw RuleFileError(line_no, "'none' must be the only relation");
      }
      rule.relations.push_back(parse_relation(rel, rule.clauses.size(), line_no));
    }
  }

  for (std::string_view act : split_items(fields[2], ';')) {
    if (act.empty()) continue;
    rule.actions.push_back(parse_action(act, rule.clauses.size(), line_no));
  }
  if (rule.actions.empty()) throw RuleFileError(line_no, "rule has no actions");
  return rule;
}

bool relation_holds(const RelationConstraint &r, const Sentence &s,
                    const Binding &binding) {
  const int from = binding[static_cast<std::size_t>(r.from - 1)];
  const int to = binding[static_cast<std::size_t>(r.to - 1)];
  switch (r.kind) {
    case RelationKind::kDominates: return s.at(to).head == from;
    case RelationKind::kImmediatelyPrecedes: return to == from + 1;
    case RelationKind::kPrecedes: return from < to;
  }
  return false;
}

bool set_token_attribute(Token &t, Attribute a, const std::string &misc_key,
                         const std::string &value) {
  auto assign = [&value](std::string &field) {
    if (field == value) return false;
    field = value;
    return true;
  };
  switch (a) {
    case Attribute::kFunc: return assign(t.deprel);
    case Attribute::kPos: return assign(t.xpos);
    case Attribute::kCpos: return assign(t.upos);
    case Attribute::kLemma: return assign(t.lemma);
    case Attribute::kText: return assign(t.form);
    case Attribute::kMisc:
      if (value.empty() || value == "_") return t.misc.erase(misc_key);
      return t.misc.set(misc_key, value);
  }
  return false;
}

const char *attribute_key(Attribute a) {
  switch (a) {
    case Attribute::kFunc: return "func";
    case Attribute::kPos: return "pos";
    case Attribute::kCpos: return "cpos";
    case Attribute::kLemma: return "lemma";
    case Attribute::kText: return "text";
    case Attribute::kMisc: return "misc";
  }
  return "?";
}

}  // namespace

RuleFileError::RuleFileError(int line, const std::string &message)
    : std::runtime_error("rule line " + std::to_string(line) + ": " + message),
      line_(line) {}

Pattern::Pattern(std::string source) : source_(std::move(source)) {
  static constexpr std::string_view kMeta = "\\^$.|?*+()[]{}";
  if (source_ == ".*") {
    kind_ = Kind::kAny;
  } else if (source_.find_first_of(kMeta) == std::string::npos) {
    kind_ = Kind::kLiteral;
  } else {
    kind_ = Kind::kRegex;
    regex_ = std::make_shared<const std::regex>(source_, std::regex::ECMAScript);
  }
}

bool Pattern::matches(std::string_view value) const {
  switch (kind_) {
    case Kind::kAny: return true;
    case Kind::kLiteral: return value == source_;
    case Kind::kRegex:
      return std::regex_match(value.begin(), value.end(), *regex_);
  }
  return false;
}

std::string token_attribute(const Token &t, Attribute a, std::string_view misc_key) {
  switch (a) {
    case Attribute::kFunc: return t.deprel;
    case Attribute::kPos: return t.xpos;
    case Attribute::kCpos: return t.upos;
    case Attribute::kLemma: return t.lemma;
    case Attribute::kText: return t.form;
    case Attribute::kMisc: return t.misc.get(misc_key);
  }
  return {};
}

bool TokenPattern::matches(const Token &t) const {
  for (const Condition &c : conditions) {
    const bool hit = c.pattern.matches(token_attribute(t, c.attribute, c.misc_key));
    if (hit == c.negated) return false;
  }
  return true;
}

std::vector<Rule> parse_rules(std::string_view input) {
  std::vector<Rule> rules;
  int line_no = 0;
  std::size_t start = 0;
  while (start < input.size()) {
    std::size_t end = input.find('\n', start);
    if (end == std::string_view::npos) end = input.size();
    std::string_view line = input.substr(start, end - start);
    start = end + 1;
    ++line_no;
    std::string_view content = trim(line);
    if (content.empty() || content.front() == ';' || content.front() == '#') continue;
    rules.push_back(parse_rule_line(line, line_no));
  }
  return rules;
}

std::vector<Rule> load_rules(const std::string &path) {
  return parse_rules(read_file(path));
}

std::vector<Binding> match_rule(const Rule &rule, const Sentence &s) {
  const std::size_t k = rule.clauses.size();
  std::vector<std::vector<int>> candidates(k);
  for (std::size_t c = 0; c < k; ++c) {
    for (const Token &t : s.tokens) {
      if (rule.clauses[c].matches(t)) candidates[c].push_back(t.id);
    }
    if (candidates[c].empty()) return {};
  }

  // Constraints checkable once clause c is bound: both ends <= c.
  std::vector<std::vector<const RelationConstraint *>> ready(k);
  for (const RelationConstraint &r : rule.relations) {
    ready[static_cast<std::size_t>(std::max(r.from, r.to) - 1)].push_back(&r);
  }

  std::vector<Binding> out;
  Binding binding(k, 0);
  std::vector<bool> used(s.size() + 1, false);
  auto extend = [&](auto &self, std::size_t c) -> void {
    if (c == k) {
      out.push_back(binding);
      return;
    }
    for (int id : candidates[c]) {
      if (used[static_cast<std::size_t>(id)]) continue;
      binding[c] = id;
      bool ok = true;
      for (const RelationConstraint *r : ready[c]) {
        if (!relation_holds(*r, s, binding)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      used[static_cast<std::size_t>(id)] = true;
      self(self, c + 1);
      used[static_cast<std::size_t>(id)] = false;
    }
  };
  extend(extend, 0);
  return out;
}

int apply_rule(const Rule &rule, Sentence &s, ConversionLog *log) {
  const std::vector<Binding> bindings = match_rule(rule, s);
  if (bindings.empty()) return 0;

  // (token, key) -> (binding index, value written), for conflict reporting.
  std::map<std::pair<int, std::string>, std::pair<std::size_t, std::string>> writes;
  auto record = [&](int token, std::string key, const std::string &value,
                    std::size_t b) {
    auto [it, inserted] = writes.try_emplace({token, key}, b, value);
    if (!inserted) {
      if (it->second.first != b && it->second.second != value && log != nullptr) {
        log->add(rule.source_line, s.sent_id, 0, LogEvent::kConflict,
                 "token " + std::to_string(token) + " " + key + ": '" +
                     it->second.second + "' overwritten by '" + value + "'");
      }
      it->second = {b, value};
    }
  };

  int edits = 0;
  for (std::size_t b = 0; b < bindings.size(); ++b) {
    const Binding &binding = bindings[b];
    for (const Action &a : rule.actions) {
      const int target = binding[static_cast<std::size_t>(a.target - 1)];
      if (a.kind == ActionKind::kSetAttribute) {
        std::string key = a.attribute == Attribute::kMisc
                              ? a.misc_key
                              : std::string(attribute_key(a.attribute));
        record(target, key, a.value, b);
        if (set_token_attribute(s.at(target), a.attribute, a.misc_key, a.value)) {
          ++edits;
        }
        continue;
      }
      const int dependent = binding[static_cast<std::size_t>(a.dependent - 1)];
      if (s.at(dependent).head == target) continue;
      if (dominates(s, dependent, target)) {
        if (log != nullptr) {
          log->add(rule.source_line, s.sent_id, 0, LogEvent::kSkippedCycle,
                   "#" + std::to_string(a.target) + ">#" +
                       std::to_string(a.dependent) + " on tokens " +
                       std::to_string(target) + ">" + std::to_string(dependent));
        }
        continue;
      }
      record(dependent, "head", std::to_string(target), b);
      s.at(dependent).head = target;
      ++edits;
    }
  }
  return edits;
}

void run_ruleset(const std::vector<Rule> &rules, Sentence &s, ConversionLog &log) {
  for (const Rule &rule : rules) {
    const int edits = apply_rule(rule, s, &log);
    if (edits > 0) log.add(rule.source_line, s.sent_id, edits, LogEvent::kApplied);
  }
}

ConversionLog run_ruleset(const std::vector<Rule> &rules, Document &doc) {
  ConversionLog log;
  for (Sentence &s : doc.sentences) run_ruleset(rules, s, log);
  return log;
}

}  // namespace treerewrite
