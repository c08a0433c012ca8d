// DepEdit-style rewrite rules.
//
// A rule file holds one rule per line with three TAB-separated fields:
//
//   attributes    clauses separated by ';', conditions on one token by '&'
//                 e.g.  func=/.*/;func=/^cc$/;func=/^conj$/
//   relations     '#i>#j' (i heads j), '#i.#j' (j immediately follows i),
//                 '#i.*#j' (j follows i), or 'none'
//   actions       '#i:key=value' sets an attribute, '#i>#j' makes i head j
//
// Lines that are blank or start with ';' or '#' are ignored. Attribute keys
// are func (deprel), pos (xpos), cpos (upos), lemma, text (form); any other
// key names a MISC entry. Patterns are anchored: /dobj/ matches "dobj" only.
//
// Within one rule, all bindings are computed on the sentence as it was
// before the rule ran; only then are the actions applied, binding by
// binding in lexicographic order of the bound token ids.

#ifndef TREEREWRITE_RULE_ENGINE_H_
#define TREEREWRITE_RULE_ENGINE_H_

#include <memory>
#include <regex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "treerewrite/conllu.h"
#include "treerewrite/log.h"

namespace treerewrite {

class RuleFileError : public std::runtime_error {
 public:
  RuleFileError(int line, const std::string &message);
  int line() const { return line_; }

 private:
  int line_;
};

enum class Attribute { kFunc, kPos, kCpos, kLemma, kText, kMisc };

// Compiled anchored pattern with fast paths for literals and ".*".
class Pattern {
 public:
  explicit Pattern(std::string source);  // throws std::regex_error
  bool matches(std::string_view value) const;
  const std::string &source() const { return source_; }

 private:
  enum class Kind { kAny, kLiteral, kRegex };
  std::string source_;
  Kind kind_;
  std::shared_ptr<const std::regex> regex_;
};

struct Condition {
  Attribute attribute;
  std::string misc_key;  // set when attribute == kMisc
  bool negated = false;
  Pattern pattern;
};

struct TokenPattern {
  std::vector<Condition> conditions;
  bool matches(const Token &t) const;
};

enum class RelationKind { kDominates, kImmediatelyPrecedes, kPrecedes };

struct RelationConstraint {
  RelationKind kind;
  int from = 0;  // 1-based clause indices
  int to = 0;
};

enum class ActionKind { kSetAttribute, kReattach };

struct Action {
  ActionKind kind;
  int target = 0;  // clause index whose token is edited; the new head for kReattach
  int dependent = 0;  // kReattach only
  Attribute attribute = Attribute::kFunc;
  std::string misc_key;
  std::string value;
};

struct Rule {
  std::vector<TokenPattern> clauses;
  std::vector<RelationConstraint> relations;  // empty == "none"
  std::vector<Action> actions;
  int source_line = 0;
};

// Token ids bound to clauses 1..k, stored 0-based.
using Binding = std::vector<int>;

std::vector<Rule> parse_rules(std::string_view input);
std::vector<Rule> load_rules(const std::string &path);

// Reads and writes the attribute of a token named by (attribute, misc_key).
std::string token_attribute(const Token &t, Attribute a, std::string_view misc_key);

std::vector<Binding> match_rule(const Rule &rule, const Sentence &s);

// Returns the number of actions that changed the sentence.
int apply_rule(const Rule &rule, Sentence &s, ConversionLog *log = nullptr);

// Applies every rule to every sentence, rules in file order. Each sentence
// sees the effects of earlier rules.
ConversionLog run_ruleset(const std::vector<Rule> &rules, Document &doc);
void run_ruleset(const std::vector<Rule> &rules, Sentence &s, ConversionLog &log);

}  // namespace treerewrite

#endif  // TREEREWRITE_RULE_ENGINE_H_
