#include "treerewrite/sd2ud.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "treerewrite/enrichment.h"
#include "treerewrite/tree.h"

namespace treerewrite {

namespace {

constexpr std::string_view kFreeRelativeRule =
    "func=/prep/;pos=/^W.*/;func=/pcomp/\t#1>#3;#3>#2\t"
    "#2:func=pobj;#1>#2;#2>#3;#3:func=rcmod";

void log_builtin(ConversionLog *log, const Sentence &s, int edits,
                 std::string_view name) {
  if (log != nullptr && edits > 0) {
    log->add(0, s.sent_id, edits, LogEvent::kApplied, std::string(name));
  }
}

bool set_deprel(Token &t, std::string_view deprel) {
  if (t.deprel == deprel) return false;
  t.deprel = std::string(deprel);
  return true;
}

bool set_head(Sentence &s, int dependent, int head) {
  Token &t = s.at(dependent);
  if (t.head == head) return false;
  t.head = head;
  return true;
}

// Tokens reachable from `top` through nn edges, including `top`.
std::vector<int> nn_chain(const Sentence &s,
                          const std::vector<std::vector<int>> &children, int top) {
  std::vector<int> chain = {top};
  for (std::size_t i = 0; i < chain.size(); ++i) {
    for (int child : children[static_cast<std::size_t>(chain[i])]) {
      if (s.at(child).deprel == "nn") chain.push_back(child);
    }
  }
  std::sort(chain.begin(), chain.end());
  return chain;
}

std::string case_marker(const Sentence &s, const std::vector<std::vector<int>> &children,
                        int id) {
  for (int child : children[static_cast<std::size_t>(id)]) {
    const Token &t = s.at(child);
    if (base_label(t.deprel) == "case") {
      std::string key = t.lemma.empty() ? t.form : t.lemma;
      std::transform(key.begin(), key.end(), key.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      return key;
    }
  }
  return {};
}

}  // namespace

std::optional<ConversionMode> parse_mode(std::string_view name) {
  if (name == "pure" || name == "pure-sd") return ConversionMode::kPureSd;
  if (name == "multi" || name == "multilayer") return ConversionMode::kMultilayer;
  return std::nullopt;
}

const char *mode_name(ConversionMode mode) {
  return mode == ConversionMode::kPureSd ? "pure-sd" : "multilayer";
}

bool is_ud_relation(std::string_view deprel) {
  static const std::set<std::string, std::less<>> kRelations = {
      "acl",   "advcl",     "advmod",   "amod",     "appos",     "aux",
      "case",  "cc",        "ccomp",    "clf",      "compound",  "conj",
      "cop",   "csubj",     "dep",      "det",      "discourse", "dislocated",
      "expl",  "fixed",     "flat",     "goeswith", "iobj",      "list",
      "mark",  "nmod",      "nsubj",    "nummod",   "obj",       "obl",
      "orphan", "parataxis", "punct",   "reparandum", "root",    "vocative",
      "xcomp"};
  return kRelations.count(base_label(deprel)) != 0;
}

int convert_free_relative(Sentence &s, ConversionLog *log) {
  static const Rule kRule = parse_rules(kFreeRelativeRule).front();
  const int edits = apply_rule(kRule, s, log);
  log_builtin(log, s, edits, "free-relative");
  return edits;
}

int reattach_coordinators(Sentence &s, ConversionLog *log, bool report_unmoved) {
  const auto children = children_of(s);
  int edits = 0;
  for (Token &cc : s.tokens) {
    if (cc.deprel != "cc" || cc.head == 0) continue;
    // Already pointing right to left.
    if (cc.head > cc.id && base_label(s.at(cc.head).deprel) == "conj") continue;
    int target = 0;
    for (int sibling : children[static_cast<std::size_t>(cc.head)]) {
      if (sibling > cc.id && base_label(s.at(sibling).deprel) == "conj") {
        target = sibling;
        break;
      }
    }
    if (target == 0) {
      if (report_unmoved && log != nullptr) {
        log->add(0, s.sent_id, 0, LogEvent::kNotice,
                 "cc token " + std::to_string(cc.id) +
                     " has no following conj sibling; left attached");
      }
      continue;
    }
    if (dominates(s, cc.id, target)) continue;
    cc.head = target;
    ++edits;
  }
  log_builtin(log, s, edits, "cc-reattach");
  return edits;
}

int resolve_nn(Sentence &s, ConversionMode mode, ConversionLog *log) {
  const auto children = children_of(s);
  int edits = 0;
  for (const Token &top : s.tokens) {
    if (top.deprel == "nn") continue;
    bool has_nn = false;
    for (int child : children[static_cast<std::size_t>(top.id)]) {
      if (s.at(child).deprel == "nn") has_nn = true;
    }
    if (!has_nn) continue;

    const std::vector<int> chain = nn_chain(s, children, top.id);
    const bool person = mode == ConversionMode::kMultilayer &&
                        top.misc.get(kEntityKey) == "person";
    if (!person) {
      for (int id : chain) {
        if (s.at(id).deprel == "nn") edits += set_deprel(s.at(id), "compound");
      }
      continue;
    }

    // Left-headed flat: the first name token takes over the external edge.
    const int first = chain.front();
    const int outer_head = top.head;
    const std::string outer_deprel = top.deprel;
    const int old_top = top.id;
    edits += set_head(s, first, outer_head);
    edits += set_deprel(s.at(first), outer_deprel);
    for (int id : chain) {
      if (id == first) continue;
      edits += set_head(s, id, first);
      edits += set_deprel(s.at(id), "flat");
    }
    if (first != old_top) {
      for (int child : children[static_cast<std::size_t>(old_top)]) {
        if (std::binary_search(chain.begin(), chain.end(), child)) continue;
        edits += set_head(s, child, first);
      }
    }
  }
  log_builtin(log, s, edits, "nn");
  return edits;
}

int detect_dislocated(Sentence &s, ConversionLog *log) {
  std::vector<int> hits;
  for (const Token &t : s.tokens) {
    if (t.deprel != "dep") continue;
    const std::string chain = t.misc.get(kCorefKey);
    if (chain.empty()) continue;
    for (const Token &other : s.tokens) {
      if (other.id != t.id && other.head == t.head &&
          other.misc.get(kCorefKey) == chain) {
        hits.push_back(t.id);
        break;
      }
    }
  }
  for (int id : hits) s.at(id).deprel = "dislocated";
  const int edits = static_cast<int>(hits.size());
  log_builtin(log, s, edits, "dislocated");
  return edits;
}

int detect_reparandum(Sentence &s, ConversionLog *log) {
  std::vector<int> hits;
  for (const Token &t : s.tokens) {
    if (t.deprel != "dep" || t.misc.get(kSicKey) != "Yes") continue;
    const bool head_in_error = t.head != 0 && s.at(t.head).misc.get(kSicKey) == "Yes";
    if (!head_in_error) hits.push_back(t.id);
  }
  for (int id : hits) s.at(id).deprel = "reparandum";
  const int edits = static_cast<int>(hits.size());
  log_builtin(log, s, edits, "reparandum");
  return edits;
}

int apply_legacy_fixes(Sentence &s, ConversionLog *log) {
  int edits = reattach_coordinators(s, log, /*report_unmoved=*/true);
  int relabeled = 0;
  for (Token &t : s.tokens) {
    if (base_label(t.deprel) != "nmod" || t.head == 0) continue;
    if (t.deprel == "nmod:poss") continue;
    const std::string &head_upos = s.at(t.head).upos;
    if (head_upos != "VERB" && head_upos != "AUX") continue;
    t.deprel = "obl" + t.deprel.substr(4);
    ++relabeled;
  }
  log_builtin(log, s, relabeled, "nmod-to-obl");
  return edits + relabeled;
}

int apply_legacy_fixes(Document &doc, ConversionLog *log) {
  int edits = 0;
  for (Sentence &s : doc.sentences) edits += apply_legacy_fixes(s, log);
  return edits;
}

int note_orphan_candidates(const Sentence &s, ConversionLog *log) {
  const auto children = children_of(s);
  int notices = 0;
  for (std::size_t h = 1; h < children.size(); ++h) {
    std::vector<int> obliques;
    for (int child : children[h]) {
      if (base_label(s.at(child).deprel) == "obl") obliques.push_back(child);
    }
    if (obliques.size() < 2) continue;
    std::map<std::string, std::vector<int>> by_marker;
    for (int o : obliques) {
      std::string marker = case_marker(s, children, o);
      if (!marker.empty()) by_marker[marker].push_back(o);
    }
    bool found = false;
    for (const auto &[marker, ids] : by_marker) {
      for (std::size_t i = 0; i + 1 < ids.size() && !found; ++i) {
        for (int o : obliques) {
          for (int c : children[static_cast<std::size_t>(o)]) {
            if (base_label(s.at(c).deprel) == "conj" && c > ids[i] && c < ids[i + 1]) {
              found = true;
            }
          }
        }
      }
      if (found) {
        if (log != nullptr) {
          log->add(0, s.sent_id, 0, LogEvent::kNotice,
                   "possible orphan configuration under token " + std::to_string(h) +
                       " (repeated '" + marker + "' obliques around a conj)");
        }
        ++notices;
        break;
      }
    }
  }
  return notices;
}

std::vector<int> residue_tokens(const Sentence &s) {
  std::vector<int> ids;
  for (const Token &t : s.tokens) {
    if (!is_ud_relation(t.deprel)) ids.push_back(t.id);
  }
  return ids;
}

Converter::Converter(ConversionProfile profile, std::vector<Rule> rules)
    : profile_(std::move(profile)), rules_(std::move(rules)) {}

Converter Converter::from_profile(ConversionProfile profile) {
  std::vector<Rule> rules = load_rules(profile.ruleset_path);
  return Converter(std::move(profile), std::move(rules));
}

void Converter::convert(Sentence &s, ConversionLog &log) const {
  convert_free_relative(s, &log);
  reattach_coordinators(s, &log);
  resolve_nn(s, profile_.mode, &log);
  if (profile_.mode == ConversionMode::kMultilayer) {
    detect_dislocated(s, &log);
    detect_reparandum(s, &log);
  }
  run_ruleset(rules_, s, log);
  assign_upos(s, &log);
  if (profile_.legacy_fixes) apply_legacy_fixes(s, &log);
  note_orphan_candidates(s, &log);
  for (int id : residue_tokens(s)) {
    log.add(0, s.sent_id, 0, LogEvent::kResidue,
            "token " + std::to_string(id) + " keeps label '" + s.at(id).deprel + "'");
  }
}

ConversionLog Converter::convert(Document &doc) const {
  ConversionLog log;
  for (Sentence &s : doc.sentences) convert(s, log);
  return log;
}

}  // namespace treerewrite
