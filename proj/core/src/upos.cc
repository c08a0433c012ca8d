// Penn (and TreeTagger-extended Penn) tags to UPOS, with the relation-
// sensitive cases: be/have/do/modals as AUX only when auxiliary or copula,
// determiners as DET only when attached as det.

#include <cctype>
#include <map>
#include <set>
#include <string>

#include "treerewrite/sd2ud.h"

namespace treerewrite {

namespace {

const std::map<std::string, std::string, std::less<>> &penn_table() {
  static const std::map<std::string, std::string, std::less<>> kTable = {
      {"CC", "CCONJ"},  {"CD", "NUM"},     {"DT", "DET"},    {"EX", "PRON"},
      {"FW", "X"},      {"IN", "ADP"},     {"JJ", "ADJ"},    {"JJR", "ADJ"},
      {"JJS", "ADJ"},   {"LS", "X"},       {"MD", "AUX"},    {"NN", "NOUN"},
      {"NNS", "NOUN"},  {"NNP", "PROPN"},  {"NNPS", "PROPN"}, {"PDT", "DET"},
      {"POS", "PART"},  {"PRP", "PRON"},   {"PRP$", "PRON"}, {"RB", "ADV"},
      {"RBR", "ADV"},   {"RBS", "ADV"},    {"RP", "ADP"},    {"SYM", "SYM"},
      {"TO", "PART"},   {"UH", "INTJ"},    {"WDT", "DET"},   {"WP", "PRON"},
      {"WP$", "PRON"},  {"WRB", "ADV"},    {"ADD", "X"},     {"AFX", "ADJ"},
      {"GW", "X"},      {"XX", "X"},       {"NFP", "PUNCT"}, {"HYPH", "PUNCT"},
      {".", "PUNCT"},   {",", "PUNCT"},    {":", "PUNCT"},   {"``", "PUNCT"},
      {"''", "PUNCT"},  {"\"", "PUNCT"},   {"(", "PUNCT"},   {")", "PUNCT"},
      {"-LRB-", "PUNCT"}, {"-RRB-", "PUNCT"}, {"-LSB-", "PUNCT"},
      {"-RSB-", "PUNCT"}, {"-LCB-", "PUNCT"}, {"-RCB-", "PUNCT"},
      {"SENT", "PUNCT"}, {"$", "SYM"},     {"#", "SYM"},
  };
  return kTable;
}

bool is_verb_tag(std::string_view xpos) {
  // VB*, plus TreeTagger's VH* (have) and VV* (lexical verbs).
  return xpos.size() >= 2 && xpos[0] == 'V' &&
         (xpos[1] == 'B' || xpos[1] == 'H' || xpos[1] == 'V');
}

std::string lowercase(std::string s) {
  for (char &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

int assign_upos(Sentence &s, ConversionLog *log) {
  int edits = 0;
  for (Token &t : s.tokens) {
    const std::string_view rel = base_label(t.deprel);
    const bool auxiliary = rel == "aux" || rel == "cop";
    std::string upos;
    if (is_verb_tag(t.xpos)) {
      upos = auxiliary ? "AUX" : "VERB";
    } else if (auto it = penn_table().find(t.xpos); it != penn_table().end()) {
      upos = it->second;
    } else if (!t.upos.empty() && t.xpos.empty()) {
      upos = t.upos;
    } else {
      upos = "X";
      if (log != nullptr) {
        log->add(0, s.sent_id, 0, LogEvent::kWarning,
                 "token " + std::to_string(t.id) + ": no UPOS for tag '" + t.xpos + "'");
      }
    }

    if (t.xpos == "DT" || t.xpos == "WDT") {
      upos = rel == "det" ? "DET" : "PRON";
    } else if (t.xpos == "IN") {
      upos = rel == "mark" ? "SCONJ" : "ADP";
    } else if (t.xpos == "TO") {
      upos = rel == "case" ? "ADP" : "PART";
    } else if (t.xpos.rfind("RB", 0) == 0) {
      const std::string word = lowercase(t.lemma.empty() ? t.form : t.lemma);
      if (word == "not" || word == "n't") upos = "PART";
    }

    if (t.upos != upos) {
      t.upos = upos;
      ++edits;
    }
  }
  if (log != nullptr && edits > 0) {
    log->add(0, s.sent_id, edits, LogEvent::kApplied, "upos");
  }
  return edits;
}

}  // namespace treerewrite
