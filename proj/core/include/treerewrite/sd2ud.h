// Stanford Dependencies -> Universal Dependencies v2 conversion pack.
//
// Label renames and most structural rewrites live in a rule file
// (data/stan2ud.rules) run by the rule engine. The procedures below cover
// what the rule language cannot express on its own; Converter runs them
// around the rule file in a fixed order:
//
//   1. convert_free_relative      SD free relatives -> pobj + rcmod
//   2. reattach_coordinators      cc moves to the following conjunct
//   3. resolve_nn                 nn -> compound, or flat for person names
//   4. detect_dislocated          multilayer mode only
//      detect_reparandum          multilayer mode only
//   5. rule file
//   6. assign_upos
//   7. apply_legacy_fixes         when enabled
//   8. orphan notices and residue report

#ifndef TREEREWRITE_SD2UD_H_
#define TREEREWRITE_SD2UD_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "treerewrite/conllu.h"
#include "treerewrite/log.h"
#include "treerewrite/rule_engine.h"

namespace treerewrite {

enum class ConversionMode { kPureSd, kMultilayer };

// Accepts "pure"/"pure-sd" and "multi"/"multilayer".
std::optional<ConversionMode> parse_mode(std::string_view name);
const char *mode_name(ConversionMode mode);

struct ConversionProfile {
  ConversionMode mode = ConversionMode::kPureSd;
  std::string ruleset_path;
  bool legacy_fixes = false;
};

// True for the 37 UD v2 universal relations (subtypes ignored).
bool is_ud_relation(std::string_view deprel);

int convert_free_relative(Sentence &s, ConversionLog *log = nullptr);

// Moves every cc token from its head to the nearest conj sibling that
// follows it. With `report_unmoved`, cc tokens left in place are logged.
int reattach_coordinators(Sentence &s, ConversionLog *log = nullptr,
                          bool report_unmoved = false);

int resolve_nn(Sentence &s, ConversionMode mode, ConversionLog *log = nullptr);
int detect_dislocated(Sentence &s, ConversionLog *log = nullptr);
int detect_reparandum(Sentence &s, ConversionLog *log = nullptr);
int assign_upos(Sentence &s, ConversionLog *log = nullptr);

// Post-hoc corrections for older constituency-converted UD: cc attached to
// the following conjunct, nmod of a verb relabeled obl.
int apply_legacy_fixes(Sentence &s, ConversionLog *log = nullptr);
int apply_legacy_fixes(Document &doc, ConversionLog *log = nullptr);

// Logs a notice where a verb has two obl dependents marked by the same
// preposition with a conj in between, the shape that UD annotates with
// orphan. Returns the number of notices.
int note_orphan_candidates(const Sentence &s, ConversionLog *log = nullptr);

// Ids of tokens whose relation is not a UD relation.
std::vector<int> residue_tokens(const Sentence &s);

class Converter {
 public:
  Converter(ConversionProfile profile, std::vector<Rule> rules);
  // Loads the rule file named by profile.ruleset_path.
  static Converter from_profile(ConversionProfile profile);

  ConversionLog convert(Document &doc) const;
  void convert(Sentence &s, ConversionLog &log) const;

  const ConversionProfile &profile() const { return profile_; }
  const std::vector<Rule> &rules() const { return rules_; }

 private:
  ConversionProfile profile_;
  std::vector<Rule> rules_;
};

}  // namespace treerewrite

#endif  // TREEREWRITE_SD2UD_H_
