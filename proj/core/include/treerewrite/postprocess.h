// Final pipeline stage: punctuation attachment and MISC cleanup.

#ifndef TREEREWRITE_POSTPROCESS_H_
#define TREEREWRITE_POSTPROCESS_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treerewrite/conllu.h"
#include "treerewrite/log.h"

namespace treerewrite {

// Opening mark -> closing mark. A mark may open and close (ASCII quotes).
class PunctPairTable {
 public:
  // ASCII quotes and brackets, PTB bracket tokens, and common Unicode
  // quotation marks.
  static const PunctPairTable &defaults();

  // One "open<TAB>close" pair per line; blank lines and '#' comments skipped.
  static PunctPairTable parse(std::string_view text);

  void add(std::string open, std::string close);
  std::optional<std::string> closing_for(std::string_view open) const;
  std::optional<std::string> opening_for(std::string_view close) const;
  std::size_t size() const { return pairs_.size(); }

 private:
  std::vector<std::pair<std::string, std::string>> pairs_;
};

// Re-attaches every punct-labeled token so that punctuation is childless and
// its edges are projective:
//   1. a pair of marks enclosing words goes to the lowest node covering them;
//   2. sentence-final terminators go to the root;
//   3. other marks go to the lower of the left and right neighbours' highest
//      ancestors that stay on the same side of the mark;
//   4. anything still non-projective goes to the root.
// Tokens tagged PUNCT whose relation is not punct keep their attachment.
// Returns the number of tokens whose head or relation changed.
int attach_punctuation(Sentence &s,
                       const PunctPairTable &pairs = PunctPairTable::defaults(),
                       ConversionLog *log = nullptr);

// Sic=Yes becomes Typo=Yes; Ent, Coref and Sic are dropped.
void finalize_misc(Sentence &s);
void finalize_misc(Document &doc);

}  // namespace treerewrite

#endif  // TREEREWRITE_POSTPROCESS_H_
