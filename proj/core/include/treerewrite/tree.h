// Head-function utilities and well-formedness checks over a Sentence.

#ifndef TREEREWRITE_TREE_H_
#define TREEREWRITE_TREE_H_

#include <string>
#include <vector>

#include "treerewrite/conllu.h"

namespace treerewrite {

enum class ViolationKind {
  kNoRoot,
  kMultipleRoots,
  kCycle,
  kDanglingHead,
  kPunctHasChildren,
  kPunctNonProjective,
};

struct Violation {
  ViolationKind kind;
  int token_id = 0;  // 0 when the violation concerns the whole sentence
  std::string message;
};

// Stable identifiers: "no-root", "multiple-roots", "cycle", "dangling-head",
// "punct-token-has-children", "punct-edge-nonprojective".
const char *violation_name(ViolationKind kind);

std::vector<Violation> validate_tree(const Sentence &s);

// True when the deprel's base label is "punct".
bool is_punct_relation(const Token &t);

// True when `ancestor` dominates `id` (reflexive). Tolerates cycles.
bool dominates(const Sentence &s, int ancestor, int id);

// Child id lists indexed by head id (index 0 holds root children).
std::vector<std::vector<int>> children_of(const Sentence &s);

// True when every token strictly between head and dependent is dominated by
// the head. Root edges (head 0) are projective by definition.
bool edge_is_projective(const Sentence &s, int dependent);

}  // namespace treerewrite

#endif  // TREEREWRITE_TREE_H_
