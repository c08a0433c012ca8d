#include "treerewrite/tree.h"

#include <algorithm>
#include <string>
#include <vector>

namespace treerewrite {

const char *violation_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kNoRoot: return "no-root";
    case ViolationKind::kMultipleRoots: return "multiple-roots";
    case ViolationKind::kCycle: return "cycle";
    case ViolationKind::kDanglingHead: return "dangling-head";
    case ViolationKind::kPunctHasChildren: return "punct-token-has-children";
    case ViolationKind::kPunctNonProjective: return "punct-edge-nonprojective";
  }
  return "unknown";
}

bool is_punct_relation(const Token &t) { return base_label(t.deprel) == "punct"; }

bool dominates(const Sentence &s, int ancestor, int id) {
  const int n = static_cast<int>(s.size());
  // A path longer than n tokens has revisited a node.
  for (int steps = 0; steps <= n; ++steps) {
    if (id == ancestor) return true;
    if (id <= 0 || id > n) return false;
    id = s.at(id).head;
  }
  return false;
}

std::vector<std::vector<int>> children_of(const Sentence &s) {
  std::vector<std::vector<int>> children(s.size() + 1);
  for (const Token &t : s.tokens) {
    if (t.head >= 0 && t.head <= static_cast<int>(s.size())) {
      children[static_cast<std::size_t>(t.head)].push_back(t.id);
    }
  }
  return children;
}

bool edge_is_projective(const Sentence &s, int dependent) {
  const int head = s.at(dependent).head;
  if (head == 0) return true;
  const int lo = std::min(head, dependent);
  const int hi = std::max(head, dependent);
  for (int k = lo + 1; k < hi; ++k) {
    if (!dominates(s, head, k)) return false;
  }
  return true;
}

std::vector<Violation> validate_tree(const Sentence &s) {
  std::vector<Violation> out;
  const int n = static_cast<int>(s.size());

  std::vector<int> roots;
  bool dangling = false;
  for (const Token &t : s.tokens) {
    if (t.head == 0) {
      roots.push_back(t.id);
    } else if (t.head < 0 || t.head > n) {
      dangling = true;
      out.push_back({ViolationKind::kDanglingHead, t.id,
                     "head " + std::to_string(t.head) + " is not a token"});
    }
  }
  if (roots.empty()) {
    out.push_back({ViolationKind::kNoRoot, 0, "no token attached to 0"});
  } else if (roots.size() > 1) {
    for (std::size_t i = 1; i < roots.size(); ++i) {
      out.push_back({ViolationKind::kMultipleRoots, roots[i],
                     "second root besides token " + std::to_string(roots[0])});
    }
  }

  // Tokens that never reach 0 sit on (or hang from) a cycle. Report one
  // violation per token on a cycle proper.
  bool cyclic = false;
  for (const Token &t : s.tokens) {
    if (dangling) break;
    if (!dominates(s, 0, t.id) && dominates(s, t.id, t.head)) {
      cyclic = true;
      out.push_back({ViolationKind::kCycle, t.id, "token lies on a head cycle"});
    }
  }
  if (dangling || cyclic) return out;

  const auto children = children_of(s);
  for (const Token &t : s.tokens) {
    if (!is_punct_relation(t)) continue;
    if (!children[static_cast<std::size_t>(t.id)].empty()) {
      out.push_back({ViolationKind::kPunctHasChildren, t.id,
                     std::to_string(children[static_cast<std::size_t>(t.id)].size()) +
                         " dependent(s)"});
    }
    if (!edge_is_projective(s, t.id)) {
      out.push_back({ViolationKind::kPunctNonProjective, t.id,
                     "edge from " + std::to_string(t.head) + " is non-projective"});
    }
  }
  return out;
}

}  // namespace treerewrite
