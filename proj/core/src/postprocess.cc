#include "treerewrite/postprocess.h"

#include <algorithm>
#include <set>

#include "treerewrite/enrichment.h"
#include "treerewrite/tree.h"

namespace treerewrite {

namespace {

bool is_terminator(std::string_view form) {
  static const std::set<std::string, std::less<>> kWhole = {"…", "。", "⋯"};
  if (kWhole.count(form) != 0) return true;
  if (form.empty()) return false;
  return std::all_of(form.begin(), form.end(),
                     [](char c) { return c == '.' || c == '!' || c == '?'; });
}

// Attachment state for one sentence: which tokens are punctuation being
// placed, and the fixed tree over everything else.
class PunctPlacer {
 public:
  PunctPlacer(Sentence &s, const PunctPairTable &pairs, ConversionLog *log)
      : s_(s), pairs_(pairs), log_(log), n_(static_cast<int>(s.size())),
        is_punct_(static_cast<std::size_t>(n_) + 1, false) {}

  int run() {
    for (const Violation &v : validate_tree(s_)) {
      if (v.kind == ViolationKind::kPunctHasChildren ||
          v.kind == ViolationKind::kPunctNonProjective) {
        continue;
      }
      if (log_ != nullptr) {
        log_->add(0, s_.sent_id, 0, LogEvent::kWarning,
                  std::string("punctuation left in place: ") + violation_name(v.kind));
      }
      return 0;
    }
    collect();
    if (punct_.empty()) return 0;
    rehome_children();
    compute_spans();

    std::vector<int> target(static_cast<std::size_t>(n_) + 1, 0);
    place_pairs(target);
    place_terminators(target);
    for (int p : punct_) {
      if (target[static_cast<std::size_t>(p)] == 0) {
        target[static_cast<std::size_t>(p)] = neighbour_head(p);
      }
    }

    int changed = 0;
    for (int p : punct_) {
      Token &t = s_.at(p);
      const int head = target[static_cast<std::size_t>(p)];
      if (t.head != head || t.deprel != "punct") ++changed;
      t.head = head;
      t.deprel = "punct";
    }
    changed += settle();
    return changed;
  }

 private:
  bool skeleton(int id) const { return !is_punct_[static_cast<std::size_t>(id)]; }

  void collect() {
    for (const Token &t : s_.tokens) {
      if (t.head == 0) {
        root_ = t.id;
        continue;
      }
      if (!is_punct_relation(t) && t.upos != "PUNCT") continue;
      if (!is_punct_relation(t) && log_ != nullptr) {
        log_->add(0, s_.sent_id, 0, LogEvent::kNotice,
                  "token " + std::to_string(t.id) + " is PUNCT but attached as '" +
                      t.deprel + "'; relabeled punct");
      }
      is_punct_[static_cast<std::size_t>(t.id)] = true;
      punct_.push_back(t.id);
    }
  }

  // Dependents of punctuation move to the nearest non-punct ancestor.
  void rehome_children() {
    for (Token &t : s_.tokens) {
      if (!skeleton(t.id) || t.head == 0 || skeleton(t.head)) continue;
      int h = t.head;
      for (int guard = 0; h != 0 && !skeleton(h) && guard <= n_; ++guard) {
        h = s_.at(h).head;
      }
      if (h == 0 || !skeleton(h)) h = root_;
      if (log_ != nullptr) {
        log_->add(0, s_.sent_id, 1, LogEvent::kNotice,
                  "token " + std::to_string(t.id) + " moved from punct head " +
                      std::to_string(t.head) + " to " + std::to_string(h));
      }
      t.head = h;
    }
  }

  // Leftmost and rightmost skeleton descendant of each skeleton node.
  void compute_spans() {
    min_desc_.assign(static_cast<std::size_t>(n_) + 1, 0);
    max_desc_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (int id = 1; id <= n_; ++id) {
      if (!skeleton(id)) continue;
      min_desc_[static_cast<std::size_t>(id)] = id;
      max_desc_[static_cast<std::size_t>(id)] = id;
    }
    for (int id = 1; id <= n_; ++id) {
      if (!skeleton(id)) continue;
      int h = s_.at(id).head;
      for (int guard = 0; h != 0 && guard <= n_; ++guard) {
        auto &lo = min_desc_[static_cast<std::size_t>(h)];
        auto &hi = max_desc_[static_cast<std::size_t>(h)];
        lo = std::min(lo, id);
        hi = std::max(hi, id);
        h = s_.at(h).head;
      }
    }
  }

  bool skeleton_dominates(int ancestor, int id) const { return dominates(s_, ancestor, id); }

  // Projective with respect to the non-punct tokens between head and p.
  bool skeleton_projective(int head, int p) const {
    const int lo = std::min(head, p);
    const int hi = std::max(head, p);
    for (int k = lo + 1; k < hi; ++k) {
      if (skeleton(k) && !skeleton_dominates(head, k)) return false;
    }
    return true;
  }

  int lowest_common_ancestor(const std::vector<int> &ids) const {
    std::vector<int> path;
    for (int h = ids.front(); h != 0; h = s_.at(h).head) path.push_back(h);
    std::size_t best = 0;
    for (int id : ids) {
      while (best < path.size() && !skeleton_dominates(path[best], id)) ++best;
    }
    return best < path.size() ? path[best] : root_;
  }

  void place_pairs(std::vector<int> &target) {
    std::vector<int> stack;
    for (int p : punct_) {
      const std::string &form = s_.at(p).form;
      auto opener = pairs_.opening_for(form);
      if (opener && !stack.empty()) {
        auto it = std::find_if(stack.rbegin(), stack.rend(), [&](int o) {
          return s_.at(o).form == *opener;
        });
        if (it != stack.rend()) {
          const int open = *it;
          stack.erase(std::next(it).base(), stack.end());
          attach_pair(open, p, target);
          continue;
        }
      }
      if (pairs_.closing_for(form)) stack.push_back(p);
    }
  }

  void attach_pair(int open, int close, std::vector<int> &target) {
    std::vector<int> enclosed;
    for (int k = open + 1; k < close; ++k) {
      if (skeleton(k)) enclosed.push_back(k);
    }
    if (enclosed.empty()) return;
    const int head = lowest_common_ancestor(enclosed);
    if (!skeleton_projective(head, open) || !skeleton_projective(head, close)) return;
    target[static_cast<std::size_t>(open)] = head;
    target[static_cast<std::size_t>(close)] = head;
    pairs_placed_.push_back({open, close, head});
  }

  void place_terminators(std::vector<int> &target) {
    for (int id = n_; id >= 1 && !skeleton(id); --id) {
      if (target[static_cast<std::size_t>(id)] == 0 && is_terminator(s_.at(id).form)) {
        target[static_cast<std::size_t>(id)] = enclosing_pair_head(id);
      }
    }
  }

  // Head of the innermost attached pair around id, else the root.
  int enclosing_pair_head(int id) const {
    int best = root_;
    int width = n_ + 1;
    for (const PlacedPair &p : pairs_placed_) {
      if (p.open < id && id < p.close && p.close - p.open < width) {
        best = p.head;
        width = p.close - p.open;
      }
    }
    return best;
  }

  // Function words do not take punctuation; their head does.
  int content_word(int id) const {
    static const std::set<std::string, std::less<>> kFunction = {
        "aux", "case", "cc", "clf", "cop", "det", "mark"};
    for (int guard = 0; id != 0 && guard <= n_; ++guard) {
      const Token &t = s_.at(id);
      if (t.head == 0 || kFunction.count(base_label(t.deprel)) == 0) break;
      id = t.head;
    }
    return id;
  }

  int neighbour_head(int p) const {
    int left = 0;
    for (int k = p - 1; k >= 1; --k) {
      if (skeleton(k)) {
        left = k;
        break;
      }
    }
    int right = 0;
    for (int k = p + 1; k <= n_; ++k) {
      if (skeleton(k)) {
        right = k;
        break;
      }
    }
    // Climb while the parent stays on the same side and the subtree does
    // not reach across the mark.
    if (left != 0) {
      for (int h = s_.at(left).head;
           h != 0 && h < p && max_desc_[static_cast<std::size_t>(left)] < p;
           h = s_.at(left).head) {
        left = h;
      }
    }
    if (right != 0) {
      for (int h = s_.at(right).head;
           h != 0 && h > p && min_desc_[static_cast<std::size_t>(right)] > p;
           h = s_.at(right).head) {
        right = h;
      }
    }

    left = content_word(left);
    right = content_word(right);

    std::vector<int> order;
    if (left == 0) {
      order = {right};
    } else if (right == 0) {
      order = {left};
    } else if (skeleton_dominates(left, right)) {
      order = {right, left};
    } else {
      order = {left, right};
    }
    for (int candidate : order) {
      if (skeleton_projective(candidate, p)) return candidate;
    }
    return root_;
  }

  // Punctuation between a head and its punct dependent may have landed
  // outside that head's subtree. Such edges fall back to the root, which is
  // always projective; repeat until nothing moves.
  int settle() {
    int moved = 0;
    bool again = true;
    while (again) {
      again = false;
      for (int p : punct_) {
        Token &t = s_.at(p);
        if (t.head == root_ || edge_is_projective(s_, p)) continue;
        t.head = root_;
        ++moved;
        again = true;
      }
    }
    if (moved > 0 && log_ != nullptr) {
      log_->add(0, s_.sent_id, moved, LogEvent::kFallback,
                "punctuation attached to root to keep edges projective");
    }
    return moved;
  }

  Sentence &s_;
  const PunctPairTable &pairs_;
  ConversionLog *log_;
  int n_;
  int root_ = 0;
  std::vector<bool> is_punct_;
  std::vector<int> punct_;
  std::vector<int> min_desc_;
  std::vector<int> max_desc_;
  struct PlacedPair {
    int open;
    int close;
    int head;
  };
  std::vector<PlacedPair> pairs_placed_;
};

}  // namespace

const PunctPairTable &PunctPairTable::defaults() {
  static const PunctPairTable kDefaults = [] {
    PunctPairTable t;
    t.add("\"", "\"");
    t.add("'", "'");
    t.add("``", "''");
    t.add("`", "'");
    t.add("(", ")");
    t.add("[", "]");
    t.add("{", "}");
    t.add("-LRB-", "-RRB-");
    t.add("-LSB-", "-RSB-");
    t.add("-LCB-", "-RCB-");
    t.add("“", "”");
    t.add("‘", "’");
    t.add("„", "“");
    t.add("‚", "‘");
    t.add("«", "»");
    t.add("‹", "›");
    t.add("「", "」");
    return t;
  }();
  return kDefaults;
}

PunctPairTable PunctPairTable::parse(std::string_view text) {
  PunctPairTable table;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0 || tab + 1 == line.size()) {
      throw std::runtime_error("punctuation pair table: malformed line '" +
                               std::string(line) + "'");
    }
    table.add(std::string(line.substr(0, tab)), std::string(line.substr(tab + 1)));
  }
  return table;
}

void PunctPairTable::add(std::string open, std::string close) {
  pairs_.emplace_back(std::move(open), std::move(close));
}

std::optional<std::string> PunctPairTable::closing_for(std::string_view open) const {
  for (const auto &[o, c] : pairs_) {
    if (o == open) return c;
  }
  return std::nullopt;
}

std::optional<std::string> PunctPairTable::opening_for(std::string_view close) const {
  for (const auto &[o, c] : pairs_) {
    if (c == close) return o;
  }
  return std::nullopt;
}

int attach_punctuation(Sentence &s, const PunctPairTable &pairs, ConversionLog *log) {
  const int changed = PunctPlacer(s, pairs, log).run();
  if (log != nullptr && changed > 0) {
    log->add(0, s.sent_id, changed, LogEvent::kApplied, "punct");
  }
  return changed;
}

void finalize_misc(Sentence &s) {
  for (Token &t : s.tokens) {
    if (t.misc.get(kSicKey) == "Yes") t.misc.set("Typo", "Yes");
    t.misc.erase(kEntityKey);
    t.misc.erase(kCorefKey);
    t.misc.erase(kSicKey);
  }
}

void finalize_misc(Document &doc) {
  for (Sentence &s : doc.sentences) finalize_misc(s);
}

}  // namespace treerewrite
