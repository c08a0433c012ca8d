#include "test_support.h"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace treerewrite::testing {

namespace {

const std::vector<std::string> &label_pool() {
  static const std::vector<std::string> kPool = {
      "nsubj", "obj", "obl", "obl:tmod", "nmod", "nmod:poss", "amod", "advmod",
      "det", "case", "conj", "cc", "acl:relcl", "compound", "flat", "xcomp"};
  return kPool;
}

std::vector<std::string> split(const std::string &line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  return out;
}

std::string strip_subtype(const std::string &label) {
  return label.substr(0, label.find(':'));
}

// Token rows (id, head, deprel) of every regular token, in file order.
std::vector<std::vector<std::string>> token_rows(const std::string &text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto cols = split(line, '\t');
    if (cols.size() != 10) continue;
    if (cols[0].find_first_of("-.") != std::string::npos) continue;
    rows.push_back({cols[0], cols[6], cols[7]});
  }
  return rows;
}

}  // namespace

Sentence make_sentence(const std::string &sent_id, const std::vector<Row> &rows) {
  Sentence s;
  s.sent_id = sent_id;
  s.comments.push_back("# sent_id = " + sent_id);
  int id = 0;
  for (const Row &r : rows) {
    Token t;
    t.id = ++id;
    t.form = r.form;
    t.lemma = r.form;
    t.xpos = r.xpos;
    t.head = r.head;
    t.deprel = r.deprel;
    s.tokens.push_back(std::move(t));
  }
  return s;
}

Document make_document(const std::string &doc_id, std::vector<Sentence> sentences) {
  Document d;
  d.doc_id = doc_id;
  d.genre = genre_from_doc_id(doc_id);
  d.sentences = std::move(sentences);
  if (!d.sentences.empty()) {
    d.sentences.front().comments.insert(d.sentences.front().comments.begin(),
                                        "# newdoc id = " + doc_id);
  }
  return d;
}

Sentence random_tree(std::mt19937 &rng, int n, const std::string &sent_id) {
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 1);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Row> rows(static_cast<std::size_t>(n));
  std::uniform_int_distribution<std::size_t> label(0, label_pool().size() - 1);
  for (int i = 0; i < n; ++i) {
    const int id = order[static_cast<std::size_t>(i)];
    Row &r = rows[static_cast<std::size_t>(id - 1)];
    r.form = "w" + std::to_string(id);
    if (i == 0) {
      r.head = 0;
      r.deprel = "root";
    } else {
      std::uniform_int_distribution<int> pick(0, i - 1);
      r.head = order[static_cast<std::size_t>(pick(rng))];
      r.deprel = label_pool()[label(rng)];
    }
  }
  return make_sentence(sent_id, rows);
}

Sentence inject_punct_leaves(std::mt19937 &rng, const Sentence &s, int count) {
  static const std::vector<std::string> kMarks = {",", ".", "\"", "(", ")", "-", ";", "!"};
  Sentence out = s;
  for (int c = 0; c < count; ++c) {
    const int n = static_cast<int>(out.tokens.size());
    std::uniform_int_distribution<int> at(1, n + 1);
    std::uniform_int_distribution<int> head(1, n);
    std::uniform_int_distribution<std::size_t> mark(0, kMarks.size() - 1);
    const int pos = at(rng);
    int h = head(rng);
    if (h >= pos) ++h;  // account for the shift below
    for (Token &t : out.tokens) {
      if (t.id >= pos) ++t.id;
      if (t.head >= pos) ++t.head;
    }
    Token p;
    p.id = pos;
    p.form = kMarks[mark(rng)];
    p.lemma = p.form;
    p.upos = "PUNCT";
    p.xpos = ".";
    p.head = h;
    p.deprel = "punct";
    out.tokens.insert(out.tokens.begin() + (pos - 1), p);
  }
  return out;
}

void relabel_some_punct(std::mt19937 &rng, Sentence &s, double p) {
  std::bernoulli_distribution flip(p);
  for (Token &t : s.tokens) {
    if (t.head != 0 && flip(rng)) t.deprel = "punct";
  }
}

NonprojOracle oracle_nonprojective(const Sentence &s, bool count_root_edges) {
  const int n = static_cast<int>(s.tokens.size());
  std::vector<int> head(static_cast<std::size_t>(n) + 1, 0);
  for (const Token &t : s.tokens) head[static_cast<std::size_t>(t.id)] = t.head;
  auto descends = [&](int k, int h) {
    for (int steps = 0; k != 0 && steps <= n; ++steps) {
      if (k == h) return true;
      k = head[static_cast<std::size_t>(k)];
    }
    return false;
  };
  NonprojOracle out;
  for (const Token &t : s.tokens) {
    if (strip_subtype(t.deprel) == "punct") continue;
    if (t.head == 0) {
      if (count_root_edges) ++out.edges;
      continue;
    }
    ++out.edges;
    bool crossing = false;
    for (int k = std::min(t.id, t.head) + 1; k < std::max(t.id, t.head); ++k) {
      if (!descends(k, t.head)) crossing = true;
    }
    if (crossing) ++out.nonprojective;
  }
  return out;
}

Recount brute_force_recount(const std::string &gold_text, const std::string &pred_text) {
  const auto gold = token_rows(gold_text);
  const auto pred = token_rows(pred_text);
  Recount r;
  for (std::size_t i = 0; i < gold.size() && i < pred.size(); ++i) {
    const std::string g_label = strip_subtype(gold[i][2]);
    ++r.label_tokens;
    if (g_label != strip_subtype(pred[i][2])) ++r.label_errors;
    if (g_label == "punct") continue;
    ++r.head_tokens;
    if (gold[i][1] != pred[i][1]) ++r.head_errors;
  }
  return r;
}

std::string fixture_path(const std::string &name) {
  return std::string(TREEREWRITE_FIXTURE_DIR) + "/" + name;
}

std::string shipped_rules_path() { return TREEREWRITE_RULES_FILE; }

}  // namespace treerewrite::testing
