// Randomized checks against the brute-force oracles in test_support.

#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

#include "test_support.h"
#include "treerewrite/conllu.h"
#include "treerewrite/metrics.h"
#include "treerewrite/postprocess.h"
#include "treerewrite/tree.h"

namespace treerewrite {
namespace {

constexpr int kTrials = 1000;

const std::vector<std::string> kPerturbLabels = {
    "nsubj", "obj", "obl", "obl:tmod", "obl:npmod", "nmod", "nmod:poss", "flat",
    "compound", "amod", "punct", "dep", "conj", "cc"};

Document random_document(std::mt19937 &rng, int index) {
  std::uniform_int_distribution<int> sentences(1, 5);
  std::uniform_int_distribution<int> length(1, 30);
  std::vector<Sentence> out;
  const int count = sentences(rng);
  for (int i = 0; i < count; ++i) {
    out.push_back(
        testing::random_tree(rng, length(rng), "d" + std::to_string(index) + "s" + std::to_string(i)));
  }
  return testing::make_document("GUM_genre" + std::to_string(index % 4) + "_doc", std::move(out));
}

void perturb(std::mt19937 &rng, Document &doc) {
  std::bernoulli_distribution flip(0.15);
  std::uniform_int_distribution<std::size_t> label(0, kPerturbLabels.size() - 1);
  for (Sentence &s : doc.sentences) {
    std::uniform_int_distribution<int> head(0, static_cast<int>(s.size()));
    for (Token &t : s.tokens) {
      if (flip(rng)) t.head = head(rng);
      if (flip(rng)) t.deprel = kPerturbLabels[label(rng)];
    }
  }
}

TEST(ScoreProperty, MatchesBruteForceRecount) {
  std::mt19937 rng(20180801);
  for (int trial = 0; trial < kTrials; ++trial) {
    Document gold = random_document(rng, trial);
    testing::relabel_some_punct(rng, gold.sentences.front(), 0.1);
    Document pred = gold;
    perturb(rng, pred);
    const EvalReport r = score(gold, pred);
    const testing::Recount expected =
        testing::brute_force_recount(write_conllu(gold), write_conllu(pred));
    ASSERT_EQ(r.head_tokens(), expected.head_tokens) << "trial " << trial;
    ASSERT_EQ(r.head_errors(), expected.head_errors) << "trial " << trial;
    ASSERT_EQ(r.label_tokens(), expected.label_tokens) << "trial " << trial;
    ASSERT_EQ(r.label_errors(), expected.label_errors) << "trial " << trial;

    long by_label = 0;
    for (const auto &[label, count] : r.head_errors_by_label) by_label += count;
    ASSERT_EQ(by_label, r.head_errors());
  }
}

TEST(NonprojProperty, MatchesOracle) {
  std::mt19937 rng(4242);
  std::uniform_int_distribution<int> length(1, 30);
  for (int trial = 0; trial < kTrials; ++trial) {
    Sentence s = testing::random_tree(rng, length(rng));
    if (trial % 2 == 1) testing::relabel_some_punct(rng, s, 0.2);
    for (bool root_edges : {true, false}) {
      const auto oracle = testing::oracle_nonprojective(s, root_edges);
      const NonprojCount got = count_nonprojective(s, NonprojOptions{root_edges});
      ASSERT_EQ(got.nonprojective, oracle.nonprojective) << "trial " << trial;
      ASSERT_EQ(got.edges, oracle.edges) << "trial " << trial;
    }
  }
}

TEST(NonprojProperty, PunctEdgesDropOut) {
  // Relabeling an edge as punct removes exactly that edge from both counts.
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> length(2, 30);
  for (int trial = 0; trial < kTrials; ++trial) {
    Sentence s = testing::random_tree(rng, length(rng));
    const NonprojCount before = count_nonprojective(s);
    std::uniform_int_distribution<int> pick(1, static_cast<int>(s.size()));
    const int id = pick(rng);
    if (s.at(id).head == 0) continue;
    const bool was_nonproj = !edge_is_projective(s, id);
    s.at(id).deprel = "punct";
    const NonprojCount after = count_nonprojective(s);
    ASSERT_EQ(after.edges, before.edges - 1);
    ASSERT_EQ(after.nonprojective, before.nonprojective - (was_nonproj ? 1 : 0));
  }
}

TEST(PunctProperty, PostconditionsOnRandomTrees) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> length(1, 25);
  std::uniform_int_distribution<int> marks(1, 6);
  for (int trial = 0; trial < kTrials; ++trial) {
    Sentence s = testing::inject_punct_leaves(rng, testing::random_tree(rng, length(rng)),
                                              marks(rng));
    const Sentence before = s;
    attach_punctuation(s);
    const auto violations = validate_tree(s);
    ASSERT_TRUE(violations.empty())
        << "trial " << trial << ": " << violations.front().message << "\n"
        << write_conllu(testing::make_document("d", {s}));
    for (const Token &t : before.tokens) {
      if (base_label(t.deprel) == "punct") continue;
      ASSERT_EQ(s.at(t.id).head, t.head) << "trial " << trial;
      ASSERT_EQ(s.at(t.id).deprel, t.deprel) << "trial " << trial;
    }
    for (const Token &t : s.tokens) {
      if (t.head == 0) continue;
      ASSERT_NE(base_label(s.at(t.head).deprel), "punct") << "trial " << trial;
    }
  }
}

TEST(PunctProperty, Idempotent) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> length(1, 25);
  for (int trial = 0; trial < kTrials; ++trial) {
    Sentence s = testing::inject_punct_leaves(rng, testing::random_tree(rng, length(rng)), 3);
    attach_punctuation(s);
    const Sentence once = s;
    attach_punctuation(s);
    ASSERT_EQ(s, once) << "trial " << trial;
  }
}

}  // namespace
}  // namespace treerewrite
