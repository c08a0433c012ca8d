#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>
#include <string>

#include "treerewrite/conllu.h"
#include "treerewrite/metrics.h"
#include "treerewrite/postprocess.h"
#include "treerewrite/sd2ud.h"

namespace {

using namespace treerewrite;

// The fixture corpus repeated `copies` times.
std::string corpus_text(const char *path, int copies) {
  const std::string one = read_file(path);
  std::string out;
  out.reserve(one.size() * static_cast<std::size_t>(copies));
  for (int i = 0; i < copies; ++i) out += one;
  return out;
}

Sentence random_tree(std::mt19937 &rng, int n) {
  Sentence s;
  s.sent_id = "b";
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i + 1;
  std::shuffle(order.begin(), order.end(), rng);
  s.tokens.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Token &t = s.tokens[static_cast<std::size_t>(order[static_cast<std::size_t>(i)] - 1)];
    t.id = order[static_cast<std::size_t>(i)];
    t.form = "w";
    if (i == 0) {
      t.head = 0;
      t.deprel = "root";
    } else {
      std::uniform_int_distribution<int> pick(0, i - 1);
      t.head = order[static_cast<std::size_t>(pick(rng))];
      t.deprel = "dep";
    }
  }
  return s;
}

void BM_Parse(benchmark::State &state) {
  const std::string text = corpus_text(TREEREWRITE_BENCH_CORPUS, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(parse_corpus(text));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) *
                          static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_Parse)->Arg(1)->Arg(32);

void BM_Convert(benchmark::State &state) {
  const Corpus corpus = parse_corpus(corpus_text(TREEREWRITE_BENCH_CORPUS, 8));
  const Converter converter = Converter::from_profile(
      ConversionProfile{ConversionMode::kPureSd, TREEREWRITE_BENCH_RULES, false});
  for (auto _ : state) {
    Corpus copy = corpus;
    for (Document &doc : copy) {
      ConversionLog log;
      for (Sentence &s : doc.sentences) {
        converter.convert(s, log);
        attach_punctuation(s);
      }
    }
    benchmark::DoNotOptimize(copy);
  }
}
BENCHMARK(BM_Convert);

void BM_Nonprojective(benchmark::State &state) {
  std::mt19937 rng(1);
  std::vector<Sentence> trees;
  for (int i = 0; i < 100; ++i) trees.push_back(random_tree(rng, static_cast<int>(state.range(0))));
  for (auto _ : state) {
    long total = 0;
    for (const Sentence &s : trees) total += count_nonprojective(s).nonprojective;
    benchmark::DoNotOptimize(total);
  }
}
BENCHMARK(BM_Nonprojective)->Arg(10)->Arg(30)->Arg(100);

void BM_Score(benchmark::State &state) {
  const Corpus gold = parse_corpus(corpus_text(TREEREWRITE_BENCH_GOLD, 32));
  const Corpus pred = gold;
  for (auto _ : state) benchmark::DoNotOptimize(score(gold, pred));
}
BENCHMARK(BM_Score);

}  // namespace

BENCHMARK_MAIN();
