// Head/label scoring against gold trees, error-label rankings, genre
// breakdowns and non-projectivity statistics.

#ifndef TREEREWRITE_METRICS_H_
#define TREEREWRITE_METRICS_H_

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "treerewrite/conllu.h"

namespace treerewrite {

// Gold and predicted files disagree on tokenization.
class AlignmentError : public std::runtime_error {
 public:
  AlignmentError(std::string sent_id, int token_id, const std::string &what)
      : std::runtime_error(what), sent_id_(std::move(sent_id)), token_id_(token_id) {}
  const std::string &sent_id() const { return sent_id_; }
  int token_id() const { return token_id_; }  // 0 for sentence-level mismatches

 private:
  std::string sent_id_;
  int token_id_;
};

struct DocumentScore {
  std::string doc_id;
  std::string genre;
  long head_tokens = 0;  // gold relation is not punct
  long head_errors = 0;
  long label_tokens = 0;  // every token
  long label_errors = 0;

  bool operator==(const DocumentScore &) const = default;
};

struct EvalReport {
  std::vector<DocumentScore> documents;
  // Keyed by the gold base label.
  std::map<std::string, long> head_errors_by_label;
  std::map<std::string, long> label_errors_by_label;

  long head_tokens() const;
  long head_errors() const;
  long label_tokens() const;
  long label_errors() const;
  // Pooled over all tokens; 0 when nothing was scored.
  double head_error_rate() const;
  double label_error_rate() const;

  void merge(const EvalReport &other);
  bool operator==(const EvalReport &) const = default;
};

// Labels are compared on their base (text before the first ':'); heads are
// scored only where the gold relation is not punct.
EvalReport score(const Document &gold, const Document &pred);
// Documents are paired by position.
EvalReport score(const Corpus &gold, const Corpus &pred);

struct LabelCount {
  std::string label;
  long count = 0;

  bool operator==(const LabelCount &) const = default;
};

struct TopErrors {
  std::vector<LabelCount> head;
  std::vector<LabelCount> label;
};

// Descending count, ties alphabetical, labels with no errors left out.
std::vector<LabelCount> rank_labels(const std::map<std::string, long> &tallies,
                                    std::size_t k);
TopErrors top_error_labels(const EvalReport &report, std::size_t k);

struct NonprojOptions {
  // Root edges are never non-projective; this only controls whether they
  // count toward the denominator.
  bool count_root_edges = true;
};

struct NonprojCount {
  long nonprojective = 0;
  long edges = 0;

  double rate() const { return edges == 0 ? 0.0 : static_cast<double>(nonprojective) / edges; }
  NonprojCount &operator+=(const NonprojCount &other);
  bool operator==(const NonprojCount &) const = default;
};

// Punct edges are excluded from numerator and denominator.
NonprojCount count_nonprojective(const Sentence &s, const NonprojOptions &options = {});
NonprojCount count_nonprojective(const Document &doc, const NonprojOptions &options = {});
double nonproj_rate(const Document &doc, const NonprojOptions &options = {});

enum class ErrorMetric { kHead, kLabel };
const char *metric_name(ErrorMetric metric);

struct GenreRow {
  std::string genre;
  ErrorMetric metric = ErrorMetric::kHead;
  std::vector<double> document_rates;  // documents with no scored tokens skipped
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  double micro_mean = 0;  // pooled errors / pooled tokens
  long tokens = 0;
  long errors = 0;
};

// One row per genre (alphabetical), quartiles by linear interpolation.
std::vector<GenreRow> genre_breakdown(const EvalReport &report, ErrorMetric metric);

// Fraction as a percentage with two decimals, e.g. 0.0079 -> "0.79".
std::string format_percent(double fraction);

// Header plus one row per genre and metric; rates in percent.
std::string genre_table_tsv(const EvalReport &report);

// Summary, per-genre table and top-k labels.
std::string report_tsv(const EvalReport &report, std::size_t k);
std::string report_json(const EvalReport &report, std::size_t k);

}  // namespace treerewrite

#endif  // TREEREWRITE_METRICS_H_
