#include "treerewrite/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "treerewrite/tree.h"

namespace treerewrite {

namespace {

void check_alignment(const Sentence &gold, const Sentence &pred) {
  if (gold.size() != pred.size()) {
    throw AlignmentError(gold.sent_id, 0,
                         "sentence " + gold.sent_id + ": gold has " +
                             std::to_string(gold.size()) + " tokens, prediction has " +
                             std::to_string(pred.size()));
  }
  for (std::size_t i = 0; i < gold.tokens.size(); ++i) {
    const Token &g = gold.tokens[i];
    const Token &p = pred.tokens[i];
    if (g.form != p.form) {
      throw AlignmentError(gold.sent_id, g.id,
                           "sentence " + gold.sent_id + ", token " + std::to_string(g.id) +
                               ": gold form '" + g.form + "' vs predicted '" + p.form + "'");
    }
  }
}

template <typename Field>
long sum(const std::vector<DocumentScore> &docs, Field field) {
  long total = 0;
  for (const DocumentScore &d : docs) total += d.*field;
  return total;
}

double ratio(long errors, long tokens) {
  return tokens == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(tokens);
}

// Linear interpolation between closest ranks on a sorted sample.
double quantile(const std::vector<double> &sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

// Sorted descendant ids of every node reachable from the root.
std::vector<std::vector<int>> descendant_lists(const Sentence &s) {
  const auto children = children_of(s);
  std::vector<std::vector<int>> desc(children.size());
  // Post-order over an explicit stack so deep chains cannot overflow.
  std::vector<std::pair<int, bool>> stack = {{0, false}};
  while (!stack.empty()) {
    auto [node, expanded] = stack.back();
    stack.pop_back();
    const auto idx = static_cast<std::size_t>(node);
    if (!expanded) {
      stack.emplace_back(node, true);
      for (int c : children[idx]) stack.emplace_back(c, false);
      continue;
    }
    std::vector<int> &mine = desc[idx];
    if (node != 0) mine.push_back(node);
    for (int c : children[idx]) {
      const auto &theirs = desc[static_cast<std::size_t>(c)];
      mine.insert(mine.end(), theirs.begin(), theirs.end());
    }
    std::sort(mine.begin(), mine.end());
  }
  return desc;
}

}  // namespace

long EvalReport::head_tokens() const { return sum(documents, &DocumentScore::head_tokens); }
long EvalReport::head_errors() const { return sum(documents, &DocumentScore::head_errors); }
long EvalReport::label_tokens() const { return sum(documents, &DocumentScore::label_tokens); }
long EvalReport::label_errors() const { return sum(documents, &DocumentScore::label_errors); }
double EvalReport::head_error_rate() const { return ratio(head_errors(), head_tokens()); }
double EvalReport::label_error_rate() const { return ratio(label_errors(), label_tokens()); }

void EvalReport::merge(const EvalReport &other) {
  documents.insert(documents.end(), other.documents.begin(), other.documents.end());
  for (const auto &[label, n] : other.head_errors_by_label) head_errors_by_label[label] += n;
  for (const auto &[label, n] : other.label_errors_by_label) label_errors_by_label[label] += n;
}

EvalReport score(const Document &gold, const Document &pred) {
  if (gold.sentences.size() != pred.sentences.size()) {
    const std::size_t n = std::min(gold.sentences.size(), pred.sentences.size());
    const std::string where =
        n < gold.sentences.size() ? gold.sentences[n].sent_id : pred.sentences[n].sent_id;
    throw AlignmentError(where, 0,
                         "document " + gold.doc_id + ": gold has " +
                             std::to_string(gold.sentences.size()) +
                             " sentences, prediction has " +
                             std::to_string(pred.sentences.size()) +
                             "; first unmatched sentence " + where);
  }
  EvalReport report;
  DocumentScore doc{gold.doc_id, gold.genre, 0, 0, 0, 0};
  for (std::size_t si = 0; si < gold.sentences.size(); ++si) {
    const Sentence &gs = gold.sentences[si];
    const Sentence &ps = pred.sentences[si];
    check_alignment(gs, ps);
    for (std::size_t i = 0; i < gs.tokens.size(); ++i) {
      const Token &g = gs.tokens[i];
      const Token &p = ps.tokens[i];
      const std::string label(base_label(g.deprel));
      ++doc.label_tokens;
      if (label != base_label(p.deprel)) {
        ++doc.label_errors;
        ++report.label_errors_by_label[label];
      }
      if (label == "punct") continue;
      ++doc.head_tokens;
      if (g.head != p.head) {
        ++doc.head_errors;
        ++report.head_errors_by_label[label];
      }
    }
  }
  report.documents.push_back(std::move(doc));
  return report;
}

EvalReport score(const Corpus &gold, const Corpus &pred) {
  if (gold.size() != pred.size()) {
    throw AlignmentError("", 0,
                         "gold has " + std::to_string(gold.size()) +
                             " documents, prediction has " + std::to_string(pred.size()));
  }
  EvalReport report;
  for (std::size_t i = 0; i < gold.size(); ++i) report.merge(score(gold[i], pred[i]));
  return report;
}

std::vector<LabelCount> rank_labels(const std::map<std::string, long> &tallies,
                                    std::size_t k) {
  std::vector<LabelCount> ranked;
  for (const auto &[label, n] : tallies) {
    if (n > 0) ranked.push_back({label, n});
  }
  // Map order is alphabetical, so a stable sort on count keeps ties sorted.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const LabelCount &a, const LabelCount &b) { return a.count > b.count; });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

TopErrors top_error_labels(const EvalReport &report, std::size_t k) {
  return {rank_labels(report.head_errors_by_label, k),
          rank_labels(report.label_errors_by_label, k)};
}

NonprojCount &NonprojCount::operator+=(const NonprojCount &other) {
  nonprojective += other.nonprojective;
  edges += other.edges;
  return *this;
}

NonprojCount count_nonprojective(const Sentence &s, const NonprojOptions &options) {
  NonprojCount count;
  const auto desc = descendant_lists(s);
  for (const Token &t : s.tokens) {
    if (is_punct_relation(t)) continue;
    if (t.head == 0) {
      if (options.count_root_edges) ++count.edges;
      continue;
    }
    ++count.edges;
    const int lo = std::min(t.head, t.id);
    const int hi = std::max(t.head, t.id);
    const auto &d = desc[static_cast<std::size_t>(t.head)];
    // Projective iff the head dominates every position in [lo, hi].
    const auto first = std::lower_bound(d.begin(), d.end(), lo);
    const auto last = std::upper_bound(d.begin(), d.end(), hi);
    if (last - first != hi - lo + 1) ++count.nonprojective;
  }
  return count;
}

NonprojCount count_nonprojective(const Document &doc, const NonprojOptions &options) {
  NonprojCount count;
  for (const Sentence &s : doc.sentences) count += count_nonprojective(s, options);
  return count;
}

double nonproj_rate(const Document &doc, const NonprojOptions &options) {
  return count_nonprojective(doc, options).rate();
}

const char *metric_name(ErrorMetric metric) {
  return metric == ErrorMetric::kHead ? "head" : "label";
}

std::vector<GenreRow> genre_breakdown(const EvalReport &report, ErrorMetric metric) {
  std::map<std::string, GenreRow> rows;
  for (const DocumentScore &d : report.documents) {
    GenreRow &row = rows[d.genre];
    row.genre = d.genre;
    row.metric = metric;
    const long tokens = metric == ErrorMetric::kHead ? d.head_tokens : d.label_tokens;
    const long errors = metric == ErrorMetric::kHead ? d.head_errors : d.label_errors;
    row.tokens += tokens;
    row.errors += errors;
    if (tokens > 0) row.document_rates.push_back(ratio(errors, tokens));
  }
  std::vector<GenreRow> out;
  for (auto &[genre, row] : rows) {
    std::vector<double> sorted = row.document_rates;
    std::sort(sorted.begin(), sorted.end());
    row.min = quantile(sorted, 0.0);
    row.q1 = quantile(sorted, 0.25);
    row.median = quantile(sorted, 0.5);
    row.q3 = quantile(sorted, 0.75);
    row.max = quantile(sorted, 1.0);
    row.micro_mean = ratio(row.errors, row.tokens);
    out.push_back(std::move(row));
  }
  return out;
}

std::string format_percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", fraction * 100.0);
  return buf;
}

std::string genre_table_tsv(const EvalReport &report) {
  std::ostringstream out;
  out << "genre\tmetric\tdocuments\ttokens\terrors\tmin\tq1\tmedian\tq3\tmax\tmicro_mean\n";
  for (ErrorMetric metric : {ErrorMetric::kHead, ErrorMetric::kLabel}) {
    for (const GenreRow &row : genre_breakdown(report, metric)) {
      out << row.genre << '\t' << metric_name(metric) << '\t' << row.document_rates.size()
          << '\t' << row.tokens << '\t' << row.errors << '\t' << format_percent(row.min)
          << '\t' << format_percent(row.q1) << '\t' << format_percent(row.median) << '\t'
          << format_percent(row.q3) << '\t' << format_percent(row.max) << '\t'
          << format_percent(row.micro_mean) << '\n';
    }
  }
  return out.str();
}

std::string report_tsv(const EvalReport &report, std::size_t k) {
  std::ostringstream out;
  out << "metric\ttokens\terrors\terror_pct\n";
  out << "head\t" << report.head_tokens() << '\t' << report.head_errors() << '\t'
      << format_percent(report.head_error_rate()) << '\n';
  out << "label\t" << report.label_tokens() << '\t' << report.label_errors() << '\t'
      << format_percent(report.label_error_rate()) << '\n';
  out << '\n' << genre_table_tsv(report) << '\n';
  out << "metric\trank\tgold_label\terrors\n";
  const TopErrors top = top_error_labels(report, k);
  for (const auto &[name, list] : {std::pair{"head", &top.head}, std::pair{"label", &top.label}}) {
    for (std::size_t i = 0; i < list->size(); ++i) {
      out << name << '\t' << i + 1 << '\t' << (*list)[i].label << '\t' << (*list)[i].count
          << '\n';
    }
  }
  return out.str();
}

std::string report_json(const EvalReport &report, std::size_t k) {
  using nlohmann::json;
  auto labels = [](const std::vector<LabelCount> &list) {
    json arr = json::array();
    for (const LabelCount &l : list) arr.push_back({{"label", l.label}, {"errors", l.count}});
    return arr;
  };
  json j;
  j["head"] = {{"tokens", report.head_tokens()},
               {"errors", report.head_errors()},
               {"error_rate", report.head_error_rate()}};
  j["label"] = {{"tokens", report.label_tokens()},
                {"errors", report.label_errors()},
                {"error_rate", report.label_error_rate()}};
  json docs = json::array();
  for (const DocumentScore &d : report.documents) {
    docs.push_back({{"doc_id", d.doc_id},
                    {"genre", d.genre},
                    {"head_tokens", d.head_tokens},
                    {"head_errors", d.head_errors},
                    {"label_tokens", d.label_tokens},
                    {"label_errors", d.label_errors}});
  }
  j["documents"] = docs;
  json genres = json::array();
  for (ErrorMetric metric : {ErrorMetric::kHead, ErrorMetric::kLabel}) {
    for (const GenreRow &row : genre_breakdown(report, metric)) {
      genres.push_back({{"genre", row.genre},
                        {"metric", metric_name(metric)},
                        {"documents", row.document_rates.size()},
                        {"tokens", row.tokens},
                        {"errors", row.errors},
                        {"min", row.min},
                        {"q1", row.q1},
                        {"median", row.median},
                        {"q3", row.q3},
                        {"max", row.max},
                        {"micro_mean", row.micro_mean}});
    }
  }
  j["genres"] = genres;
  const TopErrors top = top_error_labels(report, k);
  j["top_errors"] = {{"head", labels(top.head)}, {"label", labels(top.label)}};
  return j.dump(2) + "\n";
}

}  // namespace treerewrite
