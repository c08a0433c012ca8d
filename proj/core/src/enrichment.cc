#include "treerewrite/enrichment.h"

#include <algorithm>
#include <charconv>
#include <optional>
#include <set>

#include "treerewrite/tree.h"

namespace treerewrite {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      parts.push_back(line.substr(start));
      return parts;
    }
    parts.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::optional<int> parse_positive(std::string_view s) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value < 1) return std::nullopt;
  return value;
}

std::optional<Layer> parse_layer(std::string_view name) {
  if (name == "entity") return Layer::kEntity;
  if (name == "coref") return Layer::kCoref;
  if (name == "sic") return Layer::kSic;
  if (name == "w") return Layer::kW;
  return std::nullopt;
}

std::string describe(const Span &span) {
  return span.sent_id + " " + std::to_string(span.start) + "-" +
         std::to_string(span.end) + " " + layer_name(span.layer) +
         (span.value.empty() ? "" : " " + span.value);
}

bool is_nominal(const Token &t) {
  static const std::set<std::string, std::less<>> kUpos = {"NOUN", "PROPN", "PRON",
                                                           "NUM"};
  static const std::set<std::string, std::less<>> kXpos = {"CD", "DT", "EX", "WDT"};
  if (kUpos.count(t.upos) != 0 || kXpos.count(t.xpos) != 0) return true;
  auto starts = [&t](std::string_view p) { return t.xpos.rfind(p, 0) == 0; };
  return starts("NN") || starts("PRP") || starts("WP");
}

// Among spans sharing a head token, the shortest one wins; input order breaks
// ties. Returns head id -> winning span, logging disagreements.
std::map<int, const Span *> heads_by_token(const Sentence &s,
                                           const std::vector<const Span *> &spans,
                                           ConversionLog *log) {
  std::map<int, const Span *> winners;
  for (const Span *span : spans) {
    const int head = find_span_head(s, *span, log);
    auto [it, inserted] = winners.try_emplace(head, span);
    if (inserted) continue;
    const Span *current = it->second;
    if (current->value != span->value && log != nullptr) {
      log->add(0, s.sent_id, 0, LogEvent::kWarning,
               std::string(layer_name(span->layer)) + " spans '" + describe(*current) +
                   "' and '" + describe(*span) + "' share head token " +
                   std::to_string(head) + "; innermost span wins");
    }
    if (span->length() < current->length()) it->second = span;
  }
  return winners;
}

}  // namespace

SidecarError::SidecarError(int row, const std::string &message)
    : std::runtime_error("sidecar row " + std::to_string(row) + ": " + message),
      row_(row) {}

const char *layer_name(Layer layer) {
  switch (layer) {
    case Layer::kEntity: return "entity";
    case Layer::kCoref: return "coref";
    case Layer::kSic: return "sic";
    case Layer::kW: return "w";
  }
  return "unknown";
}

void AnnotationLayers::add(Span span) {
  if (span.start < 1 || span.start > span.end) {
    throw SidecarError(span.row, "start " + std::to_string(span.start) +
                                     " > end " + std::to_string(span.end));
  }
  if ((span.layer == Layer::kEntity || span.layer == Layer::kCoref) &&
      span.value.empty()) {
    throw SidecarError(span.row, std::string(layer_name(span.layer)) +
                                     " span needs a value");
  }
  std::vector<Span> &spans = by_sentence_[span.sent_id];
  if (span.layer == Layer::kEntity) {
    for (const Span &other : spans) {
      if (other.layer == Layer::kEntity && other.start == span.start &&
          other.end == span.end && other.value != span.value) {
        throw SidecarError(span.row, "entity span conflicts with row " +
                                         std::to_string(other.row) + " ('" +
                                         other.value + "' vs '" + span.value + "')");
      }
    }
  }
  spans.push_back(std::move(span));
}

std::size_t AnnotationLayers::size() const {
  std::size_t n = 0;
  for (const auto &[id, spans] : by_sentence_) n += spans.size();
  return n;
}

const std::vector<Span> &AnnotationLayers::spans_for(std::string_view sent_id) const {
  static const std::vector<Span> kNone;
  auto it = by_sentence_.find(sent_id);
  return it == by_sentence_.end() ? kNone : it->second;
}

std::vector<std::string> AnnotationLayers::sentence_ids() const {
  std::vector<std::string> ids;
  for (const auto &[id, spans] : by_sentence_) ids.push_back(id);
  return ids;
}

AnnotationLayers AnnotationLayers::restrict_to(const Document &doc) const {
  AnnotationLayers subset;
  for (const Sentence &s : doc.sentences) {
    auto it = by_sentence_.find(s.sent_id);
    if (it != by_sentence_.end()) subset.by_sentence_[s.sent_id] = it->second;
  }
  return subset;
}

AnnotationLayers load_sidecar(std::string_view input) {
  AnnotationLayers layers;
  bool header_seen = false;
  int row = 0;
  std::size_t start = 0;
  while (start < input.size()) {
    std::size_t end = input.find('\n', start);
    if (end == std::string_view::npos) end = input.size();
    std::string_view line = input.substr(start, end - start);
    start = end + 1;
    ++row;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string_view> cols = split_tabs(line);
    if (!header_seen) {
      const std::vector<std::string_view> expected = {"sent_id", "start", "end",
                                                      "layer", "value"};
      if (cols != expected) {
        throw SidecarError(row, "expected header 'sent_id\\tstart\\tend\\tlayer\\tvalue'");
      }
      header_seen = true;
      continue;
    }
    if (cols.size() != 4 && cols.size() != 5) {
      throw SidecarError(row, "expected 5 columns, found " + std::to_string(cols.size()));
    }
    auto first = parse_positive(cols[1]);
    auto last = parse_positive(cols[2]);
    if (!first || !last) throw SidecarError(row, "start/end must be positive integers");
    auto layer = parse_layer(cols[3]);
    if (!layer) throw SidecarError(row, "unknown layer '" + std::string(cols[3]) + "'");
    std::string value = cols.size() == 5 ? std::string(cols[4]) : std::string();
    if (value == "_") value.clear();
    layers.add(Span{std::string(cols[0]), *first, *last, *layer, std::move(value), row});
  }
  if (!header_seen && !input.empty()) {
    throw SidecarError(1, "missing header");
  }
  return layers;
}

int find_span_head(const Sentence &s, const Span &span, ConversionLog *log) {
  const int last = std::min(span.end, static_cast<int>(s.size()));
  std::vector<int> heads;
  for (int id = span.start; id <= last; ++id) {
    const Token &t = s.at(id);
    const bool outside = t.head == 0 || t.head < span.start || t.head > span.end;
    if (outside && (t.head == 0 || !is_punct_relation(t))) heads.push_back(id);
  }
  if (!heads.empty()) {
    if (heads.size() > 1 && log != nullptr) {
      log->add(0, s.sent_id, 0, LogEvent::kWarning,
               "span " + describe(span) + " has " + std::to_string(heads.size()) +
                   " externally governed tokens; using " + std::to_string(heads.front()));
    }
    return heads.front();
  }
  if (log != nullptr) {
    log->add(0, s.sent_id, 0, LogEvent::kFallback,
             "no externally governed token in span " + describe(span) +
                 "; using first token");
  }
  return span.start;
}

void flag_tokens(Document &doc, const AnnotationLayers &layers, ConversionLog *log) {
  std::set<std::string, std::less<>> known;
  for (const Sentence &s : doc.sentences) known.insert(s.sent_id);
  for (const std::string &id : layers.sentence_ids()) {
    if (known.count(id) != 0) continue;
    std::string listing;
    for (const Span &span : layers.spans_for(id)) {
      listing += "\n  row " + std::to_string(span.row) + ": " + describe(span);
    }
    throw SidecarError(layers.spans_for(id).front().row,
                       "unknown sent_id '" + id + "'" + listing);
  }

  for (Sentence &s : doc.sentences) {
    const std::vector<Span> &spans = layers.spans_for(s.sent_id);
    if (spans.empty()) continue;
    std::vector<const Span *> entities;
    std::vector<const Span *> corefs;
    for (const Span &span : spans) {
      if (span.end > static_cast<int>(s.size())) {
        throw SidecarError(span.row, "span " + describe(span) + " ends past token " +
                                         std::to_string(s.size()));
      }
      switch (span.layer) {
        case Layer::kEntity: entities.push_back(&span); break;
        case Layer::kCoref: corefs.push_back(&span); break;
        case Layer::kSic:
          for (int id = span.start; id <= span.end; ++id) s.at(id).misc.set(kSicKey, "Yes");
          break;
        case Layer::kW:
          for (int id = span.start; id < span.end; ++id) {
            s.at(id).misc.set("SpaceAfter", "No");
          }
          break;
      }
    }
    for (const auto &[head, span] : heads_by_token(s, entities, log)) {
      s.at(head).misc.set(kEntityKey, span->value);
    }
    for (const auto &[head, span] : heads_by_token(s, corefs, log)) {
      if (!is_nominal(s.at(head))) {
        if (log != nullptr) {
          log->add(0, s.sent_id, 0, LogEvent::kNotice,
                   "coref span " + describe(*span) + " has non-nominal head " +
                       std::to_string(head) + "; not flagged");
        }
        continue;
      }
      s.at(head).misc.set(kCorefKey, span->value);
    }
  }
}

}  // namespace treerewrite
