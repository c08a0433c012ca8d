// Sidecar annotation layers and token flagging.
//
// The sidecar is a TSV table with the header
//
//   sent_id  start  end  layer  value
//
// where start/end are inclusive token ids and layer is one of entity, coref,
// sic or w. flag_tokens() turns the spans into MISC entries the conversion
// rules can match on:
//
//   entity  Ent=<type>       on the span head
//   coref   Coref=<chain>    on the span head, nominal heads only
//   sic     Sic=Yes          on every token of the span
//   w       SpaceAfter=No    on every token of the span but the last
//
// Ent, Coref and Sic are transient and removed by finalize_misc().

#ifndef TREEREWRITE_ENRICHMENT_H_
#define TREEREWRITE_ENRICHMENT_H_

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "treerewrite/conllu.h"
#include "treerewrite/log.h"

namespace treerewrite {

inline constexpr std::string_view kEntityKey = "Ent";
inline constexpr std::string_view kCorefKey = "Coref";
inline constexpr std::string_view kSicKey = "Sic";

class SidecarError : public std::runtime_error {
 public:
  SidecarError(int row, const std::string &message);
  int row() const { return row_; }

 private:
  int row_;
};

enum class Layer { kEntity, kCoref, kSic, kW };

const char *layer_name(Layer layer);

struct Span {
  std::string sent_id;
  int start = 0;
  int end = 0;  // inclusive
  Layer layer = Layer::kEntity;
  std::string value;
  int row = 0;  // sidecar row, for diagnostics

  int length() const { return end - start + 1; }
  bool operator==(const Span &) const = default;
};

class AnnotationLayers {
 public:
  // Validates and files the span under its sentence.
  void add(Span span);

  bool empty() const { return by_sentence_.empty(); }
  std::size_t size() const;

  // Spans of one sentence in input order (empty when none).
  const std::vector<Span> &spans_for(std::string_view sent_id) const;
  std::vector<std::string> sentence_ids() const;

  // The subset of spans whose sentence appears in `doc`.
  AnnotationLayers restrict_to(const Document &doc) const;

 private:
  std::map<std::string, std::vector<Span>, std::less<>> by_sentence_;
};

AnnotationLayers load_sidecar(std::string_view input);

// First token of the span, in linear order, that is the sentence root or is
// attached by a non-punct relation to a head outside the span. Falls back to
// span.start (and logs) when no token qualifies.
int find_span_head(const Sentence &s, const Span &span, ConversionLog *log = nullptr);

// Throws SidecarError when a span's sentence is not in `doc` or a span runs
// past the end of its sentence.
void flag_tokens(Document &doc, const AnnotationLayers &layers,
                 ConversionLog *log = nullptr);

}  // namespace treerewrite

#endif  // TREEREWRITE_ENRICHMENT_H_
