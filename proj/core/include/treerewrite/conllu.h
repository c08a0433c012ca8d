// CoNLL-U data model, reader and writer.
//
// A Document is an ordered list of sentences sharing a doc id. Token rows
// are modeled field by field; multiword-token ranges ("1-2") and empty
// nodes ("1.1") are kept as verbatim pass-through rows so that a
// parse/write cycle reproduces the input byte for byte.

#ifndef TREEREWRITE_CONLLU_H_
#define TREEREWRITE_CONLLU_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace treerewrite {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string &message);
  int line() const { return line_; }

 private:
  int line_;
};

class SerializationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ordered key/value bag for the MISC column. Entries without '=' are kept
// as bare keys (value == nullopt) so they survive a round trip.
class Misc {
 public:
  struct Entry {
    std::string key;
    std::optional<std::string> value;
    bool operator==(const Entry &) const = default;
  };

  static Misc parse(std::string_view column);
  std::string str() const;  // "_" when empty

  bool contains(std::string_view key) const;
  // Empty string when the key is absent or bare.
  std::string get(std::string_view key) const;
  // Overwrites in place, or appends. Returns true if anything changed.
  bool set(std::string_view key, std::string_view value);
  bool erase(std::string_view key);

  bool empty() const { return entries_.empty(); }
  const std::vector<Entry> &entries() const { return entries_; }
  bool operator==(const Misc &) const = default;

 private:
  std::vector<Entry> entries_;
};

struct Token {
  int id = 0;
  std::string form;
  std::string lemma;  // empty == "_"
  std::string upos;
  std::string xpos;
  std::string feats;
  int head = 0;
  std::string deprel;
  std::string deps;
  Misc misc;

  bool operator==(const Token &) const = default;
};

// Multiword-token or empty-node row. `position` is the number of regular
// tokens that precede the row in the file.
struct PassthroughRow {
  std::size_t position = 0;
  std::string line;
  bool operator==(const PassthroughRow &) const = default;
};

struct Sentence {
  std::string sent_id;
  std::vector<std::string> comments;  // verbatim, including the leading '#'
  std::vector<Token> tokens;
  std::vector<PassthroughRow> passthrough;

  std::size_t size() const { return tokens.size(); }
  // 1-based access; id must be in [1, size()].
  Token &at(int id) { return tokens.at(static_cast<std::size_t>(id - 1)); }
  const Token &at(int id) const {
    return tokens.at(static_cast<std::size_t>(id - 1));
  }

  bool operator==(const Sentence &) const = default;
};

struct Document {
  std::string doc_id;
  std::string genre;
  std::vector<Sentence> sentences;

  bool operator==(const Document &) const = default;
};

using Corpus = std::vector<Document>;

// Relation label with everything from the first ':' removed.
std::string_view base_label(std::string_view deprel);

// "GUM_<genre>_<name>" -> genre; anything else -> "unknown".
std::string genre_from_doc_id(std::string_view doc_id);

// Reads all sentences into a single document. The doc id comes from the
// first "# newdoc id = ..." comment, else `default_doc_id`. Non-fatal
// problems (duplicate sent_id) are appended to `warnings` when given.
Document parse_conllu(std::string_view input,
                      std::vector<std::string> *warnings = nullptr,
                      std::string_view default_doc_id = "doc");

// Like parse_conllu, but starts a new document at every "# newdoc" comment.
Corpus parse_corpus(std::string_view input,
                    std::vector<std::string> *warnings = nullptr,
                    std::string_view default_doc_id = "doc");

std::string write_conllu(const Document &doc);
std::string write_corpus(const Corpus &corpus);

std::string read_file(const std::string &path);
void write_file(const std::string &path, std::string_view content);

}  // namespace treerewrite

#endif  // TREEREWRITE_CONLLU_H_
