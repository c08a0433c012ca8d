#include "treerewrite/conllu.h"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace treerewrite {

namespace {

constexpr int kColumns = 10;

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<int> parse_int(std::string_view s) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::string optional_column(std::string_view s) {
  return s == "_" ? std::string() : std::string(s);
}

std::string_view column_or_blank(const std::string &s) {
  return s.empty() ? std::string_view("_") : std::string_view(s);
}

// "# key = value" -> value, when the comment carries `key`.
std::optional<std::string> comment_value(std::string_view comment,
                                          std::string_view key) {
  std::string_view body = trim(comment.substr(1));
  if (body.substr(0, key.size()) != key) return std::nullopt;
  body.remove_prefix(key.size());
  if (!body.empty() && body.front() != ' ' && body.front() != '=' &&
      body.front() != '\t') {
    return std::nullopt;  // e.g. "sent_idx"
  }
  body = trim(body);
  if (!body.empty() && body.front() == '=') body = trim(body.substr(1));
  return std::string(body);
}

struct RawSentence {
  Sentence sentence;
  bool starts_document = false;
  std::string newdoc_id;
};

std::string normalize_newlines(std::string_view input) {
  std::string text;
  text.reserve(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (input[i] == '\r' && i + 1 < input.size() && input[i + 1] == '\n') {
      continue;
    }
    text += input[i];
  }
  return text;
}

std::vector<RawSentence> read_sentences(std::string_view input,
                                        std::vector<std::string> *warnings) {
  const std::string text = normalize_newlines(input);
  std::vector<RawSentence> out;
  RawSentence current;
  bool open = false;
  int first_line = 0;
  std::set<std::string> seen_ids;

  auto finish = [&]() {
    if (!open) return;
    if (current.sentence.tokens.empty()) {
      throw ParseError(first_line, "sentence has comments but no tokens");
    }
    Sentence &s = current.sentence;
    for (const std::string &c : s.comments) {
      if (auto id = comment_value(c, "sent_id")) {
        s.sent_id = *id;
        break;
      }
    }
    if (s.sent_id.empty()) s.sent_id = "s" + std::to_string(out.size() + 1);
    if (!seen_ids.insert(s.sent_id).second && warnings != nullptr) {
      warnings->push_back("line " + std::to_string(first_line) +
                          ": duplicate sent_id '" + s.sent_id + "'");
    }
    out.push_back(std::move(current));
    current = RawSentence{};
    open = false;
  };

  std::vector<std::string_view> lines = split(text, '\n');
  // A trailing newline yields one empty final element; that is not a line.
  if (!lines.empty() && lines.back().empty()) lines.pop_back();

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i) + 1;
    std::string_view line = lines[i];
    if (line.empty()) {
      finish();
      continue;
    }
    if (!open) {
      open = true;
      first_line = line_no;
    }
    Sentence &s = current.sentence;
    if (line.front() == '#') {
      if (!s.tokens.empty() || !s.passthrough.empty()) {
        throw ParseError(line_no, "comment line inside token block");
      }
      if (comment_value(line, "newdoc")) {
        current.starts_document = true;
        if (auto id = comment_value(line, "newdoc id")) {
          current.newdoc_id = *id;
        }
      }
      s.comments.emplace_back(line);
      continue;
    }

    std::vector<std::string_view> cols = split(line, '\t');
    if (cols.size() != kColumns) {
      throw ParseError(line_no, "expected 10 tab-separated columns, found " +
                                    std::to_string(cols.size()));
    }
    if (cols[0].find_first_of("-.") != std::string_view::npos) {
      s.passthrough.push_back(PassthroughRow{s.tokens.size(), std::string(line)});
      continue;
    }

    Token t;
    std::optional<int> id = parse_int(cols[0]);
    if (!id) {
      throw ParseError(line_no, "non-integer token id '" + std::string(cols[0]) + "'");
    }
    if (*id != static_cast<int>(s.tokens.size()) + 1) {
      throw ParseError(line_no, "token id " + std::to_string(*id) +
                                    " out of sequence");
    }
    std::optional<int> head = parse_int(cols[6]);
    if (!head || *head < 0) {
      throw ParseError(line_no, "non-integer head '" + std::string(cols[6]) + "'");
    }
    if (cols[7] == "_" || cols[7].empty()) {
      throw ParseError(line_no, "missing deprel");
    }
    t.id = *id;
    t.form = std::string(cols[1]);
    t.lemma = optional_column(cols[2]);
    t.upos = optional_column(cols[3]);
    t.xpos = optional_column(cols[4]);
    t.feats = optional_column(cols[5]);
    t.head = *head;
    t.deprel = std::string(cols[7]);
    t.deps = optional_column(cols[8]);
    t.misc = Misc::parse(cols[9]);
    s.tokens.push_back(std::move(t));
  }
  finish();
  return out;
}

void write_token(std::string &out, const Token &t, const std::string &sent_id) {
  if (t.form.empty()) {
    throw SerializationError("sentence '" + sent_id + "', token " +
                             std::to_string(t.id) + ": empty form");
  }
  out += std::to_string(t.id);
  out += '\t';
  out += t.form;
  out += '\t';
  out += column_or_blank(t.lemma);
  out += '\t';
  out += column_or_blank(t.upos);
  out += '\t';
  out += column_or_blank(t.xpos);
  out += '\t';
  out += column_or_blank(t.feats);
  out += '\t';
  out += std::to_string(t.head);
  out += '\t';
  out += column_or_blank(t.deprel);
  out += '\t';
  out += column_or_blank(t.deps);
  out += '\t';
  out += t.misc.str();
  out += '\n';
}

void write_sentence(std::string &out, const Sentence &s) {
  for (const std::string &c : s.comments) {
    out += c;
    out += '\n';
  }
  auto rows = s.passthrough.begin();
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    for (; rows != s.passthrough.end() && rows->position <= i; ++rows) {
      out += rows->line;
      out += '\n';
    }
    write_token(out, s.tokens[i], s.sent_id);
  }
  for (; rows != s.passthrough.end(); ++rows) {
    out += rows->line;
    out += '\n';
  }
  out += '\n';
}

}  // namespace

ParseError::ParseError(int line, const std::string &message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message),
      line_(line) {}

Misc Misc::parse(std::string_view column) {
  Misc misc;
  if (column.empty() || column == "_") return misc;
  for (std::string_view item : split(column, '|')) {
    std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      misc.entries_.push_back(Entry{std::string(item), std::nullopt});
    } else {
      misc.entries_.push_back(Entry{std::string(item.substr(0, eq)),
                                    std::string(item.substr(eq + 1))});
    }
  }
  return misc;
}

std::string Misc::str() const {
  if (entries_.empty()) return "_";
  std::string out;
  for (const Entry &e : entries_) {
    if (!out.empty()) out += '|';
    out += e.key;
    if (e.value) {
      out += '=';
      out += *e.value;
    }
  }
  return out;
}

bool Misc::contains(std::string_view key) const {
  for (const Entry &e : entries_) {
    if (e.key == key) return true;
  }
  return false;
}

std::string Misc::get(std::string_view key) const {
  for (const Entry &e : entries_) {
    if (e.key == key) return e.value.value_or(std::string());
  }
  return {};
}

bool Misc::set(std::string_view key, std::string_view value) {
  for (Entry &e : entries_) {
    if (e.key == key) {
      if (e.value && *e.value == value) return false;
      e.value = std::string(value);
      return true;
    }
  }
  entries_.push_back(Entry{std::string(key), std::string(value)});
  return true;
}

bool Misc::erase(std::string_view key) {
  for (auto it = entries_.begin(); it != entries_.end(); ++it) {
    if (it->key == key) {
      entries_.erase(it);
      return true;
    }
  }
  return false;
}

std::string_view base_label(std::string_view deprel) {
  return deprel.substr(0, deprel.find(':'));
}

std::string genre_from_doc_id(std::string_view doc_id) {
  constexpr std::string_view kPrefix = "GUM_";
  if (doc_id.substr(0, kPrefix.size()) != kPrefix) return "unknown";
  std::string_view rest = doc_id.substr(kPrefix.size());
  std::size_t sep = rest.find('_');
  if (sep == std::string_view::npos || sep == 0 || sep + 1 == rest.size()) {
    return "unknown";
  }
  return std::string(rest.substr(0, sep));
}

Document parse_conllu(std::string_view input, std::vector<std::string> *warnings,
                      std::string_view default_doc_id) {
  Document doc;
  for (RawSentence &raw : read_sentences(input, warnings)) {
    if (doc.doc_id.empty() && !raw.newdoc_id.empty()) doc.doc_id = raw.newdoc_id;
    doc.sentences.push_back(std::move(raw.sentence));
  }
  if (doc.doc_id.empty()) doc.doc_id = std::string(default_doc_id);
  doc.genre = genre_from_doc_id(doc.doc_id);
  return doc;
}

Corpus parse_corpus(std::string_view input, std::vector<std::string> *warnings,
                    std::string_view default_doc_id) {
  Corpus corpus;
  for (RawSentence &raw : read_sentences(input, warnings)) {
    if (corpus.empty() || raw.starts_document) {
      Document doc;
      doc.doc_id = raw.newdoc_id;
      if (doc.doc_id.empty()) {
        doc.doc_id = std::string(default_doc_id);
        if (!corpus.empty()) doc.doc_id += "_" + std::to_string(corpus.size() + 1);
      }
      doc.genre = genre_from_doc_id(doc.doc_id);
      corpus.push_back(std::move(doc));
    }
    corpus.back().sentences.push_back(std::move(raw.sentence));
  }
  return corpus;
}

std::string write_conllu(const Document &doc) {
  std::string out;
  for (const Sentence &s : doc.sentences) write_sentence(out, s);
  return out;
}

std::string write_corpus(const Corpus &corpus) {
  std::string out;
  for (const Document &doc : corpus) out += write_conllu(doc);
  return out;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string &path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace treerewrite
