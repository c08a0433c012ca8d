// Conversion log shared by the rule engine, enrichment and conversion pack.

#ifndef TREEREWRITE_LOG_H_
#define TREEREWRITE_LOG_H_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace treerewrite {

enum class LogEvent {
  kApplied,       // a rule or built-in changed the sentence
  kSkippedCycle,  // a reattach was dropped because it would close a cycle
  kConflict,      // two bindings of one rule wrote different values
  kResidue,       // a non-UD label survived conversion
  kFallback,      // a heuristic fell back to its default choice
  kNotice,        // something a human should review
  kWarning,
};

const char *log_event_name(LogEvent event);

struct LogEntry {
  int rule_line = 0;  // 0 for built-in procedures
  std::string sent_id;
  int edits = 0;
  LogEvent event = LogEvent::kApplied;
  std::string detail;

  bool operator==(const LogEntry &) const = default;
};

class ConversionLog {
 public:
  void add(LogEntry entry) { entries_.push_back(std::move(entry)); }
  void add(int rule_line, std::string sent_id, int edits, LogEvent event,
           std::string detail = {});
  void append(const ConversionLog &other);

  const std::vector<LogEntry> &entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  std::size_t count(LogEvent event) const;

  // Header line followed by one row per entry:
  // rule_line, sent_id, edits, event, detail.
  std::string to_tsv() const;

 private:
  std::vector<LogEntry> entries_;
};

}  // namespace treerewrite

#endif  // TREEREWRITE_LOG_H_
