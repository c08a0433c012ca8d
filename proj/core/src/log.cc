#include "treerewrite/log.h"

#include <algorithm>
#include <string>

namespace treerewrite {

const char *log_event_name(LogEvent event) {
  switch (event) {
    case LogEvent::kApplied: return "applied";
    case LogEvent::kSkippedCycle: return "skipped-cycle";
    case LogEvent::kConflict: return "conflict";
    case LogEvent::kResidue: return "residue";
    case LogEvent::kFallback: return "fallback";
    case LogEvent::kNotice: return "notice";
    case LogEvent::kWarning: return "warning";
  }
  return "unknown";
}

void ConversionLog::add(int rule_line, std::string sent_id, int edits,
                        LogEvent event, std::string detail) {
  entries_.push_back(
      LogEntry{rule_line, std::move(sent_id), edits, event, std::move(detail)});
}

void ConversionLog::append(const ConversionLog &other) {
  entries_.insert(entries_.end(), other.entries_.begin(),
                  other.entries_.end());
}

std::size_t ConversionLog::count(LogEvent event) const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(),
                    [event](const LogEntry &e) { return e.event == event; }));
}

std::string ConversionLog::to_tsv() const {
  std::string out = "rule_line\tsent_id\tedits\tevent\tdetail\n";
  for (const LogEntry &e : entries_) {
    out += std::to_string(e.rule_line);
    out += '\t';
    out += e.sent_id;
    out += '\t';
    out += std::to_string(e.edits);
    out += '\t';
    out += log_event_name(e.event);
    out += '\t';
    // Keep one row per entry.
    for (char c : e.detail) out += (c == '\t' || c == '\n') ? ' ' : c;
    out += '\n';
  }
  return out;
}

}  // namespace treerewrite
