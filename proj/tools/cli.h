// treerewrite command-line front end. main() only forwards to run_cli so the
// commands can be driven from tests.

#ifndef TREEREWRITE_TOOLS_CLI_H_
#define TREEREWRITE_TOOLS_CLI_H_

#include <cstddef>
#include <iosfwd>
#include <string>

#include "treerewrite/sd2ud.h"

namespace treerewrite::cli {

enum ExitCode {
  kExitOk = 0,
  kExitFailure = 1,  // module error or invalid output
  kExitUsage = 2,
  kExitAlignment = 3,
};

enum class Command { kConvert, kEnrich, kEvaluate, kStats, kValidate };
enum class ReportFormat { kTsv, kJson };

struct RunConfig {
  Command command = Command::kConvert;
  std::string input;
  std::string output;  // empty: standard output
  std::string log;     // empty: <output>.log.tsv when output is a file
  std::string rules;   // empty: default_rules_path()
  std::string sidecar;
  std::string punct_pairs;  // empty: built-in pair table
  ConversionMode mode = ConversionMode::kPureSd;
  bool legacy_fixes = false;
  std::string gold;
  std::string pred;
  std::size_t top_errors = 3;
  ReportFormat format = ReportFormat::kTsv;
  unsigned jobs = 1;
  bool exclude_root_edges = false;
};

// $TREEREWRITE_RULES, else the installed rule file, else the one in the
// source tree.
std::string default_rules_path();

int cmd_convert(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_enrich(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_evaluate(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_stats(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_validate(const RunConfig &config, std::ostream &out, std::ostream &err);

// Parses arguments, dispatches, and maps exceptions to exit codes.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace treerewrite::cli

#endif  // TREEREWRITE_TOOLS_CLI_H_
