#include "cli.h"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "treerewrite/conllu.h"
#include "treerewrite/enrichment.h"
#include "treerewrite/metrics.h"
#include "treerewrite/postprocess.h"
#include "treerewrite/rule_engine.h"
#include "treerewrite/tree.h"

namespace treerewrite::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Runs fn(i) for i in [0, n) on up to `jobs` threads. The first exception,
// by index, is rethrown after all workers finish.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
  auto run_one = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(jobs, 1u), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) run_one(i);
      });
    }
    for (std::thread &t : pool) t.join();
  }
  for (const auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string stem(const std::string &path) {
  return std::filesystem::path(path).stem().string();
}

Corpus load_corpus(const std::string &path, std::ostream &err) {
  std::vector<std::string> warnings;
  Corpus corpus = parse_corpus(read_file(path), &warnings, stem(path));
  for (const std::string &w : warnings) err << path << ": warning: " << w << '\n';
  return corpus;
}

void emit(const RunConfig &config, const std::string &text, std::ostream &out) {
  if (config.output.empty()) {
    out << text;
  } else {
    write_file(config.output, text);
  }
}

void write_log(const RunConfig &config, const ConversionLog &log) {
  std::string path = config.log;
  if (path.empty() && !config.output.empty()) path = config.output + ".log.tsv";
  if (!path.empty()) write_file(path, log.to_tsv());
}

AnnotationLayers load_layers(const RunConfig &config, const Corpus &corpus) {
  AnnotationLayers layers = load_sidecar(read_file(config.sidecar));
  std::set<std::string, std::less<>> known;
  for (const Document &doc : corpus) {
    for (const Sentence &s : doc.sentences) known.insert(s.sent_id);
  }
  for (const std::string &id : layers.sentence_ids()) {
    if (known.count(id) == 0) {
      const Span &first = layers.spans_for(id).front();
      throw SidecarError(first.row, "sidecar refers to unknown sentence '" + id + "'");
    }
  }
  return layers;
}

std::string violation_line(const Sentence &s, const Violation &v) {
  return s.sent_id + "\t" + std::to_string(v.token_id) + "\t" + violation_name(v.kind) +
         "\t" + v.message;
}

struct DocResult {
  ConversionLog log;
  std::vector<std::string> violations;
};

ConversionLog merge_logs(const std::vector<DocResult> &results) {
  ConversionLog log;
  for (const DocResult &r : results) log.append(r.log);
  return log;
}

}  // namespace

std::string default_rules_path() {
  if (const char *env = std::getenv("TREEREWRITE_RULES"); env != nullptr && *env != '\0') {
    return env;
  }
  if (std::filesystem::exists(TREEREWRITE_INSTALLED_RULES)) return TREEREWRITE_INSTALLED_RULES;
  return TREEREWRITE_SOURCE_RULES;
}

int cmd_convert(const RunConfig &config, std::ostream &out, std::ostream &err) {
  if (config.mode == ConversionMode::kMultilayer && config.sidecar.empty()) {
    throw UsageError("multilayer conversion needs --sidecar");
  }
  Corpus corpus = load_corpus(config.input, err);

  ConversionProfile profile;
  profile.mode = config.mode;
  profile.ruleset_path = config.rules.empty() ? default_rules_path() : config.rules;
  profile.legacy_fixes = config.legacy_fixes;
  const Converter converter = Converter::from_profile(profile);

  PunctPairTable custom_pairs;
  if (!config.punct_pairs.empty()) custom_pairs = PunctPairTable::parse(read_file(config.punct_pairs));
  const PunctPairTable &pairs =
      config.punct_pairs.empty() ? PunctPairTable::defaults() : custom_pairs;

  AnnotationLayers layers;
  if (config.mode == ConversionMode::kMultilayer) {
    layers = load_layers(config, corpus);
  } else if (!config.sidecar.empty()) {
    err << "warning: --sidecar ignored in pure mode\n";
  }

  std::vector<DocResult> results(corpus.size());
  parallel_for(corpus.size(), config.jobs, [&](std::size_t i) {
    Document &doc = corpus[i];
    DocResult &r = results[i];
    if (config.mode == ConversionMode::kMultilayer) {
      flag_tokens(doc, layers.restrict_to(doc), &r.log);
    }
    for (Sentence &s : doc.sentences) {
      converter.convert(s, r.log);
      attach_punctuation(s, pairs, &r.log);
      finalize_misc(s);
      for (const Violation &v : validate_tree(s)) r.violations.push_back(violation_line(s, v));
    }
  });

  emit(config, write_corpus(corpus), out);
  write_log(config, merge_logs(results));

  int violations = 0;
  for (const DocResult &r : results) {
    for (const std::string &line : r.violations) {
      err << "invalid: " << line << '\n';
      ++violations;
    }
  }
  if (violations > 0) {
    err << violations << " validation violation(s) in output\n";
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_enrich(const RunConfig &config, std::ostream &out, std::ostream &err) {
  if (config.sidecar.empty()) throw UsageError("enrich needs --sidecar");
  Corpus corpus = load_corpus(config.input, err);
  const AnnotationLayers layers = load_layers(config, corpus);
  std::vector<DocResult> results(corpus.size());
  parallel_for(corpus.size(), config.jobs, [&](std::size_t i) {
    flag_tokens(corpus[i], layers.restrict_to(corpus[i]), &results[i].log);
  });
  emit(config, write_corpus(corpus), out);
  write_log(config, merge_logs(results));
  return kExitOk;
}

int cmd_evaluate(const RunConfig &config, std::ostream &out, std::ostream &err) {
  if (config.gold.empty() || config.pred.empty()) {
    throw UsageError("evaluate needs --gold and --pred");
  }
  const Corpus gold = load_corpus(config.gold, err);
  const Corpus pred = load_corpus(config.pred, err);
  const EvalReport report = score(gold, pred);
  const std::string text = config.format == ReportFormat::kJson
                               ? report_json(report, config.top_errors)
                               : report_tsv(report, config.top_errors);
  emit(config, text, out);
  if (!config.output.empty()) {
    out << "head errors " << format_percent(report.head_error_rate()) << "%, label errors "
        << format_percent(report.label_error_rate()) << "%\n";
  }
  return kExitOk;
}

int cmd_stats(const RunConfig &config, std::ostream &out, std::ostream &err) {
  const Corpus corpus = load_corpus(config.input, err);
  NonprojOptions options;
  options.count_root_edges = !config.exclude_root_edges;

  std::vector<NonprojCount> counts(corpus.size());
  parallel_for(corpus.size(), config.jobs, [&](std::size_t i) {
    counts[i] = count_nonprojective(corpus[i], options);
  });
  NonprojCount total;
  for (const NonprojCount &c : counts) total += c;

  std::string text;
  if (config.format == ReportFormat::kJson) {
    nlohmann::json docs = nlohmann::json::array();
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      docs.push_back({{"doc_id", corpus[i].doc_id},
                      {"genre", corpus[i].genre},
                      {"nonprojective", counts[i].nonprojective},
                      {"edges", counts[i].edges},
                      {"rate", counts[i].rate()}});
    }
    nlohmann::json j = {{"documents", docs},
                        {"total",
                         {{"nonprojective", total.nonprojective},
                          {"edges", total.edges},
                          {"rate", total.rate()}}}};
    text = j.dump(2) + "\n";
  } else {
    std::ostringstream tsv;
    tsv << "doc_id\tgenre\tnonprojective\tedges\tnonproj_pct\n";
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      tsv << corpus[i].doc_id << '\t' << corpus[i].genre << '\t' << counts[i].nonprojective
          << '\t' << counts[i].edges << '\t' << format_percent(counts[i].rate()) << '\n';
    }
    tsv << "TOTAL\t*\t" << total.nonprojective << '\t' << total.edges << '\t'
        << format_percent(total.rate()) << '\n';
    text = tsv.str();
  }
  emit(config, text, out);
  return kExitOk;
}

int cmd_validate(const RunConfig &config, std::ostream &out, std::ostream &err) {
  const Corpus corpus = load_corpus(config.input, err);
  std::size_t sentences = 0;
  std::size_t violations = 0;
  for (const Document &doc : corpus) {
    for (const Sentence &s : doc.sentences) {
      ++sentences;
      for (const Violation &v : validate_tree(s)) {
        out << violation_line(s, v) << '\n';
        ++violations;
      }
    }
  }
  err << sentences << " sentence(s), " << violations << " violation(s)\n";
  return violations == 0 ? kExitOk : kExitFailure;
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Convert Stanford Dependencies treebanks to Universal Dependencies v2"};
  app.require_subcommand(1);
  RunConfig config;
  std::string mode = "pure";
  std::string format = "tsv";

  const std::map<std::string, Command> names = {{"convert", Command::kConvert},
                                                {"enrich", Command::kEnrich},
                                                {"evaluate", Command::kEvaluate},
                                                {"stats", Command::kStats},
                                                {"validate", Command::kValidate}};
  auto *convert = app.add_subcommand("convert", "SD CoNLL-U to UD CoNLL-U");
  auto *enrich = app.add_subcommand("enrich", "Flag tokens from a span sidecar");
  auto *evaluate = app.add_subcommand("evaluate", "Score predicted trees against gold");
  auto *stats = app.add_subcommand("stats", "Non-projectivity statistics");
  auto *validate = app.add_subcommand("validate", "Check tree well-formedness");

  for (auto *sub : {convert, enrich, stats, validate}) {
    sub->add_option("-i,--input", config.input, "Input CoNLL-U")
        ->required()
        ->check(CLI::ExistingFile);
  }
  for (auto *sub : {convert, enrich, evaluate, stats}) {
    sub->add_option("-o,--output", config.output, "Output file (default: stdout)");
    sub->add_option("-j,--jobs", config.jobs, "Documents processed in parallel")
        ->check(CLI::Range(1u, 1024u));
  }
  for (auto *sub : {convert, enrich}) {
    sub->add_option("--log", config.log, "Conversion log (default: <output>.log.tsv)");
    sub->add_option("--sidecar", config.sidecar, "Span annotation TSV")
        ->check(CLI::ExistingFile);
  }
  convert->add_option("--rules", config.rules, "Rule file")->check(CLI::ExistingFile);
  convert->add_option("--mode", mode, "pure or multi")
      ->check(CLI::IsMember({"pure", "pure-sd", "multi", "multilayer"}));
  convert->add_flag("--legacy-fixes", config.legacy_fixes,
                    "cc to following conjunct, verbal nmod to obl");
  convert->add_option("--punct-pairs", config.punct_pairs, "Paired punctuation table")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--gold", config.gold, "Gold CoNLL-U")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--pred", config.pred, "Predicted CoNLL-U")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--top-errors", config.top_errors, "Labels listed per metric");
  for (auto *sub : {evaluate, stats}) {
    sub->add_option("--format", format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));
  }
  stats->add_flag("--exclude-root-edges", config.exclude_root_edges,
                  "Leave root edges out of the denominator");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  config.command = names.at(app.get_subcommands().front()->get_name());
  config.mode = *parse_mode(mode);
  config.format = format == "json" ? ReportFormat::kJson : ReportFormat::kTsv;

  try {
    switch (config.command) {
      case Command::kConvert:
        return cmd_convert(config, out, err);
      case Command::kEnrich:
        return cmd_enrich(config, out, err);
      case Command::kEvaluate:
        return cmd_evaluate(config, out, err);
      case Command::kStats:
        return cmd_stats(config, out, err);
      case Command::kValidate:
        return cmd_validate(config, out, err);
    }
  } catch (const UsageError &e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const AlignmentError &e) {
    err << "alignment error: " << e.what() << '\n';
    return kExitAlignment;
  } catch (const ParseError &e) {
    err << "parse error: " << e.what() << '\n';
  } catch (const RuleFileError &e) {
    err << "rule file error: " << e.what() << '\n';
  } catch (const SidecarError &e) {
    err << "sidecar error: " << e.what() << '\n';
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitFailure;
}

}  // namespace treerewrite::cli
