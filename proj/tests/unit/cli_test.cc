#include "cli.h"

#include <gtest/gtest.h>

#include <unistd.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "test_support.h"
#include "treerewrite/conllu.h"
#include "treerewrite/metrics.h"

namespace treerewrite::cli {
namespace {

namespace fs = std::filesystem;
using testing::fixture_path;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("treerewrite_cli_") + info->name() + "_" +
            std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string &name) const { return (dir_ / name).string(); }

  std::string put(const std::string &name, const std::string &content) const {
    write_file(path(name), content);
    return path(name);
  }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "treerewrite");
    std::vector<const char *> argv;
    for (const std::string &a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return run_cli(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

const char *kCoord =
    "# sent_id = coord\n"
    "# text = They saw me and Kim .\n"
    "1\tThey\tthey\t_\tPRP\t_\t2\tnsubj\t_\t_\n"
    "2\tsaw\tsee\t_\tVBD\t_\t0\troot\t_\t_\n"
    "3\tme\tI\t_\tPRP\t_\t2\tdobj\t_\t_\n"
    "4\tand\tand\t_\tCC\t_\t3\tcc\t_\t_\n"
    "5\tKim\tKim\t_\tNNP\t_\t3\tconj\t_\t_\n"
    "6\t.\t.\t_\t.\t_\t2\tpunct\t_\t_\n\n";

TEST_F(CliTest, ConvertsCoordinationExample) {
  const std::string in = put("coord.conllu", kCoord);
  ASSERT_EQ(run({"convert", "-i", in, "-o", path("out.conllu"), "--mode", "pure"}), kExitOk)
      << err_.str();
  const Document doc = parse_conllu(read_file(path("out.conllu")));
  const Sentence &s = doc.sentences.at(0);
  EXPECT_EQ(s.at(3).head, 2);
  EXPECT_EQ(s.at(3).deprel, "obj");
  EXPECT_EQ(s.at(5).head, 3);
  EXPECT_EQ(s.at(5).deprel, "conj");
  EXPECT_EQ(s.at(4).head, 5);
  EXPECT_EQ(s.at(4).deprel, "cc");
  EXPECT_TRUE(fs::exists(path("out.conllu.log.tsv")));
}

TEST_F(CliTest, MultilayerWithoutSidecarIsUsageError) {
  const std::string in = put("coord.conllu", kCoord);
  EXPECT_EQ(run({"convert", "-i", in, "--mode", "multi"}), kExitUsage);
  EXPECT_NE(err_.str().find("--sidecar"), std::string::npos);
}

TEST_F(CliTest, MissingInputIsUsageError) {
  EXPECT_EQ(run({"convert", "-i", path("nope.conllu")}), kExitUsage);
  EXPECT_EQ(run({}), kExitUsage);
}

TEST_F(CliTest, MultilayerMakesPersonNamesFlat) {
  ASSERT_EQ(run({"convert", "-i", fixture_path("sd.conllu"), "-o", path("multi.conllu"),
                 "--mode", "multi", "--sidecar", fixture_path("sidecar.tsv")}),
            kExitOk)
      << err_.str();
  const Corpus corpus = parse_corpus(read_file(path("multi.conllu")));
  bool found = false;
  for (const Document &d : corpus) {
    for (const Sentence &s : d.sentences) {
      if (s.sent_id != "names-person") continue;
      found = true;
      EXPECT_EQ(s.at(1).form, "Frank");
      EXPECT_EQ(s.at(2).head, 1);
      EXPECT_EQ(s.at(2).deprel, "flat");
    }
  }
  EXPECT_TRUE(found);
}

TEST_F(CliTest, EvaluateIdenticalFilesIsZero) {
  const std::string gold = fixture_path("gold_ud.conllu");
  ASSERT_EQ(run({"evaluate", "--gold", gold, "--pred", gold}), kExitOk) << err_.str();
  EXPECT_NE(out_.str().find("head\t"), std::string::npos);
  ASSERT_EQ(run({"evaluate", "--gold", gold, "--pred", gold, "--format", "json"}), kExitOk);
  auto j = nlohmann::json::parse(out_.str());
  EXPECT_EQ(j["head"]["errors"], 0);
  EXPECT_EQ(j["label"]["errors"], 0);
  ASSERT_EQ(run({"evaluate", "--gold", gold, "--pred", gold, "-o", path("r.tsv")}), kExitOk);
  EXPECT_EQ(out_.str(), "head errors 0.00%, label errors 0.00%\n");
}

TEST_F(CliTest, EvaluatePureConversionRanksFlatFirst) {
  ASSERT_EQ(run({"convert", "-i", fixture_path("sd.conllu"), "-o", path("pure.conllu"),
                 "--mode", "pure"}),
            kExitOk);
  ASSERT_EQ(run({"evaluate", "--gold", fixture_path("gold_ud.conllu"), "--pred",
                 path("pure.conllu"), "--format", "json", "--top-errors", "3"}),
            kExitOk);
  auto j = nlohmann::json::parse(out_.str());
  ASSERT_EQ(j["top_errors"]["head"].size(), 3u);
  EXPECT_EQ(j["top_errors"]["head"][0]["label"], "flat");
  EXPECT_EQ(j["top_errors"]["label"].size(), 3u);
}

TEST_F(CliTest, EvaluateMisalignedIsExitThree) {
  std::string shifted = kCoord;
  shifted.replace(shifted.find("Kim\tKim"), 7, "Kym\tKim");
  const std::string a = put("a.conllu", kCoord);
  const std::string b = put("b.conllu", shifted);
  EXPECT_EQ(run({"evaluate", "--gold", a, "--pred", b}), kExitAlignment);
  EXPECT_NE(err_.str().find("alignment"), std::string::npos);
}

TEST_F(CliTest, StatsMatchesOracle) {
  const std::string crossing =
      "# newdoc id = GUM_news_x\n"
      "# sent_id = x1\n"
      "1\ta\ta\t_\tNN\t_\t0\troot\t_\t_\n"
      "2\tb\tb\t_\tNN\t_\t4\tdep\t_\t_\n"
      "3\tc\tc\t_\tNN\t_\t1\tdep\t_\t_\n"
      "4\td\td\t_\tNN\t_\t1\tdep\t_\t_\n"
      "5\t.\t.\t_\t.\t_\t1\tpunct\t_\t_\n\n";
  const std::string in = put("x.conllu", crossing);
  const Document doc = parse_conllu(crossing);
  const auto oracle = testing::oracle_nonprojective(doc.sentences[0], true);
  ASSERT_EQ(run({"stats", "-i", in}), kExitOk) << err_.str();
  std::ostringstream expected_row;
  expected_row << "TOTAL\t*\t" << oracle.nonprojective << '\t' << oracle.edges << '\t'
               << format_percent(static_cast<double>(oracle.nonprojective) / oracle.edges);
  EXPECT_NE(out_.str().find(expected_row.str()), std::string::npos) << out_.str();
  EXPECT_NE(out_.str().find("TOTAL\t*\t1\t4\t25.00"), std::string::npos);

  ASSERT_EQ(run({"stats", "-i", in, "--exclude-root-edges", "--format", "json"}), kExitOk);
  auto j = nlohmann::json::parse(out_.str());
  EXPECT_EQ(j["total"]["edges"], 3);
  EXPECT_EQ(j["documents"][0]["genre"], "news");
}

TEST_F(CliTest, StatsOnProjectiveGoldIsZero) {
  const std::string in = put("p.conllu", kCoord);
  ASSERT_EQ(run({"stats", "-i", in}), kExitOk);
  EXPECT_NE(out_.str().find("TOTAL\t*\t0\t5\t0.00"), std::string::npos) << out_.str();
}

TEST_F(CliTest, ValidateReportsViolations) {
  EXPECT_EQ(run({"validate", "-i", fixture_path("gold_ud.conllu")}), kExitOk) << out_.str();
  std::string bad = kCoord;
  const std::string me = "3\tme\tI\t_\tPRP\t_\t2";
  bad.replace(bad.find(me), me.size(), "3\tme\tI\t_\tPRP\t_\t6");
  const std::string in = put("bad.conllu", bad);
  EXPECT_EQ(run({"validate", "-i", in}), kExitFailure);
  EXPECT_EQ(out_.str().rfind("coord\t", 0), 0u) << out_.str();
}

TEST_F(CliTest, EnrichFlagsEntityHeads) {
  ASSERT_EQ(run({"enrich", "-i", fixture_path("sd.conllu"), "-o", path("e.conllu"),
                 "--sidecar", fixture_path("sidecar.tsv")}),
            kExitOk)
      << err_.str();
  const std::string text = read_file(path("e.conllu"));
  EXPECT_NE(text.find("Ent=person"), std::string::npos);
}

TEST_F(CliTest, UnknownSidecarSentenceFails) {
  const std::string in = put("coord.conllu", kCoord);
  const std::string side =
      put("side.tsv", "sent_id\tstart\tend\tlayer\tvalue\nnowhere\t1\t2\tentity\tperson\n");
  EXPECT_EQ(run({"convert", "-i", in, "--mode", "multi", "--sidecar", side}), kExitFailure);
  EXPECT_NE(err_.str().find("nowhere"), std::string::npos);
}

TEST_F(CliTest, JobsDoNotChangeOutput) {
  ASSERT_EQ(run({"convert", "-i", fixture_path("sd.conllu"), "-o", path("j1.conllu")}),
            kExitOk);
  ASSERT_EQ(run({"convert", "-i", fixture_path("sd.conllu"), "-o", path("j4.conllu"), "-j",
                 "4"}),
            kExitOk);
  EXPECT_EQ(read_file(path("j1.conllu")), read_file(path("j4.conllu")));
  EXPECT_EQ(read_file(path("j1.conllu.log.tsv")), read_file(path("j4.conllu.log.tsv")));
}

}  // namespace
}  // namespace treerewrite::cli
