#include "treerewrite/conllu.h"

#include <gtest/gtest.h>

#include "test_support.h"

namespace treerewrite {
namespace {

constexpr std::string_view kSmall =
    "# newdoc id = GUM_news_small\n"
    "# sent_id = a1\n"
    "# text = Hello world\n"
    "1\tHello\thello\tINTJ\tUH\t_\t2\tdiscourse\t_\tSpaceAfter=No\n"
    "2\tworld\t_\t_\tNN\tNumber=Sing\t0\troot\t2:root\tFoo|Bar=baz\n"
    "\n";

TEST(ConlluTest, ParsesColumns) {
  Document doc = parse_conllu(kSmall);
  ASSERT_EQ(doc.sentences.size(), 1u);
  EXPECT_EQ(doc.doc_id, "GUM_news_small");
  EXPECT_EQ(doc.genre, "news");
  const Sentence &s = doc.sentences[0];
  EXPECT_EQ(s.sent_id, "a1");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.at(1).form, "Hello");
  EXPECT_EQ(s.at(1).misc.get("SpaceAfter"), "No");
  EXPECT_EQ(s.at(2).lemma, "");
  EXPECT_EQ(s.at(2).upos, "");
  EXPECT_EQ(s.at(2).feats, "Number=Sing");
  EXPECT_EQ(s.at(2).deps, "2:root");
  EXPECT_EQ(s.at(2).head, 0);
  EXPECT_TRUE(s.at(2).misc.contains("Foo"));
  EXPECT_EQ(s.at(2).misc.get("Bar"), "baz");
}

TEST(ConlluTest, RoundTripIsByteExact) {
  EXPECT_EQ(write_conllu(parse_conllu(kSmall)), kSmall);
}

TEST(ConlluTest, FixtureFilesRoundTrip) {
  for (const char *name : {"sd.conllu", "gold_ud.conllu"}) {
    const std::string text = read_file(testing::fixture_path(name));
    EXPECT_EQ(write_corpus(parse_corpus(text)), text) << name;
  }
}

TEST(ConlluTest, PassthroughRowsKeepTheirPlace) {
  const std::string text =
      "# sent_id = mw\n"
      "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n"
      "1\tdo\tdo\tAUX\tVBP\t_\t3\taux\t_\t_\n"
      "2\tn't\tnot\tPART\tRB\t_\t3\tadvmod\t_\t_\n"
      "3\tgo\tgo\tVERB\tVB\t_\t0\troot\t_\t_\n"
      "3.1\tgone\t_\t_\t_\t_\t_\t_\t3:conj\t_\n"
      "\n";
  Document doc = parse_conllu(text);
  const Sentence &s = doc.sentences[0];
  ASSERT_EQ(s.size(), 3u);
  ASSERT_EQ(s.passthrough.size(), 2u);
  EXPECT_EQ(s.passthrough[0].position, 0u);
  EXPECT_EQ(s.passthrough[1].position, 3u);
  EXPECT_EQ(write_conllu(doc), text);
}

TEST(ConlluTest, CrlfInputParsesLikeLf) {
  std::string crlf;
  for (char c : kSmall) {
    if (c == '\n') crlf += '\r';
    crlf += c;
  }
  EXPECT_EQ(parse_conllu(crlf), parse_conllu(kSmall));
}

TEST(ConlluTest, MissingSentIdGetsSyntheticOne) {
  Document doc = parse_conllu(
      "1\ta\t_\t_\t_\t_\t0\troot\t_\t_\n\n"
      "1\tb\t_\t_\t_\t_\t0\troot\t_\t_\n\n");
  ASSERT_EQ(doc.sentences.size(), 2u);
  EXPECT_EQ(doc.sentences[0].sent_id, "s1");
  EXPECT_EQ(doc.sentences[1].sent_id, "s2");
}

TEST(ConlluTest, DuplicateSentIdWarns) {
  std::vector<std::string> warnings;
  parse_conllu(
      "# sent_id = x\n1\ta\t_\t_\t_\t_\t0\troot\t_\t_\n\n"
      "# sent_id = x\n1\tb\t_\t_\t_\t_\t0\troot\t_\t_\n\n",
      &warnings);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("duplicate sent_id 'x'"), std::string::npos);
}

TEST(ConlluTest, RejectsMalformedRows) {
  EXPECT_THROW(parse_conllu("1\ta\t_\t_\t_\t_\t0\troot\t_\n\n"), ParseError);
  EXPECT_THROW(parse_conllu("2\ta\t_\t_\t_\t_\t0\troot\t_\t_\n\n"), ParseError);
  EXPECT_THROW(parse_conllu("1\ta\t_\t_\t_\t_\t0\t_\t_\t_\n\n"), ParseError);
  EXPECT_THROW(parse_conllu("1\ta\t_\t_\t_\t_\tx\troot\t_\t_\n\n"), ParseError);
  try {
    parse_conllu("# sent_id = q\n1\ta\t_\t_\t_\t_\t0\troot\t_\t_\n3\tb\t_\t_\t_\t_\t1\tdep\t_\t_\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(ConlluTest, EmptyFormCannotBeWritten) {
  Document doc = parse_conllu(kSmall);
  doc.sentences[0].tokens[0].form.clear();
  EXPECT_THROW(write_conllu(doc), SerializationError);
}

TEST(ConlluTest, CorpusSplitsOnNewdoc) {
  const std::string text = read_file(testing::fixture_path("sd.conllu"));
  Corpus corpus = parse_corpus(text);
  ASSERT_EQ(corpus.size(), 4u);
  EXPECT_EQ(corpus[0].doc_id, "GUM_news_rules");
  EXPECT_EQ(corpus[1].genre, "bio");
  EXPECT_EQ(corpus[3].genre, "fiction");
  EXPECT_EQ(parse_conllu(text).sentences.size(), 31u);
}

TEST(ConlluTest, GenreFromDocId) {
  EXPECT_EQ(genre_from_doc_id("GUM_interview_peace"), "interview");
  EXPECT_EQ(genre_from_doc_id("GUM_whow_x_y"), "whow");
  EXPECT_EQ(genre_from_doc_id("GUM_news"), "unknown");
  EXPECT_EQ(genre_from_doc_id("en_ewt-ud-train"), "unknown");
  EXPECT_EQ(genre_from_doc_id(""), "unknown");
}

TEST(ConlluTest, BaseLabelStripsSubtype) {
  EXPECT_EQ(base_label("obl:tmod"), "obl");
  EXPECT_EQ(base_label("nmod"), "nmod");
  EXPECT_EQ(base_label("a:b:c"), "a");
  EXPECT_EQ(base_label(base_label("acl:relcl")), "acl");
}

TEST(MiscTest, SetEraseAndBareKeys) {
  Misc m = Misc::parse("SpaceAfter=No|Flag");
  EXPECT_EQ(m.str(), "SpaceAfter=No|Flag");
  EXPECT_FALSE(m.set("SpaceAfter", "No"));
  EXPECT_TRUE(m.set("Typo", "Yes"));
  EXPECT_EQ(m.str(), "SpaceAfter=No|Flag|Typo=Yes");
  EXPECT_TRUE(m.erase("SpaceAfter"));
  EXPECT_FALSE(m.erase("SpaceAfter"));
  EXPECT_EQ(m.get("Flag"), "");
  EXPECT_TRUE(m.contains("Flag"));
  EXPECT_EQ(Misc::parse("_").str(), "_");
  EXPECT_TRUE(Misc::parse("").empty());
}

}  // namespace
}  // namespace treerewrite
