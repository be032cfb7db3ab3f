#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "bitext/ibm1.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace bitext;
using bitext::testing::read_file;
using bitext::testing::TempDir;
using bitext::testing::write_file;

namespace {

using Corpus = std::vector<std::pair<TokenSeq, TokenSeq>>;

const std::vector<Corpus>& toy_corpora() {
  static const std::vector<Corpus> corpora = {
      {{{"a", "b"}, {"x", "y"}}, {{"a"}, {"x"}}},
      {{{"das", "haus"}, {"the", "house"}},
       {{"das", "buch"}, {"the", "book"}},
       {{"ein", "buch"}, {"a", "book"}},
       {{"ein", "haus", "klein"}, {"a", "small", "house"}}},
      {{{"p", "q", "r"}, {"u", "v"}},
       {{"q", "r"}, {"v", "w", "v"}},
       {{"r"}, {"w"}},
       {{"p", "p", "s"}, {"u", "u", "z", "v"}},
       {{"s", "q"}, {"z", "v"}},
       {{"p"}, {"u"}}},
  };
  return corpora;
}

Corpus random_corpus(std::mt19937_64& rng, std::size_t pairs) {
  Corpus c;
  for (std::size_t i = 0; i < pairs; ++i) {
    TokenSeq x, y;
    for (std::size_t k = 0, n = 1 + rng() % 3; k < n; ++k) x.push_back("s" + std::to_string(rng() % 4));
    for (std::size_t k = 0, n = 1 + rng() % 3; k < n; ++k) y.push_back("t" + std::to_string(rng() % 4));
    c.emplace_back(x, y);
  }
  return c;
}

void expect_matches_oracle(const Corpus& corpus, int iterations) {
  std::vector<double> ll;
  const auto model = LexicalModel::train(corpus, {iterations, false}, &ll);
  oracle::Ibm1Oracle ref(corpus);
  for (int i = 0; i < iterations; ++i) ref.step();
  for (const auto& [key, value] : ref.table)
    EXPECT_NEAR(model.t(key.second, key.first), value, 1e-9) << key.first << " -> " << key.second;
  ASSERT_EQ(ll.size(), static_cast<std::size_t>(iterations) + 1);
  for (int i = 0; i < iterations; ++i) EXPECT_NEAR(ll[i], ref.log_likelihood[i], 1e-9);
  EXPECT_NEAR(ll.back(), ref.current_log_likelihood(), 1e-9);
}

}  // namespace

TEST(Ibm1, MatchesAlignmentEnumerationOracle) {
  for (const auto& corpus : toy_corpora())
    for (int iterations : {1, 2, 5}) expect_matches_oracle(corpus, iterations);
}

TEST(Ibm1, MatchesOracleOnRandomCorpora) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 10; ++k) expect_matches_oracle(random_corpus(rng, 1 + rng() % 8), 1 + static_cast<int>(rng() % 5));
}

TEST(Ibm1, CoOccurrenceEvidence) {
  const auto m = LexicalModel::train(toy_corpora()[0], {5, true});
  EXPECT_GT(m.t("x", "a"), m.t("y", "a"));
  EXPECT_GT(m.t("y", "b"), m.t("x", "b"));
  const auto books = LexicalModel::train(toy_corpora()[1], {5, true});
  EXPECT_GT(books.t("book", "buch"), books.t("the", "buch"));
  EXPECT_GT(books.t("house", "haus"), books.t("the", "haus"));
}

TEST(Ibm1, SinglePairIsCertain) {
  const auto m = LexicalModel::train({{{"a"}, {"x"}}}, {3, true});
  EXPECT_DOUBLE_EQ(m.t("x", "a"), 1.0);
  EXPECT_DOUBLE_EQ(m.t("x", LexicalModel::kNull), 1.0);
  EXPECT_NEAR(m.cond_cross_entropy({"a"}, {"x"}), 0.0, 1e-12);
}

TEST(Ibm1, LogLikelihoodNeverDecreases) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 5; ++k) {
    std::vector<double> ll;
    LexicalModel::train(random_corpus(rng, 30), {10, true}, &ll);
    for (std::size_t i = 1; i < ll.size(); ++i) EXPECT_GE(ll[i], ll[i - 1] - 1e-12);
  }
}

TEST(Ibm1, RowsStayNormalized) {
  std::mt19937_64 rng(6);
  const auto corpus = random_corpus(rng, 40);
  for (int it = 1; it <= 6; ++it) {
    const auto m = LexicalModel::train(corpus, {it, true});
    for (const auto& [src, sum] : m.row_sums()) EXPECT_NEAR(sum, 1.0, 1e-9) << src << " at iteration " << it;
  }
}

TEST(Ibm1, AnalyticCrossEntropies) {
  const auto certain = LexicalModel::from_entries({{"<null>", "x", 1.0}, {"a", "x", 1.0}});
  EXPECT_NEAR(certain.cond_cross_entropy({"a"}, {"x", "x"}), 0.0, 1e-15);
  const auto half = LexicalModel::from_entries({{"<null>", "y", 1.0}, {"a", "x", 1.0}});
  EXPECT_NEAR(half.cond_cross_entropy({"a"}, {"x"}), std::log(2.0), 1e-15);
  // Unknown target word: floored.
  EXPECT_NEAR(half.cond_cross_entropy({"a"}, {"zzz"}), -std::log(LexicalModel::kFloor), 1e-12);
  EXPECT_THROW(half.cond_cross_entropy({}, {"x"}), DataError);
  EXPECT_THROW(half.cond_cross_entropy({"a"}, {}), DataError);
}

TEST(Ibm1, CrossEntropyMatchesDirectSummation) {
  std::mt19937_64 rng(7);
  const auto corpus = random_corpus(rng, 25);
  const auto m = LexicalModel::train(corpus, {5, true});
  for (const auto& [x, y] : random_corpus(rng, 50)) {
    double sum = 0.0;
    for (const auto& f : y) {
      double p = m.t(f, LexicalModel::kNull);
      for (const auto& e : x) p += m.t(f, e);
      sum -= std::log(std::max(p / static_cast<double>(x.size() + 1), LexicalModel::kFloor));
    }
    EXPECT_NEAR(m.cond_cross_entropy(x, y), sum / static_cast<double>(y.size()), 1e-12);
  }
}

TEST(Ibm1, CorpusOrderDoesNotMatter) {
  std::mt19937_64 rng(8);
  auto corpus = random_corpus(rng, 20);
  const auto a = LexicalModel::train(corpus, {5, true});
  std::shuffle(corpus.begin(), corpus.end(), rng);
  const auto b = LexicalModel::train(corpus, {5, true});
  const auto ea = a.entries(), eb = b.entries();
  ASSERT_EQ(ea.size(), eb.size());
  for (std::size_t i = 0; i < ea.size(); ++i) {
    EXPECT_EQ(ea[i].src, eb[i].src);
    EXPECT_EQ(ea[i].trg, eb[i].trg);
    EXPECT_NEAR(ea[i].prob, eb[i].prob, 1e-12);
  }
}

TEST(Ibm1, LowercasesByDefault) {
  const auto m = LexicalModel::train({{{"Haus"}, {"House"}}}, {});
  EXPECT_DOUBLE_EQ(m.t("house", "haus"), 1.0);
  EXPECT_DOUBLE_EQ(m.t("HOUSE", "HAUS"), 1.0);
}

TEST(Ibm1, SaveLoadRoundTrip) {
  TempDir dir;
  const auto m = LexicalModel::train(toy_corpora()[1], {5, true});
  m.save(dir.file("m"));
  const auto r = LexicalModel::load(dir.file("m"));
  r.save(dir.file("r"));
  EXPECT_EQ(read_file(dir.file("m")), read_file(dir.file("r")));
  EXPECT_EQ(m.cond_cross_entropy({"Das", "Buch"}, {"the", "book"}), r.cond_cross_entropy({"Das", "Buch"}, {"the", "book"}));
  write_file(dir.file("new"), "bitext-ibm1 2\nlowercase 1\n");
  EXPECT_THROW(LexicalModel::load(dir.file("new")), ModelError);
  EXPECT_THROW(LexicalModel::load(dir.file("missing")), ModelError);
}

TEST(Ibm1, Errors) {
  EXPECT_THROW(LexicalModel::train({{{}, {"x"}}}, {}), DataError);
  EXPECT_THROW(LexicalModel::train({{{"a"}, {"x"}}}, {0, true}), UsageError);
}

TEST(EntropyColumn, ParsesAndValidates) {
  TempDir dir;
  write_file(dir.file("ok"), "0.5\n1\n2.25\n");
  EXPECT_EQ(read_entropy_column(dir.file("ok")), (std::vector<double>{0.5, 1.0, 2.25}));
  EXPECT_NO_THROW(load_entropy_column(dir.file("ok"), 3));
  EXPECT_THROW(load_entropy_column(dir.file("ok"), 4), DataError);

  write_file(dir.file("nan"), "NaN\n1\n");
  try {
    read_entropy_column(dir.file("nan"));
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  write_file(dir.file("neg"), "1\n-0.5\n");
  try {
    read_entropy_column(dir.file("neg"));
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  write_file(dir.file("text"), "1\nabc\n");
  EXPECT_THROW(read_entropy_column(dir.file("text")), DataError);
}
