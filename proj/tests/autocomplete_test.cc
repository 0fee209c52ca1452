// Copyright 2026 The imtkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "imt/autocomplete/gwlan.h"
#include "imt/core/error.h"
#include "test_util.h"

namespace imt::autocomplete {
namespace {

using ::imt::testing::P;
using ::imt::testing::W;

std::shared_ptr<const model::ReferenceModel> TheModel() {
  std::vector<model::WordPair> corpus;
  for (int i = 0; i < 5; ++i) corpus.push_back(P("le", "the"));
  for (int i = 0; i < 2; ++i) corpus.push_back(P("ils", "they"));
  for (int i = 0; i < 3; ++i) corpus.push_back(P("chien", "dog"));
  model::ModelConfig mc;
  mc.order = 2;
  return std::make_shared<model::ReferenceModel>(model::TrainReferenceModel(corpus, mc));
}

TEST(CompleteWordTest, SourceFavorsThe) {
  model::ReferenceScorer scorer(TheModel());
  const auto trie = TargetTrie(scorer.model());
  const auto ranked = CompleteWord(scorer, trie, Tokenize("le"), {}, "th");
  ASSERT_EQ(ranked.size(), 2u);
  EXPECT_EQ(ranked[0].word, "the");
  EXPECT_EQ(ranked[1].word, "they");
  const auto other = CompleteWord(scorer, trie, Tokenize("ils"), {}, "th");
  EXPECT_EQ(other[0].word, "they");
}

TEST(CompleteWordTest, SingletonAndEmpty) {
  model::ReferenceScorer scorer(TheModel());
  const auto trie = TargetTrie(scorer.model());
  const auto one = CompleteWord(scorer, trie, Tokenize("le"), {}, "d");
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].word, "dog");
  EXPECT_TRUE(CompleteWord(scorer, trie, Tokenize("le"), {}, "zz").empty());
  EXPECT_THROW(CompleteWord(scorer, trie, Tokenize("le"), {}, ""), InvalidArgument);
  EXPECT_EQ(CompleteWord(scorer, trie, Tokenize("le"), {}, "t", 1).size(), 1u);
}

TEST(CompleteWordTest, RankingIsGlobalRankingRestricted) {
  auto m = std::make_shared<model::ReferenceModel>(
      model::TrainReferenceModel(::imt::testing::ChainCorpus(12, 80, 4), model::ModelConfig{}));
  model::ReferenceScorer scorer(m);
  const auto trie = TargetTrie(*m);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    const auto pair = ::imt::testing::ChainCorpus(12, 1, static_cast<unsigned>(rng()))[0];
    const Sentence src = FromWords(pair.first);
    TranslationContext ctx;
    const std::size_t cut = rng() % pair.second.size();
    ctx.left.assign(pair.second.begin(), pair.second.begin() + cut);
    ctx.right.assign(pair.second.begin() + cut + 1, pair.second.end());
    for (const std::string typed : {"t", "t1", "t3", "x"}) {
      const auto got = CompleteWord(scorer, trie, src, ctx, typed);
      std::vector<model::ScoredWord> expect;
      for (const auto& sw : scorer.PredictWordDistribution(src, ctx.left, ctx.right)) {
        if (sw.word.starts_with(typed)) expect.push_back(sw);
      }
      EXPECT_EQ(got, expect);
      for (const auto& sw : got) EXPECT_TRUE(sw.word.starts_with(typed));
    }
  }
}

model::LexTable ChienLex() {
  model::LexTable lex;
  lex.Set("chien", {{"dog", 0.9}, {"cat", 0.1}});
  lex.Set("chat", {{"cat", 0.8}, {"dot", 0.2}});
  return lex;
}

TEST(TransTableTest, SingleSurvivor) {
  const auto keyfn = TypedKeyFunction::Prefix();
  EXPECT_EQ(TransTablePredict(ChienLex(), {}, W("chien"), keyfn, "d"), "dog");
  EXPECT_EQ(TransTablePredict(ChienLex(), {}, W("chien"), keyfn, "x"), std::nullopt);
}

TEST(TransTableTest, FrequencyThenLexicographic) {
  const auto keyfn = TypedKeyFunction::Prefix();
  model::LexTable lex;
  lex.Set("x", {{"dog", 0.5}, {"cat", 0.5}});
  EXPECT_EQ(TransTablePredict(lex, {{"dog", 10}, {"cat", 3}}, W("x"), keyfn, "c"), "cat");
  lex.Set("x", {{"dog", 0.5}, {"dot", 0.5}});
  EXPECT_EQ(TransTablePredict(lex, {{"dog", 10}, {"dot", 3}}, W("x"), keyfn, "do"), "dog");
  EXPECT_EQ(TransTablePredict(lex, {{"dog", 3}, {"dot", 3}}, W("x"), keyfn, "d"), "dog");
  // Union over all source words.
  EXPECT_EQ(TransTablePredict(ChienLex(), {{"dot", 9}, {"dog", 1}}, W("chien chat"), keyfn, "d"),
            "dot");
}

// Legal (a, b) spans, enumerated directly.
std::set<std::vector<std::string>> LegalContexts(const std::vector<std::string>& y, std::size_t lo,
                                                 std::size_t hi) {
  std::set<std::vector<std::string>> out;
  for (std::size_t a = lo; a <= hi; ++a) {
    for (std::size_t b = a; b <= hi; ++b) out.insert({y.begin() + a, y.begin() + b});
  }
  return out;
}

TEST(GenerateTest, ThreeTokenSpans) {
  const std::vector<std::string> y = W("a b c");
  EXPECT_EQ(LegalContexts(y, 0, 1), (std::set<std::vector<std::string>>{{}, {"a"}}));
  EXPECT_EQ(LegalContexts(y, 2, 3), (std::set<std::vector<std::string>>{{}, {"c"}}));
  std::vector<model::WordPair> pairs(50, model::WordPair{W("x y z"), y});
  GwlanGenOptions opt;
  opt.seed = 3;
  const auto data = GenerateGwlanData(pairs, TypedKeyFunction::Prefix(), opt);
  ASSERT_EQ(data.size(), 50u);
  for (const auto& ex : data) {
    const std::size_t k = static_cast<std::size_t>(ex.gold[0] - 'a');
    EXPECT_TRUE(LegalContexts(y, 0, k).count(ex.context.left));
    EXPECT_TRUE(LegalContexts(y, k + 1, y.size()).count(ex.context.right));
    EXPECT_EQ(ex.typed, ex.gold);
  }
}

TEST(GenerateTest, SpanInequalitiesAndKeys) {
  const auto corpus = ::imt::testing::ChainCorpus(30, 2000, 6, 8);
  GwlanGenOptions opt;
  opt.seed = 11;
  opt.examples_per_sentence = 5;
  const auto keyfn = TypedKeyFunction::Prefix();
  const auto data = GenerateGwlanData(corpus, keyfn, opt);
  ASSERT_EQ(data.size(), 10000u);
  std::size_t i = 0;
  for (const auto& [src, y] : corpus) {
    for (int e = 0; e < 5; ++e, ++i) {
      const auto& ex = data[i];
      const auto k = static_cast<std::size_t>(std::find(y.begin(), y.end(), ex.gold) - y.begin());
      ASSERT_LT(k, y.size());
      EXPECT_TRUE(LegalContexts(y, 0, k).count(ex.context.left));
      EXPECT_TRUE(LegalContexts(y, k + 1, y.size()).count(ex.context.right));
      EXPECT_TRUE(keyfn.Key(ex.gold).starts_with(ex.typed));
      EXPECT_GE(ex.typed.size(), 1u);
      EXPECT_LE(ex.typed.size(), 4u);
    }
  }
}

TEST(GenerateTest, AdjacentLeftSpanFrequency) {
  // Observable event: c_l non-empty and ending right before y_k, i.e. b_l = k
  // with a_l < k. Under uniform spans its probability is k / ((k+1)(k+2)/2).
  const auto corpus = ::imt::testing::ChainCorpus(40, 10000, 12, 9);
  GwlanGenOptions opt;
  opt.seed = 99;
  const auto data = GenerateGwlanData(corpus, TypedKeyFunction::Prefix(), opt);
  ASSERT_EQ(data.size(), 10000u);
  double mean = 0.0, var = 0.0, hits = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& y = corpus[i].second;
    const auto k =
        static_cast<std::size_t>(std::find(y.begin(), y.end(), data[i].gold) - y.begin());
    const double kd = static_cast<double>(k);
    const double p = kd / ((kd + 1.0) * (kd + 2.0) / 2.0);
    mean += p;
    var += p * (1.0 - p);
    const auto& left = data[i].context.left;
    if (!left.empty() && k > 0 && left.back() == y[k - 1]) hits += 1.0;
  }
  EXPECT_LE(std::abs(hits - mean), 3.0 * std::sqrt(var)) << hits << " vs " << mean;
}

TEST(GenerateTest, InitialsUseFullKeyAndSeedIsDeterministic) {
  auto keyfn = TypedKeyFunction::Initials({{U'中', U'z'}, {U'国', U'g'}});
  const std::vector<model::WordPair> pairs{{W("china"), W("中国 人")}};
  GwlanGenOptions opt;
  opt.seed = 1;
  opt.examples_per_sentence = 20;
  const auto data = GenerateGwlanData(pairs, keyfn, opt);
  for (const auto& ex : data) EXPECT_EQ(ex.typed, keyfn.Key(ex.gold));
  std::ostringstream a, b;
  WriteGwlanData(a, data);
  WriteGwlanData(b, GenerateGwlanData(pairs, keyfn, opt));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_TRUE(GenerateGwlanData({{W("x"), {}}}, keyfn, opt).empty());
}

TEST(EvalAccuracyTest, Fixtures) {
  EXPECT_EQ(EvalAccuracy(W("dog cat"), W("dog cat")), 1.0);
  EXPECT_EQ(EvalAccuracy(W("dog cat"), W("dog bird")), 0.5);
  EXPECT_NEAR(EvalAccuracy(W("a b c d e f g h i j"), W("a b c d e f g x y z")), 0.7, 1e-12);
  EXPECT_THROW(EvalAccuracy(W("a"), W("a b")), InvalidArgument);
}

TEST(DatasetIoTest, RoundTripAndErrors) {
  std::vector<GwlanExample> data{{W("x y"), {W("a"), {}}, "b", "bee"},
                                 {W("z"), {{}, W("c d")}, "q", "queue"}};
  std::stringstream ss;
  WriteGwlanData(ss, data);
  EXPECT_EQ(ss.str(), "x y\ta\t\tb\tbee\nz\t\tc d\tq\tqueue\n");
  EXPECT_EQ(ReadGwlanData(ss), data);
  std::istringstream bad("x\t\t\tb\tbee\nbroken line\n");
  try {
    ReadGwlanData(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 2u);
  }
}

TEST(EvaluateTest, ContextBeatsFrequencyOnChainModel) {
  const auto corpus = ::imt::testing::ChainCorpus(20, 400, 2, 6);
  auto m = std::make_shared<model::ReferenceModel>(
      model::TrainReferenceModel(corpus, model::ModelConfig{}));
  model::ReferenceScorer scorer(m);
  const auto trie = TargetTrie(*m);
  GwlanGenOptions opt;
  opt.seed = 5;
  const auto data = GenerateGwlanData(::imt::testing::ChainCorpus(20, 300, 77, 6),
                                      TypedKeyFunction::Prefix(), opt);
  const auto report = EvaluateGwlan(scorer, trie, data);
  EXPECT_EQ(report.examples, 300u);
  EXPECT_GT(report.complete_word_acc, report.transtable_acc);
}

TEST(EvaluateTest, ContextIgnoredByBaseline) {
  const auto keyfn = TypedKeyFunction::Prefix();
  // The baseline takes no context argument at all; same inputs, same answer.
  EXPECT_EQ(TransTablePredict(ChienLex(), {}, W("chien"), keyfn, "c"),
            TransTablePredict(ChienLex(), {}, W("chien"), keyfn, "c"));
}

}  // namespace
}  // namespace imt::autocomplete
