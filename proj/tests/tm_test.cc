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

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "imt/core/error.h"
#include "imt/decode/decoder.h"
#include "imt/tm/confusion_network.h"
#include "imt/tm/terms.h"
#include "imt/tm/tm_index.h"
#include "test_util.h"

namespace imt::tm {
namespace {

using ::imt::testing::P;
using ::imt::testing::W;

std::vector<std::string> RandomSentence(std::mt19937_64& rng, int vocab, int min_len,
                                        int max_len) {
  const int len = min_len + static_cast<int>(rng() % static_cast<unsigned>(max_len - min_len + 1));
  std::vector<std::string> s;
  for (int i = 0; i < len; ++i) s.push_back("w" + std::to_string(rng() % vocab));
  return s;
}

std::vector<TmEntry> RandomEntries(std::mt19937_64& rng, std::size_t n, int vocab) {
  std::vector<TmEntry> entries;
  for (std::size_t i = 0; i < n; ++i) {
    // Scrambled ids so that id order differs from insertion order.
    entries.push_back({(i * 7919) % 100003, RandomSentence(rng, vocab, 1, 8),
                       RandomSentence(rng, vocab, 1, 8)});
  }
  return entries;
}

// Whole-index scan: every entry scored, sorted by (score desc, id asc).
std::vector<TmMatch> LinearScan(const std::vector<TmEntry>& entries,
                                const std::vector<std::string>& q) {
  std::vector<TmMatch> all;
  for (const auto& e : entries) all.push_back({e, FuzzyScore(q, e.src)});
  std::sort(all.begin(), all.end(), [](const TmMatch& a, const TmMatch& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.entry.id < b.entry.id;
  });
  return all;
}

// Plain recursive edit distance, exponential but fine for short inputs.
std::size_t NaiveEditDistance(const std::vector<std::string>& a, std::size_t i,
                              const std::vector<std::string>& b, std::size_t j) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  std::size_t best = NaiveEditDistance(a, i + 1, b, j + 1) + (a[i] == b[j] ? 0 : 1);
  best = std::min(best, NaiveEditDistance(a, i + 1, b, j) + 1);
  best = std::min(best, NaiveEditDistance(a, i, b, j + 1) + 1);
  return best;
}

TEST(FuzzyScoreTest, HandComputedFixture) {
  EXPECT_NEAR(FuzzyScore(W("a b c"), W("a b d")), 2.0 / 3.0, 1e-9);
  EXPECT_EQ(FuzzyScore(W("a b c"), W("a b c")), 1.0);
  EXPECT_EQ(FuzzyScore(W("a"), W("b")), 0.0);
  EXPECT_NEAR(FuzzyScore(W("a b"), W("a b c d")), 0.5, 1e-12);
}

TEST(FuzzyScoreTest, BoundsSymmetryAndDistance) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 300; ++t) {
    const auto a = RandomSentence(rng, 4, 0, 6);
    const auto b = RandomSentence(rng, 4, 0, 6);
    EXPECT_EQ(TokenEditDistance(a, b), NaiveEditDistance(a, 0, b, 0));
    const double s = FuzzyScore(a, b);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_EQ(s, FuzzyScore(b, a));
    EXPECT_EQ(FuzzyScore(a, a), 1.0);
  }
}

TEST(TmIndexTest, ExactCopyRanksFirst) {
  const auto index =
      TmIndex::FromPairs({P("the cat sat", "le chat"), P("a dog ran", "un chien"),
                          P("the dog sat", "le chien")});
  const auto res = FuzzyRetrieve(index, W("a dog ran"));
  ASSERT_FALSE(res.empty());
  EXPECT_EQ(res[0].entry.id, 1u);
  EXPECT_EQ(res[0].score, 1.0);
  EXPECT_EQ(res[0].entry.tgt, W("un chien"));
}

TEST(TmIndexTest, DuplicateIdsRejected) {
  std::vector<TmEntry> e{{3, W("a"), W("b")}, {3, W("c"), W("d")}};
  EXPECT_THROW(TmIndex::Build(e), InvalidArgument);
}

TEST(TmIndexTest, EmptyIndexAndArguments) {
  TmIndex empty;
  EXPECT_TRUE(FuzzyRetrieve(empty, W("a b")).empty());
  const auto index = TmIndex::FromPairs({P("a", "b")});
  EXPECT_THROW(FuzzyRetrieve(index, W("a"), 2, 3), InvalidArgument);
  EXPECT_THROW(FuzzyRetrieve(index, W("a"), 2, 0), InvalidArgument);
  EXPECT_TRUE(FuzzyRetrieve(index, W("zzz")).empty());
}

TEST(TmIndexTest, RebuildIsIdenticalAndPersists) {
  std::mt19937_64 rng(5);
  const auto entries = RandomEntries(rng, 200, 30);
  const auto a = TmIndex::Build(entries);
  const auto b = TmIndex::Build(entries);
  EXPECT_TRUE(a == b);
  std::stringstream ss;
  a.Save(ss);
  const auto c = TmIndex::Load(ss);
  EXPECT_TRUE(a == c);
  std::stringstream bad("NOTANIDX....");
  EXPECT_THROW(TmIndex::Load(bad), ParseError);
}

TEST(TmIndexTest, IndexedTopNEqualsLinearScan) {
  std::mt19937_64 rng(21);
  const auto entries = RandomEntries(rng, 1000, 40);
  const auto index = TmIndex::Build(entries);
  for (int q = 0; q < 200; ++q) {
    const auto query = RandomSentence(rng, 40, 1, 8);
    for (std::size_t n : {1u, 3u, 5u}) {
      auto expect = LinearScan(entries, query);
      std::erase_if(expect, [](const TmMatch& m) { return !(m.score > 0.0); });
      if (expect.size() > n) expect.resize(n);
      // Small K forces the threshold extension to do the work.
      EXPECT_EQ(FuzzyRetrieve(index, query, n, n), expect);
      EXPECT_EQ(FuzzyRetrieve(index, query, 100, n), expect);
    }
  }
}

TEST(TmIndexTest, CandidatesCoverBruteForceTopK) {
  std::mt19937_64 rng(22);
  const auto entries = RandomEntries(rng, 10000, 200);
  const auto index = TmIndex::Build(entries);
  const std::size_t k = 100;
  for (int q = 0; q < 20; ++q) {
    const auto query = RandomSentence(rng, 200, 2, 8);
    auto truth = LinearScan(entries, query);
    std::erase_if(truth, [](const TmMatch& m) { return !(m.score > 0.0); });
    if (truth.size() > k) truth.resize(k);
    std::set<std::uint64_t> got;
    for (const auto& c : index.Candidates(query, k)) got.insert(c.entry.id);
    for (const auto& t : truth) EXPECT_TRUE(got.count(t.entry.id)) << t.entry.id;
  }
}

TEST(ExampleRetrieveTest, DelegatesToFuzzyTopThree) {
  std::mt19937_64 rng(9);
  const auto entries = RandomEntries(rng, 300, 12);
  const auto index = TmIndex::Build(entries);
  for (int q = 0; q < 50; ++q) {
    const auto query = RandomSentence(rng, 12, 2, 6);
    const auto ex = ExampleRetrieve(index, query);
    EXPECT_EQ(ex, FuzzyRetrieve(index, query, 100, 3));
    EXPECT_EQ(ex.size(), 3u);
  }
  const auto ex = ExampleRetrieve(index, entries[17].src);
  EXPECT_EQ(ex[0].score, 1.0);
}

TEST(ConfusionNetworkTest, IdenticalSentencesMerge) {
  const auto cn = BuildConfusionNetwork({W("a b"), W("a b")}, {1.0, 1.0});
  ASSERT_EQ(cn.columns.size(), 2u);
  EXPECT_EQ(cn.ArcCount(), 2u);
  EXPECT_EQ(cn.columns[0][0].token, "a");
  EXPECT_EQ(cn.columns[0][0].support, 2);
  EXPECT_EQ(cn.columns[1][0].support, 2);
}

TEST(ConfusionNetworkTest, SubstitutionSharesColumn) {
  const auto cn = BuildConfusionNetwork({W("a b"), W("a c")}, {1.0, 0.5});
  ASSERT_EQ(cn.columns.size(), 2u);
  std::set<std::string> col;
  for (const auto& arc : cn.columns[1]) {
    EXPECT_EQ(arc.support, 1);
    col.insert(arc.token);
  }
  EXPECT_EQ(col, (std::set<std::string>{"b", "c"}));
}

TEST(ConfusionNetworkTest, ScoresOrderThePivot) {
  // The higher-scoring sentence is the pivot even when listed second.
  const auto cn = BuildConfusionNetwork({W("x"), W("a b c")}, {0.1, 0.9});
  EXPECT_EQ(cn.columns.size(), 3u);
  EXPECT_EQ(cn.ReadPath(0), W("x"));
  EXPECT_EQ(cn.ReadPath(1), W("a b c"));
}

TEST(ConfusionNetworkTest, RandomSetsReadBackAndStayCompact) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 5;
    std::vector<std::vector<std::string>> targets;
    std::vector<double> scores;
    std::size_t tokens = 0;
    for (std::size_t i = 0; i < n; ++i) {
      targets.push_back(RandomSentence(rng, 5, 1, 7));
      scores.push_back(static_cast<double>(rng() % 4));
      tokens += targets.back().size();
    }
    const auto cn = BuildConfusionNetwork(targets, scores);
    ASSERT_EQ(cn.num_sentences, n);
    std::size_t eps = 0;
    for (const auto& col : cn.columns) {
      for (const auto& arc : col) eps += arc.is_epsilon() ? 1 : 0;
    }
    EXPECT_LE(cn.ArcCount(), tokens + eps);
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(cn.ReadPath(i), targets[i]);
  }
  for (int t = 0; t < 50; ++t) {
    const auto s = RandomSentence(rng, 5, 1, 7);
    const auto cn = BuildConfusionNetwork({s, s, s}, {0.2, 0.2, 0.2});
    EXPECT_EQ(cn.ArcCount(), s.size());
  }
}

TEST(CnBiasTest, MatchAdvancesMissKeepsState) {
  const auto cn = BuildConfusionNetwork({W("a b")}, {1.0});
  CnBiasOptions opts;
  const CnState start;
  const auto hit = CnBias(cn, start, "a", opts);
  EXPECT_DOUBLE_EQ(hit.bonus, 0.7);
  EXPECT_EQ(hit.next.positions, std::vector<std::size_t>{1});
  const auto miss = CnBias(cn, start, "z", opts);
  EXPECT_EQ(miss.bonus, 0.0);
  EXPECT_EQ(miss.next.positions, start.positions);
  const auto end = CnBias(cn, CnBias(cn, hit.next, "b", opts).next, "</s>", opts);
  EXPECT_DOUBLE_EQ(end.bonus, 0.7);
}

TEST(CnBiasTest, EpsilonArcsAreFree) {
  const auto cn = BuildConfusionNetwork({W("a b c"), W("a c")}, {1.0, 0.5});
  CnBiasOptions opts;
  auto st = CnBias(cn, CnState{}, "a", opts).next;
  const auto skip = CnBias(cn, st, "c", opts);
  EXPECT_DOUBLE_EQ(skip.bonus, 0.7);
}

TEST(CnBiasTest, SentenceWeightsScaleBonus) {
  const auto cn = BuildConfusionNetwork({W("a"), W("b")}, {1.0, 0.5});
  CnBiasOptions opts;
  opts.sentence_weights = std::vector<double>{1.0, 0.5};
  EXPECT_DOUBLE_EQ(CnBias(cn, CnState{}, "a", opts).bonus, 0.7);
  EXPECT_DOUBLE_EQ(CnBias(cn, CnState{}, "b", opts).bonus, 0.35);
}

// Toy model where "das haus" leans to "the house"; memory holds "a house".
TEST(CnBiasTest, ForcedPathReproducesGold) {
  std::vector<model::WordPair> corpus;
  for (int i = 0; i < 3; ++i) corpus.push_back(P("das haus", "the house"));
  for (int i = 0; i < 2; ++i) corpus.push_back(P("das haus", "a house"));
  corpus.push_back(P("das", "the"));
  corpus.push_back(P("haus", "house"));
  model::ModelConfig mc;
  mc.order = 2;
  auto m = std::make_shared<model::ReferenceModel>(model::TrainReferenceModel(corpus, mc));
  model::ReferenceScorer scorer(m);
  const Sentence src = Tokenize("das haus");
  decode::DecodeConfig cfg;
  const auto plain = decode::BeamSearch(scorer, src, cfg);
  ASSERT_EQ(plain.best.tokens, W("the house"));

  const auto index = TmIndex::FromPairs({P("das haus", "a house"), P("ein hund", "a dog")});
  const auto hits = FuzzyRetrieve(index, src.words());
  std::vector<std::vector<std::string>> targets;
  std::vector<double> scores;
  for (const auto& h : hits) {
    targets.push_back(h.entry.tgt);
    scores.push_back(h.score);
  }
  const auto cn = BuildConfusionNetwork(targets, scores);
  decode::TmBias bias{&cn, {}};
  EXPECT_EQ(bias.options.lambda, 0.7);
  EXPECT_EQ(decode::BeamSearch(scorer, src, cfg, &bias).best.tokens, W("a house"));
}

TEST(TermStoreTest, LongestMatchWins) {
  TermStore store({{W("machine translation"), W("机器翻译")}, {W("machine"), W("机器")}});
  const auto m = store.Lookup(W("machine translation works"));
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].source, "machine translation");
  EXPECT_EQ(m[0].target, "机器翻译");
  EXPECT_EQ(m[0].tokens, (Span{0, 2}));
  EXPECT_TRUE(store.Lookup(W("nothing here")).empty());
}

TEST(TermStoreTest, ReadsTabSeparatedLines) {
  std::istringstream in("machine translation\t机器翻译\n\nneural\t神经\n");
  const auto store = TermStore::Read(in);
  EXPECT_EQ(store.size(), 2u);
  std::istringstream bad("ok\tfine\nno tab here\n");
  try {
    TermStore::Read(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 2u);
  }
}

TEST(TermStoreTest, RandomLookupsAreDisjointAndGreedy) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    std::vector<Term> terms;
    for (int i = 0; i < 10; ++i) terms.push_back({RandomSentence(rng, 4, 1, 3), W("x")});
    TermStore store(terms);
    const auto sent = RandomSentence(rng, 4, 1, 12);
    const auto matches = store.Lookup(sent);
    std::size_t prev_end = 0;
    for (const auto& m : matches) {
      EXPECT_GE(m.tokens.start, prev_end);
      prev_end = m.tokens.end;
      const std::vector<std::string> piece(sent.begin() + m.tokens.start,
                                           sent.begin() + m.tokens.end);
      EXPECT_EQ(Join(piece), m.source);
    }
    // Independent greedy scan: at each uncovered position take the longest
    // stored source that matches.
    std::vector<Span> expect;
    for (std::size_t i = 0; i < sent.size();) {
      std::size_t best = 0;
      for (const auto& term : store.terms()) {
        const std::size_t len = term.src.size();
        if (i + len <= sent.size() && std::equal(term.src.begin(), term.src.end(), sent.begin() + i)) {
          best = std::max(best, len);
        }
      }
      if (best == 0) {
        ++i;
      } else {
        expect.push_back({i, i + best});
        i += best;
      }
    }
    std::vector<Span> got;
    for (const auto& m : matches) got.push_back(m.tokens);
    EXPECT_EQ(got, expect);
  }
}

}  // namespace
}  // namespace imt::tm
