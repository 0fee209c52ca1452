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

// Acceptance runner: one PASS/FAIL line per primary criterion. Every check
// compares the library against an oracle written here, not against itself.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "imt/autocomplete/gwlan.h"
#include "imt/cli/bleu.h"
#include "imt/core/error.h"
#include "imt/decode/constraints.h"
#include "imt/decode/decoder.h"
#include "imt/model/hmm_aligner.h"
#include "imt/service/service.h"
#include "imt/tags/markup.h"
#include "imt/tags/piece_align.h"
#include "imt/tags/reinsert.h"
#include "imt/tm/confusion_network.h"
#include "imt/tm/terms.h"
#include "imt/tm/tm_index.h"
#include "test_util.h"

namespace imt {
namespace {

using testing::HashBigramScorer;
using testing::Letters;
using testing::P;
using testing::W;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Checker {
 public:
  void Expect(bool cond, const std::string& what) {
    if (cond) return;
    ++failures_;
    if (first_.empty()) first_ = what;
  }
  Outcome Done(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, std::to_string(failures_) + " failed checks, first: " + first_};
  }

 private:
  std::size_t failures_ = 0;
  std::string first_;
};

const Sentence kSrc = Tokenize("x");

decode::DecodeConfig Cfg(std::size_t beam, std::size_t max_len) {
  decode::DecodeConfig c;
  c.beam_size = beam;
  c.max_len = max_len;
  return c;
}

struct Instance {
  std::uint64_t seed;
  std::size_t vocab;
  std::size_t max_len;
  decode::ConstraintSet cs;
};

// vocab 2..4, max_len 2..5, one or two pieces; ordered pieces may be 2 long
// and the first may be a prefix.
Instance RandomInstance(std::mt19937_64& rng, bool ordered) {
  Instance in;
  in.seed = rng();
  in.vocab = 2 + rng() % 3;
  in.max_len = 2 + rng() % 4;
  const auto letters = Letters(in.vocab);
  in.cs.ordered = ordered;
  const std::size_t n = 1 + rng() % 2;
  std::size_t budget = in.max_len;
  for (std::size_t i = 0; i < n; ++i) {
    decode::Piece p;
    const std::size_t len = ordered ? 1 + rng() % 2 : 1;
    for (std::size_t k = 0; k < len && budget > 0; ++k, --budget) {
      p.push_back(letters[rng() % letters.size()]);
    }
    if (p.empty()) break;
    if (ordered && i == 0 && rng() % 3 == 0) {
      in.cs.prefix = p;
    } else {
      in.cs.pieces.push_back(p);
    }
  }
  return in;
}

// Satisfaction written out longhand, independent of decode::Satisfies.
bool HasAllWords(const std::vector<std::string>& out, const decode::ConstraintSet& cs) {
  std::multiset<std::string> have(out.begin(), out.end());
  for (const auto& w : cs.Words()) {
    auto it = have.find(w);
    if (it == have.end()) return false;
    have.erase(it);
  }
  return true;
}

bool HasOrderedPieces(const std::vector<std::string>& out, const decode::ConstraintSet& cs) {
  std::size_t pos = 0;
  if (!cs.prefix.empty()) {
    if (out.size() < cs.prefix.size() || !std::equal(cs.prefix.begin(), cs.prefix.end(), out.begin())) {
      return false;
    }
    pos = cs.prefix.size();
  }
  for (const auto& p : cs.pieces) {
    bool found = false;
    for (; pos + p.size() <= out.size(); ++pos) {
      if (std::equal(p.begin(), p.end(), out.begin() + static_cast<std::ptrdiff_t>(pos))) {
        pos += p.size();
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

// Exhaustive search over V^1..V^max_len, independent of the library oracle.
std::vector<std::string> Exhaustive(const model::Scorer& scorer, const decode::ConstraintSet& cs,
                                    std::size_t max_len, double* best_score) {
  const auto start = scorer.Start(kSrc);
  const auto vocab = scorer.OutputVocabulary(start);
  std::vector<std::string> best, cur;
  double best_s = -std::numeric_limits<double>::infinity();
  bool found = false;
  auto rec = [&](auto&& self, const model::ScorerState& st, double score) -> void {
    if (!cur.empty()) {
      const bool ok = cs.ordered ? HasOrderedPieces(cur, cs) : HasAllWords(cur, cs);
      if (ok) {
        const double s = decode::AccumulateScore(score, scorer.ScoreNext(st, model::kEndOfSentence).logprob, 0.0);
        if (!found || s > best_s) {
          found = true;
          best_s = s;
          best = cur;
        }
      }
    }
    if (cur.size() == max_len) return;
    for (const auto& w : vocab) {
      const auto step = scorer.ScoreNext(st, w);
      cur.push_back(w);
      self(self, step.next, decode::AccumulateScore(score, step.logprob, 0.0));
      cur.pop_back();
    }
  };
  rec(rec, start, 0.0);
  *best_score = best_s;
  return best;
}

Outcome OracleEquivalence() {
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2026);
  std::size_t n = 0;
  for (int t = 0; t < 120; ++t) {
    for (bool ordered : {false, true}) {
      const Instance in = RandomInstance(rng, ordered);
      HashBigramScorer scorer(Letters(in.vocab), in.seed);
      double want_score = 0.0;
      const auto want = Exhaustive(scorer, in.cs, in.max_len, &want_score);
      const auto lib = decode::BruteForceConstrained(scorer, kSrc, in.cs, in.max_len);
      const auto got = ordered ? decode::Ogbs(scorer, kSrc, in.cs, Cfg(100000, in.max_len))
                               : decode::Gbs(scorer, kSrc, in.cs, Cfg(100000, in.max_len));
      const std::string tag = (ordered ? "ogbs #" : "gbs #") + std::to_string(t);
      c.Expect(got.best.tokens == want, tag + " differs from exhaustive search");
      c.Expect(lib.best.tokens == want, tag + " library brute force differs");
      c.Expect(got.best.score == want_score, tag + " score differs");
      ++n;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.Expect(secs < 30.0, "runtime " + std::to_string(secs) + " s");
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu instances (gbs and ogbs), %.2f s", n, secs);
  return c.Done(buf);
}

Outcome SatisfactionSweep() {
  Checker c;
  std::mt19937_64 rng(7);
  std::size_t counts[3] = {0, 0, 0};
  for (int t = 0; t < 500; ++t) {
    Instance bag = RandomInstance(rng, false);
    Instance ord = RandomInstance(rng, true);
    bag.max_len += 3;
    ord.max_len += 3;
    const std::size_t beam = 1 + rng() % 4;
    HashBigramScorer bag_scorer(Letters(bag.vocab + 2), bag.seed);
    HashBigramScorer ord_scorer(Letters(ord.vocab + 2), ord.seed);
    const auto g = decode::Gbs(bag_scorer, kSrc, bag.cs, Cfg(beam, bag.max_len));
    const auto d = decode::Dba(bag_scorer, kSrc, bag.cs, Cfg(beam, bag.max_len));
    const auto o = decode::Ogbs(ord_scorer, kSrc, ord.cs, Cfg(beam, ord.max_len));
    counts[0] += HasAllWords(g.best.tokens, bag.cs);
    counts[1] += HasAllWords(d.best.tokens, bag.cs);
    counts[2] += HasOrderedPieces(o.best.tokens, ord.cs);
  }
  c.Expect(counts[0] == 500, "gbs satisfied " + std::to_string(counts[0]) + "/500");
  c.Expect(counts[1] == 500, "dba satisfied " + std::to_string(counts[1]) + "/500");
  c.Expect(counts[2] == 500, "ogbs satisfied " + std::to_string(counts[2]) + "/500");
  return c.Done("gbs " + std::to_string(counts[0]) + "/500, dba " + std::to_string(counts[1]) +
                "/500, ogbs " + std::to_string(counts[2]) + "/500 (ordered, prefix anchored)");
}

Outcome Efficiency() {
  Checker c;
  std::mt19937_64 rng(33);
  std::size_t gbs_calls = 0, ogbs_calls = 0, worst_dba = 0;
  const std::size_t beam = 4;
  for (int t = 0; t < 30; ++t) {
    const auto letters = Letters(8);
    decode::ConstraintSet ord;
    ord.ordered = true;
    for (int p = 0; p < 2; ++p) {
      decode::Piece piece;
      const std::size_t len = 2 + rng() % 2;
      for (std::size_t k = 0; k < len; ++k) piece.push_back(letters[rng() % letters.size()]);
      ord.pieces.push_back(piece);
    }
    decode::ConstraintSet bag;
    for (const auto& w : ord.Words()) bag.pieces.push_back({w});
    HashBigramScorer scorer(letters, rng());
    const auto g = decode::Gbs(scorer, kSrc, bag, Cfg(beam, 10));
    const auto o = decode::Ogbs(scorer, kSrc, ord, Cfg(beam, 10));
    const auto d = decode::Dba(scorer, kSrc, bag, Cfg(beam, 10));
    gbs_calls += g.stats.scorer_calls;
    ogbs_calls += o.stats.scorer_calls;
    worst_dba = std::max(worst_dba, d.stats.max_step_expansions);
    c.Expect(o.stats.scorer_calls < g.stats.scorer_calls, "instance " + std::to_string(t) + " ogbs >= gbs");
  }
  c.Expect(worst_dba <= beam, "dba expanded " + std::to_string(worst_dba) + " in one step");
  return c.Done("scorer calls ogbs " + std::to_string(ogbs_calls) + " < gbs " + std::to_string(gbs_calls) +
                " over 30 instances; dba max step expansions " + std::to_string(worst_dba) + " <= beam " +
                std::to_string(beam));
}

std::vector<std::string> RandomSentence(std::mt19937_64& rng, int vocab, int min_len, int max_len) {
  const int len = min_len + static_cast<int>(rng() % static_cast<unsigned>(max_len - min_len + 1));
  std::vector<std::string> s;
  for (int i = 0; i < len; ++i) s.push_back("w" + std::to_string(rng() % static_cast<unsigned>(vocab)));
  return s;
}

Outcome ConfusionNetworks() {
  Checker c;
  std::mt19937_64 rng(17);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 5;
    std::vector<std::vector<std::string>> targets;
    std::vector<double> scores;
    for (std::size_t i = 0; i < n; ++i) {
      targets.push_back(RandomSentence(rng, 5, 1, 7));
      scores.push_back(static_cast<double>(rng() % 4));
    }
    const auto cn = tm::BuildConfusionNetwork(targets, scores);
    for (std::size_t i = 0; i < n; ++i) {
      // Walk the columns by hand: one arc per column carries sentence i.
      std::vector<std::string> path;
      std::size_t owned = 0;
      for (const auto& col : cn.columns) {
        for (const auto& arc : col) {
          if (std::find(arc.sentences.begin(), arc.sentences.end(), i) == arc.sentences.end()) continue;
          ++owned;
          if (!arc.is_epsilon()) path.push_back(arc.token);
        }
      }
      c.Expect(owned == cn.columns.size(), "set " + std::to_string(t) + " sentence without a full path");
      c.Expect(path == targets[i], "set " + std::to_string(t) + " path read back differs");
    }
    const auto same = RandomSentence(rng, 5, 1, 7);
    c.Expect(tm::BuildConfusionNetwork({same, same, same}, {0.3, 0.3, 0.3}).ArcCount() == same.size(),
             "identical set arc count");
  }
  for (int t = 0; t < 50; ++t) {
    HashBigramScorer scorer(Letters(4), static_cast<std::uint64_t>(t));
    const auto cn = tm::BuildConfusionNetwork({RandomSentence(rng, 4, 1, 5), RandomSentence(rng, 4, 1, 5)},
                                              {0.9, 0.4});
    decode::TmBias bias{&cn, {}};
    bias.options.lambda = 0.0;
    const auto plain = decode::BeamSearch(scorer, kSrc, Cfg(3, 6));
    const auto biased = decode::BeamSearch(scorer, kSrc, Cfg(3, 6), &bias);
    c.Expect(plain.best.tokens == biased.best.tokens, "lambda 0 changed the output");
  }
  // Forced path: the model prefers "the house", the memory holds "a house".
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
  const auto plain = decode::BeamSearch(scorer, src, {});
  const auto index = tm::TmIndex::FromPairs({P("das haus", "a house"), P("ein hund", "a dog")});
  std::vector<std::vector<std::string>> targets;
  std::vector<double> scores;
  for (const auto& h : tm::FuzzyRetrieve(index, src.words())) {
    targets.push_back(h.entry.tgt);
    scores.push_back(h.score);
  }
  const auto cn = tm::BuildConfusionNetwork(targets, scores);
  decode::TmBias bias{&cn, {}};
  bias.options.lambda = 0.7;
  const auto forced = decode::BeamSearch(scorer, src, {}, &bias);
  c.Expect(plain.best.tokens == W("the house"), "unbiased fixture output " + Join(plain.best.tokens));
  c.Expect(forced.best.tokens == W("a house"), "forced path output " + Join(forced.best.tokens));
  return c.Done("200 sets read back, identical sets compact, lambda=0 neutral on 50 decodes, forced path \"" +
                Join(forced.best.tokens) + "\"");
}

// Dynamic-programming edit distance over tokens, for the linear scan.
double ScanScore(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const std::size_t m = std::max(a.size(), b.size());
  if (m == 0) return 1.0;
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return 1.0 - static_cast<double>(row[b.size()]) / static_cast<double>(m);
}

Outcome FuzzyRetrieval() {
  Checker c;
  std::mt19937_64 rng(21);
  std::vector<tm::TmEntry> entries;
  for (std::size_t i = 0; i < 1000; ++i) {
    entries.push_back({(i * 7919) % 100003, RandomSentence(rng, 40, 1, 8), RandomSentence(rng, 40, 1, 8)});
  }
  const auto index = tm::TmIndex::Build(entries);
  for (int q = 0; q < 200; ++q) {
    const auto query = RandomSentence(rng, 40, 1, 8);
    std::vector<std::pair<double, std::uint64_t>> scan;
    for (const auto& e : entries) {
      const double s = ScanScore(query, e.src);
      if (s > 0.0) scan.emplace_back(-s, e.id);
    }
    std::sort(scan.begin(), scan.end());
    for (std::size_t n : {1u, 3u, 5u}) {
      const auto got = tm::FuzzyRetrieve(index, query, tm::kDefaultCandidates, n);
      bool same = got.size() == std::min(n, scan.size());
      for (std::size_t i = 0; same && i < got.size(); ++i) {
        same = got[i].entry.id == scan[i].second && std::abs(got[i].score + scan[i].first) < 1e-12;
      }
      c.Expect(same, "query " + std::to_string(q) + " top-" + std::to_string(n) + " differs");
    }
  }
  const auto exact = tm::FuzzyRetrieve(index, entries[17].src);
  c.Expect(!exact.empty() && exact[0].score == 1.0, "exact match score");
  const double two_thirds = tm::FuzzyScore(W("a b c"), W("a b d"));
  c.Expect(std::abs(two_thirds - 2.0 / 3.0) <= 1e-9, "2/3 fixture");
  char buf[120];
  std::snprintf(buf, sizeof buf, "1000-pair index = linear scan on 200 queries; exact = %.1f; fixture %.12f",
                exact.empty() ? 0.0 : exact[0].score, two_thirds);
  return c.Done(std::string(buf) + " (2/3 within 1e-9)");
}

double PathLogProb(const model::HmmAlignModel& m, const std::vector<std::string>& src,
                   const std::vector<std::string>& tgt, const std::vector<int>& states) {
  double lp = 0.0;
  std::size_t prev = 0;
  for (std::size_t j = 0; j < tgt.size(); ++j) {
    const int s = states[j];
    double p;
    if (s == 0) {
      p = m.null_prob * m.NullEmission(tgt[j]);
    } else {
      p = m.TransitionProb(src.size(), prev, static_cast<std::size_t>(s)) *
          m.Emission(src[static_cast<std::size_t>(s - 1)], tgt[j]);
      prev = static_cast<std::size_t>(s);
    }
    lp += p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
  }
  return lp;
}

Outcome HmmAligner() {
  Checker c;
  auto pairs = testing::DictionaryCorpus(8, 150, 17);
  std::mt19937 noise(1);
  for (auto& [s, t] : pairs) {
    if (noise() % 3 == 0) t.push_back("noise" + std::to_string(noise() % 3));
    if (noise() % 4 == 0 && t.size() > 1) std::swap(t[0], t[1]);
  }
  const auto em = model::TrainHmmAligner(pairs, 10);
  c.Expect(em.log_likelihood.size() == 11, "trace length");
  for (std::size_t i = 1; i < em.log_likelihood.size(); ++i) {
    c.Expect(em.log_likelihood[i] >= em.log_likelihood[i - 1] - 1e-9, "EM decreased at " + std::to_string(i));
  }

  const auto dict = model::TrainHmmAligner(testing::DictionaryCorpus(10, 300, 23), 5);
  int recovered = 0;
  for (int k = 0; k < 10; ++k) {
    const auto* v = dict.lex.Find("s" + std::to_string(k));
    if (v != nullptr && v->front().target == "t" + std::to_string(k)) ++recovered;
  }
  c.Expect(recovered >= 9, "recovered " + std::to_string(recovered) + "/10");

  std::mt19937 rng(31);
  std::vector<model::WordPair> corpus;
  for (int n = 0; n < 60; ++n) {
    model::WordPair p;
    const int len = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < len; ++i) {
      p.first.push_back("s" + std::to_string(rng() % 5));
      p.second.push_back("t" + std::to_string(rng() % 5));
    }
    corpus.push_back(p);
  }
  const auto m = model::TrainHmmAligner(corpus, 3);
  std::size_t checked = 0;
  for (std::size_t I = 1; I <= 4; ++I) {
    for (std::size_t J = 1; J <= 4; ++J) {
      for (int rep = 0; rep < 10; ++rep) {
        std::vector<std::string> src, tgt;
        for (std::size_t i = 0; i < I; ++i) src.push_back("s" + std::to_string(rng() % 5));
        for (std::size_t j = 0; j < J; ++j) tgt.push_back("t" + std::to_string(rng() % 5));
        std::vector<int> states(J, 0);
        double best = -std::numeric_limits<double>::infinity();
        std::size_t total = 1;
        for (std::size_t j = 0; j < J; ++j) total *= I + 1;
        for (std::size_t code = 0; code < total; ++code) {
          std::size_t x = code;
          for (std::size_t j = 0; j < J; ++j) {
            states[j] = static_cast<int>(x % (I + 1));
            x /= I + 1;
          }
          best = std::max(best, PathLogProb(m, src, tgt, states));
        }
        std::vector<int> vit(J, 0);
        for (const auto& [i, j] : model::ViterbiAlign(m, src, tgt)) vit[j] = static_cast<int>(i) + 1;
        c.Expect(std::abs(PathLogProb(m, src, tgt, vit) - best) <= 1e-9,
                 "viterbi " + std::to_string(I) + "x" + std::to_string(J));
        ++checked;
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "LL %.3f -> %.3f non-decreasing; dictionary %d/10; Viterbi = brute force on %zu instances",
                em.log_likelihood.front(), em.log_likelihood.back(), recovered, checked);
  return c.Done(buf);
}

// Some span pair (a, b) with lo <= a <= b <= hi yields `ctx`.
bool LegalContext(const std::vector<std::string>& y, std::size_t lo, std::size_t hi,
                  const std::vector<std::string>& ctx) {
  for (std::size_t a = lo; a <= hi; ++a) {
    for (std::size_t b = a; b <= hi; ++b) {
      if (std::equal(ctx.begin(), ctx.end(), y.begin() + static_cast<std::ptrdiff_t>(a),
                     y.begin() + static_cast<std::ptrdiff_t>(b))) {
        return true;
      }
    }
  }
  return false;
}

Outcome Gwlan() {
  Checker c;
  const auto corpus = testing::ChainCorpus(30, 2000, 6, 8);
  autocomplete::GwlanGenOptions opt;
  opt.seed = 11;
  opt.examples_per_sentence = 5;
  const auto keyfn = TypedKeyFunction::Prefix();
  const auto data = autocomplete::GenerateGwlanData(corpus, keyfn, opt);
  c.Expect(data.size() == 10000, "sample count " + std::to_string(data.size()));
  // Chain targets never repeat a word, so the gold word fixes k.
  for (std::size_t i = 0; i < data.size() && i / 5 < corpus.size(); ++i) {
    const auto& y = corpus[i / 5].second;
    const auto& ex = data[i];
    const auto k = static_cast<std::size_t>(std::find(y.begin(), y.end(), ex.gold) - y.begin());
    c.Expect(k < y.size(), "gold word outside the target");
    if (k >= y.size()) continue;
    c.Expect(LegalContext(y, 0, k, ex.context.left), "left span violates 0 <= a_l <= b_l <= k");
    c.Expect(LegalContext(y, k + 1, y.size(), ex.context.right), "right span violates k+1 <= a_r <= b_r <= |y|");
    c.Expect(!ex.typed.empty() && keyfn.Key(ex.gold).starts_with(ex.typed), "typed key not a prefix");
  }

  c.Expect(autocomplete::EvalAccuracy(W("dog cat"), W("dog cat")) == 1.0, "Acc fixture 2/2");
  c.Expect(autocomplete::EvalAccuracy(W("dog cat"), W("dog bird")) == 0.5, "Acc fixture 1/2");
  c.Expect(std::abs(autocomplete::EvalAccuracy(W("a b c d e f g h i j"), W("a b c d e f g x y z")) - 0.7) < 1e-12,
           "Acc fixture 7/10");

  const auto train = testing::ChainCorpus(20, 400, 2, 6);
  auto m = std::make_shared<model::ReferenceModel>(model::TrainReferenceModel(train, model::ModelConfig{}));
  model::ReferenceScorer scorer(m);
  const auto trie = autocomplete::TargetTrie(*m);
  autocomplete::GwlanGenOptions eval_opt;
  eval_opt.seed = 5;
  const auto eval = autocomplete::GenerateGwlanData(testing::ChainCorpus(20, 300, 77, 6), keyfn, eval_opt);
  const auto report = autocomplete::EvaluateGwlan(scorer, trie, eval);
  c.Expect(report.complete_word_acc > report.transtable_acc, "complete_word does not beat transtable");
  char buf[160];
  std::snprintf(buf, sizeof buf, "10^4 samples within spans; Acc fixtures exact; complete_word %.4f > transtable %.4f",
                report.complete_word_acc, report.transtable_acc);
  return c.Done(buf);
}

std::vector<std::pair<tags::MarkupFormat, std::string>> LoadMarkupCorpus() {
  std::ifstream in(std::string(IMT_TEST_DATA_DIR) + "/data/markup_corpus.txt");
  if (!in) throw IoError("cannot open markup corpus");
  std::vector<std::pair<tags::MarkupFormat, std::string>> lines;
  std::string line;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    lines.emplace_back(tags::ParseFormat(line.substr(0, tab)), line.substr(tab + 1));
  }
  return lines;
}

std::size_t BruteMinViolations(const model::Alignment& links, const std::vector<Span>& pieces,
                               std::size_t tgt_len) {
  // Spans are non-empty, disjoint and in piece order; unassigned only when
  // no full assignment fits.
  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::size_t best_unassigned = best;
  std::vector<std::optional<Span>> cur;
  auto rec = [&](auto&& self, std::size_t p, std::size_t from) -> void {
    if (p == pieces.size()) {
      std::size_t un = 0, v = 0;
      for (std::size_t q = 0; q < pieces.size(); ++q) {
        un += !cur[q];
        for (const auto& [s, t] : links) {
          if (pieces[q].contains(s) != (cur[q] && cur[q]->contains(t))) ++v;
        }
      }
      if (std::tie(un, v) < std::tie(best_unassigned, best)) {
        best_unassigned = un;
        best = v;
      }
      return;
    }
    cur.push_back(std::nullopt);
    self(self, p + 1, from);
    cur.pop_back();
    for (std::size_t s = from; s < tgt_len; ++s) {
      for (std::size_t e = s + 1; e <= tgt_len; ++e) {
        cur.push_back(Span{s, e});
        self(self, p + 1, e);
        cur.pop_back();
      }
    }
  };
  rec(rec, 0, 0);
  return best;
}

Outcome TagPipeline() {
  Checker c;
  const auto corpus = LoadMarkupCorpus();
  c.Expect(corpus.size() == 50, "corpus has " + std::to_string(corpus.size()) + " lines");
  std::size_t exact = 0;
  for (const auto& [format, text] : corpus) {
    const auto s = tags::ParseTagged(text, format);
    model::Alignment links;
    for (std::size_t i = 0; i < s.plain.size(); ++i) links.emplace_back(i, i);
    const std::string out = tags::ReinsertTags(s, s.plain, links, tags::PlaceTags(s, links, s.plain.size()));
    exact += out == text;
    c.Expect(out == text, "round trip: " + text);
  }

  std::mt19937 rng(17);
  std::size_t instances = 0;
  for (std::size_t src_len = 1; src_len <= 6; ++src_len) {
    for (std::size_t tgt_len = 1; tgt_len <= 6; ++tgt_len) {
      std::vector<std::vector<Span>> sets;
      for (std::size_t a = 0; a < src_len; ++a) {
        for (std::size_t b = a + 1; b <= src_len; ++b) {
          sets.push_back({Span{a, b}});
          for (std::size_t x = b; x < src_len; ++x) {
            for (std::size_t y = x + 1; y <= src_len; ++y) sets.push_back({Span{a, b}, Span{x, y}});
          }
        }
      }
      for (const auto& pieces : sets) {
        for (int draw = 0; draw < 8; ++draw) {
          model::Alignment links;
          for (std::size_t s = 0; s < src_len; ++s) {
            for (std::size_t t = 0; t < tgt_len; ++t) {
              if (rng() % 3 == 0) links.emplace_back(s, t);
            }
          }
          c.Expect(tags::PieceAlign(links, pieces, tgt_len).violations == BruteMinViolations(links, pieces, tgt_len),
                   "piece_align " + std::to_string(src_len) + "x" + std::to_string(tgt_len));
          ++instances;
        }
      }
    }
  }

  const std::vector<std::string> pool{"alpha", "beta", "*", "_", "<", "&", "#", ">",
                                      "-", "[", "]", "`", "x1", "gamma", "\\", "+"};
  std::mt19937 rrng(5);
  std::size_t reparsed = 0, tried = 0;
  for (const auto& [format, text] : corpus) {
    const auto s = tags::ParseTagged(text, format);
    for (int round = 0; round < 40; ++round) {
      const std::size_t n = rrng() % 8;
      std::vector<std::string> words;
      for (std::size_t i = 0; i < n; ++i) {
        words.push_back(!s.plain.empty() && rrng() % 2 == 0 ? s.plain[rrng() % s.plain.size()]
                                                             : pool[rrng() % pool.size()]);
      }
      const Sentence tgt = FromWords(words);
      model::Alignment links;
      for (std::size_t a = 0; a < s.plain.size(); ++a) {
        for (std::size_t b = 0; b < n; ++b) {
          if (rrng() % 4 == 0) links.emplace_back(a, b);
        }
      }
      for (auto policy : {tags::UnassignedPolicy::kDrop, tags::UnassignedPolicy::kZeroWidth}) {
        const std::string out = tags::ReinsertTags(s, tgt, links, tags::PlaceTags(s, links, n, policy));
        ++tried;
        try {
          tags::ParseTagged(out, format);
          ++reparsed;
        } catch (const ParseError&) {
          c.Expect(false, "does not re-parse: " + out);
        }
      }
    }
  }
  return c.Done("round trip " + std::to_string(exact) + "/50 byte-exact; piece_align = brute force on " +
                std::to_string(instances) + " instances; re-parse " + std::to_string(reparsed) + "/" +
                std::to_string(tried));
}

Outcome Bleu() {
  Checker c;
  const std::vector<std::string> hyp{"the cat sat on the mat", "a b c d e"};
  const std::vector<std::string> ref{"the cat is on the mat", "a b c d e"};
  const auto same = cli::CorpusBleu(hyp, hyp);
  // Hand counts: clipped n-gram matches 10/11, 7/9, 4/7, 2/5; BP = 1.
  const double hand = 100.0 * std::pow((10.0 / 11) * (7.0 / 9) * (4.0 / 7) * (2.0 / 5), 0.25);
  const auto got = cli::CorpusBleu(hyp, ref);
  c.Expect(cli::FormatBleu(same).rfind("BLEU = 100.00", 0) == 0, "hyp==ref gives " + cli::FormatBleu(same));
  c.Expect(std::abs(got.score - hand) <= 0.01, "fixture " + std::to_string(got.score));
  char buf[96];
  std::snprintf(buf, sizeof buf, "hyp==ref %.2f; fixture %.2f vs hand %.2f", same.score, got.score, hand);
  return c.Done(buf);
}

Outcome ApiConformance() {
  using nlohmann::json;
  Checker c;
  std::vector<model::WordPair> corpus{
      P("das abkommen ist gut", "The agreement is good"), P("das haus ist gross", "The house is big"),
      P("der vertrag ist neu", "The treaty is new"),      P("das abkommen ist neu", "The agreement is new"),
      P("das ist gut", "this is good"),                   P("die these ist gut", "the thesis is good"),
      P("ein vertrag", "a treaty"),
  };
  for (int i = 0; i < 3; ++i) corpus.push_back(P("das haus", "the house"));
  for (int i = 0; i < 2; ++i) corpus.push_back(P("das haus", "a house"));
  model::ModelConfig mc;
  mc.order = 2;
  service::ServiceConfig cfg;
  cfg.max_len = 8;
  cfg.users.push_back({"alice", "t0k3n"});
  const service::Service svc(
      cfg, std::make_shared<const model::ReferenceModel>(model::TrainReferenceModel(corpus, mc)),
      std::make_shared<const tm::TmIndex>(tm::TmIndex::FromPairs(
          {P("das abkommen ist gut", "The agreement is good"), P("der vertrag ist neu", "The treaty is new")})),
      std::make_shared<const tm::TermStore>(
          tm::TermStore({{W("abkommen"), W("agreement")}, {W("vertrag"), W("treaty")}})));

  const std::vector<std::string> files{"dynamic_word", "dynamic_sentence", "dynamic_both", "auto_translation",
                                       "auto_translation_memory", "auto_translation_xml", "static_suggestion",
                                       "selection_suggestion", "error_no_segments", "error_unknown_function",
                                       "error_bad_token", "error_missing_source", "error_infeasible"};
  std::set<std::string> fns, fields;
  const std::set<std::string> want_fields{"ime_suggestion", "sentence_suggestion", "auto_translation",
                                          "term_list", "sentence_example_list", "segment_suggestion"};
  for (const auto& name : files) {
    std::ifstream in(std::string(IMT_TEST_DATA_DIR) + "/golden/" + name + ".json");
    if (!in) {
      c.Expect(false, "missing golden " + name);
      continue;
    }
    const json golden = json::parse(in);
    const auto r = svc.Handle(golden.at("request"));
    c.Expect(r.status == golden.at("status").get<int>(), name + " status");
    c.Expect(r.body == golden.at("response"), name + " body");
    if (r.status == 200) {
      fns.insert(golden["request"]["header"]["fn"].get<std::string>());
      for (const auto& [k, v] : r.body.items()) {
        if (want_fields.count(k)) fields.insert(k);
      }
    }
  }
  c.Expect(fns.size() == 4, std::to_string(fns.size()) + " handlers covered");
  c.Expect(fields == want_fields, std::to_string(fields.size()) + "/6 response fields seen");
  return c.Done(std::to_string(files.size()) + " golden files match; " + std::to_string(fns.size()) +
                " handlers; fields " + std::to_string(fields.size()) + "/6 exact; no webui linked");
}

}  // namespace
}  // namespace imt

int main() {
  const std::vector<std::pair<std::string, std::function<imt::Outcome()>>> criteria{
      {"constrained search equals brute force", imt::OracleEquivalence},
      {"constraint satisfaction sweep", imt::SatisfactionSweep},
      {"efficiency ordering", imt::Efficiency},
      {"confusion network properties", imt::ConfusionNetworks},
      {"fuzzy retrieval", imt::FuzzyRetrieval},
      {"HMM aligner", imt::HmmAligner},
      {"GWLAN", imt::Gwlan},
      {"tag pipeline", imt::TagPipeline},
      {"BLEU", imt::Bleu},
      {"API conformance", imt::ApiConformance},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    imt::Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
