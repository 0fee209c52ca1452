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

#include "imt/autocomplete/gwlan.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <random>
#include <set>

#include "imt/core/error.h"
#include "imt/core/utf8.h"

namespace imt::autocomplete {

VocabTrie TargetTrie(const model::ReferenceModel& model, TypedKeyFunction keyfn) {
  std::vector<std::pair<std::string, std::int64_t>> words(model.target_freq.begin(),
                                                          model.target_freq.end());
  return VocabTrie::Build(words, std::move(keyfn));
}

std::vector<model::ScoredWord> CompleteWord(const model::ReferenceScorer& scorer,
                                            const VocabTrie& trie, const Sentence& src,
                                            const TranslationContext& context,
                                            std::string_view typed, std::size_t limit) {
  if (typed.empty()) throw InvalidArgument("complete_word: empty typed sequence");
  std::vector<std::string> cands;
  for (auto& wc : trie.Candidates(typed)) cands.push_back(std::move(wc.word));
  if (cands.empty()) return {};
  auto ranked = scorer.RankWords(src, context.left, context.right, cands);
  if (limit > 0 && ranked.size() > limit) ranked.resize(limit);
  return ranked;
}

std::optional<std::string> TransTablePredict(const model::LexTable& lex,
                                             const model::FreqTable& freq,
                                             std::span<const std::string> src,
                                             const TypedKeyFunction& keyfn,
                                             std::string_view typed) {
  if (typed.empty()) throw InvalidArgument("transtable: empty typed sequence");
  const std::string key = keyfn.NormalizeTyped(typed);
  std::set<std::string> cands;
  for (const auto& x : src) {
    const auto* entries = lex.Find(x);
    if (entries == nullptr) continue;
    for (const auto& e : *entries) {
      if (keyfn.Key(e.target).starts_with(key)) cands.insert(e.target);
    }
  }
  std::optional<std::string> best;
  std::int64_t best_freq = -1;
  for (const auto& w : cands) {  // ascending, so ties keep the smaller word
    auto it = freq.find(w);
    const std::int64_t f = it == freq.end() ? 0 : it->second;
    if (f > best_freq) {
      best_freq = f;
      best = w;
    }
  }
  return best;
}

namespace {

// Uniform (a, b) with lo <= a <= b <= hi.
std::pair<std::size_t, std::size_t> SampleSpan(std::mt19937_64& rng, std::size_t lo,
                                               std::size_t hi) {
  const std::size_t n = hi - lo + 1;
  std::uniform_int_distribution<std::size_t> dist(0, n * (n + 1) / 2 - 1);
  std::size_t r = dist(rng);
  for (std::size_t a = lo;; ++a) {
    const std::size_t row = hi - a + 1;  // choices of b for this a
    if (r < row) return {a, a + r};
    r -= row;
  }
}

}  // namespace

std::vector<GwlanExample> GenerateGwlanData(const std::vector<model::WordPair>& pairs,
                                            const TypedKeyFunction& keyfn,
                                            const GwlanGenOptions& options) {
  if (options.max_typed == 0) throw InvalidArgument("gwlan gen: max_typed must be >= 1");
  std::mt19937_64 rng(options.seed);
  std::vector<GwlanExample> out;
  for (const auto& [src, tgt] : pairs) {
    if (tgt.empty()) continue;
    for (std::size_t e = 0; e < options.examples_per_sentence; ++e) {
      std::uniform_int_distribution<std::size_t> pick(0, tgt.size() - 1);
      const std::size_t k = pick(rng);
      const auto [al, bl] = SampleSpan(rng, 0, k);
      const auto [ar, br] = SampleSpan(rng, k + 1, tgt.size());
      GwlanExample ex;
      ex.src = src;
      ex.context.left.assign(tgt.begin() + al, tgt.begin() + bl);
      ex.context.right.assign(tgt.begin() + ar, tgt.begin() + br);
      ex.gold = tgt[k];
      const std::string key = keyfn.Key(ex.gold);
      if (keyfn.mode() == TypedKeyFunction::Mode::kInitials) {
        ex.typed = key;
      } else {
        const auto cps = utf8::Decode(key);
        std::uniform_int_distribution<std::size_t> len(1, std::min(options.max_typed, cps.size()));
        const std::size_t n = len(rng);
        ex.typed = n == cps.size() ? key : key.substr(0, cps[n].byte_offset);
      }
      out.push_back(std::move(ex));
    }
  }
  return out;
}

double EvalAccuracy(std::span<const std::string> predictions, std::span<const std::string> gold) {
  if (predictions.size() != gold.size()) {
    throw InvalidArgument("eval_accuracy: prediction and gold lengths differ");
  }
  if (gold.empty()) return 0.0;
  std::size_t match = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) match += predictions[i] == gold[i] ? 1 : 0;
  return static_cast<double>(match) / static_cast<double>(gold.size());
}

void WriteGwlanData(std::ostream& out, const std::vector<GwlanExample>& examples) {
  for (const auto& ex : examples) {
    out << Join(ex.src) << '\t' << Join(ex.context.left) << '\t' << Join(ex.context.right) << '\t'
        << ex.typed << '\t' << ex.gold << '\n';
  }
}

std::vector<GwlanExample> ReadGwlanData(std::istream& in) {
  std::vector<GwlanExample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 5) throw ParseError("gwlan data: expected 5 tab-separated fields", lineno);
    GwlanExample ex{SplitWhitespace(fields[0]),
                    {SplitWhitespace(fields[1]), SplitWhitespace(fields[2])},
                    fields[3],
                    fields[4]};
    if (ex.typed.empty() || ex.gold.empty()) {
      throw ParseError("gwlan data: empty typed sequence or gold word", lineno);
    }
    out.push_back(std::move(ex));
  }
  return out;
}

GwlanReport EvaluateGwlan(const model::ReferenceScorer& scorer, const VocabTrie& trie,
                          const std::vector<GwlanExample>& examples) {
  std::vector<std::string> gold, cw, tt;
  for (const auto& ex : examples) {
    gold.push_back(ex.gold);
    const Sentence src = FromWords(ex.src);
    const auto ranked = CompleteWord(scorer, trie, src, ex.context, ex.typed, 1);
    cw.push_back(ranked.empty() ? std::string() : ranked[0].word);
    const auto t = TransTablePredict(scorer.model().lex, scorer.model().target_freq, ex.src,
                                     trie.key_function(), ex.typed);
    tt.push_back(t.value_or(std::string()));
  }
  GwlanReport r;
  r.examples = examples.size();
  r.complete_word_acc = EvalAccuracy(cw, gold);
  r.transtable_acc = EvalAccuracy(tt, gold);
  return r;
}

}  // namespace imt::autocomplete
