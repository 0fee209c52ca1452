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

#ifndef IMT_AUTOCOMPLETE_GWLAN_H_
#define IMT_AUTOCOMPLETE_GWLAN_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imt/core/sentence.h"
#include "imt/core/vocab_trie.h"
#include "imt/model/lex_table.h"
#include "imt/model/reference_model.h"

namespace imt::autocomplete {

struct TranslationContext {
  std::vector<std::string> left;
  std::vector<std::string> right;

  friend bool operator==(const TranslationContext&, const TranslationContext&) = default;
};

struct GwlanExample {
  std::vector<std::string> src;
  TranslationContext context;
  std::string typed;
  std::string gold;

  friend bool operator==(const GwlanExample&, const GwlanExample&) = default;
};

// Trie over the model's target vocabulary with training counts.
VocabTrie TargetTrie(const model::ReferenceModel& model,
                     TypedKeyFunction keyfn = TypedKeyFunction::Prefix());

// Words compatible with `typed`, ranked by the scorer's context score (ties:
// higher frequency, then lexicographic). `limit` 0 keeps all. Throws
// InvalidArgument when `typed` is empty.
std::vector<model::ScoredWord> CompleteWord(const model::ReferenceScorer& scorer,
                                            const VocabTrie& trie, const Sentence& src,
                                            const TranslationContext& context,
                                            std::string_view typed, std::size_t limit = 0);

// Frequency baseline: among translations of any source word whose typed key
// starts with `typed`, the most frequent (ties lexicographic).
std::optional<std::string> TransTablePredict(const model::LexTable& lex,
                                             const model::FreqTable& freq,
                                             std::span<const std::string> src,
                                             const TypedKeyFunction& keyfn,
                                             std::string_view typed);

struct GwlanGenOptions {
  std::uint64_t seed = 0;
  std::size_t examples_per_sentence = 1;
  std::size_t max_typed = 4;
};

// Samples, per example, a target position k, a left span [a_l, b_l) with
// 0 <= a_l <= b_l <= k and a right span [a_r, b_r) with k+1 <= a_r <= b_r <= |y|,
// each uniform over its legal (a, b) pairs. In prefix mode the typed string
// is a key prefix of uniform length in [1, min(max_typed, |key|)]; in
// initials mode it is the full key. Pairs with an empty target are skipped.
std::vector<GwlanExample> GenerateGwlanData(const std::vector<model::WordPair>& pairs,
                                            const TypedKeyFunction& keyfn,
                                            const GwlanGenOptions& options);

// Exact-match proportion. Throws InvalidArgument on length mismatch; an
// empty list scores 0.
double EvalAccuracy(std::span<const std::string> predictions, std::span<const std::string> gold);

// "src<TAB>c_l<TAB>c_r<TAB>s<TAB>w" lines, tokens space-joined.
void WriteGwlanData(std::ostream& out, const std::vector<GwlanExample>& examples);
// Throws ParseError with the 1-based line number on malformed lines.
std::vector<GwlanExample> ReadGwlanData(std::istream& in);

struct GwlanReport {
  std::size_t examples = 0;
  double complete_word_acc = 0.0;
  double transtable_acc = 0.0;
};

GwlanReport EvaluateGwlan(const model::ReferenceScorer& scorer, const VocabTrie& trie,
                          const std::vector<GwlanExample>& examples);

}  // namespace imt::autocomplete

#endif  // IMT_AUTOCOMPLETE_GWLAN_H_
