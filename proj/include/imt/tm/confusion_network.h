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

#ifndef IMT_TM_CONFUSION_NETWORK_H_
#define IMT_TM_CONFUSION_NETWORK_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace imt::tm {

// The epsilon arc label. Real tokens are never empty.
inline constexpr std::string_view kEpsilon = "";

struct CnArc {
  std::string token;  // kEpsilon for a skip arc
  int support = 0;
  std::vector<std::size_t> sentences;  // input indices, ascending

  bool is_epsilon() const { return token.empty(); }
  friend bool operator==(const CnArc&, const CnArc&) = default;
};

// Linear column graph. Position p sits before column p; position
// columns.size() is the end. Every input sentence owns exactly one arc per
// column.
struct ConfusionNetwork {
  std::vector<std::vector<CnArc>> columns;
  std::size_t num_sentences = 0;

  std::size_t ArcCount() const;
  // Tokens along the path owned by input sentence `s`, epsilons skipped.
  std::vector<std::string> ReadPath(std::size_t s) const;
  bool HasEpsilon(std::size_t column) const;
};

// Pivot-based merging. Sentences are added in descending score order (ties by
// input order); each is aligned to the current columns by token edit distance
// with tie preference match > substitution > deletion > insertion.
ConfusionNetwork BuildConfusionNetwork(const std::vector<std::vector<std::string>>& targets,
                                       const std::vector<double>& scores);

// Decoding-time position set over a confusion network.
struct CnState {
  std::vector<std::size_t> positions{0};  // sorted, unique
  bool matched = false;                   // last step extended a path

  friend bool operator==(const CnState&, const CnState&) = default;
};

struct CnStep {
  double bonus = 0.0;
  CnState next;
};

struct CnBiasOptions {
  double lambda = 0.7;
  // Optional per-sentence weights (e.g. fuzzy scores); the bonus of an arc is
  // lambda times the largest weight among its sentences.
  std::optional<std::vector<double>> sentence_weights;
};

// Epsilon closure of the active positions.
std::vector<std::size_t> CnClosure(const ConfusionNetwork& cn, const std::vector<std::size_t>& pos);

// Rewards `word` when it labels an arc leaving a position in the epsilon
// closure; the state then moves past every such arc. The end marker is
// rewarded when the end position is reachable. Otherwise the state is kept.
CnStep CnBias(const ConfusionNetwork& cn, const CnState& state, std::string_view word,
              const CnBiasOptions& opts);

}  // namespace imt::tm

#endif  // IMT_TM_CONFUSION_NETWORK_H_
