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

#ifndef IMT_MODEL_SCORER_H_
#define IMT_MODEL_SCORER_H_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "imt/core/sentence.h"

namespace imt::model {

inline constexpr double kUnknownLogProb = -20.0;
inline constexpr std::string_view kEndOfSentence = "</s>";

// Per-source data a scorer precomputes once per decode.
struct SourceCache {
  virtual ~SourceCache() = default;
};

// Immutable decoding state. Two states compare equal when they share the
// source cache and the same token history.
struct ScorerState {
  std::shared_ptr<const SourceCache> source;
  std::vector<std::int32_t> history;

  friend bool operator==(const ScorerState& a, const ScorerState& b) {
    return a.source == b.source && a.history == b.history;
  }
};

struct StepScore {
  double logprob = 0.0;
  ScorerState next;
};

// The probability oracle consumed by search. Implementations must be pure:
// the same (state, word) always yields the same StepScore.
class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual ScorerState Start(const Sentence& src) const = 0;
  virtual StepScore ScoreNext(const ScorerState& state, std::string_view word) const = 0;

  // Words the decoder may emit for this source, sorted, excluding kEndOfSentence.
  virtual std::vector<std::string> OutputVocabulary(const ScorerState& start) const = 0;
};

}  // namespace imt::model

#endif  // IMT_MODEL_SCORER_H_
