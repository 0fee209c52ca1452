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

#ifndef IMT_DECODE_DECODER_H_
#define IMT_DECODE_DECODER_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "imt/core/sentence.h"
#include "imt/decode/constraints.h"
#include "imt/model/scorer.h"
#include "imt/tm/confusion_network.h"

namespace imt::decode {

struct DecodeConfig {
  std::size_t beam_size = 4;
  // 0 selects 2 * |src| + 5, raised to the constraint footprint if needed.
  std::size_t max_len = 0;
  // Finished hypotheses are compared by score / len^length_penalty.
  double length_penalty = 0.0;
  bool record_trace = false;
};

// Optional translation-memory guidance: a confusion network whose paths earn
// an additive reward.
struct TmBias {
  const tm::ConfusionNetwork* cn = nullptr;
  tm::CnBiasOptions options;
};

struct Hypothesis {
  std::vector<std::string> tokens;  // without the end marker
  double score = 0.0;
  model::ScorerState scorer_state;
  Coverage coverage;
  std::optional<tm::CnState> cn_state;
  bool finished = false;
};

struct TraceItem {
  std::size_t row = 0;
  std::vector<std::string> tokens;
  double score = 0.0;
  bool finished = false;
};

struct StepTrace {
  std::size_t step = 0;
  std::size_t expansions = 0;  // hypotheses expanded at this step
  std::vector<TraceItem> beam;
};

struct DecodeStats {
  std::size_t scorer_calls = 0;
  std::size_t expansions = 0;
  std::size_t max_step_expansions = 0;
  std::size_t rows = 1;
  std::size_t steps = 0;
  std::vector<StepTrace> trace;  // filled when DecodeConfig::record_trace is set
};

struct DecodeResult {
  Hypothesis best;
  DecodeStats stats;
};

// The one place partial scores are accumulated, shared with the brute-force
// oracle so equal derivations give bit-identical scores.
inline double AccumulateScore(double score, double logprob, double bonus) {
  return score + logprob + bonus;
}

std::size_t EffectiveMaxLen(const Sentence& src, const ConstraintSet& cs, const DecodeConfig& cfg);

// Plain beam search. Finished hypotheses take beam slots at the step they
// finish, so beam_size 1 is greedy decoding.
DecodeResult BeamSearch(const model::Scorer& scorer, const Sentence& src, const DecodeConfig& cfg,
                        const TmBias* bias = nullptr);

// Grid beam search over (length x constraint words covered); constraints are
// a bag of words, prefix included.
DecodeResult Gbs(const model::Scorer& scorer, const Sentence& src, const ConstraintSet& cs,
                 const DecodeConfig& cfg, const TmBias* bias = nullptr);

// Single beam split into coverage banks of floor(k / (C + 1)) slots, the
// remainder going to the full-coverage bank.
DecodeResult Dba(const model::Scorer& scorer, const Sentence& src, const ConstraintSet& cs,
                 const DecodeConfig& cfg, const TmBias* bias = nullptr);

// Ordered grid beam search: rows are completed pieces; pieces are atomic and
// the prefix is anchored at position 0.
DecodeResult Ogbs(const model::Scorer& scorer, const Sentence& src, const ConstraintSet& cs,
                  const DecodeConfig& cfg, const TmBias* bias = nullptr);

struct BruteForceResult {
  Hypothesis best;
  bool found = false;
  std::size_t sequences = 0;  // token sequences of length 1..max_len visited
};

inline constexpr double kMaxBruteForceSpace = 1e6;

// Exhaustive argmax over all outputs of length 1..max_len that satisfy `cs`
// (bag or ordered per cs.ordered). Throws SearchSpaceTooLarge when
// |V|^max_len exceeds kMaxBruteForceSpace.
BruteForceResult BruteForceConstrained(const model::Scorer& scorer, const Sentence& src,
                                       const ConstraintSet& cs, std::size_t max_len,
                                       double length_penalty = 0.0);

// One JSON object per step: {"step", "expansions", "beam": [...]}.
std::string TraceJsonLines(const DecodeStats& stats);

}  // namespace imt::decode

#endif  // IMT_DECODE_DECODER_H_
