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

#ifndef IMT_MODEL_HMM_ALIGNER_H_
#define IMT_MODEL_HMM_ALIGNER_H_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "imt/model/lex_table.h"

namespace imt::model {

inline constexpr int kMaxJump = 7;
inline constexpr int kJumpBins = 2 * kMaxJump + 1;
inline constexpr std::size_t kLengthBuckets = 8;
inline constexpr double kInitialNullProb = 0.2;
inline constexpr double kNullEmissionFloor = 1e-10;

// Source-length bucket: 1, 2, 3, 4, 5-7, 8-11, 12-19, 20+.
std::size_t LengthBucket(std::size_t source_len);
int JumpBin(int jump);

// (source index, target index), both 0-based.
using Alignment = std::vector<std::pair<std::size_t, std::size_t>>;

using WordPair = std::pair<std::vector<std::string>, std::vector<std::string>>;

// Target-to-source HMM. Hidden states are source positions 1..I plus NULL
// states that remember the last real position. From last real position i',
//
//   P(real i)  = (1 - p0) * jump[bucket(I)][clamp(i - i')]
//   P(NULL)    = p0
//
// with i' = 0 before the first target word. The jump table is a distribution
// over clamped distances and is not renormalized per row.
struct HmmAlignModel {
  LexTable lex;  // includes kNullWord
  std::vector<std::array<double, kJumpBins>> jump;
  double null_prob = kInitialNullProb;
  std::vector<double> log_likelihood;  // one entry per EM iteration, then final
  std::size_t skipped_pairs = 0;

  double JumpProb(std::size_t source_len, int jump_distance) const;
  double TransitionProb(std::size_t source_len, std::size_t prev_pos, std::size_t next_pos) const;
  // NULL emission is floored so unseen target words can always align somewhere.
  double Emission(std::string_view source, std::string_view target) const;
  double NullEmission(std::string_view target) const;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(lex, jump, null_prob, log_likelihood, skipped_pairs);
  }
  friend bool operator==(const HmmAlignModel&, const HmmAlignModel&) = default;
};

HmmAlignModel TrainHmmAligner(const std::vector<WordPair>& pairs, int em_iters);

// Total log-likelihood of the corpus under `model` (pairs with an empty side skipped).
double CorpusLogLikelihood(const HmmAlignModel& model, const std::vector<WordPair>& pairs);

// Most probable state path; links to NULL are omitted.
Alignment ViterbiAlign(const HmmAlignModel& model, std::span<const std::string> src,
                       std::span<const std::string> tgt);

}  // namespace imt::model

#endif  // IMT_MODEL_HMM_ALIGNER_H_
