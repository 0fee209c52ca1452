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

#ifndef IMT_DECODE_TM_GUIDED_H_
#define IMT_DECODE_TM_GUIDED_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "imt/decode/decoder.h"
#include "imt/tm/tm_index.h"

namespace imt::decode {

struct TmGuidance {
  std::vector<tm::TmMatch> matches;
  std::optional<tm::ConfusionNetwork> cn;  // unset when nothing matched
};

// Fuzzy retrieval followed by confusion-network construction over the
// retrieved targets.
TmGuidance RetrieveGuidance(const tm::TmIndex& index, const Sentence& src,
                            std::size_t candidates = tm::kDefaultCandidates,
                            std::size_t retrieved = tm::kDefaultRetrieved);

struct TmGuidedResult {
  DecodeResult decode;
  std::vector<tm::TmMatch> matches;  // retrieved entries feeding the network
};

// Retrieves the closest entries, merges their targets into a confusion
// network and runs beam search biased toward it. With no matches this is
// plain beam search.
TmGuidedResult TmGuidedDecode(const model::Scorer& scorer, const Sentence& src,
                              const DecodeConfig& cfg, const tm::TmIndex& index,
                              const tm::CnBiasOptions& options = {},
                              std::size_t candidates = tm::kDefaultCandidates,
                              std::size_t retrieved = tm::kDefaultRetrieved);

}  // namespace imt::decode

#endif  // IMT_DECODE_TM_GUIDED_H_
