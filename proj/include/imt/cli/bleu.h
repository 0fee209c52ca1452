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

#ifndef IMT_CLI_BLEU_H_
#define IMT_CLI_BLEU_H_

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace imt::cli {

inline constexpr int kBleuOrder = 4;

struct BleuResult {
  double score = 0.0;  // 0..100
  std::array<std::size_t, kBleuOrder> matches{};  // clipped n-gram matches
  std::array<std::size_t, kBleuOrder> totals{};   // hypothesis n-grams
  double brevity_penalty = 0.0;
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
};

// Corpus-level, case-sensitive BLEU over whitespace tokens with one reference
// per segment: geometric mean of clipped 1..4-gram precisions times the
// brevity penalty. Without smoothing any zero precision gives 0; with it,
// orders 2..4 use (m + 1) / (t + 1). Throws InvalidArgument when the segment
// counts differ.
BleuResult CorpusBleu(const std::vector<std::string>& hyps, const std::vector<std::string>& refs,
                      bool smooth = false);

// "BLEU = 63.40 90.9/77.8/57.1/40.0 (BP = 1.000 ratio = 1.000 hyp_len = 11 ref_len = 11)"
std::string FormatBleu(const BleuResult& r);

}  // namespace imt::cli

#endif  // IMT_CLI_BLEU_H_
