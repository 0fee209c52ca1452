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

#include "imt/decode/tm_guided.h"

#include "imt/tm/confusion_network.h"

namespace imt::decode {

TmGuidance RetrieveGuidance(const tm::TmIndex& index, const Sentence& src,
                            std::size_t candidates, std::size_t retrieved) {
  TmGuidance g;
  if (index.size() == 0 || src.empty()) return g;
  g.matches = tm::FuzzyRetrieve(index, src.words(), candidates, retrieved);
  if (g.matches.empty()) return g;
  std::vector<std::vector<std::string>> targets;
  std::vector<double> scores;
  for (const auto& m : g.matches) {
    targets.push_back(m.entry.tgt);
    scores.push_back(m.score);
  }
  g.cn = tm::BuildConfusionNetwork(targets, scores);
  return g;
}

TmGuidedResult TmGuidedDecode(const model::Scorer& scorer, const Sentence& src,
                              const DecodeConfig& cfg, const tm::TmIndex& index,
                              const tm::CnBiasOptions& options, std::size_t candidates,
                              std::size_t retrieved) {
  TmGuidance g = RetrieveGuidance(index, src, candidates, retrieved);
  TmGuidedResult out;
  if (g.cn) {
    const TmBias bias{&*g.cn, options};
    out.decode = BeamSearch(scorer, src, cfg, &bias);
  } else {
    out.decode = BeamSearch(scorer, src, cfg);
  }
  out.matches = std::move(g.matches);
  return out;
}

}  // namespace imt::decode
