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

#ifndef IMT_MODEL_REFERENCE_MODEL_H_
#define IMT_MODEL_REFERENCE_MODEL_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imt/model/hmm_aligner.h"
#include "imt/model/lex_table.h"
#include "imt/model/ngram_lm.h"
#include "imt/model/scorer.h"

namespace imt::model {

struct ScorerWeights {
  double lex = 1.0;
  double lm = 1.0;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(lex, lm);
  }
  friend bool operator==(const ScorerWeights&, const ScorerWeights&) = default;
};

struct ModelConfig {
  int order = 3;
  double discount = 0.75;
  int em_iters = 5;
  std::size_t base_keep = 4;
  ScorerWeights weights;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(order, discount, em_iters, base_keep, weights);
  }
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

using FreqTable = std::map<std::string, std::int64_t, std::less<>>;

struct ReferenceModel {
  ModelConfig config;
  NgramLM lm;               // target side
  HmmAlignModel aligner;    // target-to-source, unpruned lexicon
  LexTable lex;             // pruned t(target | source) used for scoring
  FreqTable source_freq;
  FreqTable target_freq;

  std::int64_t TargetFreq(std::string_view w) const;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(config, lm, aligner, lex, source_freq, target_freq);
  }
  friend bool operator==(const ReferenceModel&, const ReferenceModel&) = default;
};

ReferenceModel TrainReferenceModel(const std::vector<WordPair>& pairs, const ModelConfig& config);

// Archive: 8-byte magic, u32 version, then the cereal binary payload.
void SaveModel(const ReferenceModel& model, std::ostream& out);
ReferenceModel LoadModel(std::istream& in);
void SaveModelFile(const ReferenceModel& model, const std::string& path);
ReferenceModel LoadModelFile(const std::string& path);

struct ScoredWord {
  std::string word;
  double score = 0.0;

  friend bool operator==(const ScoredWord&, const ScoredWord&) = default;
};

// score(w | state) = lex * log max_i t(w | x_i) + lm * log P_LM(w | history)
//
// The lexical term falls back to kUnknownLogProb when no source word
// translates to w, and is zero for the end marker. Words outside the LM
// vocabulary are scored as <unk>.
class ReferenceScorer : public Scorer {
 public:
  explicit ReferenceScorer(std::shared_ptr<const ReferenceModel> model);
  ReferenceScorer(std::shared_ptr<const ReferenceModel> model, ScorerWeights weights);

  ScorerState Start(const Sentence& src) const override;
  StepScore ScoreNext(const ScorerState& state, std::string_view word) const override;
  std::vector<std::string> OutputVocabulary(const ScorerState& start) const override;

  // Unweighted log max_i t(w | x_i), floored.
  double LexLogProb(const ScorerState& state, std::string_view word) const;

  // Two-sided context score. Each LM term is dropped when its side is empty.
  double ContextScore(const ScorerState& start, std::span<const std::string> c_left,
                      std::span<const std::string> c_right, std::string_view word) const;

  // Ranks the whole target vocabulary (or `candidates` when given) by
  // ContextScore; ties go to higher target frequency, then lexicographic order.
  std::vector<ScoredWord> PredictWordDistribution(const Sentence& src,
                                                  std::span<const std::string> c_left,
                                                  std::span<const std::string> c_right) const;
  std::vector<ScoredWord> RankWords(const Sentence& src, std::span<const std::string> c_left,
                                    std::span<const std::string> c_right,
                                    std::span<const std::string> candidates) const;

  const ReferenceModel& model() const { return *model_; }
  const ScorerWeights& weights() const { return weights_; }

 private:
  std::vector<WordId> Context(std::span<const std::string> words, bool with_bos) const;

  std::shared_ptr<const ReferenceModel> model_;
  ScorerWeights weights_;
};

}  // namespace imt::model

#endif  // IMT_MODEL_REFERENCE_MODEL_H_
