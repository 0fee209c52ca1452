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

#ifndef IMT_MODEL_NGRAM_LM_H_
#define IMT_MODEL_NGRAM_LM_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace imt::model {

using WordId = std::int32_t;

inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";
inline constexpr std::string_view kUnk = "<unk>";

// Absolute-discounting backoff n-gram model. For a seen context h:
//
//   P(w|h) = (c(h,w) - D) / c(h)                  if c(h,w) > 0
//          = alpha(h) * P(w|h')                   otherwise
//
// where h' drops the oldest word and alpha(h) carries exactly the discounted
// mass, so every conditional distribution sums to one over the vocabulary
// (all words, </s> and <unk>). The order-0 distribution interpolates the
// discounted unigram with a uniform floor. Unseen contexts back off directly.
class NgramLM {
 public:
  struct ContextEntry {
    std::int64_t total = 0;
    std::map<WordId, std::int64_t> next;
    double alpha = 1.0;

    template <class Archive>
    void serialize(Archive& ar) {
      ar(total, next, alpha);
    }
    friend bool operator==(const ContextEntry&, const ContextEntry&) = default;
  };

  NgramLM() = default;

  // Sentences are word lists without sentinels.
  static NgramLM Train(const std::vector<std::vector<std::string>>& corpus, int order,
                       double discount = 0.75);

  int order() const { return order_; }
  double discount() const { return discount_; }

  WordId bos() const { return 1; }
  WordId eos() const { return 2; }
  WordId unk() const { return 0; }

  // Unknown words map to <unk>.
  WordId Id(std::string_view word) const;
  bool Contains(std::string_view word) const;
  const std::string& Word(WordId id) const { return words_[static_cast<std::size_t>(id)]; }

  // Every predictable word: <unk>, </s> and the training vocabulary (no <s>).
  std::vector<WordId> PredictableIds() const;
  std::size_t vocab_size() const { return words_.size() - 1; }

  // `history` lists previous ids oldest first; only the last order-1 are used.
  double LogProb(WordId word, std::span<const WordId> history) const;

  // Sum of natural-log probabilities of the words plus </s>, starting after <s>.
  double SentenceLogProb(std::span<const std::string> words) const;

  const std::vector<std::map<std::vector<WordId>, ContextEntry>>& tables() const {
    return tables_;
  }

  template <class Archive>
  void serialize(Archive& ar) {
    ar(order_, discount_, words_, total_tokens_, unigram_, tables_);
    if constexpr (Archive::is_loading::value) RebuildIndex();
  }

  friend bool operator==(const NgramLM& a, const NgramLM& b) {
    return a.order_ == b.order_ && a.discount_ == b.discount_ && a.words_ == b.words_ &&
           a.total_tokens_ == b.total_tokens_ && a.unigram_ == b.unigram_ &&
           a.tables_ == b.tables_;
  }

 private:
  double ProbAt(WordId word, std::span<const WordId> context) const;
  double UnigramProb(WordId word) const;
  void RebuildIndex();

  int order_ = 1;
  double discount_ = 0.75;
  std::vector<std::string> words_;  // id -> word
  std::int64_t total_tokens_ = 0;
  std::vector<std::int64_t> unigram_;  // id -> count
  std::size_t distinct_unigrams_ = 0;
  // tables_[k] holds contexts of length k, for k = 1..order-1 (index 0 unused).
  std::vector<std::map<std::vector<WordId>, ContextEntry>> tables_;
  std::unordered_map<std::string, WordId> index_;
};

}  // namespace imt::model

#endif  // IMT_MODEL_NGRAM_LM_H_
