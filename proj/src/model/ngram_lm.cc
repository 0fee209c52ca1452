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

#include "imt/model/ngram_lm.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "imt/core/error.h"

namespace imt::model {

NgramLM NgramLM::Train(const std::vector<std::vector<std::string>>& corpus, int order,
                       double discount) {
  if (order < 1) throw InvalidArgument("ngram lm: order must be >= 1");
  if (!(discount > 0.0 && discount < 1.0)) {
    throw InvalidArgument("ngram lm: discount must be in (0, 1)");
  }
  if (corpus.empty()) throw InvalidArgument("ngram lm: empty corpus");

  NgramLM lm;
  lm.order_ = order;
  lm.discount_ = discount;
  lm.words_ = {std::string(kUnk), std::string(kBos), std::string(kEos)};
  std::set<std::string> vocab;
  for (const auto& s : corpus) {
    for (const auto& w : s) {
      if (w != kBos && w != kEos && w != kUnk) vocab.insert(w);
    }
  }
  lm.words_.insert(lm.words_.end(), vocab.begin(), vocab.end());
  lm.RebuildIndex();

  lm.unigram_.assign(lm.words_.size(), 0);
  lm.tables_.assign(static_cast<std::size_t>(order), {});
  std::vector<WordId> seq;
  for (const auto& s : corpus) {
    seq.clear();
    seq.push_back(lm.bos());
    for (const auto& w : s) seq.push_back(lm.Id(w));
    seq.push_back(lm.eos());
    for (std::size_t i = 1; i < seq.size(); ++i) {
      ++lm.unigram_[static_cast<std::size_t>(seq[i])];
      ++lm.total_tokens_;
      for (std::size_t k = 1; k < static_cast<std::size_t>(order) && k <= i; ++k) {
        std::vector<WordId> ctx(seq.begin() + static_cast<std::ptrdiff_t>(i - k),
                                seq.begin() + static_cast<std::ptrdiff_t>(i));
        auto& entry = lm.tables_[k][ctx];
        ++entry.total;
        ++entry.next[seq[i]];
      }
    }
  }
  lm.distinct_unigrams_ = static_cast<std::size_t>(
      std::count_if(lm.unigram_.begin(), lm.unigram_.end(), [](auto c) { return c > 0; }));

  // Backoff weights, lowest order first so lower distributions are final.
  for (std::size_t k = 1; k < lm.tables_.size(); ++k) {
    for (auto& [ctx, entry] : lm.tables_[k]) {
      const std::span<const WordId> lower(ctx.data() + 1, ctx.size() - 1);
      double seen_lower = 0.0;
      for (const auto& [w, c] : entry.next) seen_lower += lm.ProbAt(w, lower);
      const double left = discount * static_cast<double>(entry.next.size()) /
                          static_cast<double>(entry.total);
      const double denom = 1.0 - seen_lower;
      entry.alpha = denom > 0.0 ? left / denom : 0.0;
    }
  }
  return lm;
}

void NgramLM::RebuildIndex() {
  index_.clear();
  for (std::size_t i = 0; i < words_.size(); ++i) index_.emplace(words_[i], static_cast<WordId>(i));
  distinct_unigrams_ = static_cast<std::size_t>(
      std::count_if(unigram_.begin(), unigram_.end(), [](auto c) { return c > 0; }));
}

WordId NgramLM::Id(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it == index_.end() ? unk() : it->second;
}

bool NgramLM::Contains(std::string_view word) const {
  return index_.count(std::string(word)) > 0;
}

std::vector<WordId> NgramLM::PredictableIds() const {
  std::vector<WordId> ids;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (static_cast<WordId>(i) != bos()) ids.push_back(static_cast<WordId>(i));
  }
  return ids;
}

double NgramLM::UnigramProb(WordId word) const {
  const double n = static_cast<double>(total_tokens_);
  const double c = static_cast<double>(unigram_[static_cast<std::size_t>(word)]);
  const double floor_mass = discount_ * static_cast<double>(distinct_unigrams_) / n;
  return std::max(c - discount_, 0.0) / n + floor_mass / static_cast<double>(vocab_size());
}

double NgramLM::ProbAt(WordId word, std::span<const WordId> context) const {
  if (context.empty()) return UnigramProb(word);
  const std::span<const WordId> lower = context.subspan(1);
  const auto& table = tables_[context.size()];
  auto it = table.find(std::vector<WordId>(context.begin(), context.end()));
  if (it == table.end()) return ProbAt(word, lower);
  const ContextEntry& e = it->second;
  auto hit = e.next.find(word);
  if (hit != e.next.end()) {
    return (static_cast<double>(hit->second) - discount_) / static_cast<double>(e.total);
  }
  return e.alpha * ProbAt(word, lower);
}

double NgramLM::LogProb(WordId word, std::span<const WordId> history) const {
  if (word == bos()) throw InvalidArgument("ngram lm: <s> is not predictable");
  const std::size_t n = std::min(history.size(), static_cast<std::size_t>(order_ - 1));
  return std::log(ProbAt(word, history.subspan(history.size() - n)));
}

double NgramLM::SentenceLogProb(std::span<const std::string> words) const {
  std::vector<WordId> hist{bos()};
  double total = 0.0;
  for (const auto& w : words) {
    const WordId id = Id(w);
    total += LogProb(id, hist);
    hist.push_back(id);
  }
  return total + LogProb(eos(), hist);
}

}  // namespace imt::model
