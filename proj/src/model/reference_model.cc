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

#include "imt/model/reference_model.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <unordered_map>

#include <cereal/archives/binary.hpp>
#include <cereal/types/array.hpp>
#include <cereal/types/map.hpp>
#include <cereal/types/string.hpp>
#include <cereal/types/vector.hpp>

#include "imt/core/error.h"

namespace imt::model {
namespace {

constexpr char kMagic[8] = {'I', 'M', 'T', 'M', 'O', 'D', 'E', 'L'};
constexpr std::uint32_t kVersion = 1;

struct ReferenceCache : SourceCache {
  std::unordered_map<std::string, double> lex_max;
  std::vector<std::string> shortlist;
};

const ReferenceCache& CacheOf(const ScorerState& state) {
  return static_cast<const ReferenceCache&>(*state.source);
}

}  // namespace

std::int64_t ReferenceModel::TargetFreq(std::string_view w) const {
  auto it = target_freq.find(w);
  return it == target_freq.end() ? 0 : it->second;
}

ReferenceModel TrainReferenceModel(const std::vector<WordPair>& pairs, const ModelConfig& config) {
  if (pairs.empty()) throw InvalidArgument("train: empty corpus");
  ReferenceModel m;
  m.config = config;
  std::vector<std::vector<std::string>> targets;
  for (const auto& [src, tgt] : pairs) {
    for (const auto& w : src) ++m.source_freq[w];
    for (const auto& w : tgt) ++m.target_freq[w];
    if (!tgt.empty()) targets.push_back(tgt);
  }
  if (targets.empty()) throw InvalidArgument("train: every target sentence is empty");
  m.lm = NgramLM::Train(targets, config.order, config.discount);
  m.aligner = TrainHmmAligner(pairs, config.em_iters);
  FreqTable freq = m.source_freq;
  freq[std::string(kNullWord)] = static_cast<std::int64_t>(pairs.size());
  m.lex = PruneLexTable(m.aligner.lex, config.base_keep, freq);
  return m;
}

void SaveModel(const ReferenceModel& model, std::ostream& out) {
  out.write(kMagic, sizeof(kMagic));
  const std::uint32_t version = kVersion;
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  cereal::BinaryOutputArchive ar(out);
  ar(model);
  if (!out) throw IoError("model archive: write failed");
}

ReferenceModel LoadModel(std::istream& in) {
  char magic[sizeof(kMagic)];
  std::uint32_t version = 0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ParseError("model archive: bad magic", 0);
  }
  if (version != kVersion) throw ParseError("model archive: unsupported version", 8);
  ReferenceModel m;
  try {
    cereal::BinaryInputArchive ar(in);
    ar(m);
  } catch (const cereal::Exception& e) {
    throw ParseError(std::string("model archive: ") + e.what(), 12);
  }
  return m;
}

void SaveModelFile(const ReferenceModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model: " + path);
  SaveModel(model, out);
}

ReferenceModel LoadModelFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model: " + path);
  return LoadModel(in);
}

ReferenceScorer::ReferenceScorer(std::shared_ptr<const ReferenceModel> model)
    : ReferenceScorer(model, model->config.weights) {}

ReferenceScorer::ReferenceScorer(std::shared_ptr<const ReferenceModel> model,
                                 ScorerWeights weights)
    : model_(std::move(model)), weights_(weights) {}

ScorerState ReferenceScorer::Start(const Sentence& src) const {
  auto cache = std::make_shared<ReferenceCache>();
  std::set<std::string> shortlist;
  for (const auto& tok : src.tokens) {
    const auto* entries = model_->lex.Find(tok.surface);
    if (entries == nullptr) continue;
    for (const auto& e : *entries) {
      double& best = cache->lex_max[e.target];
      best = std::max(best, e.prob);
      shortlist.insert(e.target);
    }
  }
  if (shortlist.empty()) {
    for (WordId id : model_->lm.PredictableIds()) {
      if (id != model_->lm.unk() && id != model_->lm.eos()) shortlist.insert(model_->lm.Word(id));
    }
  }
  cache->shortlist.assign(shortlist.begin(), shortlist.end());
  ScorerState s;
  s.source = std::move(cache);
  s.history = {model_->lm.bos()};
  return s;
}

double ReferenceScorer::LexLogProb(const ScorerState& state, std::string_view word) const {
  const auto& m = CacheOf(state).lex_max;
  auto it = m.find(std::string(word));
  return it == m.end() || !(it->second > 0.0) ? kUnknownLogProb : std::log(it->second);
}

StepScore ReferenceScorer::ScoreNext(const ScorerState& state, std::string_view word) const {
  const NgramLM& lm = model_->lm;
  StepScore out;
  const bool eos = word == kEndOfSentence;
  const WordId id = eos ? lm.eos() : lm.Id(word);
  const double lex = eos ? 0.0 : LexLogProb(state, word);
  out.logprob = weights_.lex * lex + weights_.lm * lm.LogProb(id, state.history);
  out.next.source = state.source;
  out.next.history = state.history;
  out.next.history.push_back(id);
  const auto keep = static_cast<std::size_t>(std::max(lm.order() - 1, 0));
  if (out.next.history.size() > keep) {
    out.next.history.erase(out.next.history.begin(),
                           out.next.history.end() - static_cast<std::ptrdiff_t>(keep));
  }
  return out;
}

std::vector<std::string> ReferenceScorer::OutputVocabulary(const ScorerState& start) const {
  return CacheOf(start).shortlist;
}

std::vector<WordId> ReferenceScorer::Context(std::span<const std::string> words,
                                             bool with_bos) const {
  std::vector<WordId> ids;
  if (with_bos) ids.push_back(model_->lm.bos());
  for (const auto& w : words) ids.push_back(model_->lm.Id(w));
  return ids;
}

double ReferenceScorer::ContextScore(const ScorerState& start, std::span<const std::string> c_left,
                                     std::span<const std::string> c_right,
                                     std::string_view word) const {
  const NgramLM& lm = model_->lm;
  double score = weights_.lex * LexLogProb(start, word);
  std::vector<WordId> left = Context(c_left, false);
  if (!c_left.empty()) score += weights_.lm * lm.LogProb(lm.Id(word), left);
  if (!c_right.empty()) {
    left.push_back(lm.Id(word));
    score += weights_.lm * lm.LogProb(lm.Id(c_right.front()), left);
  }
  return score;
}

std::vector<ScoredWord> ReferenceScorer::PredictWordDistribution(
    const Sentence& src, std::span<const std::string> c_left,
    std::span<const std::string> c_right) const {
  std::vector<std::string> vocab;
  for (const auto& [w, c] : model_->target_freq) vocab.push_back(w);
  return RankWords(src, c_left, c_right, vocab);
}

std::vector<ScoredWord> ReferenceScorer::RankWords(const Sentence& src,
                                                   std::span<const std::string> c_left,
                                                   std::span<const std::string> c_right,
                                                   std::span<const std::string> candidates) const {
  const ScorerState start = Start(src);
  std::vector<ScoredWord> out;
  out.reserve(candidates.size());
  for (const auto& w : candidates) out.push_back({w, ContextScore(start, c_left, c_right, w)});
  std::sort(out.begin(), out.end(), [&](const ScoredWord& a, const ScoredWord& b) {
    if (a.score != b.score) return a.score > b.score;
    const auto fa = model_->TargetFreq(a.word);
    const auto fb = model_->TargetFreq(b.word);
    if (fa != fb) return fa > fb;
    return a.word < b.word;
  });
  return out;
}

}  // namespace imt::model
