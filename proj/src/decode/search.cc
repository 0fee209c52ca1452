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

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include <json.hpp>

#include "imt/core/error.h"
#include "imt/decode/decoder.h"

namespace imt::decode {
namespace {

using model::kEndOfSentence;

// Pool order: higher score, shorter, lexicographic tokens, finished first,
// then coverage.
bool Better(const Hypothesis& a, const Hypothesis& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.tokens.size() != b.tokens.size()) return a.tokens.size() < b.tokens.size();
  if (a.tokens != b.tokens) return a.tokens < b.tokens;
  if (a.finished != b.finished) return a.finished;
  return a.coverage < b.coverage;
}

bool Same(const Hypothesis& a, const Hypothesis& b) {
  return a.finished == b.finished && a.tokens == b.tokens && a.coverage == b.coverage;
}

double Normalized(const Hypothesis& h, double alpha) {
  if (alpha == 0.0) return h.score;
  return h.score / std::pow(static_cast<double>(std::max<std::size_t>(h.tokens.size(), 1)), alpha);
}

bool BetterFinal(const Hypothesis& a, const Hypothesis& b, double alpha) {
  const double sa = Normalized(a, alpha);
  const double sb = Normalized(b, alpha);
  if (sa != sb) return sa > sb;
  if (a.tokens.size() != b.tokens.size()) return a.tokens.size() < b.tokens.size();
  return a.tokens < b.tokens;
}

void SortUnique(std::vector<Hypothesis>& v) {
  std::sort(v.begin(), v.end(), Better);
  v.erase(std::unique(v.begin(), v.end(), Same), v.end());
}

// Shared expansion logic for every decoder.
class Expander {
 public:
  Expander(const model::Scorer& scorer, const ConstraintTracker& tracker, const TmBias* bias,
           std::size_t max_len, DecodeStats& stats)
      : scorer_(scorer), tracker_(tracker), bias_(bias), max_len_(max_len), stats_(stats) {}

  Hypothesis Initial(const Sentence& src) {
    Hypothesis h;
    h.scorer_state = scorer_.Start(src);
    h.coverage = tracker_.Initial();
    if (Biased()) h.cn_state = tm::CnState{};
    std::set<std::string> vocab;
    for (auto& w : scorer_.OutputVocabulary(h.scorer_state)) vocab.insert(std::move(w));
    for (auto& w : tracker_.Words()) vocab.insert(std::move(w));
    vocab_.assign(vocab.begin(), vocab.end());
    return h;
  }

  void Expand(const Hypothesis& h, std::vector<Hypothesis>& out) {
    ++stats_.expansions;
    const std::size_t t = h.tokens.size();
    if (t < max_len_) {
      const auto forced = tracker_.Forced(h.coverage);
      if (forced) {
        Extend(h, *forced, out);
      } else {
        for (const auto& w : vocab_) Extend(h, w, out);
      }
    }
    if (t >= 1 && tracker_.Complete(h.coverage)) {
      const auto step = Score(h.scorer_state, kEndOfSentence);
      Hypothesis f;
      f.tokens = h.tokens;
      f.coverage = h.coverage;
      f.finished = true;
      f.scorer_state = step.next;
      double bonus = 0.0;
      if (Biased()) {
        const auto cb = tm::CnBias(*bias_->cn, *h.cn_state, kEndOfSentence, bias_->options);
        bonus = cb.bonus;
        f.cn_state = cb.next;
      }
      f.score = AccumulateScore(h.score, step.logprob, bonus);
      out.push_back(std::move(f));
    }
  }

  const std::vector<std::string>& vocab() const { return vocab_; }

 private:
  bool Biased() const { return bias_ != nullptr && bias_->cn != nullptr; }

  model::StepScore Score(const model::ScorerState& st, std::string_view w) {
    ++stats_.scorer_calls;
    return scorer_.ScoreNext(st, w);
  }

  void Extend(const Hypothesis& h, const std::string& w, std::vector<Hypothesis>& out) {
    covs_.clear();
    tracker_.Advance(h.coverage, w, covs_);
    if (covs_.empty()) return;
    const auto step = Score(h.scorer_state, w);
    double bonus = 0.0;
    std::optional<tm::CnState> cn;
    if (Biased()) {
      auto cb = tm::CnBias(*bias_->cn, *h.cn_state, w, bias_->options);
      bonus = cb.bonus;
      cn = std::move(cb.next);
    }
    const double score = AccumulateScore(h.score, step.logprob, bonus);
    for (auto& c : covs_) {
      if (h.tokens.size() + 1 + tracker_.Remaining(c) > max_len_) continue;
      Hypothesis child;
      child.tokens = h.tokens;
      child.tokens.push_back(w);
      child.score = score;
      child.scorer_state = step.next;
      child.coverage = std::move(c);
      child.cn_state = cn;
      out.push_back(std::move(child));
    }
  }

  const model::Scorer& scorer_;
  const ConstraintTracker& tracker_;
  const TmBias* bias_;
  std::size_t max_len_;
  DecodeStats& stats_;
  std::vector<std::string> vocab_;
  std::vector<Coverage> covs_;
};

void RecordStep(DecodeStats& stats, const DecodeConfig& cfg, std::size_t step,
                std::size_t expansions, const std::vector<std::vector<Hypothesis>>& beams,
                const std::vector<Hypothesis>& finished_now) {
  stats.steps = step;
  stats.max_step_expansions = std::max(stats.max_step_expansions, expansions);
  if (!cfg.record_trace) return;
  StepTrace st;
  st.step = step;
  st.expansions = expansions;
  for (std::size_t r = 0; r < beams.size(); ++r) {
    for (const auto& h : beams[r]) st.beam.push_back({r, h.tokens, h.score, false});
  }
  for (const auto& h : finished_now) st.beam.push_back({h.coverage.count, h.tokens, h.score, true});
  stats.trace.push_back(std::move(st));
}

DecodeResult Finish(std::vector<Hypothesis>& finals, DecodeStats stats, double alpha) {
  if (finals.empty()) {
    throw Infeasible("decode: no hypothesis satisfies the constraints within max_len");
  }
  auto best = std::min_element(finals.begin(), finals.end(),
                               [&](const Hypothesis& a, const Hypothesis& b) {
                                 return BetterFinal(a, b, alpha);
                               });
  return {std::move(*best), std::move(stats)};
}

DecodeResult GridSearch(const model::Scorer& scorer, const Sentence& src, const ConstraintSet& cs,
                        const ConstraintTracker& tracker, const DecodeConfig& cfg,
                        const TmBias* bias) {
  if (cfg.beam_size < 1) throw InvalidArgument("decode: beam_size must be >= 1");
  const std::size_t max_len = EffectiveMaxLen(src, cs, cfg);
  DecodeStats stats;
  stats.rows = tracker.Rows();
  Expander ex(scorer, tracker, bias, max_len, stats);

  std::vector<std::vector<Hypothesis>> beams(tracker.Rows());
  beams[0].push_back(ex.Initial(src));
  std::vector<Hypothesis> finals;
  std::vector<Hypothesis> children;
  for (std::size_t step = 1; step <= max_len + 1; ++step) {
    std::vector<std::vector<Hypothesis>> pools(tracker.Rows());
    std::size_t expanded = 0;
    for (const auto& row : beams) {
      for (const auto& h : row) {
        children.clear();
        ex.Expand(h, children);
        ++expanded;
        for (auto& c : children) pools[tracker.Row(c.coverage)].push_back(std::move(c));
      }
    }
    if (expanded == 0) break;
    std::vector<std::vector<Hypothesis>> next(tracker.Rows());
    std::vector<Hypothesis> finished_now;
    for (std::size_t r = 0; r < pools.size(); ++r) {
      SortUnique(pools[r]);
      const std::size_t keep = std::min(pools[r].size(), cfg.beam_size);
      for (std::size_t i = 0; i < keep; ++i) {
        auto& h = pools[r][i];
        (h.finished ? finished_now : next[r]).push_back(std::move(h));
      }
    }
    RecordStep(stats, cfg, step, expanded, next, finished_now);
    finals.insert(finals.end(), finished_now.begin(), finished_now.end());
    beams = std::move(next);
  }
  return Finish(finals, std::move(stats), cfg.length_penalty);
}

}  // namespace

std::size_t EffectiveMaxLen(const Sentence& src, const ConstraintSet& cs, const DecodeConfig& cfg) {
  const std::size_t footprint = cs.Footprint();
  if (cfg.max_len == 0) return std::max(2 * src.size() + 5, footprint);
  if (footprint > cfg.max_len) {
    throw Infeasible("decode: constraints need " + std::to_string(footprint) +
                     " tokens but max_len is " + std::to_string(cfg.max_len));
  }
  return cfg.max_len;
}

DecodeResult BeamSearch(const model::Scorer& scorer, const Sentence& src, const DecodeConfig& cfg,
                        const TmBias* bias) {
  const auto tracker = MakeNullTracker();
  return GridSearch(scorer, src, ConstraintSet{}, *tracker, cfg, bias);
}

DecodeResult Gbs(const model::Scorer& scorer, const Sentence& src, const ConstraintSet& cs,
                 const DecodeConfig& cfg, const TmBias* bias) {
  const auto tracker = MakeBagTracker(cs);
  return GridSearch(scorer, src, cs, *tracker, cfg, bias);
}

DecodeResult Ogbs(const model::Scorer& scorer, const Sentence& src, const ConstraintSet& cs,
                  const DecodeConfig& cfg, const TmBias* bias) {
  const auto tracker = MakeOrderedTracker(cs);
  return GridSearch(scorer, src, cs, *tracker, cfg, bias);
}

DecodeResult Dba(const model::Scorer& scorer, const Sentence& src, const ConstraintSet& cs,
                 const DecodeConfig& cfg, const TmBias* bias) {
  if (cfg.beam_size < 1) throw InvalidArgument("decode: beam_size must be >= 1");
  const auto tracker = MakeBagTracker(cs);
  const std::size_t max_len = EffectiveMaxLen(src, cs, cfg);
  const std::size_t k = cfg.beam_size;
  const std::size_t C = tracker->Rows() - 1;
  DecodeStats stats;
  stats.rows = 1;
  Expander ex(scorer, *tracker, bias, max_len, stats);

  std::vector<Hypothesis> beam{ex.Initial(src)};
  std::vector<Hypothesis> finals;
  std::vector<Hypothesis> children;
  for (std::size_t step = 1; step <= max_len + 1 && !beam.empty(); ++step) {
    std::vector<Hypothesis> all;
    std::vector<Hypothesis> candidates;
    for (const auto& h : beam) {
      children.clear();
      ex.Expand(h, children);
      if (children.empty()) continue;
      SortUnique(children);
      candidates.push_back(children.front());
      for (auto& c : children) {
        if (!c.finished && c.coverage.count > h.coverage.count) candidates.push_back(c);
        all.push_back(std::move(c));
      }
    }
    SortUnique(all);
    for (std::size_t i = 0; i < std::min(k, all.size()); ++i) candidates.push_back(all[i]);
    SortUnique(candidates);

    // Bank quotas by coverage; finished hypotheses live in the top bank.
    std::vector<std::size_t> quota(C + 1, k / (C + 1));
    quota[C] += k - quota[C] * (C + 1);
    std::vector<bool> taken(candidates.size(), false);
    std::size_t selected = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const std::size_t bank = candidates[i].coverage.count;
      if (quota[bank] > 0) {
        --quota[bank];
        taken[i] = true;
        ++selected;
      }
    }
    // Unused slots go to the remaining candidates, higher coverage first.
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (!taken[i]) rest.push_back(i);
    }
    std::stable_sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
      return candidates[a].coverage.count > candidates[b].coverage.count;
    });
    for (std::size_t i = 0; i < rest.size() && selected < k; ++i, ++selected) taken[rest[i]] = true;

    std::vector<Hypothesis> next;
    std::vector<Hypothesis> finished_now;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (!taken[i]) continue;
      (candidates[i].finished ? finished_now : next).push_back(std::move(candidates[i]));
    }
    RecordStep(stats, cfg, step, beam.size(), {next}, finished_now);
    finals.insert(finals.end(), finished_now.begin(), finished_now.end());
    beam = std::move(next);
  }
  return Finish(finals, std::move(stats), cfg.length_penalty);
}

BruteForceResult BruteForceConstrained(const model::Scorer& scorer, const Sentence& src,
                                       const ConstraintSet& cs, std::size_t max_len,
                                       double length_penalty) {
  cs.Validate();
  const model::ScorerState start = scorer.Start(src);
  std::set<std::string> vs;
  for (auto& w : scorer.OutputVocabulary(start)) vs.insert(std::move(w));
  for (auto& w : cs.Words()) vs.insert(std::move(w));
  const std::vector<std::string> vocab(vs.begin(), vs.end());
  if (std::pow(static_cast<double>(vocab.size()), static_cast<double>(max_len)) >
      kMaxBruteForceSpace) {
    throw SearchSpaceTooLarge("brute force: |V|^max_len exceeds the guard");
  }

  BruteForceResult res;
  std::vector<std::string> tokens;
  std::function<void(const model::ScorerState&, double)> visit = [&](const model::ScorerState& st,
                                                                     double score) {
    if (!tokens.empty()) {
      ++res.sequences;
      if (Satisfies(tokens, cs)) {
        Hypothesis h;
        h.tokens = tokens;
        const auto end = scorer.ScoreNext(st, kEndOfSentence);
        h.score = AccumulateScore(score, end.logprob, 0.0);
        h.scorer_state = end.next;
        h.finished = true;
        if (!res.found || BetterFinal(h, res.best, length_penalty)) {
          res.best = std::move(h);
          res.found = true;
        }
      }
    }
    if (tokens.size() == max_len) return;
    for (const auto& w : vocab) {
      const auto step = scorer.ScoreNext(st, w);
      tokens.push_back(w);
      visit(step.next, AccumulateScore(score, step.logprob, 0.0));
      tokens.pop_back();
    }
  };
  visit(start, 0.0);
  return res;
}

std::string TraceJsonLines(const DecodeStats& stats) {
  std::string out;
  for (const auto& st : stats.trace) {
    nlohmann::json j;
    j["step"] = st.step;
    j["expansions"] = st.expansions;
    j["beam"] = nlohmann::json::array();
    for (const auto& item : st.beam) {
      j["beam"].push_back({{"row", item.row},
                           {"tokens", item.tokens},
                           {"score", item.score},
                           {"finished", item.finished}});
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace imt::decode
