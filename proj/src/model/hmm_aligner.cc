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

#include "imt/model/hmm_aligner.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "imt/core/error.h"

namespace imt::model {

std::size_t LengthBucket(std::size_t n) {
  if (n <= 4) return n == 0 ? 0 : n - 1;
  if (n <= 7) return 4;
  if (n <= 11) return 5;
  if (n <= 19) return 6;
  return 7;
}

int JumpBin(int jump) { return std::clamp(jump, -kMaxJump, kMaxJump) + kMaxJump; }

double HmmAlignModel::JumpProb(std::size_t source_len, int d) const {
  return jump[LengthBucket(source_len)][static_cast<std::size_t>(JumpBin(d))];
}

double HmmAlignModel::TransitionProb(std::size_t source_len, std::size_t prev_pos,
                                     std::size_t next_pos) const {
  const int d = static_cast<int>(next_pos) - static_cast<int>(prev_pos);
  return (1.0 - null_prob) * JumpProb(source_len, d);
}

double HmmAlignModel::Emission(std::string_view source, std::string_view target) const {
  return lex.Prob(source, target);
}

double HmmAlignModel::NullEmission(std::string_view target) const {
  return std::max(lex.Prob(kNullWord, target), kNullEmissionFloor);
}

namespace {

// Sparse row t(.|e) keyed by target id, sorted by id.
struct LexRow {
  std::vector<int> target;
  std::vector<double> prob;
  std::vector<double> count;

  std::size_t Slot(int f) const {
    auto it = std::lower_bound(target.begin(), target.end(), f);
    return static_cast<std::size_t>(it - target.begin());
  }
};

struct IdPair {
  std::vector<int> src;  // without NULL; NULL has id 0
  std::vector<int> tgt;
};

struct Trainer {
  std::vector<LexRow> t;
  std::vector<std::array<double, kJumpBins>> jump;
  double p0 = kInitialNullProb;

  std::vector<std::array<double, kJumpBins>> jump_count;
  double null_count = 0.0;
  double real_count = 0.0;

  double Lookup(int e, int f) const {
    const LexRow& row = t[static_cast<std::size_t>(e)];
    const std::size_t s = row.Slot(f);
    return s < row.target.size() && row.target[s] == f ? row.prob[s] : 0.0;
  }

  void AddCount(int e, int f, double v) {
    LexRow& row = t[static_cast<std::size_t>(e)];
    row.count[row.Slot(f)] += v;
  }

  // Forward-backward over one pair. Returns the pair log-likelihood and
  // accumulates expected counts when `accumulate` is set.
  double Process(const IdPair& p, bool accumulate) {
    const std::size_t I = p.src.size();
    const std::size_t J = p.tgt.size();
    const auto& jrow = jump[LengthBucket(I)];
    auto jp = [&](std::size_t i, std::size_t prev) {
      return jrow[static_cast<std::size_t>(JumpBin(static_cast<int>(i) - static_cast<int>(prev)))];
    };

    std::vector<std::vector<double>> emit(J, std::vector<double>(I));
    std::vector<double> emit_null(J);
    for (std::size_t j = 0; j < J; ++j) {
      for (std::size_t i = 0; i < I; ++i) emit[j][i] = Lookup(p.src[i], p.tgt[j]);
      emit_null[j] = Lookup(0, p.tgt[j]);
    }

    // Real state i (1-based) lives at [i]; NULL state carrying position p at [I + 1 + p].
    const std::size_t S = 2 * I + 2;
    std::vector<std::vector<double>> alpha(J, std::vector<double>(S, 0.0));
    std::vector<std::vector<double>> group(J + 1, std::vector<double>(I + 1, 0.0));
    std::vector<double> scale(J);
    group[0][0] = 1.0;
    double loglik = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
      const auto& g = group[j];
      auto& a = alpha[j];
      double c = 0.0;
      for (std::size_t i = 1; i <= I; ++i) {
        double s = 0.0;
        for (std::size_t q = 0; q <= I; ++q) s += g[q] * jp(i, q);
        a[i] = (1.0 - p0) * s * emit[j][i - 1];
        c += a[i];
      }
      for (std::size_t q = 0; q <= I; ++q) {
        a[I + 1 + q] = p0 * g[q] * emit_null[j];
        c += a[I + 1 + q];
      }
      if (!(c > 0.0)) return -std::numeric_limits<double>::infinity();
      scale[j] = c;
      loglik += std::log(c);
      for (auto& v : a) v /= c;
      for (std::size_t q = 0; q <= I; ++q) {
        group[j + 1][q] = (q >= 1 ? a[q] : 0.0) + a[I + 1 + q];
      }
    }
    if (!accumulate) return loglik;

    std::vector<std::vector<double>> beta(J, std::vector<double>(S, 0.0));
    std::fill(beta[J - 1].begin(), beta[J - 1].end(), 1.0);
    for (std::size_t j = J - 1; j >= 1; --j) {
      for (std::size_t q = 0; q <= I; ++q) {
        double s = 0.0;
        for (std::size_t i = 1; i <= I; ++i) s += jp(i, q) * emit[j][i - 1] * beta[j][i];
        const double b = ((1.0 - p0) * s + p0 * emit_null[j] * beta[j][I + 1 + q]) / scale[j];
        if (q >= 1) beta[j - 1][q] = b;
        beta[j - 1][I + 1 + q] = b;
      }
    }

    auto& jc = jump_count[LengthBucket(I)];
    for (std::size_t j = 0; j < J; ++j) {
      double null_post = 0.0;
      for (std::size_t i = 1; i <= I; ++i) {
        const double post = alpha[j][i] * beta[j][i];
        if (post > 0.0) AddCount(p.src[i - 1], p.tgt[j], post);
      }
      for (std::size_t q = 0; q <= I; ++q) null_post += alpha[j][I + 1 + q] * beta[j][I + 1 + q];
      if (null_post > 0.0) AddCount(0, p.tgt[j], null_post);

      const auto& g = group[j];
      for (std::size_t q = 0; q <= I; ++q) {
        if (g[q] == 0.0) continue;
        for (std::size_t i = 1; i <= I; ++i) {
          const double x =
              g[q] * (1.0 - p0) * jp(i, q) * emit[j][i - 1] * beta[j][i] / scale[j];
          jc[static_cast<std::size_t>(JumpBin(static_cast<int>(i) - static_cast<int>(q)))] += x;
          real_count += x;
        }
        null_count += g[q] * p0 * emit_null[j] * beta[j][I + 1 + q] / scale[j];
      }
    }
    return loglik;
  }

  void ResetCounts() {
    for (auto& row : t) std::fill(row.count.begin(), row.count.end(), 0.0);
    for (auto& r : jump_count) r.fill(0.0);
    null_count = real_count = 0.0;
  }

  void MaximizationStep() {
    for (auto& row : t) {
      double total = 0.0;
      for (double c : row.count) total += c;
      if (!(total > 0.0)) continue;
      for (std::size_t k = 0; k < row.prob.size(); ++k) row.prob[k] = row.count[k] / total;
    }
    for (std::size_t b = 0; b < jump.size(); ++b) {
      double total = 0.0;
      for (double c : jump_count[b]) total += c;
      if (!(total > 0.0)) continue;
      for (std::size_t d = 0; d < kJumpBins; ++d) jump[b][d] = jump_count[b][d] / total;
    }
    if (null_count + real_count > 0.0) p0 = null_count / (null_count + real_count);
  }
};

}  // namespace

HmmAlignModel TrainHmmAligner(const std::vector<WordPair>& pairs, int em_iters) {
  if (pairs.empty()) throw InvalidArgument("hmm aligner: no sentence pairs");
  if (em_iters < 1) throw InvalidArgument("hmm aligner: em_iters must be >= 1");

  HmmAlignModel model;
  std::map<std::string, int> src_ids{{std::string(kNullWord), 0}};
  std::map<std::string, int> tgt_ids;
  for (const auto& [src, tgt] : pairs) {
    if (src.empty() || tgt.empty()) continue;
    for (const auto& w : src) src_ids.emplace(w, 0);
    for (const auto& w : tgt) tgt_ids.emplace(w, 0);
  }
  std::vector<std::string> src_words, tgt_words;
  // NULL sorts first among ids regardless of spelling.
  src_words.push_back(std::string(kNullWord));
  for (auto& [w, id] : src_ids) {
    if (w == kNullWord) continue;
    id = static_cast<int>(src_words.size());
    src_words.push_back(w);
  }
  for (auto& [w, id] : tgt_ids) {
    id = static_cast<int>(tgt_words.size());
    tgt_words.push_back(w);
  }

  std::vector<IdPair> data;
  std::vector<std::vector<int>> cooc(src_words.size());
  for (const auto& [src, tgt] : pairs) {
    if (src.empty() || tgt.empty()) {
      ++model.skipped_pairs;
      continue;
    }
    IdPair p;
    for (const auto& w : src) p.src.push_back(src_ids.at(w));
    for (const auto& w : tgt) p.tgt.push_back(tgt_ids.at(w));
    for (int f : p.tgt) {
      cooc[0].push_back(f);
      for (int e : p.src) cooc[static_cast<std::size_t>(e)].push_back(f);
    }
    data.push_back(std::move(p));
  }
  if (data.empty()) throw InvalidArgument("hmm aligner: every pair has an empty side");

  Trainer tr;
  tr.t.resize(src_words.size());
  for (std::size_t e = 0; e < cooc.size(); ++e) {
    auto& fs = cooc[e];
    std::sort(fs.begin(), fs.end());
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    tr.t[e].target = fs;
    tr.t[e].prob.assign(fs.size(), fs.empty() ? 0.0 : 1.0 / static_cast<double>(fs.size()));
    tr.t[e].count.assign(fs.size(), 0.0);
  }
  std::array<double, kJumpBins> uniform;
  uniform.fill(1.0 / kJumpBins);
  tr.jump.assign(kLengthBuckets, uniform);
  tr.jump_count.assign(kLengthBuckets, {});

  for (int it = 0; it < em_iters; ++it) {
    tr.ResetCounts();
    double ll = 0.0;
    for (const auto& p : data) ll += tr.Process(p, true);
    model.log_likelihood.push_back(ll);
    tr.MaximizationStep();
  }
  double final_ll = 0.0;
  for (const auto& p : data) final_ll += tr.Process(p, false);
  model.log_likelihood.push_back(final_ll);

  for (std::size_t e = 0; e < tr.t.size(); ++e) {
    std::vector<LexEntry> entries;
    for (std::size_t k = 0; k < tr.t[e].target.size(); ++k) {
      if (tr.t[e].prob[k] > 0.0) {
        entries.push_back({tgt_words[static_cast<std::size_t>(tr.t[e].target[k])], tr.t[e].prob[k]});
      }
    }
    if (!entries.empty()) model.lex.Set(src_words[e], std::move(entries));
  }
  model.jump = tr.jump;
  model.null_prob = tr.p0;
  return model;
}

double CorpusLogLikelihood(const HmmAlignModel& model, const std::vector<WordPair>& pairs) {
  double total = 0.0;
  for (const auto& [src, tgt] : pairs) {
    if (src.empty() || tgt.empty()) continue;
    const std::size_t I = src.size();
    // Forward pass over (last real position, in-NULL) grouped states.
    std::vector<double> group(I + 1, 0.0);
    group[0] = 1.0;
    for (const auto& f : tgt) {
      std::vector<double> next(I + 1, 0.0);
      double c = 0.0;
      for (std::size_t q = 0; q <= I; ++q) {
        if (group[q] == 0.0) continue;
        for (std::size_t i = 1; i <= I; ++i) {
          next[i] += group[q] * model.TransitionProb(I, q, i) * model.Emission(src[i - 1], f);
        }
        next[q] += group[q] * model.null_prob * model.lex.Prob(kNullWord, f);
      }
      for (double v : next) c += v;
      if (!(c > 0.0)) return -std::numeric_limits<double>::infinity();
      total += std::log(c);
      for (auto& v : next) v /= c;
      group = std::move(next);
    }
  }
  return total;
}

Alignment ViterbiAlign(const HmmAlignModel& model, std::span<const std::string> src,
                       std::span<const std::string> tgt) {
  Alignment out;
  const std::size_t I = src.size();
  const std::size_t J = tgt.size();
  if (I == 0 || J == 0) return out;
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  auto lg = [](double x) { return x > 0.0 ? std::log(x) : kNegInf; };

  // State s in [1, I] is real position s; s = I + 1 + q is NULL after position q.
  const std::size_t S = 2 * I + 2;
  auto last_pos = [&](std::size_t s) { return s <= I ? s : s - I - 1; };
  std::vector<std::vector<double>> trans(I + 1, std::vector<double>(I + 1));
  for (std::size_t q = 0; q <= I; ++q) {
    for (std::size_t i = 1; i <= I; ++i) trans[q][i] = lg(model.TransitionProb(I, q, i));
  }
  const double log_null = lg(model.null_prob);

  std::vector<std::vector<double>> delta(J, std::vector<double>(S, kNegInf));
  std::vector<std::vector<std::size_t>> back(J, std::vector<std::size_t>(S, 0));
  for (std::size_t j = 0; j < J; ++j) {
    std::vector<double> emit(I + 1);
    for (std::size_t i = 1; i <= I; ++i) emit[i] = lg(model.Emission(src[i - 1], tgt[j]));
    const double emit_null = lg(model.NullEmission(tgt[j]));
    // Best predecessor per last real position q (q = 0 only before the first word).
    std::vector<double> best(I + 1, kNegInf);
    std::vector<std::size_t> arg(I + 1, 0);
    if (j == 0) {
      best[0] = 0.0;
    } else {
      for (std::size_t s = 1; s < S; ++s) {
        const std::size_t q = last_pos(s);
        if (delta[j - 1][s] > best[q]) {
          best[q] = delta[j - 1][s];
          arg[q] = s;
        }
      }
    }
    for (std::size_t i = 1; i <= I; ++i) {
      double b = kNegInf;
      std::size_t a = arg[0];
      for (std::size_t q = 0; q <= I; ++q) {
        const double v = best[q] + trans[q][i];
        if (v > b) {
          b = v;
          a = arg[q];
        }
      }
      delta[j][i] = b + emit[i];
      back[j][i] = a;
    }
    for (std::size_t q = 0; q <= I; ++q) {
      delta[j][I + 1 + q] = best[q] + log_null + emit_null;
      back[j][I + 1 + q] = arg[q];
    }
  }

  std::size_t s = 1;
  for (std::size_t k = 1; k < S; ++k) {
    if (delta[J - 1][k] > delta[J - 1][s]) s = k;
  }
  for (std::size_t j = J; j-- > 0;) {
    if (s >= 1 && s <= I) out.emplace_back(s - 1, j);
    s = back[j][s];
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace imt::model
