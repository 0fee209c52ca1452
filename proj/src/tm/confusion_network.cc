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

#include "imt/tm/confusion_network.h"

#include <algorithm>
#include <numeric>

#include "imt/core/error.h"
#include "imt/model/scorer.h"

namespace imt::tm {

std::size_t ConfusionNetwork::ArcCount() const {
  std::size_t n = 0;
  for (const auto& col : columns) n += col.size();
  return n;
}

bool ConfusionNetwork::HasEpsilon(std::size_t column) const {
  for (const auto& arc : columns[column]) {
    if (arc.is_epsilon()) return true;
  }
  return false;
}

std::vector<std::string> ConfusionNetwork::ReadPath(std::size_t s) const {
  std::vector<std::string> out;
  for (const auto& col : columns) {
    for (const auto& arc : col) {
      if (std::binary_search(arc.sentences.begin(), arc.sentences.end(), s)) {
        if (!arc.is_epsilon()) out.push_back(arc.token);
        break;
      }
    }
  }
  return out;
}

namespace {

enum class Op { kMatch, kSub, kDel, kIns };

void AddToArc(std::vector<CnArc>& col, std::string_view token, std::size_t sentence) {
  for (auto& arc : col) {
    if (arc.token == token) {
      ++arc.support;
      arc.sentences.push_back(sentence);
      return;
    }
  }
  col.push_back({std::string(token), 1, {sentence}});
}

bool ColumnHas(const std::vector<CnArc>& col, std::string_view token) {
  return std::any_of(col.begin(), col.end(), [&](const CnArc& a) { return a.token == token; });
}

}  // namespace

ConfusionNetwork BuildConfusionNetwork(const std::vector<std::vector<std::string>>& targets,
                                       const std::vector<double>& scores) {
  if (scores.size() != targets.size()) {
    throw InvalidArgument("confusion network: scores and targets differ in length");
  }
  ConfusionNetwork cn;
  cn.num_sentences = targets.size();
  std::vector<std::size_t> order(targets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  std::vector<std::size_t> added;  // sentences already merged
  for (std::size_t s : order) {
    const auto& y = targets[s];
    for (const auto& tok : y) {
      if (tok.empty()) throw InvalidArgument("confusion network: empty token");
    }
    const std::size_t K = cn.columns.size();
    const std::size_t n = y.size();
    // cost[i][j]: aligning the first i columns with the first j tokens.
    std::vector<std::vector<std::size_t>> cost(K + 1, std::vector<std::size_t>(n + 1, 0));
    for (std::size_t i = 0; i <= K; ++i) cost[i][0] = i;
    for (std::size_t j = 0; j <= n; ++j) cost[0][j] = j;
    for (std::size_t i = 1; i <= K; ++i) {
      for (std::size_t j = 1; j <= n; ++j) {
        const std::size_t diag = cost[i - 1][j - 1] + (ColumnHas(cn.columns[i - 1], y[j - 1]) ? 0 : 1);
        cost[i][j] = std::min({diag, cost[i - 1][j] + 1, cost[i][j - 1] + 1});
      }
    }

    std::vector<Op> ops;
    std::size_t i = K, j = n;
    while (i > 0 || j > 0) {
      if (i > 0 && j > 0) {
        const bool has = ColumnHas(cn.columns[i - 1], y[j - 1]);
        if (has && cost[i][j] == cost[i - 1][j - 1]) {
          ops.push_back(Op::kMatch);
          --i, --j;
          continue;
        }
        if (!has && cost[i][j] == cost[i - 1][j - 1] + 1) {
          ops.push_back(Op::kSub);
          --i, --j;
          continue;
        }
      }
      if (i > 0 && cost[i][j] == cost[i - 1][j] + 1) {
        ops.push_back(Op::kDel);
        --i;
      } else {
        ops.push_back(Op::kIns);
        --j;
      }
    }
    std::reverse(ops.begin(), ops.end());

    std::vector<std::vector<CnArc>> columns;
    std::size_t ci = 0, yj = 0;
    for (Op op : ops) {
      switch (op) {
        case Op::kMatch:
        case Op::kSub:
          columns.push_back(std::move(cn.columns[ci++]));
          AddToArc(columns.back(), y[yj++], s);
          break;
        case Op::kDel:
          columns.push_back(std::move(cn.columns[ci++]));
          AddToArc(columns.back(), kEpsilon, s);
          break;
        case Op::kIns: {
          std::vector<CnArc> col;
          if (!added.empty()) {
            CnArc eps{std::string(kEpsilon), static_cast<int>(added.size()), added};
            col.push_back(std::move(eps));
          }
          AddToArc(col, y[yj++], s);
          columns.push_back(std::move(col));
          break;
        }
      }
    }
    cn.columns = std::move(columns);
    added.insert(std::upper_bound(added.begin(), added.end(), s), s);
  }
  for (auto& col : cn.columns) {
    for (auto& arc : col) std::sort(arc.sentences.begin(), arc.sentences.end());
  }
  return cn;
}

std::vector<std::size_t> CnClosure(const ConfusionNetwork& cn,
                                   const std::vector<std::size_t>& pos) {
  std::vector<std::size_t> out;
  for (std::size_t p : pos) {
    out.push_back(p);
    while (p < cn.columns.size() && cn.HasEpsilon(p)) out.push_back(++p);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CnStep CnBias(const ConfusionNetwork& cn, const CnState& state, std::string_view word,
              const CnBiasOptions& opts) {
  CnStep step;
  step.next = state;
  step.next.matched = false;
  const auto closure = CnClosure(cn, state.positions);
  auto weight = [&](const CnArc& arc) {
    if (!opts.sentence_weights) return 1.0;
    double w = 0.0;
    for (std::size_t s : arc.sentences) {
      if (s < opts.sentence_weights->size()) w = std::max(w, (*opts.sentence_weights)[s]);
    }
    return w;
  };

  if (word == model::kEndOfSentence) {
    if (std::binary_search(closure.begin(), closure.end(), cn.columns.size())) {
      step.bonus = opts.lambda;
    }
    return step;
  }
  std::vector<std::size_t> next;
  double best = 0.0;
  for (std::size_t p : closure) {
    if (p >= cn.columns.size()) continue;
    for (const auto& arc : cn.columns[p]) {
      if (!arc.is_epsilon() && arc.token == word) {
        next.push_back(p + 1);
        best = std::max(best, weight(arc));
      }
    }
  }
  if (next.empty()) return step;
  std::sort(next.begin(), next.end());
  next.erase(std::unique(next.begin(), next.end()), next.end());
  step.bonus = opts.lambda * best;
  step.next.positions = std::move(next);
  step.next.matched = true;
  return step;
}

}  // namespace imt::tm
