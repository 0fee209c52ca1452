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

#include "imt/cli/bench.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <memory>
#include <random>

#include "json.hpp"

#include "imt/decode/decoder.h"

namespace imt::cli {
namespace {

std::vector<std::string> Keys(const model::FreqTable& t) {
  std::vector<std::string> out;
  for (const auto& [w, c] : t) out.push_back(w);
  return out;
}

std::size_t Pick(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace

std::vector<BenchInstance> MakeBenchInstances(const model::ReferenceModel& model,
                                              const std::vector<std::string>& sources,
                                              const BenchOptions& options) {
  std::mt19937_64 rng(options.seed);
  const auto src_vocab = Keys(model.source_freq);
  const auto tgt_vocab = Keys(model.target_freq);
  if (tgt_vocab.empty() || (sources.empty() && src_vocab.empty())) return {};
  std::vector<BenchInstance> out;
  for (std::size_t i = 0; i < options.instances; ++i) {
    BenchInstance inst;
    if (!sources.empty()) {
      inst.src = Tokenize(sources[i % sources.size()]);
    } else {
      const std::size_t len = std::uniform_int_distribution<std::size_t>(
          options.min_src_len, std::max(options.min_src_len, options.max_src_len))(rng);
      std::vector<std::string> words;
      for (std::size_t k = 0; k < len; ++k) words.push_back(src_vocab[Pick(rng, src_vocab.size())]);
      inst.src = FromWords(words);
    }
    inst.constraints.ordered = true;
    for (std::size_t p = 0; p < options.num_pieces; ++p) {
      decode::Piece piece;
      for (std::size_t k = 0; k < options.piece_len; ++k) piece.push_back(tgt_vocab[Pick(rng, tgt_vocab.size())]);
      inst.constraints.pieces.push_back(std::move(piece));
    }
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<BenchRow> RunBench(const model::ReferenceModel& model,
                               const std::vector<BenchInstance>& instances,
                               const BenchOptions& options) {
  const model::ReferenceScorer scorer(std::make_shared<const model::ReferenceModel>(model));
  decode::DecodeConfig cfg;
  cfg.beam_size = options.beam;
  cfg.max_len = options.max_len;
  const char* names[] = {"beam_search", "gbs", "dba", "ogbs"};
  std::vector<BenchRow> rows;
  for (int a = 0; a < 4; ++a) {
    BenchRow row;
    row.algorithm = names[a];
    for (const auto& inst : instances) {
      decode::ConstraintSet bag = inst.constraints;
      bag.ordered = false;
      const auto start = std::chrono::steady_clock::now();
      decode::DecodeResult r;
      switch (a) {
        case 0: r = decode::BeamSearch(scorer, inst.src, cfg); break;
        case 1: r = decode::Gbs(scorer, inst.src, bag, cfg); break;
        case 2: r = decode::Dba(scorer, inst.src, bag, cfg); break;
        default: r = decode::Ogbs(scorer, inst.src, inst.constraints, cfg); break;
      }
      const auto elapsed = std::chrono::steady_clock::now() - start;
      row.wall_ms += std::chrono::duration<double, std::milli>(elapsed).count();
      row.scorer_calls += static_cast<double>(r.stats.scorer_calls);
      const bool ok = a == 3 ? decode::Satisfies(r.best.tokens, inst.constraints)
                             : decode::Satisfies(r.best.tokens, bag);
      row.satisfied += ok ? 1.0 : 0.0;
      row.max_step_expansions = std::max(row.max_step_expansions, r.stats.max_step_expansions);
      ++row.instances;
    }
    if (row.instances > 0) {
      const double n = static_cast<double>(row.instances);
      row.wall_ms /= n;
      row.scorer_calls /= n;
      row.satisfied /= n;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string BenchTsv(const std::vector<BenchRow>& rows) {
  std::string out = "algorithm\tinstances\tscorer_calls\twall_ms\tsatisfied\tmax_step_expansions\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s\t%zu\t%.1f\t%.3f\t%.3f\t%zu\n", r.algorithm.c_str(), r.instances,
                  r.scorer_calls, r.wall_ms, r.satisfied, r.max_step_expansions);
    out += buf;
  }
  return out;
}

std::string BenchJsonLines(const std::vector<BenchRow>& rows) {
  std::string out;
  for (const auto& r : rows) {
    nlohmann::json j = {{"algorithm", r.algorithm},       {"instances", r.instances},
                        {"scorer_calls", r.scorer_calls}, {"wall_ms", r.wall_ms},
                        {"satisfied", r.satisfied},       {"max_step_expansions", r.max_step_expansions}};
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace imt::cli
