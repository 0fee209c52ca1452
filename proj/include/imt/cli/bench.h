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

#ifndef IMT_CLI_BENCH_H_
#define IMT_CLI_BENCH_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "imt/decode/constraints.h"
#include "imt/model/reference_model.h"

namespace imt::cli {

struct BenchOptions {
  std::uint64_t seed = 0;
  std::size_t instances = 20;
  std::size_t beam = 4;
  std::size_t max_len = 0;
  std::size_t num_pieces = 2;
  std::size_t piece_len = 2;
  std::size_t min_src_len = 3;
  std::size_t max_src_len = 6;
};

struct BenchInstance {
  Sentence src;
  decode::ConstraintSet constraints;  // ordered pieces
};

// Sources drawn from `sources` when given (cycled), otherwise random words
// from the model's source vocabulary; pieces are random target words.
std::vector<BenchInstance> MakeBenchInstances(const model::ReferenceModel& model,
                                              const std::vector<std::string>& sources,
                                              const BenchOptions& options);

struct BenchRow {
  std::string algorithm;  // beam_search, gbs, dba, ogbs
  std::size_t instances = 0;
  double scorer_calls = 0.0;  // mean per sentence
  double wall_ms = 0.0;       // mean per sentence
  double satisfied = 0.0;     // fraction of outputs meeting the constraints
  std::size_t max_step_expansions = 0;
};

// gbs and dba receive the pieces as a bag of words; ogbs keeps them ordered.
std::vector<BenchRow> RunBench(const model::ReferenceModel& model,
                               const std::vector<BenchInstance>& instances,
                               const BenchOptions& options);

std::string BenchTsv(const std::vector<BenchRow>& rows);
std::string BenchJsonLines(const std::vector<BenchRow>& rows);

}  // namespace imt::cli

#endif  // IMT_CLI_BENCH_H_
