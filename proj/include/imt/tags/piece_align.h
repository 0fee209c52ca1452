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

#ifndef IMT_TAGS_PIECE_ALIGN_H_
#define IMT_TAGS_PIECE_ALIGN_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "imt/core/sentence.h"
#include "imt/model/hmm_aligner.h"

namespace imt::tags {

struct PieceAlignment {
  std::vector<std::optional<Span>> spans;  // per piece; nullopt = unassigned
  std::size_t violations = 0;

  friend bool operator==(const PieceAlignment&, const PieceAlignment&) = default;
};

// Links leaving `piece` for a target outside `span`, plus links entering
// `span` from outside `piece`. An unassigned piece violates every link it
// has.
std::size_t PieceViolations(const model::Alignment& links, Span piece,
                            const std::optional<Span>& span);

// Assigns each piece a non-empty target span; spans are disjoint and follow
// piece order. Among such assignments the DP picks, in priority order: fewest
// unassigned pieces (only possible when tgt_len < pieces), fewest violations,
// smallest total span length, then leftmost starts. Links are deduplicated.
// Throws InvalidArgument on empty, overlapping or unordered pieces, or links
// targeting positions >= tgt_len.
PieceAlignment PieceAlign(const model::Alignment& links, const std::vector<Span>& pieces,
                          std::size_t tgt_len);

}  // namespace imt::tags

#endif  // IMT_TAGS_PIECE_ALIGN_H_
