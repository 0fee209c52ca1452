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

#ifndef IMT_TAGS_REINSERT_H_
#define IMT_TAGS_REINSERT_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "imt/core/sentence.h"
#include "imt/model/hmm_aligner.h"
#include "imt/tags/markup.h"

namespace imt::tags {

struct TagWarning {
  std::size_t sentence = 0;
  std::optional<std::size_t> tag;
  std::string reason;

  friend bool operator==(const TagWarning&, const TagWarning&) = default;
};

enum class UnassignedPolicy {
  kDrop,       // remove the markup, keep the text
  kZeroWidth,  // keep the markup at a zero-width position
};

// Target token span per tag; zero-width for point tags. nullopt = dropped.
struct TagPlacement {
  std::vector<std::optional<Span>> spans;
  std::size_t violations = 0;
};

// Aligns tags top-down: the children of a tag are piece-aligned within the
// target span of their parent, which keeps nesting intact. Point tags land on
// the first target position aligned at or after them, clamped between their
// placed siblings. `links` are (source, target) token pairs.
TagPlacement PlaceTags(const TaggedSentence& src, const model::Alignment& links,
                       std::size_t tgt_len, UnassignedPolicy policy = UnassignedPolicy::kDrop,
                       std::vector<TagWarning>* warnings = nullptr);

// Renders `translation` with the placed tags. Target tokens linked to a
// source token with the same surface reuse its original spelling; other
// tokens are escaped for the format. A gap whose tags and whitespace match a
// source gap is copied verbatim.
std::string ReinsertTags(const TaggedSentence& src, const Sentence& translation,
                         const model::Alignment& links, const TagPlacement& placement);

}  // namespace imt::tags

#endif  // IMT_TAGS_REINSERT_H_
