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

#ifndef IMT_TAGS_MARKUP_H_
#define IMT_TAGS_MARKUP_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imt/core/sentence.h"

namespace imt::tags {

enum class MarkupFormat { kPlain, kXml, kHtml, kMarkdown };

// "plain", "xml", "html" or "markdown"; throws InvalidArgument otherwise.
MarkupFormat ParseFormat(std::string_view name);
std::string_view FormatName(MarkupFormat format);

struct Tag {
  std::string name;
  std::string open;   // raw markup
  std::string close;  // raw markup; empty for point tags
  // Point tags (void elements, comments, markdown block markers, unmatched
  // markup in lenient mode) occupy a single position and never wrap text.
  bool point = false;
  Span tokens;  // covered plain tokens; empty for point tags
  std::optional<std::size_t> parent;
  std::size_t depth = 0;

  friend bool operator==(const Tag&, const Tag&) = default;
};

// Something that sits between two tokens: whitespace or a tag boundary.
struct GapItem {
  enum class Kind { kSpace, kOpen, kClose, kPoint };
  Kind kind = Kind::kSpace;
  std::size_t tag = 0;  // unused for kSpace
  std::string raw;      // bytes in the original markup
  std::string text;     // decoded text (kSpace only)

  friend bool operator==(const GapItem&, const GapItem&) = default;
};

struct Gap {
  std::vector<GapItem> items;

  std::string Whitespace() const;  // decoded kSpace text
  friend bool operator==(const Gap&, const Gap&) = default;
};

// `plain.text` is the decoded text with tags removed. Tag boundaries always
// fall between tokens, so the markup is fully described by the tokens' raw
// spellings and the gaps around them (gaps.size() == plain.size() + 1).
struct TaggedSentence {
  MarkupFormat format = MarkupFormat::kPlain;
  Sentence plain;
  std::vector<Tag> tags;  // in order of appearance
  std::vector<std::string> token_raw;
  std::vector<Gap> gaps;

  // Original markup, byte for byte.
  std::string Render() const;
};

struct ParseOptions {
  std::string lang;
  // Unmatched open/close tags and markdown markers become point tags instead
  // of errors; used for line-by-line document processing.
  bool lenient = false;
};

// Throws ParseError (code point offset into `text`) on malformed markup.
TaggedSentence ParseTagged(std::string_view text, MarkupFormat format,
                           const ParseOptions& options = {});

// Escapes a token for emission in the given format.
std::string EscapeText(std::string_view token, MarkupFormat format, bool line_start);

}  // namespace imt::tags

#endif  // IMT_TAGS_MARKUP_H_
