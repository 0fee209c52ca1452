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

#ifndef IMT_CORE_SENTENCE_H_
#define IMT_CORE_SENTENCE_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace imt {

// Half-open [start, end) range.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool empty() const { return start == end; }
  bool contains(std::size_t i) const { return i >= start && i < end; }
  friend bool operator==(const Span&, const Span&) = default;
  friend auto operator<=>(const Span&, const Span&) = default;
};

struct Token {
  std::string surface;
  Span char_span;  // code point offsets into Sentence::text
  Span byte_span;  // byte offsets into Sentence::text

  friend bool operator==(const Token&, const Token&) = default;
};

// A tokenized sentence. `text` is the string the token spans index into.
struct Sentence {
  std::vector<Token> tokens;
  std::string lang;
  std::string text;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  const std::string& operator[](std::size_t i) const { return tokens[i].surface; }

  std::vector<std::string> words() const;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

// Per-language splitting rules. Every profile splits on Unicode whitespace.
struct LanguageProfile {
  bool split_punctuation = true;

  static LanguageProfile For(std::string_view lang);
};

// Whitespace + punctuation tokenizer. Each punctuation code point becomes its
// own token when the language profile asks for it. Deterministic.
Sentence Tokenize(std::string_view text, std::string_view lang = "");

// As Tokenize, but additionally breaks tokens at the given code point
// offsets (used to keep markup boundaries on token boundaries).
Sentence TokenizeWithBreaks(std::string_view text, std::string_view lang,
                            std::span<const std::size_t> char_breaks);

// Builds a sentence whose text is the words joined by single spaces.
Sentence FromWords(std::span<const std::string> words, std::string_view lang = "");

std::string Join(std::span<const std::string> words, std::string_view sep = " ");

// Splits on runs of ASCII/Unicode whitespace only.
std::vector<std::string> SplitWhitespace(std::string_view text);

}  // namespace imt

#endif  // IMT_CORE_SENTENCE_H_
