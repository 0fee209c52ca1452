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

#include "imt/core/sentence.h"

#include <algorithm>

#include "imt/core/utf8.h"

namespace imt {

std::vector<std::string> Sentence::words() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

LanguageProfile LanguageProfile::For(std::string_view lang) {
  LanguageProfile p;
  // "raw" keeps whitespace-delimited chunks intact (BLEU-style input).
  if (lang == "raw") p.split_punctuation = false;
  return p;
}

Sentence Tokenize(std::string_view text, std::string_view lang) {
  return TokenizeWithBreaks(text, lang, {});
}

Sentence TokenizeWithBreaks(std::string_view text, std::string_view lang,
                            std::span<const std::size_t> char_breaks) {
  const LanguageProfile profile = LanguageProfile::For(lang);
  Sentence s;
  s.lang = std::string(lang);
  s.text = std::string(text);

  const auto cps = utf8::Decode(text);
  std::vector<std::size_t> breaks(char_breaks.begin(), char_breaks.end());
  std::sort(breaks.begin(), breaks.end());
  auto is_break = [&](std::size_t i) {
    return std::binary_search(breaks.begin(), breaks.end(), i);
  };

  std::size_t start = 0;
  bool open = false;
  auto flush = [&](std::size_t end) {
    if (!open) return;
    Token t;
    t.char_span = {start, end};
    const std::size_t b0 = cps[start].byte_offset;
    const std::size_t b1 =
        end < cps.size() ? cps[end].byte_offset : text.size();
    t.byte_span = {b0, b1};
    t.surface = std::string(text.substr(b0, b1 - b0));
    s.tokens.push_back(std::move(t));
    open = false;
  };

  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t cp = cps[i].value;
    if (is_break(i)) flush(i);
    if (utf8::IsSpace(cp)) {
      flush(i);
      continue;
    }
    if (profile.split_punctuation && utf8::IsPunct(cp)) {
      flush(i);
      start = i;
      open = true;
      flush(i + 1);
      continue;
    }
    if (!open) {
      start = i;
      open = true;
    }
  }
  flush(cps.size());
  return s;
}

Sentence FromWords(std::span<const std::string> words, std::string_view lang) {
  Sentence s;
  s.lang = std::string(lang);
  std::size_t chars = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) {
      s.text.push_back(' ');
      ++chars;
    }
    Token t;
    t.surface = words[i];
    const std::size_t n = utf8::Length(words[i]);
    t.char_span = {chars, chars + n};
    t.byte_span = {s.text.size(), s.text.size() + words[i].size()};
    s.text += words[i];
    chars += n;
    s.tokens.push_back(std::move(t));
  }
  return s;
}

std::string Join(std::span<const std::string> words, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out += sep;
    out += words[i];
  }
  return out;
}

std::vector<std::string> SplitWhitespace(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (const auto& cp : utf8::Decode(text)) {
    if (utf8::IsSpace(cp.value)) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.append(text.substr(cp.byte_offset, cp.byte_length));
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace imt
