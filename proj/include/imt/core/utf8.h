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

#ifndef IMT_CORE_UTF8_H_
#define IMT_CORE_UTF8_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace imt::utf8 {

// One decoded code point and the byte range it occupies.
struct CodePoint {
  char32_t value;
  std::size_t byte_offset;
  std::size_t byte_length;
};

// Invalid sequences decode to U+FFFD covering one byte, so decoding never
// fails and byte offsets stay consistent with the input.
std::vector<CodePoint> Decode(std::string_view text);

void Append(std::string& out, char32_t cp);
std::string Encode(char32_t cp);

// Number of code points.
std::size_t Length(std::string_view text);

bool IsSpace(char32_t cp);
bool IsPunct(char32_t cp);

// ASCII-only case folding; other code points are returned unchanged.
char32_t FoldCase(char32_t cp);
std::string FoldCase(std::string_view text);

}  // namespace imt::utf8

#endif  // IMT_CORE_UTF8_H_
