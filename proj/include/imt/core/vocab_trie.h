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

#ifndef IMT_CORE_VOCAB_TRIE_H_
#define IMT_CORE_VOCAB_TRIE_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace imt {

// Maps a word to the character sequence a user types for it: either the
// (case-folded) word itself, or one phonetic initial per character.
class TypedKeyFunction {
 public:
  enum class Mode { kPrefix, kInitials };

  TypedKeyFunction() = default;
  static TypedKeyFunction Prefix();
  static TypedKeyFunction Initials(std::map<char32_t, char32_t> initials);

  // Reads "char<TAB>initial" lines; '#' starts a comment line. Only the first
  // code point of the initial column is kept.
  static TypedKeyFunction LoadInitials(const std::string& path);
  static TypedKeyFunction ParseInitials(std::string_view contents);

  Mode mode() const { return mode_; }
  const std::map<char32_t, char32_t>& initials() const { return initials_; }

  // Characters without an initials entry map to their case-folded self.
  std::string Key(std::string_view word) const;

  // Normalizes user-typed input to key space (case folding).
  std::string NormalizeTyped(std::string_view typed) const;

 private:
  Mode mode_ = Mode::kPrefix;
  std::map<char32_t, char32_t> initials_;
};

struct WordCount {
  std::string word;
  std::int64_t count = 0;

  friend bool operator==(const WordCount&, const WordCount&) = default;
};

// Byte-level trie over typed keys. Terminals hold every word sharing that key.
class VocabTrie {
 public:
  VocabTrie();

  // Counts must be >= 1. A word inserted twice has its counts summed.
  static VocabTrie Build(const std::vector<std::pair<std::string, std::int64_t>>& words,
                         TypedKeyFunction keyfn = TypedKeyFunction::Prefix());

  void Insert(std::string_view word, std::int64_t count);

  // Words whose typed key starts with `typed`, sorted by word. `typed` is
  // normalized with the key function first.
  std::vector<WordCount> Candidates(std::string_view typed) const;

  const TypedKeyFunction& key_function() const { return keyfn_; }
  std::size_t size() const { return counts_.size(); }
  std::int64_t Count(std::string_view word) const;

 private:
  struct Node {
    std::map<unsigned char, std::uint32_t> children;
    std::vector<std::string> words;
  };

  void Collect(std::uint32_t node, std::vector<WordCount>& out) const;

  TypedKeyFunction keyfn_;
  std::vector<Node> nodes_;
  std::map<std::string, std::int64_t, std::less<>> counts_;
};

}  // namespace imt

#endif  // IMT_CORE_VOCAB_TRIE_H_
