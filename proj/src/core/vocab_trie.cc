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

#include "imt/core/vocab_trie.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "imt/core/error.h"
#include "imt/core/utf8.h"

namespace imt {

TypedKeyFunction TypedKeyFunction::Prefix() { return TypedKeyFunction(); }

TypedKeyFunction TypedKeyFunction::Initials(std::map<char32_t, char32_t> initials) {
  TypedKeyFunction f;
  f.mode_ = Mode::kInitials;
  f.initials_ = std::move(initials);
  return f;
}

TypedKeyFunction TypedKeyFunction::ParseInitials(std::string_view contents) {
  std::map<char32_t, char32_t> table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= contents.size()) {
    std::size_t nl = contents.find('\n', pos);
    if (nl == std::string_view::npos) nl = contents.size();
    std::string_view line = contents.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) throw ParseError("initials map: missing tab", line_no);
    const auto ch = utf8::Decode(line.substr(0, tab));
    const auto init = utf8::Decode(line.substr(tab + 1));
    if (ch.size() != 1 || init.empty()) {
      throw ParseError("initials map: expected one character and an initial", line_no);
    }
    table[ch[0].value] = utf8::FoldCase(init[0].value);
  }
  return Initials(std::move(table));
}

TypedKeyFunction TypedKeyFunction::LoadInitials(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open initials map: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseInitials(ss.str());
}

std::string TypedKeyFunction::Key(std::string_view word) const {
  if (mode_ == Mode::kPrefix) return utf8::FoldCase(word);
  std::string key;
  for (const auto& cp : utf8::Decode(word)) {
    auto it = initials_.find(cp.value);
    utf8::Append(key, it != initials_.end() ? it->second : utf8::FoldCase(cp.value));
  }
  return key;
}

std::string TypedKeyFunction::NormalizeTyped(std::string_view typed) const {
  return utf8::FoldCase(typed);
}

VocabTrie::VocabTrie() { nodes_.emplace_back(); }

VocabTrie VocabTrie::Build(const std::vector<std::pair<std::string, std::int64_t>>& words,
                           TypedKeyFunction keyfn) {
  VocabTrie trie;
  trie.keyfn_ = std::move(keyfn);
  for (const auto& [w, c] : words) trie.Insert(w, c);
  return trie;
}

void VocabTrie::Insert(std::string_view word, std::int64_t count) {
  if (count < 1) throw InvalidArgument("vocab trie: count must be >= 1");
  if (word.empty()) throw InvalidArgument("vocab trie: empty word");
  auto it = counts_.find(word);
  if (it != counts_.end()) {
    it->second += count;
    return;
  }
  counts_.emplace(std::string(word), count);

  std::uint32_t node = 0;
  for (unsigned char c : keyfn_.Key(word)) {
    auto child = nodes_[node].children.find(c);
    if (child == nodes_[node].children.end()) {
      const auto next = static_cast<std::uint32_t>(nodes_.size());
      nodes_[node].children.emplace(c, next);
      nodes_.emplace_back();
      node = next;
    } else {
      node = child->second;
    }
  }
  nodes_[node].words.emplace_back(word);
}

std::int64_t VocabTrie::Count(std::string_view word) const {
  auto it = counts_.find(word);
  return it == counts_.end() ? 0 : it->second;
}

void VocabTrie::Collect(std::uint32_t node, std::vector<WordCount>& out) const {
  for (const auto& w : nodes_[node].words) out.push_back({w, counts_.find(w)->second});
  for (const auto& [c, child] : nodes_[node].children) Collect(child, out);
}

std::vector<WordCount> VocabTrie::Candidates(std::string_view typed) const {
  if (typed.empty()) throw InvalidArgument("vocab trie: typed sequence is empty");
  std::vector<WordCount> out;
  std::uint32_t node = 0;
  for (unsigned char c : keyfn_.NormalizeTyped(typed)) {
    auto child = nodes_[node].children.find(c);
    if (child == nodes_[node].children.end()) return out;
    node = child->second;
  }
  Collect(node, out);
  std::sort(out.begin(), out.end(),
            [](const WordCount& a, const WordCount& b) { return a.word < b.word; });
  return out;
}

}  // namespace imt
