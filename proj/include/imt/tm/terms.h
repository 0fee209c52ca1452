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

#ifndef IMT_TM_TERMS_H_
#define IMT_TM_TERMS_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imt/core/sentence.h"

namespace imt::tm {

struct Term {
  std::vector<std::string> src;
  std::vector<std::string> tgt;

  friend bool operator==(const Term&, const Term&) = default;
};

struct TermMatch {
  Span tokens;  // token indices into the looked-up sentence
  std::size_t term = 0;  // index into TermStore::terms()
  std::string source;
  std::string target;

  friend bool operator==(const TermMatch&, const TermMatch&) = default;
};

// Terminology store keyed by source token sequence. The first entry for a
// given source wins.
class TermStore {
 public:
  TermStore() = default;
  explicit TermStore(std::vector<Term> terms);

  // UTF-8 "src<TAB>tgt" lines; blank lines are skipped. Malformed lines throw
  // ParseError whose position is the 1-based line number.
  static TermStore Read(std::istream& in, std::string_view src_lang = "",
                        std::string_view tgt_lang = "");
  static TermStore ReadFile(const std::string& path, std::string_view src_lang = "",
                            std::string_view tgt_lang = "");

  void Add(Term term);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  // Left-to-right greedy, longest match first; spans are non-overlapping.
  std::vector<TermMatch> Lookup(std::span<const std::string> words) const;
  std::vector<TermMatch> Lookup(const Sentence& sentence) const;

 private:
  struct Node {
    std::map<std::string, std::uint32_t, std::less<>> children;
    std::optional<std::size_t> term;
  };

  std::vector<Term> terms_;
  std::vector<Node> nodes_{Node{}};
};

}  // namespace imt::tm

#endif  // IMT_TM_TERMS_H_
