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

#ifndef IMT_TM_TM_INDEX_H_
#define IMT_TM_TM_INDEX_H_

#include <cstdint>
#include <iosfwd>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace imt::tm {

struct TmEntry {
  std::uint64_t id = 0;
  std::vector<std::string> src;
  std::vector<std::string> tgt;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(id, src, tgt);
  }
  friend bool operator==(const TmEntry&, const TmEntry&) = default;
};

struct TmMatch {
  TmEntry entry;
  double score = 0.0;

  friend bool operator==(const TmMatch&, const TmMatch&) = default;
};

std::size_t TokenEditDistance(std::span<const std::string> a, std::span<const std::string> b);

// 1 - editdist(a, b) / max(|a|, |b|); two empty sequences score 1.
double FuzzyScore(std::span<const std::string> a, std::span<const std::string> b);

// Inverted index over source tokens.
class TmIndex {
 public:
  TmIndex() = default;

  // Throws InvalidArgument on duplicate ids.
  static TmIndex Build(std::vector<TmEntry> entries);
  // Ids are assigned 0..n-1 in input order.
  static TmIndex FromPairs(
      const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& pairs);

  const std::vector<TmEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Number of query tokens (with multiplicity) shared with each entry that
  // shares at least one token, keyed by entry position.
  std::vector<std::pair<std::size_t, std::size_t>> Overlaps(
      std::span<const std::string> query) const;

  // Scored candidates, a superset of the true top-K by fuzzy score. Entries
  // are visited by the bound overlap / max(|q|, |e|) >= fuzzy score: the K best
  // bounds first, then further entries while their bound can still reach the
  // K-th best exact score.
  std::vector<TmMatch> Candidates(std::span<const std::string> query, std::size_t k) const;

  void Save(std::ostream& out) const;
  static TmIndex Load(std::istream& in);
  void SaveFile(const std::string& path) const;
  static TmIndex LoadFile(const std::string& path);

  friend bool operator==(const TmIndex& a, const TmIndex& b) {
    return a.entries_ == b.entries_ && a.postings_ == b.postings_;
  }

 private:
  void Reindex();

  std::vector<TmEntry> entries_;
  // token -> (entry position, occurrences in that entry's source)
  std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>, std::less<>> postings_;
};

inline constexpr std::size_t kDefaultCandidates = 100;
inline constexpr std::size_t kDefaultRetrieved = 5;
inline constexpr std::size_t kDefaultExamples = 3;

// Top-N by fuzzy score (ties by entry id); only entries scoring > 0.
std::vector<TmMatch> FuzzyRetrieve(const TmIndex& index, std::span<const std::string> src,
                                   std::size_t k = kDefaultCandidates,
                                   std::size_t n = kDefaultRetrieved);

// Bilingual examples for display: FuzzyRetrieve with N = n.
std::vector<TmMatch> ExampleRetrieve(const TmIndex& index, std::span<const std::string> src,
                                     std::size_t n = kDefaultExamples);

// UTF-8 "src<TAB>tgt" lines, tokenized per language; ids follow line order
// (blank lines skipped). ParseError positions are 1-based line numbers.
TmIndex ReadTmTsv(std::istream& in, std::string_view src_lang = "",
                  std::string_view tgt_lang = "");

// Loads either a saved index or a TSV file, decided by the magic header.
TmIndex LoadTmStore(const std::string& path, std::string_view src_lang = "",
                    std::string_view tgt_lang = "");

}  // namespace imt::tm

#endif  // IMT_TM_TM_INDEX_H_
