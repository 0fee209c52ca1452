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

#ifndef IMT_MODEL_LEX_TABLE_H_
#define IMT_MODEL_LEX_TABLE_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace imt::model {

// Source-side empty word.
inline constexpr std::string_view kNullWord = "<null>";

struct LexEntry {
  std::string target;
  double prob = 0.0;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(target, prob);
  }
  friend bool operator==(const LexEntry&, const LexEntry&) = default;
};

// t(target | source). Entry lists are kept sorted by probability descending,
// then target ascending.
class LexTable {
 public:
  void Set(std::string_view source, std::vector<LexEntry> entries);

  const std::vector<LexEntry>* Find(std::string_view source) const;
  double Prob(std::string_view source, std::string_view target) const;

  // Scales each source word's entries to sum to one.
  void Normalize();

  const std::map<std::string, std::vector<LexEntry>, std::less<>>& entries() const {
    return entries_;
  }
  std::size_t size() const { return entries_.size(); }

  template <class Archive>
  void serialize(Archive& ar) {
    ar(entries_);
  }
  friend bool operator==(const LexTable&, const LexTable&) = default;

 private:
  std::map<std::string, std::vector<LexEntry>, std::less<>> entries_;
};

// Number of translations kept for a source word seen `count` times:
// base_keep * ceil(log10(count + 1) + 1).
std::size_t AdaptiveKeep(std::size_t base_keep, std::int64_t count);

// Keeps the AdaptiveKeep top entries per source word and renormalizes.
// Source words missing from `freq` are treated as count 0.
LexTable PruneLexTable(const LexTable& table, std::size_t base_keep,
                       const std::map<std::string, std::int64_t, std::less<>>& freq);

}  // namespace imt::model

#endif  // IMT_MODEL_LEX_TABLE_H_
