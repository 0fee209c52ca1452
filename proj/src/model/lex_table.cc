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

#include "imt/model/lex_table.h"

#include <algorithm>
#include <cmath>

#include "imt/core/error.h"

namespace imt::model {
namespace {

void SortEntries(std::vector<LexEntry>& v) {
  std::sort(v.begin(), v.end(), [](const LexEntry& a, const LexEntry& b) {
    if (a.prob != b.prob) return a.prob > b.prob;
    return a.target < b.target;
  });
}

}  // namespace

void LexTable::Set(std::string_view source, std::vector<LexEntry> entries) {
  SortEntries(entries);
  auto it = entries_.find(source);
  if (it == entries_.end()) {
    entries_.emplace(std::string(source), std::move(entries));
  } else {
    it->second = std::move(entries);
  }
}

const std::vector<LexEntry>* LexTable::Find(std::string_view source) const {
  auto it = entries_.find(source);
  return it == entries_.end() ? nullptr : &it->second;
}

double LexTable::Prob(std::string_view source, std::string_view target) const {
  const auto* v = Find(source);
  if (v == nullptr) return 0.0;
  for (const auto& e : *v) {
    if (e.target == target) return e.prob;
  }
  return 0.0;
}

void LexTable::Normalize() {
  for (auto& [src, v] : entries_) {
    double sum = 0.0;
    for (const auto& e : v) sum += e.prob;
    if (sum <= 0.0) continue;
    for (auto& e : v) e.prob /= sum;
    SortEntries(v);
  }
}

std::size_t AdaptiveKeep(std::size_t base_keep, std::int64_t count) {
  const double c = static_cast<double>(std::max<std::int64_t>(count, 0));
  // The +1e-12 guard keeps exact powers of ten (log10(10) = 1) from rounding up.
  const double factor = std::ceil(std::log10(c + 1.0) + 1.0 - 1e-12);
  return base_keep * static_cast<std::size_t>(factor);
}

LexTable PruneLexTable(const LexTable& table, std::size_t base_keep,
                       const std::map<std::string, std::int64_t, std::less<>>& freq) {
  if (base_keep < 1) throw InvalidArgument("prune: base_keep must be >= 1");
  LexTable out;
  for (const auto& [src, v] : table.entries()) {
    auto it = freq.find(src);
    const std::size_t k = AdaptiveKeep(base_keep, it == freq.end() ? 0 : it->second);
    std::vector<LexEntry> kept(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(
                                                          std::min(k, v.size())));
    out.Set(src, std::move(kept));
  }
  out.Normalize();
  return out;
}

}  // namespace imt::model
