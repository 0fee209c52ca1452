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

#include "imt/tm/tm_index.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <set>

#include <cereal/archives/binary.hpp>
#include <cereal/types/string.hpp>
#include <cereal/types/vector.hpp>

#include "imt/core/error.h"
#include "imt/core/sentence.h"

namespace imt::tm {

std::size_t TokenEditDistance(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double FuzzyScore(std::span<const std::string> a, std::span<const std::string> b) {
  const std::size_t m = std::max(a.size(), b.size());
  if (m == 0) return 1.0;
  // (m - ed) / m rounds exactly like the overlap bound ov / m.
  return static_cast<double>(m - TokenEditDistance(a, b)) / static_cast<double>(m);
}

TmIndex TmIndex::Build(std::vector<TmEntry> entries) {
  std::set<std::uint64_t> ids;
  for (const auto& e : entries) {
    if (!ids.insert(e.id).second) {
      throw InvalidArgument("tm index: duplicate id " + std::to_string(e.id));
    }
  }
  TmIndex index;
  index.entries_ = std::move(entries);
  index.Reindex();
  return index;
}

TmIndex TmIndex::FromPairs(
    const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& pairs) {
  std::vector<TmEntry> entries;
  entries.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    entries.push_back({i, pairs[i].first, pairs[i].second});
  }
  return Build(std::move(entries));
}

void TmIndex::Reindex() {
  postings_.clear();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    std::map<std::string, std::size_t> counts;
    for (const auto& w : entries_[i].src) ++counts[w];
    for (const auto& [w, c] : counts) postings_[w].emplace_back(i, c);
  }
}

std::vector<std::pair<std::size_t, std::size_t>> TmIndex::Overlaps(
    std::span<const std::string> query) const {
  std::map<std::string, std::size_t> qcounts;
  for (const auto& w : query) ++qcounts[w];
  std::vector<std::size_t> overlap(entries_.size(), 0);
  std::vector<std::size_t> touched;
  for (const auto& [w, qc] : qcounts) {
    auto it = postings_.find(w);
    if (it == postings_.end()) continue;
    for (const auto& [pos, ec] : it->second) {
      if (overlap[pos] == 0) touched.push_back(pos);
      overlap[pos] += std::min(qc, ec);
    }
  }
  std::sort(touched.begin(), touched.end());
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(touched.size());
  for (std::size_t pos : touched) out.emplace_back(pos, overlap[pos]);
  return out;
}

namespace {

bool BetterMatch(const TmMatch& a, const TmMatch& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.entry.id < b.entry.id;
}

}  // namespace

std::vector<TmMatch> TmIndex::Candidates(std::span<const std::string> query, std::size_t k) const {
  struct Bounded {
    double bound;
    std::size_t pos;
  };
  std::vector<Bounded> order;
  for (const auto& [pos, ov] : Overlaps(query)) {
    const std::size_t m = std::max(query.size(), entries_[pos].src.size());
    order.push_back({static_cast<double>(ov) / static_cast<double>(m), pos});
  }
  std::sort(order.begin(), order.end(), [&](const Bounded& a, const Bounded& b) {
    if (a.bound != b.bound) return a.bound > b.bound;
    return entries_[a.pos].id < entries_[b.pos].id;
  });

  std::vector<TmMatch> out;
  std::vector<double> scores;  // min-heap of the k best exact scores
  for (const auto& c : order) {
    if (out.size() >= k && !scores.empty() && c.bound < scores.front()) break;
    const TmEntry& e = entries_[c.pos];
    const double s = FuzzyScore(query, e.src);
    out.push_back({e, s});
    scores.push_back(s);
    std::push_heap(scores.begin(), scores.end(), std::greater<>());
    if (scores.size() > k) {
      std::pop_heap(scores.begin(), scores.end(), std::greater<>());
      scores.pop_back();
    }
  }
  return out;
}

std::vector<TmMatch> FuzzyRetrieve(const TmIndex& index, std::span<const std::string> src,
                                   std::size_t k, std::size_t n) {
  if (n < 1 || k < n) throw InvalidArgument("fuzzy retrieve: need K >= N >= 1");
  std::vector<TmMatch> cands = index.Candidates(src, k);
  std::erase_if(cands, [](const TmMatch& m) { return !(m.score > 0.0); });
  std::sort(cands.begin(), cands.end(), BetterMatch);
  if (cands.size() > n) cands.resize(n);
  return cands;
}

std::vector<TmMatch> ExampleRetrieve(const TmIndex& index, std::span<const std::string> src,
                                     std::size_t n) {
  return FuzzyRetrieve(index, src, std::max(kDefaultCandidates, n), n);
}

namespace {
constexpr char kMagic[8] = {'I', 'M', 'T', 'T', 'M', 'I', 'D', 'X'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void TmIndex::Save(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  out.write(reinterpret_cast<const char*>(&kVersion), sizeof(kVersion));
  cereal::BinaryOutputArchive ar(out);
  ar(entries_);
  if (!out) throw IoError("tm index: write failed");
}

TmIndex TmIndex::Load(std::istream& in) {
  char magic[sizeof(kMagic)];
  std::uint32_t version = 0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ParseError("tm index: bad magic", 0);
  }
  if (version != kVersion) throw ParseError("tm index: unsupported version", 8);
  std::vector<TmEntry> entries;
  try {
    cereal::BinaryInputArchive ar(in);
    ar(entries);
  } catch (const cereal::Exception& e) {
    throw ParseError(std::string("tm index: ") + e.what(), 12);
  }
  return Build(std::move(entries));
}

void TmIndex::SaveFile(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write tm index: " + path);
  Save(out);
}

TmIndex TmIndex::LoadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open tm index: " + path);
  return Load(in);
}

TmIndex ReadTmTsv(std::istream& in, std::string_view src_lang, std::string_view tgt_lang) {
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError("tm store: expected exactly one tab", line_no);
    }
    auto src = Tokenize(std::string_view(line).substr(0, tab), src_lang).words();
    auto tgt = Tokenize(std::string_view(line).substr(tab + 1), tgt_lang).words();
    if (src.empty() || tgt.empty()) throw ParseError("tm store: empty side", line_no);
    pairs.emplace_back(std::move(src), std::move(tgt));
  }
  return TmIndex::FromPairs(pairs);
}

TmIndex LoadTmStore(const std::string& path, std::string_view src_lang, std::string_view tgt_lang) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open tm store: " + path);
  char magic[sizeof(kMagic)] = {};
  in.read(magic, sizeof(magic));
  const bool binary = in.gcount() == sizeof(magic) && std::memcmp(magic, kMagic, sizeof(kMagic)) == 0;
  in.clear();
  in.seekg(0);
  return binary ? TmIndex::Load(in) : ReadTmTsv(in, src_lang, tgt_lang);
}

}  // namespace imt::tm
