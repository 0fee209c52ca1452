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

#include "imt/decode/constraints.h"

#include <algorithm>
#include <map>

#include "imt/core/error.h"
#include "imt/core/sentence.h"

namespace imt::decode {

std::vector<std::string> ConstraintSet::Words() const {
  std::vector<std::string> out(prefix.begin(), prefix.end());
  for (const auto& p : pieces) out.insert(out.end(), p.begin(), p.end());
  return out;
}

void ConstraintSet::Validate() const {
  for (const auto& p : pieces) {
    if (p.empty()) throw InvalidArgument("constraints: empty piece");
  }
  for (const auto& w : Words()) {
    if (w.empty()) throw InvalidArgument("constraints: empty token");
  }
}

ConstraintSet ParseConstraintLine(std::string_view line, bool ordered) {
  ConstraintSet cs;
  cs.ordered = ordered;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t bar = line.find('|', pos);
    if (bar == std::string_view::npos) bar = line.size();
    auto piece = SplitWhitespace(line.substr(pos, bar - pos));
    if (!piece.empty()) cs.pieces.push_back(std::move(piece));
    pos = bar + 1;
  }
  return cs;
}

namespace {

class NullTracker : public ConstraintTracker {
 public:
  std::size_t Rows() const override { return 1; }
  Coverage Initial() const override { return {}; }
  std::size_t Remaining(const Coverage&) const override { return 0; }
  void Advance(const Coverage& c, std::string_view, std::vector<Coverage>& out) const override {
    out.push_back(c);
  }
  std::optional<std::string> Forced(const Coverage&) const override { return std::nullopt; }
  std::vector<std::string> Pending(const Coverage&) const override { return {}; }
  std::vector<std::string> Words() const override { return {}; }
};

class BagTracker : public ConstraintTracker {
 public:
  explicit BagTracker(std::vector<std::string> slots) : slots_(std::move(slots)) {}

  std::size_t Rows() const override { return slots_.size() + 1; }
  Coverage Initial() const override {
    Coverage c;
    c.used.assign(slots_.size(), 0);
    return c;
  }
  std::size_t Remaining(const Coverage& c) const override { return slots_.size() - c.count; }
  void Advance(const Coverage& c, std::string_view word,
               std::vector<Coverage>& out) const override {
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      if (!c.used[i] && slots_[i] == word) {
        Coverage n = c;
        n.used[i] = 1;
        ++n.count;
        out.push_back(std::move(n));
        return;
      }
    }
    out.push_back(c);
  }
  std::optional<std::string> Forced(const Coverage&) const override { return std::nullopt; }
  std::vector<std::string> Pending(const Coverage& c) const override {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      if (!c.used[i]) out.push_back(slots_[i]);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  std::vector<std::string> Words() const override { return slots_; }

 private:
  std::vector<std::string> slots_;
};

class OrderedTracker : public ConstraintTracker {
 public:
  OrderedTracker(std::vector<Piece> pieces, bool anchored)
      : pieces_(std::move(pieces)), anchored_(anchored) {
    suffix_.assign(pieces_.size() + 1, 0);
    for (std::size_t k = pieces_.size(); k-- > 0;) suffix_[k] = suffix_[k + 1] + pieces_[k].size();
  }

  std::size_t Rows() const override { return pieces_.size() + 1; }
  Coverage Initial() const override { return {}; }
  std::size_t Remaining(const Coverage& c) const override { return suffix_[c.count] - c.cursor; }

  void Advance(const Coverage& c, std::string_view word,
               std::vector<Coverage>& out) const override {
    if (c.count == pieces_.size()) {
      out.push_back(c);
      return;
    }
    const Piece& p = pieces_[c.count];
    const bool must = c.cursor > 0 || (anchored_ && c.count == 0);
    if (!must) out.push_back(c);
    if (p[c.cursor] == word) {
      Coverage n = c;
      if (++n.cursor == p.size()) {
        ++n.count;
        n.cursor = 0;
      }
      out.push_back(std::move(n));
    }
  }

  std::optional<std::string> Forced(const Coverage& c) const override {
    if (c.count == pieces_.size()) return std::nullopt;
    if (c.cursor > 0 || (anchored_ && c.count == 0)) return pieces_[c.count][c.cursor];
    return std::nullopt;
  }

  std::vector<std::string> Pending(const Coverage& c) const override {
    if (c.count == pieces_.size()) return {};
    return {pieces_[c.count][c.cursor]};
  }

  std::vector<std::string> Words() const override {
    std::vector<std::string> out;
    for (const auto& p : pieces_) out.insert(out.end(), p.begin(), p.end());
    return out;
  }

 private:
  std::vector<Piece> pieces_;
  bool anchored_;
  std::vector<std::size_t> suffix_;
};

}  // namespace

std::unique_ptr<ConstraintTracker> MakeNullTracker() { return std::make_unique<NullTracker>(); }

std::unique_ptr<ConstraintTracker> MakeBagTracker(const ConstraintSet& cs) {
  cs.Validate();
  return std::make_unique<BagTracker>(cs.Words());
}

std::unique_ptr<ConstraintTracker> MakeOrderedTracker(const ConstraintSet& cs) {
  cs.Validate();
  std::vector<Piece> pieces;
  if (!cs.prefix.empty()) pieces.push_back(cs.prefix);
  pieces.insert(pieces.end(), cs.pieces.begin(), cs.pieces.end());
  return std::make_unique<OrderedTracker>(std::move(pieces), !cs.prefix.empty());
}

bool ContainsBag(std::span<const std::string> output, const ConstraintSet& cs) {
  std::map<std::string, int> need;
  for (const auto& w : cs.Words()) ++need[w];
  for (const auto& w : output) {
    auto it = need.find(w);
    if (it != need.end()) --it->second;
  }
  return std::all_of(need.begin(), need.end(), [](const auto& kv) { return kv.second <= 0; });
}

bool ContainsOrdered(std::span<const std::string> output, const ConstraintSet& cs) {
  if (output.size() < cs.prefix.size() ||
      !std::equal(cs.prefix.begin(), cs.prefix.end(), output.begin())) {
    return false;
  }
  auto from = output.begin() + static_cast<std::ptrdiff_t>(cs.prefix.size());
  for (const auto& p : cs.pieces) {
    auto hit = std::search(from, output.end(), p.begin(), p.end());
    if (hit == output.end() && !p.empty()) return false;
    from = hit + static_cast<std::ptrdiff_t>(p.size());
  }
  return true;
}

bool Satisfies(std::span<const std::string> output, const ConstraintSet& cs) {
  return cs.ordered ? ContainsOrdered(output, cs) : ContainsBag(output, cs);
}

}  // namespace imt::decode
