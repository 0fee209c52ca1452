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

#ifndef IMT_DECODE_CONSTRAINTS_H_
#define IMT_DECODE_CONSTRAINTS_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace imt::decode {

using Piece = std::vector<std::string>;

struct ConstraintSet {
  std::vector<Piece> pieces;
  bool ordered = false;
  Piece prefix;  // empty = no prefix

  bool empty() const { return pieces.empty() && prefix.empty(); }
  // Every constraint token, prefix first, in order.
  std::vector<std::string> Words() const;
  std::size_t Footprint() const { return Words().size(); }
  // Throws InvalidArgument on an empty piece or empty token.
  void Validate() const;

  friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;
};

// Parses "piece1|piece2|..." with space-separated tokens.
ConstraintSet ParseConstraintLine(std::string_view line, bool ordered = true);

// Coverage of a hypothesis. `count` is the grid row: constraint words covered
// (bag mode) or completed pieces (ordered mode). `cursor` is the number of
// tokens matched inside the current piece. `used` flags bag slots.
struct Coverage {
  std::uint32_t count = 0;
  std::uint32_t cursor = 0;
  std::vector<std::uint8_t> used;

  friend bool operator==(const Coverage&, const Coverage&) = default;
  friend auto operator<=>(const Coverage&, const Coverage&) = default;
};

// Constraint bookkeeping shared by every decoder.
class ConstraintTracker {
 public:
  virtual ~ConstraintTracker() = default;

  virtual std::size_t Rows() const = 0;
  virtual Coverage Initial() const = 0;
  // Tokens the hypothesis still has to emit.
  virtual std::size_t Remaining(const Coverage& c) const = 0;
  // Coverage states reachable by emitting `word`; empty if not allowed.
  virtual void Advance(const Coverage& c, std::string_view word,
                       std::vector<Coverage>& out) const = 0;
  // The only word allowed next, if any.
  virtual std::optional<std::string> Forced(const Coverage& c) const = 0;
  // Constraint words not yet covered (candidates the decoder must try).
  virtual std::vector<std::string> Pending(const Coverage& c) const = 0;
  virtual std::vector<std::string> Words() const = 0;

  bool Complete(const Coverage& c) const { return Remaining(c) == 0; }
  std::size_t Row(const Coverage& c) const { return c.count; }
};

// No constraints: one row, everything allowed.
std::unique_ptr<ConstraintTracker> MakeNullTracker();
// Multiset of words covered greedily (GBS and DBA).
std::unique_ptr<ConstraintTracker> MakeBagTracker(const ConstraintSet& cs);
// Ordered atomic pieces; a prefix is piece 0 anchored at position 0 (O-GBS).
std::unique_ptr<ConstraintTracker> MakeOrderedTracker(const ConstraintSet& cs);

// Independent satisfaction checks used by the brute-force oracle and tests.
bool ContainsBag(std::span<const std::string> output, const ConstraintSet& cs);
bool ContainsOrdered(std::span<const std::string> output, const ConstraintSet& cs);
bool Satisfies(std::span<const std::string> output, const ConstraintSet& cs);

}  // namespace imt::decode

#endif  // IMT_DECODE_CONSTRAINTS_H_
