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

#include "imt/tags/piece_align.h"

#include <algorithm>
#include <limits>
#include <tuple>

#include "imt/core/error.h"

namespace imt::tags {

std::size_t PieceViolations(const model::Alignment& links, Span piece,
                            const std::optional<Span>& span) {
  std::size_t v = 0;
  for (const auto& [s, t] : links) {
    const bool in_piece = piece.contains(s);
    const bool in_span = span && span->contains(t);
    if (in_piece != in_span) ++v;
  }
  return v;
}

namespace {

constexpr std::size_t kUnassignedStart = std::numeric_limits<std::size_t>::max();

struct Cost {
  std::size_t unassigned = 0;
  std::size_t violations = 0;
  std::size_t length = 0;
  std::vector<std::size_t> starts;  // per piece, kUnassignedStart when unassigned

  auto Key() const { return std::tie(unassigned, violations, length, starts); }
  bool operator<(const Cost& o) const { return Key() < o.Key(); }
};

}  // namespace

PieceAlignment PieceAlign(const model::Alignment& raw_links, const std::vector<Span>& pieces,
                          std::size_t tgt_len) {
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    if (pieces[p].empty()) throw InvalidArgument("piece_align: empty piece");
    if (p > 0 && pieces[p].start < pieces[p - 1].end) {
      throw InvalidArgument("piece_align: pieces overlap or are out of order");
    }
  }
  model::Alignment links = raw_links;
  std::sort(links.begin(), links.end());
  links.erase(std::unique(links.begin(), links.end()), links.end());
  for (const auto& l : links) {
    if (l.second >= tgt_len) throw InvalidArgument("piece_align: link beyond target length");
  }

  const std::size_t np = pieces.size();
  const std::size_t nt = tgt_len;
  // inside[p][t]: links from piece p with target < t; all[t]: any link with target < t.
  std::vector<std::vector<std::size_t>> inside(np, std::vector<std::size_t>(nt + 1, 0));
  std::vector<std::size_t> all(nt + 1, 0);
  std::vector<std::size_t> incident(np, 0);
  for (const auto& [s, t] : links) {
    for (std::size_t u = t + 1; u <= nt; ++u) ++all[u];
    for (std::size_t p = 0; p < np; ++p) {
      if (!pieces[p].contains(s)) continue;
      ++incident[p];
      for (std::size_t u = t + 1; u <= nt; ++u) ++inside[p][u];
    }
  }
  auto violations = [&](std::size_t p, std::size_t s, std::size_t e) {
    const std::size_t in = inside[p][e] - inside[p][s];
    return (incident[p] - in) + (all[e] - all[s] - in);
  };

  // best[p][t]: optimal assignment of pieces p.. with every span starting at >= t.
  std::vector<std::vector<Cost>> best(np + 1, std::vector<Cost>(nt + 1));
  std::vector<std::vector<std::optional<Span>>> choice(np + 1,
                                                       std::vector<std::optional<Span>>(nt + 1));
  for (std::size_t pp = np; pp-- > 0;) {
    for (std::size_t t = nt + 1; t-- > 0;) {
      Cost c = best[pp + 1][t];
      c.unassigned += 1;
      c.violations += incident[pp];
      c.starts.insert(c.starts.begin(), kUnassignedStart);
      std::optional<Span> pick;
      if (t < nt) {
        // Spans starting later are already summarized in best[pp][t + 1].
        if (best[pp][t + 1] < c) {
          c = best[pp][t + 1];
          pick = choice[pp][t + 1];
        }
        for (std::size_t e = t + 1; e <= nt; ++e) {
          Cost d = best[pp + 1][e];
          d.violations += violations(pp, t, e);
          d.length += e - t;
          d.starts.insert(d.starts.begin(), t);
          if (d < c) {
            c = std::move(d);
            pick = Span{t, e};
          }
        }
      }
      best[pp][t] = std::move(c);
      choice[pp][t] = pick;
    }
  }

  PieceAlignment out;
  out.violations = best[0][0].violations;
  std::size_t t = 0;
  for (std::size_t p = 0; p < np; ++p) {
    const auto& pick = choice[p][t];
    out.spans.push_back(pick);
    if (pick) t = pick->end;
  }
  return out;
}

}  // namespace imt::tags
