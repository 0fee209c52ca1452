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

#include "imt/tags/reinsert.h"

#include <algorithm>

#include "imt/core/error.h"
#include "imt/tags/piece_align.h"

namespace imt::tags {
namespace {

bool Wraps(const Tag& t) { return !t.point && !t.tokens.empty(); }

// Empty emphasis or code markers do not parse back as markup.
bool CanBeEmpty(const Tag& t, MarkupFormat format) {
  return format != MarkupFormat::kMarkdown || t.point ||
         (t.name != "em" && t.name != "strong" && t.name != "code");
}

std::vector<std::vector<std::size_t>> Children(const TaggedSentence& s,
                                               std::vector<std::size_t>& roots) {
  std::vector<std::vector<std::size_t>> kids(s.tags.size());
  for (std::size_t t = 0; t < s.tags.size(); ++t) {
    if (s.tags[t].parent) {
      kids[*s.tags[t].parent].push_back(t);
    } else {
      roots.push_back(t);
    }
  }
  return kids;
}

class Placer {
 public:
  Placer(const TaggedSentence& src, const model::Alignment& links, UnassignedPolicy policy,
         std::vector<TagWarning>* warnings)
      : src_(src), links_(links), policy_(policy), warnings_(warnings) {
    kids_ = Children(src, roots_);
    out_.spans.assign(src.tags.size(), std::nullopt);
  }

  TagPlacement Run(std::size_t tgt_len) {
    Place(roots_, Span{0, src_.plain.size()}, Span{0, tgt_len});
    return std::move(out_);
  }

 private:
  void Warn(std::size_t tag, std::string reason) {
    if (warnings_ != nullptr) warnings_->push_back({0, tag, std::move(reason)});
  }

  std::size_t MapBoundary(std::size_t i, Span sr, Span tr) const {
    if (i <= sr.start) return tr.start;
    if (i >= sr.end) return tr.end;
    std::size_t best = tr.end;
    for (const auto& [s, t] : links_) {
      if (s >= i && s < sr.end && tr.contains(t)) best = std::min(best, t);
    }
    return best;
  }

  void ZeroAll(std::size_t tag, std::size_t pos) {
    if (!CanBeEmpty(src_.tags[tag], src_.format)) {
      Warn(tag, "markup cannot be empty; tag dropped");
      DropAll(tag);
      return;
    }
    out_.spans[tag] = Span{pos, pos};
    for (std::size_t k : kids_[tag]) ZeroAll(k, pos);
  }

  void DropAll(std::size_t tag) {
    out_.spans[tag] = std::nullopt;
    for (std::size_t k : kids_[tag]) {
      Warn(k, "enclosing tag dropped; tag dropped");
      DropAll(k);
    }
  }

  void Place(const std::vector<std::size_t>& kids, Span sr, Span tr) {
    std::vector<std::size_t> wraps;
    std::vector<Span> pieces;
    for (std::size_t k : kids) {
      if (Wraps(src_.tags[k])) {
        wraps.push_back(k);
        pieces.push_back(src_.tags[k].tokens);
      }
    }
    if (wraps.size() == 1 && pieces[0] == sr && !tr.empty()) {
      out_.spans[wraps[0]] = tr;
    } else if (!wraps.empty()) {
      model::Alignment sub;
      for (const auto& [s, t] : links_) {
        if (tr.contains(t)) sub.emplace_back(s, t - tr.start);
      }
      const PieceAlignment pa = PieceAlign(sub, pieces, tr.size());
      out_.violations += pa.violations;
      for (std::size_t w = 0; w < wraps.size(); ++w) {
        if (pa.spans[w]) {
          out_.spans[wraps[w]] = Span{tr.start + pa.spans[w]->start, tr.start + pa.spans[w]->end};
        }
      }
    }

    // Right-to-left: start of the next placed wrapping sibling.
    std::vector<std::size_t> next_start(kids.size() + 1, tr.end);
    for (std::size_t i = kids.size(); i-- > 0;) {
      const std::size_t k = kids[i];
      next_start[i] = Wraps(src_.tags[k]) && out_.spans[k] ? out_.spans[k]->start : next_start[i + 1];
    }
    std::size_t lo = tr.start;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const std::size_t k = kids[i];
      const Tag& tag = src_.tags[k];
      if (Wraps(tag) && out_.spans[k]) {
        lo = out_.spans[k]->end;
        Place(kids_[k], tag.tokens, *out_.spans[k]);
        continue;
      }
      const std::size_t hi = next_start[i + 1];
      const std::size_t pos = std::clamp(MapBoundary(tag.tokens.start, sr, tr), lo, std::max(lo, hi));
      if (Wraps(tag) && policy_ == UnassignedPolicy::kDrop) {
        Warn(k, "unassigned piece; tag dropped");
        DropAll(k);
        continue;
      }
      if (Wraps(tag)) Warn(k, "unassigned piece; tag attached at a zero-width position");
      lo = pos;
      ZeroAll(k, pos);
    }
  }

  const TaggedSentence& src_;
  const model::Alignment& links_;
  UnassignedPolicy policy_;
  std::vector<TagWarning>* warnings_;
  std::vector<std::size_t> roots_;
  std::vector<std::vector<std::size_t>> kids_;
  TagPlacement out_;
};

bool CodeContentFits(std::string_view content, std::size_t ticks) {
  if (content.empty() || content.front() == '`' || content.back() == '`') return false;
  std::size_t run = 0;
  for (char c : content) {
    run = c == '`' ? run + 1 : 0;
    if (run == ticks) return false;
  }
  return true;
}

struct Event {
  GapItem::Kind kind;
  std::size_t tag;
  friend bool operator==(const Event&, const Event&) = default;
};

class Renderer {
 public:
  Renderer(const TaggedSentence& src, const Sentence& tgt, const model::Alignment& links,
           const TagPlacement& placement)
      : src_(src), tgt_(tgt), links_(links), placement_(placement) {
    kids_ = Children(src, roots_);
    events_.assign(tgt.size() + 1, {});
    in_code_.assign(tgt.size(), false);
    suppressed_.assign(src.tags.size(), false);
    src_in_code_.assign(src.plain.size(), false);
    if (src.format != MarkupFormat::kMarkdown) return;
    for (const Tag& t : src.tags) {
      if (t.name != "code") continue;
      for (std::size_t s = t.tokens.start; s < t.tokens.end; ++s) src_in_code_[s] = true;
    }
    // Code span content is literal; a backtick inside would end the span.
    for (std::size_t k = 0; k < src.tags.size(); ++k) {
      const auto& span = placement.spans[k];
      if (src.tags[k].name != "code" || !span) continue;
      std::string content;
      for (std::size_t i = span->start; i < span->end; ++i) {
        if (i > span->start) content += TargetWhitespace(i);
        content += tgt[i];
      }
      suppressed_[k] = !CodeContentFits(content, src.tags[k].open.size());
      if (suppressed_[k]) continue;
      for (std::size_t i = span->start; i < span->end; ++i) in_code_[i] = true;
    }
  }

  std::string Run() {
    Walk(roots_);
    std::string out;
    for (std::size_t i = 0; i <= tgt_.size(); ++i) {
      out += RenderGap(i);
      if (i < tgt_.size()) out += RenderToken(i);
    }
    return out;
  }

 private:
  void Walk(const std::vector<std::size_t>& kids) {
    for (std::size_t k : kids) {
      const auto& span = placement_.spans[k];
      if (!span || suppressed_[k]) continue;
      if (src_.tags[k].point) {
        events_[span->start].push_back({GapItem::Kind::kPoint, k});
        continue;
      }
      events_[span->start].push_back({GapItem::Kind::kOpen, k});
      Walk(kids_[k]);
      events_[span->end].push_back({GapItem::Kind::kClose, k});
    }
  }

  bool Linked(std::size_t s, std::size_t t) const {
    return std::find(links_.begin(), links_.end(), std::make_pair(s, t)) != links_.end();
  }

  std::string TargetWhitespace(std::size_t i) const {
    const std::size_t b = i == 0 ? 0 : tgt_.tokens[i - 1].byte_span.end;
    const std::size_t e = i == tgt_.size() ? tgt_.text.size() : tgt_.tokens[i].byte_span.start;
    return tgt_.text.substr(b, e - b);
  }

  std::string RawOf(const Event& e) const {
    const Tag& t = src_.tags[e.tag];
    return e.kind == GapItem::Kind::kClose ? t.close : t.open;
  }

  std::string RenderGap(std::size_t i) const {
    const auto& ev = events_[i];
    const std::string ws = TargetWhitespace(i);
    const std::size_t n = tgt_.size();
    const std::size_t src_n = src_.plain.size();
    std::optional<std::size_t> j;
    if (!ev.empty()) {
      const Tag& t = src_.tags[ev[0].tag];
      j = ev[0].kind == GapItem::Kind::kClose ? t.tokens.end : t.tokens.start;
    } else if (i == 0) {
      j = 0;
    } else if (i == n) {
      j = src_n;
    } else {
      for (const auto& [s, t] : links_) {
        if (t == i && s >= 1 && Linked(s - 1, i - 1)) {
          j = s;
          break;
        }
      }
    }
    if (j && *j <= src_n) {
      const Gap& g = src_.gaps[*j];
      std::vector<Event> src_events;
      for (const auto& item : g.items) {
        if (item.kind != GapItem::Kind::kSpace) src_events.push_back({item.kind, item.tag});
      }
      const bool edge = (i == 0 && *j == 0) || (i == n && *j == src_n);
      if (src_events == ev && (edge || g.Whitespace() == ws)) {
        std::string out;
        for (const auto& item : g.items) out += item.raw;
        return out;
      }
    }
    std::string out;
    bool placed_ws = false;
    for (const auto& e : ev) {
      if (!placed_ws && e.kind == GapItem::Kind::kOpen) {
        out += ws;
        placed_ws = true;
      }
      out += RawOf(e);
    }
    if (!placed_ws) out += ws;
    return out;
  }

  std::string RenderToken(std::size_t i) const {
    const std::string& surface = tgt_[i];
    const bool md_line_start = i == 0 && src_.format == MarkupFormat::kMarkdown;
    for (const auto& [s, t] : links_) {
      if (t != i || s >= src_.plain.size() || src_.plain[s] != surface) continue;
      if (md_line_start && s != 0) continue;
      if (src_in_code_[s] != in_code_[i]) continue;
      return src_.token_raw[s];
    }
    if (in_code_[i]) return surface;
    return EscapeText(surface, src_.format, i == 0);
  }

  const TaggedSentence& src_;
  const Sentence& tgt_;
  const model::Alignment& links_;
  const TagPlacement& placement_;
  std::vector<std::size_t> roots_;
  std::vector<std::vector<std::size_t>> kids_;
  std::vector<std::vector<Event>> events_;
  std::vector<bool> in_code_;
  std::vector<bool> src_in_code_;
  std::vector<bool> suppressed_;
};

}  // namespace

TagPlacement PlaceTags(const TaggedSentence& src, const model::Alignment& links,
                       std::size_t tgt_len, UnassignedPolicy policy,
                       std::vector<TagWarning>* warnings) {
  for (const auto& [s, t] : links) {
    if (s >= src.plain.size() || t >= tgt_len) {
      throw InvalidArgument("place_tags: alignment link out of range");
    }
  }
  return Placer(src, links, policy, warnings).Run(tgt_len);
}

std::string ReinsertTags(const TaggedSentence& src, const Sentence& translation,
                         const model::Alignment& links, const TagPlacement& placement) {
  if (placement.spans.size() != src.tags.size()) {
    throw InvalidArgument("reinsert_tags: placement does not match the tagged sentence");
  }
  return Renderer(src, translation, links, placement).Run();
}

}  // namespace imt::tags
