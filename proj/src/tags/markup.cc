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

#include "imt/tags/markup.h"

#include <algorithm>
#include <cctype>
#include <map>

#include "imt/core/error.h"
#include "imt/core/utf8.h"

namespace imt::tags {

MarkupFormat ParseFormat(std::string_view name) {
  if (name == "plain") return MarkupFormat::kPlain;
  if (name == "xml") return MarkupFormat::kXml;
  if (name == "html") return MarkupFormat::kHtml;
  if (name == "markdown") return MarkupFormat::kMarkdown;
  throw InvalidArgument("unknown markup format: " + std::string(name));
}

std::string_view FormatName(MarkupFormat format) {
  switch (format) {
    case MarkupFormat::kPlain:
      return "plain";
    case MarkupFormat::kXml:
      return "xml";
    case MarkupFormat::kHtml:
      return "html";
    case MarkupFormat::kMarkdown:
      return "markdown";
  }
  return "plain";
}

std::string Gap::Whitespace() const {
  std::string out;
  for (const auto& item : items) {
    if (item.kind == GapItem::Kind::kSpace) out += item.text;
  }
  return out;
}

std::string TaggedSentence::Render() const {
  std::string out;
  for (std::size_t g = 0; g < gaps.size(); ++g) {
    for (const auto& item : gaps[g].items) out += item.raw;
    if (g < token_raw.size()) out += token_raw[g];
  }
  return out;
}

namespace {

bool IsNameStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}
bool IsNameChar(char c) {
  return IsNameStart(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '.';
}
bool IsAsciiPunct(char c) {
  return c > 0x20 && c < 0x7f && std::ispunct(static_cast<unsigned char>(c));
}
bool IsBlank(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::string Lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

const std::map<std::string, char32_t, std::less<>>& XmlEntities() {
  static const std::map<std::string, char32_t, std::less<>> m{
      {"lt", U'<'}, {"gt", U'>'}, {"amp", U'&'}, {"quot", U'"'}, {"apos", U'\''}};
  return m;
}

const std::map<std::string, char32_t, std::less<>>& HtmlEntities() {
  static const std::map<std::string, char32_t, std::less<>> m{
      {"lt", U'<'},           {"gt", U'>'},           {"amp", U'&'},
      {"quot", U'"'},         {"apos", U'\''},        {"nbsp", U'\u00A0'},
      {"copy", U'\u00A9'},    {"reg", U'\u00AE'},     {"mdash", U'\u2014'},
      {"ndash", U'\u2013'},   {"hellip", U'\u2026'},  {"laquo", U'\u00AB'},
      {"raquo", U'\u00BB'},   {"ldquo", U'\u201C'},   {"rdquo", U'\u201D'},
      {"lsquo", U'\u2018'},   {"rsquo", U'\u2019'},   {"euro", U'\u20AC'},
      {"trade", U'\u2122'},   {"middot", U'\u00B7'}};
  return m;
}

bool IsHtmlVoid(std::string_view lower_name) {
  static const char* const kVoid[] = {"area", "base", "br",   "col",   "embed",  "hr",    "img",
                                      "input", "link", "meta", "param", "source", "track", "wbr"};
  return std::any_of(std::begin(kVoid), std::end(kVoid),
                     [&](const char* v) { return lower_name == v; });
}

struct Event {
  std::size_t offset;  // plain code point offset
  GapItem::Kind kind;
  std::size_t tag;
};

class Scanner {
 public:
  Scanner(std::string_view text, MarkupFormat format, const ParseOptions& options)
      : text_(text), format_(format), options_(options) {}

  TaggedSentence Run() {
    switch (format_) {
      case MarkupFormat::kPlain:
        while (pos_ < text_.size()) Literal();
        break;
      case MarkupFormat::kXml:
      case MarkupFormat::kHtml:
        ScanAngle();
        break;
      case MarkupFormat::kMarkdown:
        ScanMarkdown();
        break;
    }
    while (!stack_.empty()) {
      const std::size_t t = stack_.back();
      if (!options_.lenient) Fail("unclosed tag <" + tags_[t].name + ">", tag_pos_[t]);
      Demote(t);
    }
    return Assemble();
  }

 private:
  [[noreturn]] void Fail(const std::string& what, std::size_t byte_pos) const {
    throw ParseError("markup: " + what, utf8::Length(text_.substr(0, byte_pos)));
  }

  // Appends one decoded code point whose spelling is text_[begin, end).
  void Emit(char32_t cp, std::size_t begin, std::size_t end) {
    utf8::Append(plain_, cp);
    chars_.push_back(cp);
    raw_.emplace_back(begin, end);
  }

  void Literal() {
    const auto cps = utf8::Decode(text_.substr(pos_, std::min<std::size_t>(4, text_.size() - pos_)));
    const std::size_t len = cps.empty() ? 1 : cps[0].byte_length;
    Emit(cps.empty() ? U'\uFFFD' : cps[0].value, pos_, pos_ + len);
    pos_ += len;
  }

  std::size_t Offset() const { return raw_.size(); }

  std::size_t NewTag(std::string name, std::string raw, bool point, std::size_t byte_pos) {
    Tag t;
    t.name = std::move(name);
    t.open = std::move(raw);
    t.point = point;
    tags_.push_back(std::move(t));
    tag_pos_.push_back(byte_pos);
    open_event_.push_back(events_.size());
    events_.push_back({Offset(), point ? GapItem::Kind::kPoint : GapItem::Kind::kOpen,
                       tags_.size() - 1});
    if (!point) stack_.push_back(tags_.size() - 1);
    return tags_.size() - 1;
  }

  void CloseTop(std::string raw) {
    const std::size_t t = stack_.back();
    stack_.pop_back();
    tags_[t].close = std::move(raw);
    events_.push_back({Offset(), GapItem::Kind::kClose, t});
  }

  // An open tag that never closed keeps its place as a point tag.
  void Demote(std::size_t t) {
    stack_.erase(std::find(stack_.begin(), stack_.end(), t));
    tags_[t].point = true;
    events_[open_event_[t]].kind = GapItem::Kind::kPoint;
  }

  bool SameName(std::string_view a, std::string_view b) const {
    return format_ == MarkupFormat::kHtml ? Lower(a) == Lower(b) : a == b;
  }

  // ---- xml / html ----

  void ScanAngle() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '<') {
        Angle();
      } else if (c == '&') {
        Entity();
      } else {
        Literal();
      }
    }
  }

  void PointUntil(std::string_view name, std::string_view terminator) {
    const std::size_t end = text_.find(terminator, pos_);
    if (end == std::string_view::npos) Fail("unterminated " + std::string(name), pos_);
    const std::size_t stop = end + terminator.size();
    NewTag(std::string(name), std::string(text_.substr(pos_, stop - pos_)), true, pos_);
    pos_ = stop;
  }

  void Angle() {
    const std::string_view rest = text_.substr(pos_);
    if (rest.starts_with("<!--")) return PointUntil("!--", "-->");
    if (rest.starts_with("<![CDATA[")) return PointUntil("![CDATA[", "]]>");
    if (rest.starts_with("<?")) return PointUntil("?", "?>");
    if (rest.starts_with("<!")) return PointUntil("!", ">");
    const std::size_t start = pos_;
    if (rest.starts_with("</")) {
      std::size_t p = pos_ + 2;
      const std::size_t name_begin = p;
      if (p >= text_.size() || !IsNameStart(text_[p])) Fail("bad closing tag", start);
      while (p < text_.size() && IsNameChar(text_[p])) ++p;
      const std::string name(text_.substr(name_begin, p - name_begin));
      while (p < text_.size() && IsBlank(text_[p])) ++p;
      if (p >= text_.size() || text_[p] != '>') Fail("bad closing tag", start);
      const std::string raw(text_.substr(start, p + 1 - start));
      pos_ = p + 1;
      if (!stack_.empty() && SameName(tags_[stack_.back()].name, name)) {
        CloseTop(raw);
        return;
      }
      if (!options_.lenient) Fail("mismatched closing tag </" + name + ">", start);
      auto it = std::find_if(stack_.rbegin(), stack_.rend(),
                             [&](std::size_t t) { return SameName(tags_[t].name, name); });
      if (it == stack_.rend()) {
        NewTag("/" + name, raw, true, start);
        return;
      }
      while (!SameName(tags_[stack_.back()].name, name)) Demote(stack_.back());
      CloseTop(raw);
      return;
    }
    std::size_t p = pos_ + 1;
    if (p >= text_.size() || !IsNameStart(text_[p])) {
      if (options_.lenient) return Literal();
      Fail("unescaped '<'", start);
    }
    const std::size_t name_begin = p;
    while (p < text_.size() && IsNameChar(text_[p])) ++p;
    const std::string name(text_.substr(name_begin, p - name_begin));
    char quote = 0;
    bool self_closing = false;
    for (;; ++p) {
      if (p >= text_.size()) Fail("unterminated tag <" + name, start);
      const char c = text_[p];
      if (quote != 0) {
        if (c == quote) quote = 0;
        continue;
      }
      if (c == '"' || c == '\'') {
        quote = c;
      } else if (c == '<') {
        Fail("'<' inside tag <" + name, p);
      } else if (c == '>') {
        self_closing = text_[p - 1] == '/';
        break;
      }
    }
    const std::string raw(text_.substr(start, p + 1 - start));
    pos_ = p + 1;
    const std::string lower = Lower(name);
    if (format_ == MarkupFormat::kHtml && (lower == "script" || lower == "style")) {
      const std::size_t end = Lower(text_.substr(pos_)).find("</" + lower);
      if (end == std::string::npos) Fail("unterminated <" + name + ">", start);
      const std::size_t gt = text_.find('>', pos_ + end);
      if (gt == std::string_view::npos) Fail("unterminated <" + name + ">", start);
      NewTag(name, std::string(text_.substr(start, gt + 1 - start)), true, start);
      pos_ = gt + 1;
      return;
    }
    const bool point = self_closing || (format_ == MarkupFormat::kHtml && IsHtmlVoid(lower));
    NewTag(name, raw, point, start);
  }

  void Entity() {
    const std::size_t start = pos_;
    const std::size_t semi = text_.find(';', pos_);
    const bool html = format_ == MarkupFormat::kHtml;
    auto bad = [&]() {
      if (html || options_.lenient) return Literal();
      Fail("bad entity reference", start);
    };
    if (semi == std::string_view::npos || semi - pos_ > 12) return bad();
    const std::string_view body = text_.substr(pos_ + 1, semi - pos_ - 1);
    char32_t cp = 0;
    if (body.starts_with("#")) {
      const bool hex = body.size() > 1 && (body[1] == 'x' || body[1] == 'X');
      const std::string_view digits = body.substr(hex ? 2 : 1);
      if (digits.empty()) return bad();
      std::uint32_t v = 0;
      for (char d : digits) {
        const bool ok = hex ? std::isxdigit(static_cast<unsigned char>(d)) != 0
                            : std::isdigit(static_cast<unsigned char>(d)) != 0;
        if (!ok) return bad();
        v = v * (hex ? 16 : 10) +
            static_cast<std::uint32_t>(std::isdigit(static_cast<unsigned char>(d))
                                           ? d - '0'
                                           : std::tolower(static_cast<unsigned char>(d)) - 'a' + 10);
        if (v > 0x10FFFF) return bad();
      }
      if (v == 0 || (v >= 0xD800 && v <= 0xDFFF)) return bad();
      cp = static_cast<char32_t>(v);
    } else {
      const auto& table = html ? HtmlEntities() : XmlEntities();
      auto it = table.find(body);
      if (it == table.end()) return bad();
      cp = it->second;
    }
    Emit(cp, start, semi + 1);
    pos_ = semi + 1;
  }

  // ---- markdown ----

  void ScanMarkdown() {
    bool line_start = true;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (line_start && (c == ' ' || c == '\t')) {
        Literal();
        continue;
      }
      if (line_start) {
        BlockMarkers();
        line_start = false;
        continue;
      }
      if (c == '\n') {
        Literal();
        line_start = true;
      } else if (c == '\\' && pos_ + 1 < text_.size() && IsAsciiPunct(text_[pos_ + 1])) {
        Emit(static_cast<char32_t>(text_[pos_ + 1]), pos_, pos_ + 2);
        pos_ += 2;
      } else if (c == '`') {
        CodeSpan();
      } else if (c == '*' || c == '_') {
        Emphasis(c);
      } else if (c == '[' || (c == '!' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '[')) {
        NewTag(c == '!' ? "image" : "link", c == '!' ? "![" : "[", false, pos_);
        pos_ += c == '!' ? 2 : 1;
      } else if (c == ']') {
        LinkClose();
      } else {
        Literal();
      }
    }
  }

  std::size_t SpacesAt(std::size_t p) const {
    std::size_t q = p;
    while (q < text_.size() && (text_[q] == ' ' || text_[q] == '\t')) ++q;
    return q - p;
  }

  void BlockMarkers() {
    for (;;) {
      const std::size_t p = pos_;
      if (p >= text_.size()) return;
      if (text_[p] == '>') {
        const std::size_t n = 1 + SpacesAt(p + 1);
        NewTag("md-quote", std::string(text_.substr(p, n)), true, p);
        pos_ += n;
        continue;
      }
      std::size_t q = p;
      while (q < text_.size() && text_[q] == '#' && q - p < 7) ++q;
      if (q > p && q - p <= 6 && SpacesAt(q) > 0) {
        const std::size_t n = q - p + SpacesAt(q);
        NewTag("md-heading", std::string(text_.substr(p, n)), true, p);
        pos_ += n;
        return;
      }
      if ((text_[p] == '-' || text_[p] == '*' || text_[p] == '+') && SpacesAt(p + 1) > 0) {
        const std::size_t n = 1 + SpacesAt(p + 1);
        NewTag("md-list", std::string(text_.substr(p, n)), true, p);
        pos_ += n;
        return;
      }
      q = p;
      while (q < text_.size() && std::isdigit(static_cast<unsigned char>(text_[q])) && q - p < 9) ++q;
      if (q > p && q < text_.size() && (text_[q] == '.' || text_[q] == ')') &&
          SpacesAt(q + 1) > 0) {
        const std::size_t n = q + 1 - p + SpacesAt(q + 1);
        NewTag("md-list", std::string(text_.substr(p, n)), true, p);
        pos_ += n;
        return;
      }
      return;
    }
  }

  void CodeSpan() {
    const std::size_t start = pos_;
    std::size_t n = 0;
    while (pos_ + n < text_.size() && text_[pos_ + n] == '`') ++n;
    const std::string run(n, '`');
    std::size_t search = pos_ + n;
    std::size_t close = std::string_view::npos;
    while ((close = text_.find(run, search)) != std::string_view::npos) {
      const bool longer = close + n < text_.size() && text_[close + n] == '`';
      if (!longer) break;
      search = close + n;
      while (search < text_.size() && text_[search] == '`') ++search;
    }
    if (close == std::string_view::npos) {
      if (!options_.lenient) Fail("unterminated code span", start);
      for (std::size_t i = 0; i < n; ++i) Literal();
      return;
    }
    NewTag("code", run, false, start);
    pos_ = start + n;
    while (pos_ < close) Literal();
    CloseTop(run);
    pos_ = close + n;
  }

  void Emphasis(char c) {
    const std::size_t start = pos_;
    std::size_t n = 0;
    while (pos_ + n < text_.size() && text_[pos_ + n] == c) ++n;
    const bool can_open = pos_ + n < text_.size() && !IsBlank(text_[pos_ + n]);
    const bool can_close = pos_ > 0 && !IsBlank(text_[pos_ - 1]);
    if (!can_open && !can_close) {
      for (std::size_t i = 0; i < n; ++i) Literal();
      return;
    }
    std::size_t left = n;
    while (left > 0) {
      if (can_close && !stack_.empty()) {
        const Tag& top = tags_[stack_.back()];
        const std::size_t len = top.open.size();
        if ((top.name == "em" || top.name == "strong") && top.open[0] == c && len <= left) {
          CloseTop(std::string(len, c));
          pos_ += len;
          left -= len;
          continue;
        }
      }
      if (!can_open) {
        if (!options_.lenient) Fail("unmatched emphasis marker", start);
        for (; left > 0; --left) Literal();
        return;
      }
      const std::size_t len = std::min<std::size_t>(2, left);
      NewTag(len == 2 ? "strong" : "em", std::string(len, c), false, pos_);
      pos_ += len;
      left -= len;
    }
  }

  void LinkClose() {
    const std::size_t start = pos_;
    const bool top_link =
        !stack_.empty() && (tags_[stack_.back()].name == "link" || tags_[stack_.back()].name == "image");
    if (top_link && pos_ + 1 < text_.size() && text_[pos_ + 1] == '(') {
      const std::size_t end = text_.find(')', pos_ + 2);
      const std::size_t nl = text_.find('\n', pos_ + 2);
      if (end != std::string_view::npos && (nl == std::string_view::npos || end < nl)) {
        CloseTop(std::string(text_.substr(pos_, end + 1 - pos_)));
        pos_ = end + 1;
        return;
      }
    }
    if (!options_.lenient) Fail("unmatched ']'", start);
    Literal();
  }

  // ---- assembly ----

  TaggedSentence Assemble() {
    TaggedSentence out;
    out.format = format_;
    std::vector<std::size_t> breaks;
    for (const auto& e : events_) breaks.push_back(e.offset);
    out.plain = TokenizeWithBreaks(plain_, options_.lang, breaks);
    const std::size_t n = out.plain.size();
    const std::size_t nchars = raw_.size();

    for (const auto& tok : out.plain.tokens) {
      const std::size_t b = raw_[tok.char_span.start].first;
      const std::size_t e = raw_[tok.char_span.end - 1].second;
      out.token_raw.emplace_back(text_.substr(b, e - b));
    }
    out.gaps.assign(n + 1, Gap{});
    std::size_t ev = 0;
    for (std::size_t g = 0; g <= n; ++g) {
      const std::size_t lo = g == 0 ? 0 : out.plain.tokens[g - 1].char_span.end;
      const std::size_t hi = g == n ? nchars : out.plain.tokens[g].char_span.start;
      Gap& gap = out.gaps[g];
      for (std::size_t c = lo; c <= hi; ++c) {
        for (; ev < events_.size() && events_[ev].offset == c; ++ev) {
          const Event& e = events_[ev];
          GapItem item;
          item.kind = e.kind;
          item.tag = e.tag;
          item.raw = e.kind == GapItem::Kind::kClose ? tags_[e.tag].close : tags_[e.tag].open;
          gap.items.push_back(std::move(item));
          Tag& t = tags_[e.tag];
          if (e.kind == GapItem::Kind::kClose) {
            t.tokens.end = g;
          } else {
            t.tokens = {g, g};
          }
        }
        if (c == hi) break;
        const auto [b, e] = raw_[c];
        if (gap.items.empty() || gap.items.back().kind != GapItem::Kind::kSpace) {
          gap.items.push_back({GapItem::Kind::kSpace, 0, "", ""});
        }
        gap.items.back().raw.append(text_.substr(b, e - b));
        utf8::Append(gap.items.back().text, chars_[c]);
      }
    }

    std::vector<std::size_t> stack;
    for (const auto& e : events_) {
      Tag& t = tags_[e.tag];
      if (e.kind == GapItem::Kind::kClose) {
        stack.pop_back();
        continue;
      }
      if (!stack.empty()) t.parent = stack.back();
      t.depth = stack.size();
      if (e.kind == GapItem::Kind::kOpen) stack.push_back(e.tag);
    }
    out.tags = std::move(tags_);
    return out;
  }

  std::string_view text_;
  MarkupFormat format_;
  ParseOptions options_;
  std::size_t pos_ = 0;

  std::string plain_;
  std::vector<char32_t> chars_;
  std::vector<std::pair<std::size_t, std::size_t>> raw_;  // spelling of each code point

  std::vector<Tag> tags_;
  std::vector<std::size_t> tag_pos_;
  std::vector<std::size_t> open_event_;
  std::vector<Event> events_;
  std::vector<std::size_t> stack_;
};

}  // namespace

TaggedSentence ParseTagged(std::string_view text, MarkupFormat format,
                           const ParseOptions& options) {
  return Scanner(text, format, options).Run();
}

std::string EscapeText(std::string_view token, MarkupFormat format, bool line_start) {
  std::string out;
  switch (format) {
    case MarkupFormat::kPlain:
      return std::string(token);
    case MarkupFormat::kXml:
    case MarkupFormat::kHtml:
      for (char c : token) {
        if (c == '&') {
          out += "&amp;";
        } else if (c == '<') {
          out += "&lt;";
        } else if (c == '>') {
          out += "&gt;";
        } else {
          out += c;
        }
      }
      return out;
    case MarkupFormat::kMarkdown:
      for (std::size_t i = 0; i < token.size(); ++i) {
        const char c = token[i];
        const bool special = c == '\\' || c == '`' || c == '*' || c == '_' || c == '[' || c == ']';
        const bool block = i == 0 && line_start && (c == '#' || c == '>' || c == '-' || c == '+');
        if (special || block) out += '\\';
        out += c;
      }
      return out;
  }
  return out;
}

}  // namespace imt::tags
