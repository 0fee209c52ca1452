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

#include "imt/tm/terms.h"

#include <fstream>
#include <istream>

#include "imt/core/error.h"

namespace imt::tm {

TermStore::TermStore(std::vector<Term> terms) {
  for (auto& t : terms) Add(std::move(t));
}

void TermStore::Add(Term term) {
  if (term.src.empty() || term.tgt.empty()) {
    throw InvalidArgument("term store: empty source or target term");
  }
  std::uint32_t node = 0;
  for (const auto& w : term.src) {
    auto it = nodes_[node].children.find(w);
    if (it == nodes_[node].children.end()) {
      nodes_.emplace_back();
      it = nodes_[node].children.emplace(w, static_cast<std::uint32_t>(nodes_.size() - 1)).first;
    }
    node = it->second;
  }
  if (nodes_[node].term) return;
  nodes_[node].term = terms_.size();
  terms_.push_back(std::move(term));
}

TermStore TermStore::Read(std::istream& in, std::string_view src_lang, std::string_view tgt_lang) {
  TermStore store;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (SplitWhitespace(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError("term store: expected src<TAB>tgt", lineno);
    }
    Term t{Tokenize(line.substr(0, tab), src_lang).words(),
           Tokenize(line.substr(tab + 1), tgt_lang).words()};
    if (t.src.empty() || t.tgt.empty()) throw ParseError("term store: empty term", lineno);
    store.Add(std::move(t));
  }
  return store;
}

TermStore TermStore::ReadFile(const std::string& path, std::string_view src_lang,
                              std::string_view tgt_lang) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open term store: " + path);
  return Read(in, src_lang, tgt_lang);
}

std::vector<TermMatch> TermStore::Lookup(std::span<const std::string> words) const {
  std::vector<TermMatch> out;
  std::size_t i = 0;
  while (i < words.size()) {
    std::uint32_t node = 0;
    std::optional<std::size_t> best_term;
    std::size_t best_end = i;
    for (std::size_t j = i; j < words.size(); ++j) {
      auto it = nodes_[node].children.find(words[j]);
      if (it == nodes_[node].children.end()) break;
      node = it->second;
      if (nodes_[node].term) {
        best_term = nodes_[node].term;
        best_end = j + 1;
      }
    }
    if (!best_term) {
      ++i;
      continue;
    }
    const Term& t = terms_[*best_term];
    out.push_back({Span{i, best_end}, *best_term, Join(t.src), Join(t.tgt)});
    i = best_end;
  }
  return out;
}

std::vector<TermMatch> TermStore::Lookup(const Sentence& sentence) const {
  return Lookup(sentence.words());
}

}  // namespace imt::tm
