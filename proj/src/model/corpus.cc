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

#include "imt/model/corpus.h"

#include <fstream>

#include "imt/core/error.h"
#include "imt/core/sentence.h"

namespace imt::model {

std::vector<std::string> ReadLines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  if (in.bad()) throw IoError("read failed: " + path);
  return lines;
}

std::vector<WordPair> ReadParallelCorpus(const std::string& src_path, const std::string& tgt_path,
                                         std::string_view src_lang, std::string_view tgt_lang) {
  const auto src = ReadLines(src_path);
  const auto tgt = ReadLines(tgt_path);
  if (src.size() != tgt.size()) {
    throw ParseError("parallel corpus: " + src_path + " has " + std::to_string(src.size()) +
                         " lines, " + tgt_path + " has " + std::to_string(tgt.size()),
                     std::min(src.size(), tgt.size()) + 1);
  }
  std::vector<WordPair> pairs;
  pairs.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    pairs.emplace_back(Tokenize(src[i], src_lang).words(), Tokenize(tgt[i], tgt_lang).words());
  }
  return pairs;
}

}  // namespace imt::model
