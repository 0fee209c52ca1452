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

#ifndef IMT_MODEL_CORPUS_H_
#define IMT_MODEL_CORPUS_H_

#include <string>
#include <string_view>
#include <vector>

#include "imt/model/hmm_aligner.h"

namespace imt::model {

// Lines of a text file without their terminators ("\r\n" or "\n"). Throws
// IoError when the file cannot be read.
std::vector<std::string> ReadLines(const std::string& path);

// Line-aligned source and target files, tokenized per language. Throws
// ParseError at the first line past the shorter file when the line counts
// differ.
std::vector<WordPair> ReadParallelCorpus(const std::string& src_path, const std::string& tgt_path,
                                         std::string_view src_lang = "",
                                         std::string_view tgt_lang = "");

}  // namespace imt::model

#endif  // IMT_MODEL_CORPUS_H_
