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

#ifndef IMT_TAGS_DOCUMENT_H_
#define IMT_TAGS_DOCUMENT_H_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imt/core/sentence.h"
#include "imt/decode/decoder.h"
#include "imt/model/reference_model.h"
#include "imt/tags/markup.h"
#include "imt/tags/reinsert.h"
#include "imt/tm/terms.h"
#include "imt/tm/tm_index.h"

namespace imt::tags {

struct Translation {
  Sentence target;
  model::Alignment alignment;  // (source, target) token links
  std::string warning;         // non-fatal problem, e.g. constraints dropped
};

class SegmentTranslator {
 public:
  virtual ~SegmentTranslator() = default;
  virtual Translation Translate(const Sentence& src) const = 0;
};

// Echoes the source with one-to-one links.
class IdentityTranslator : public SegmentTranslator {
 public:
  Translation Translate(const Sentence& src) const override;
};

struct TranslatorOptions {
  decode::DecodeConfig decode;
  std::string tgt_lang;
  const tm::TmIndex* tm = nullptr;  // biases decoding toward retrieved targets
  tm::CnBiasOptions bias;
  const tm::TermStore* terms = nullptr;  // matched terms become ordered pieces
};

// Beam search, or ordered grid beam search when terms match, followed by
// Viterbi alignment of the output against the source. Infeasible term
// constraints fall back to unconstrained search with a warning.
class ModelTranslator : public SegmentTranslator {
 public:
  explicit ModelTranslator(std::shared_ptr<const model::ReferenceModel> model,
                           TranslatorOptions options = {});
  Translation Translate(const Sentence& src) const override;

 private:
  std::shared_ptr<const model::ReferenceModel> model_;
  model::ReferenceScorer scorer_;
  TranslatorOptions options_;
};

struct DocumentOptions {
  MarkupFormat format = MarkupFormat::kPlain;
  UnassignedPolicy policy = UnassignedPolicy::kDrop;
  std::string src_lang;
};

struct DocumentResult {
  std::string text;
  std::vector<TagWarning> warnings;  // `sentence` is the 0-based line number
};

// Translates line by line. Blank lines and lines without text are copied;
// markup that cannot be parsed is translated as plain text.
DocumentResult TranslateDocument(std::string_view doc, const DocumentOptions& options,
                                 const SegmentTranslator& translator);

}  // namespace imt::tags

#endif  // IMT_TAGS_DOCUMENT_H_
