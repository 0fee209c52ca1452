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

#include "imt/tags/document.h"

#include <utility>

#include "imt/core/error.h"
#include "imt/decode/tm_guided.h"
#include "imt/model/hmm_aligner.h"

namespace imt::tags {

Translation IdentityTranslator::Translate(const Sentence& src) const {
  Translation t{src, {}, {}};
  for (std::size_t i = 0; i < src.size(); ++i) t.alignment.emplace_back(i, i);
  return t;
}

ModelTranslator::ModelTranslator(std::shared_ptr<const model::ReferenceModel> model,
                                 TranslatorOptions options)
    : model_(model), scorer_(std::move(model)), options_(std::move(options)) {}

Translation ModelTranslator::Translate(const Sentence& src) const {
  decode::TmGuidance guidance;
  if (options_.tm != nullptr) guidance = decode::RetrieveGuidance(*options_.tm, src);
  const decode::TmBias bias{guidance.cn ? &*guidance.cn : nullptr, options_.bias};
  const decode::TmBias* bias_ptr = guidance.cn ? &bias : nullptr;

  decode::ConstraintSet cs;
  cs.ordered = true;
  if (options_.terms != nullptr) {
    for (const auto& m : options_.terms->Lookup(src)) cs.pieces.push_back(options_.terms->terms()[m.term].tgt);
  }
  Translation t;
  std::vector<std::string> words;
  if (cs.empty()) {
    words = decode::BeamSearch(scorer_, src, options_.decode, bias_ptr).best.tokens;
  } else {
    try {
      words = decode::Ogbs(scorer_, src, cs, options_.decode, bias_ptr).best.tokens;
    } catch (const Infeasible& e) {
      t.warning = std::string("term constraints dropped: ") + e.what();
      words = decode::BeamSearch(scorer_, src, options_.decode, bias_ptr).best.tokens;
    }
  }
  t.target = FromWords(words, options_.tgt_lang);
  const auto src_words = src.words();
  t.alignment = model::ViterbiAlign(model_->aligner, src_words, words);
  return t;
}

namespace {

bool Blank(std::string_view line) {
  for (char c : line) {
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

}  // namespace

DocumentResult TranslateDocument(std::string_view doc, const DocumentOptions& options,
                                 const SegmentTranslator& translator) {
  DocumentResult result;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (true) {
    const std::size_t nl = doc.find('\n', pos);
    std::string_view line = doc.substr(pos, nl == std::string_view::npos ? doc.npos : nl - pos);
    std::string_view cr;
    if (!line.empty() && line.back() == '\r') {
      cr = line.substr(line.size() - 1);
      line.remove_suffix(1);
    }
    auto warn = [&](std::string reason) {
      result.warnings.push_back({line_no, std::nullopt, std::move(reason)});
    };

    if (Blank(line)) {
      result.text += line;
    } else {
      ParseOptions po{options.src_lang, true};
      TaggedSentence tagged;
      try {
        tagged = ParseTagged(line, options.format, po);
      } catch (const ParseError& e) {
        warn("markup not parsed; translated as plain text (" + std::string(e.what()) + ")");
        tagged = ParseTagged(line, MarkupFormat::kPlain, po);
      }
      if (tagged.plain.empty()) {
        result.text += line;
      } else {
        std::optional<Translation> tr;
        try {
          tr = translator.Translate(tagged.plain);
        } catch (const Error& e) {
          warn("translation failed; line kept (" + std::string(e.what()) + ")");
        }
        if (!tr) {
          result.text += line;
        } else {
          if (!tr->warning.empty()) warn(tr->warning);
          std::vector<TagWarning> tag_warnings;
          try {
            const TagPlacement placement =
                PlaceTags(tagged, tr->alignment, tr->target.size(), options.policy, &tag_warnings);
            result.text += ReinsertTags(tagged, tr->target, tr->alignment, placement);
            for (auto& w : tag_warnings) {
              w.sentence = line_no;
              result.warnings.push_back(std::move(w));
            }
          } catch (const Error& e) {
            warn("tags not placed; markup removed (" + std::string(e.what()) + ")");
            result.text += tr->target.text;
          }
        }
      }
    }
    result.text += cr;
    if (nl == std::string_view::npos) break;
    result.text += '\n';
    pos = nl + 1;
    ++line_no;
  }
  return result;
}

}  // namespace imt::tags
