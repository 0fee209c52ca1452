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

#include "imt/service/service.h"

#include <stdexcept>

#include "imt/autocomplete/gwlan.h"
#include "imt/core/error.h"
#include "imt/decode/constraints.h"
#include "imt/decode/decoder.h"
#include "imt/tags/document.h"

namespace imt::service {
namespace {

using nlohmann::json;

class ApiError : public std::runtime_error {
 public:
  ApiError(int code, const std::string& message) : std::runtime_error(message), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

struct Segment {
  std::string text;
  std::string status;
};

struct Reference {
  std::string type;  // "term" or "sent"
  std::string source;
  std::string target;
};

const json& Field(const json& j, const char* key, const char* where) {
  if (!j.contains(key)) throw ApiError(400, std::string("missing required field: ") + where + key);
  return j.at(key);
}

std::string String(const json& j, const std::string& what) {
  if (!j.is_string()) throw ApiError(400, what + " must be a string");
  return j.get<std::string>();
}

std::vector<std::string> Words(std::string_view text, const std::string& lang) {
  return Tokenize(text, lang).words();
}

void ReadReferences(const json& list, std::vector<Reference>& out) {
  if (!list.is_array()) throw ApiError(400, "reference_list must be an array");
  for (const json& r : list) {
    if (!r.is_object()) throw ApiError(400, "reference_list entries must be objects");
    Reference ref{String(Field(r, "type", "reference_list[]."), "reference_list[].type"),
                  String(Field(r, "source", "reference_list[]."), "reference_list[].source"),
                  String(Field(r, "target", "reference_list[]."), "reference_list[].target")};
    if (ref.type != "term" && ref.type != "sent") {
      throw ApiError(400, "reference_list[].type must be \"term\" or \"sent\"");
    }
    out.push_back(std::move(ref));
  }
}

void ReadLegacyLib(const json& ref, const char* key, const char* type, std::vector<Reference>& out) {
  if (!ref.contains(key)) return;
  const json& lib = ref.at(key);
  if (!lib.is_array()) throw ApiError(400, std::string("reference.") + key + " must be an array");
  for (const json& e : lib) {
    if (!e.is_object()) throw ApiError(400, std::string("reference.") + key + " entries must be objects");
    out.push_back({type, String(Field(e, "source", "reference.lib[]."), "source"),
                   String(Field(e, "target", "reference.lib[]."), "target")});
  }
}

}  // namespace

struct Service::Request {
  std::string fn;
  tags::MarkupFormat format = tags::MarkupFormat::kPlain;
  std::size_t beam = 4;
  std::vector<std::string> texts;
  std::vector<Segment> segments;
  std::optional<std::size_t> limit;
  std::vector<Reference> references;
  std::vector<std::string> warnings;

  const std::string& FirstText() const {
    if (texts.empty()) throw ApiError(400, "source.text_list is empty");
    return texts.front();
  }
};

Service::Service(ServiceConfig config, std::shared_ptr<const model::ReferenceModel> model,
                 std::shared_ptr<const tm::TmIndex> tm, std::shared_ptr<const tm::TermStore> terms)
    : config_(std::move(config)),
      model_(model),
      tm_(std::move(tm)),
      terms_(std::move(terms)),
      scorer_(std::move(model)),
      trie_(autocomplete::TargetTrie(*model_, config_.initials_path.empty()
                                                   ? TypedKeyFunction::Prefix()
                                                   : TypedKeyFunction::LoadInitials(
                                                         config_.initials_path))) {}

Service Service::FromConfig(const ServiceConfig& config) {
  if (config.model_path.empty()) throw InvalidArgument("service: no model path configured");
  auto model = std::make_shared<const model::ReferenceModel>(model::LoadModelFile(config.model_path));
  std::shared_ptr<const tm::TmIndex> index;
  if (!config.tm_path.empty()) {
    index = std::make_shared<const tm::TmIndex>(
        tm::LoadTmStore(config.tm_path, config.src_lang, config.tgt_lang));
  }
  std::shared_ptr<const tm::TermStore> terms;
  if (!config.terms_path.empty()) {
    terms = std::make_shared<const tm::TermStore>(
        tm::TermStore::ReadFile(config.terms_path, config.src_lang, config.tgt_lang));
  }
  return Service(config, std::move(model), std::move(index), std::move(terms));
}

ApiResponse Service::HandleBody(std::string_view body) const {
  json request;
  try {
    request = json::parse(body);
  } catch (const json::parse_error& e) {
    return {400, {{"code", 400}, {"message", std::string("malformed JSON: ") + e.what()}}};
  }
  return Handle(request);
}

ApiResponse Service::Handle(const json& j) const {
  auto error = [](int code, const std::string& message) {
    return ApiResponse{code, {{"code", code}, {"message", message}}};
  };
  try {
    if (!j.is_object()) throw ApiError(400, "request must be a JSON object");
    const json& header = Field(j, "header", "");
    if (!header.is_object()) throw ApiError(400, "header must be an object");
    Request req;
    req.fn = String(Field(header, "fn", "header."), "header.fn");

    if (!config_.users.empty()) {
      const std::string user = header.contains("user_name") ? String(header.at("user_name"), "header.user_name") : "";
      const std::string token = header.contains("token") ? String(header.at("token"), "header.token") : "";
      bool ok = false;
      for (const auto& c : config_.users) ok = ok || (c.user_name == user && c.token == token);
      if (!ok) throw ApiError(401, "unknown user name or token");
    }

    using Handler = json (Service::*)(const Request&) const;
    Handler handler = nullptr;
    if (req.fn == "dynamic_suggestion") handler = &Service::DynamicSuggestion;
    if (req.fn == "auto_translation") handler = &Service::AutoTranslation;
    if (req.fn == "static_suggestion") handler = &Service::StaticSuggestion;
    if (req.fn == "selection_suggestion") handler = &Service::SelectionSuggestion;
    if (handler == nullptr) throw ApiError(404, "unknown function: " + req.fn);

    if (j.contains("type")) {
      try {
        req.format = tags::ParseFormat(String(j.at("type"), "type"));
      } catch (const InvalidArgument&) {
        throw ApiError(400, "type must be one of plain, xml, html, markdown");
      }
    }
    const std::string category = j.contains("model_category") ? String(j.at("model_category"), "model_category") : "normal";
    if (category == "fast") {
      req.beam = config_.beam_fast;
    } else if (category == "normal") {
      req.beam = config_.beam_normal;
    } else if (category == "slow") {
      req.beam = config_.beam_slow;
    } else {
      throw ApiError(400, "model_category must be one of slow, normal, fast");
    }

    const json& source = Field(j, "source", "");
    if (!source.is_object()) throw ApiError(400, "source must be an object");
    const json& texts = Field(source, "text_list", "source.");
    if (!texts.is_array()) throw ApiError(400, "source.text_list must be an array");
    for (const json& t : texts) req.texts.push_back(String(t, "source.text_list[]"));

    if (j.contains("target")) {
      const json& target = j.at("target");
      if (!target.is_object()) throw ApiError(400, "target must be an object");
      if (target.contains("segment_list")) {
        const json& segs = target.at("segment_list");
        if (!segs.is_array()) throw ApiError(400, "target.segment_list must be an array");
        for (const json& s : segs) {
          if (!s.is_object()) throw ApiError(400, "segment_list entries must be objects");
          Segment seg{String(Field(s, "text", "segment_list[]."), "segment_list[].text"),
                      String(Field(s, "status", "segment_list[]."), "segment_list[].status")};
          if (seg.status != "editing" && seg.status != "prefix" && seg.status != "std" &&
              seg.status != "selection" && seg.status != "plain") {
            throw ApiError(400, "unknown segment status: " + seg.status);
          }
          req.segments.push_back(std::move(seg));
        }
      }
    }

    if (j.contains("limit")) {
      const json& limit = j.at("limit");
      const json& n = limit.is_object() ? Field(limit, "count", "limit.") : limit;
      if (!n.is_number_integer() || n.get<long long>() < 1) {
        throw ApiError(400, "limit must be a positive integer");
      }
      req.limit = std::min<std::size_t>(n.get<std::size_t>(), config_.max_limit);
    }

    if (j.contains("reference_list")) ReadReferences(j.at("reference_list"), req.references);
    if (j.contains("reference")) {
      const json& ref = j.at("reference");
      if (!ref.is_object()) throw ApiError(400, "reference must be an object");
      ReadLegacyLib(ref, "term_lib", "term", req.references);
      ReadLegacyLib(ref, "sentence_lib", "sent", req.references);
      req.warnings.push_back("field \"reference\" is deprecated; use \"reference_list\"");
    }

    json body = (this->*handler)(req);
    body["header"] = {{"fn", req.fn}, {"code", 0}, {"message", "ok"}};
    if (!req.warnings.empty()) body["warnings"] = req.warnings;
    return {200, std::move(body)};
  } catch (const ApiError& e) {
    return error(e.code(), e.what());
  } catch (const Infeasible& e) {
    return error(422, e.what());
  } catch (const SearchSpaceTooLarge& e) {
    return error(422, e.what());
  } catch (const InvalidArgument& e) {
    return error(400, e.what());
  } catch (const std::exception& e) {
    return error(500, e.what());
  }
}

namespace {

decode::DecodeConfig DecodeFor(const ServiceConfig& c, std::size_t beam) {
  decode::DecodeConfig cfg;
  cfg.beam_size = beam;
  cfg.max_len = c.max_len;
  return cfg;
}

void Append(std::vector<std::string>& out, const std::vector<std::string>& words) {
  out.insert(out.end(), words.begin(), words.end());
}

}  // namespace

json Service::DynamicSuggestion(const Request& req) const {
  if (req.segments.empty()) throw ApiError(400, "no interaction spans: target.segment_list is empty");
  std::optional<std::size_t> editing;
  bool sentence = false;
  for (std::size_t i = 0; i < req.segments.size(); ++i) {
    const auto& status = req.segments[i].status;
    if (status == "editing") {
      if (editing) throw ApiError(400, "at most one editing span is allowed");
      editing = i;
    }
    sentence = sentence || status == "prefix" || status == "std";
  }
  if (!editing && !sentence) throw ApiError(400, "no interaction spans: need an editing, prefix or std span");
  const Sentence src = Tokenize(req.FirstText(), config_.src_lang);
  json out = json::object();

  if (editing) {
    std::string typed;
    for (const std::string& w : Words(req.segments[*editing].text, config_.tgt_lang)) typed += w;
    if (typed.empty()) throw ApiError(400, "editing span is empty");
    autocomplete::TranslationContext ctx;
    for (std::size_t i = 0; i < req.segments.size(); ++i) {
      if (i == *editing) continue;
      Append(i < *editing ? ctx.left : ctx.right, Words(req.segments[i].text, config_.tgt_lang));
    }
    const auto ranked = autocomplete::CompleteWord(scorer_, trie_, src, ctx, typed,
                                                   req.limit.value_or(config_.default_word_limit));
    json words = json::array();
    for (const auto& w : ranked) words.push_back(w.word);
    out["ime_suggestion"] = std::move(words);
  }

  if (sentence) {
    decode::ConstraintSet cs;
    cs.ordered = true;
    for (const auto& seg : req.segments) {
      const auto words = Words(seg.text, config_.tgt_lang);
      if (seg.status == "prefix") Append(cs.prefix, words);
      if (seg.status == "std" && !words.empty()) cs.pieces.push_back(words);
    }
    const auto result = decode::Ogbs(scorer_, src, cs, DecodeFor(config_, req.beam));
    out["sentence_suggestion"] = FromWords(result.best.tokens, config_.tgt_lang).text;
  }
  return out;
}

json Service::AutoTranslation(const Request& req) const {
  if (req.texts.empty()) throw ApiError(400, "source.text_list is empty");
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> sents;
  tm::TermStore terms;
  for (const auto& r : req.references) {
    auto src = Words(r.source, config_.src_lang);
    auto tgt = Words(r.target, config_.tgt_lang);
    if (src.empty() || tgt.empty()) throw ApiError(400, "reference_list entries need a non-empty source and target");
    if (r.type == "sent") {
      sents.emplace_back(std::move(src), std::move(tgt));
    } else {
      terms.Add({std::move(src), std::move(tgt)});
    }
  }
  const tm::TmIndex index = tm::TmIndex::FromPairs(sents);

  tags::TranslatorOptions opts;
  opts.decode = DecodeFor(config_, req.beam);
  opts.tgt_lang = config_.tgt_lang;
  opts.bias.lambda = config_.lambda;
  if (!index.empty()) opts.tm = &index;
  if (!terms.empty()) opts.terms = &terms;
  const tags::ModelTranslator translator(model_, opts);

  tags::DocumentOptions doc;
  doc.format = req.format;
  doc.src_lang = config_.src_lang;
  json list = json::array();
  json warnings = json::array();
  for (std::size_t i = 0; i < req.texts.size(); ++i) {
    const auto result = tags::TranslateDocument(req.texts[i], doc, translator);
    list.push_back(result.text);
    for (const auto& w : result.warnings) {
      json entry = {{"text", i}, {"line", w.sentence}, {"reason", w.reason}};
      if (w.tag) entry["tag"] = *w.tag;
      warnings.push_back(std::move(entry));
    }
  }
  json out = {{"auto_translation", std::move(list)}};
  if (!warnings.empty()) out["translation_warnings"] = std::move(warnings);
  return out;
}

json Service::StaticSuggestion(const Request& req) const {
  const Sentence src = Tokenize(req.FirstText(), config_.src_lang);
  json term_list = json::array();
  if (terms_) {
    for (const auto& m : terms_->Lookup(src)) {
      if (req.limit && term_list.size() >= *req.limit) break;
      term_list.push_back({{"source", m.source},
                           {"target", m.target},
                           {"span", {m.tokens.start, m.tokens.end}}});
    }
  }
  json examples = json::array();
  if (tm_ && !tm_->empty() && !src.empty()) {
    const auto words = src.words();
    for (const auto& m : tm::ExampleRetrieve(*tm_, words, req.limit.value_or(tm::kDefaultExamples))) {
      examples.push_back({{"source", Join(m.entry.src)},
                          {"target", FromWords(m.entry.tgt, config_.tgt_lang).text},
                          {"score", m.score}});
    }
  }
  return {{"term_list", std::move(term_list)}, {"sentence_example_list", std::move(examples)}};
}

json Service::SelectionSuggestion(const Request& req) const {
  json list = json::array();
  for (const auto& seg : req.segments) {
    if (seg.status != "selection") continue;
    const Sentence src = Tokenize(seg.text, config_.src_lang);
    std::vector<std::string> tokens;
    if (!src.empty()) tokens = decode::BeamSearch(scorer_, src, DecodeFor(config_, req.beam)).best.tokens;
    list.push_back({{"text", seg.text}, {"translation", FromWords(tokens, config_.tgt_lang).text}});
  }
  if (list.empty()) throw ApiError(400, "no selection span in target.segment_list");
  return {{"segment_suggestion", std::move(list)}};
}

}  // namespace imt::service
