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

#include "imt/cli/cli.h"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "imt/autocomplete/gwlan.h"
#include "imt/cli/bench.h"
#include "imt/cli/bleu.h"
#include "imt/core/error.h"
#include "imt/decode/constraints.h"
#include "imt/decode/decoder.h"
#include "imt/decode/tm_guided.h"
#include "imt/model/corpus.h"
#include "imt/model/reference_model.h"
#include "imt/service/service.h"
#include "imt/tags/document.h"
#include "imt/tm/tm_index.h"

namespace imt::cli {
namespace {

struct Langs {
  std::string src;
  std::string tgt;
};

void AddLangs(CLI::App* cmd, Langs& langs) {
  cmd->add_option("--src-lang", langs.src, "Source language tag for tokenization");
  cmd->add_option("--tgt-lang", langs.tgt, "Target language tag for tokenization");
}

std::string ReadAll(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> SplitLines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

// Writes to --out when given, otherwise to `out`.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_.open(path, std::ios::binary);
      if (!file_) throw IoError("cannot write " + path);
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

struct TrainArgs {
  std::string src, tgt, model;
  model::ModelConfig config;
  Langs langs;
};

int Train(const TrainArgs& a, std::ostream& out) {
  const auto pairs = model::ReadParallelCorpus(a.src, a.tgt, a.langs.src, a.langs.tgt);
  const auto m = model::TrainReferenceModel(pairs, a.config);
  model::SaveModelFile(m, a.model);
  const auto& ll = m.aligner.log_likelihood;
  out << "model: " << a.model << "\n"
      << "pairs: " << pairs.size() << "\n"
      << "skipped_pairs: " << m.aligner.skipped_pairs << "\n"
      << "source_vocab: " << m.source_freq.size() << "\n"
      << "target_vocab: " << m.target_freq.size() << "\n"
      << "lm_order: " << m.config.order << "\n"
      << "em_iterations: " << m.config.em_iters << "\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", ll.empty() ? 0.0 : ll.back());
  out << "final_log_likelihood: " << buf << "\n";
  return 0;
}

struct TranslateArgs {
  std::string model, src = "-", out, pieces, tm, format = "plain";
  double lambda = 0.7;
  double length_penalty = 0.0;
  std::size_t beam = 4;
  std::size_t max_len = 0;
  Langs langs;
};

int Translate(const TranslateArgs& a, std::ostream& out, std::ostream& err) {
  auto m = std::make_shared<const model::ReferenceModel>(model::LoadModelFile(a.model));
  const tags::MarkupFormat format = tags::ParseFormat(a.format);
  std::optional<tm::TmIndex> index;
  if (!a.tm.empty()) index = tm::LoadTmStore(a.tm, a.langs.src, a.langs.tgt);
  decode::DecodeConfig cfg;
  cfg.beam_size = a.beam;
  cfg.max_len = a.max_len;
  cfg.length_penalty = a.length_penalty;
  tm::CnBiasOptions bias;
  bias.lambda = a.lambda;
  const std::string input = ReadAll(a.src);
  Output sink(a.out, out);

  if (format != tags::MarkupFormat::kPlain) {
    if (!a.pieces.empty()) throw InvalidArgument("--pieces is only supported with --format plain");
    tags::TranslatorOptions opts;
    opts.decode = cfg;
    opts.tgt_lang = a.langs.tgt;
    opts.tm = index ? &*index : nullptr;
    opts.bias = bias;
    const tags::ModelTranslator translator(m, opts);
    tags::DocumentOptions doc;
    doc.format = format;
    doc.src_lang = a.langs.src;
    const auto result = tags::TranslateDocument(input, doc, translator);
    for (const auto& w : result.warnings) {
      err << "warning: line " << (w.sentence + 1);
      if (w.tag) err << " tag " << *w.tag;
      err << ": " << w.reason << "\n";
    }
    sink.get() << result.text;
    return 0;
  }

  const auto lines = SplitLines(input);
  std::vector<std::string> piece_lines;
  if (!a.pieces.empty()) {
    piece_lines = model::ReadLines(a.pieces);
    if (piece_lines.size() != lines.size()) {
      throw ParseError("--pieces has " + std::to_string(piece_lines.size()) + " lines, input has " +
                           std::to_string(lines.size()),
                       std::min(piece_lines.size(), lines.size()) + 1);
    }
  }
  const model::ReferenceScorer scorer(m);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const Sentence src = Tokenize(lines[i], a.langs.src);
    std::vector<std::string> words;
    if (!src.empty()) {
      decode::TmGuidance guidance;
      if (index) guidance = decode::RetrieveGuidance(*index, src);
      const decode::TmBias tm_bias{guidance.cn ? &*guidance.cn : nullptr, bias};
      const decode::TmBias* bias_ptr = guidance.cn ? &tm_bias : nullptr;
      decode::ConstraintSet cs;
      if (!piece_lines.empty()) cs = decode::ParseConstraintLine(piece_lines[i], true);
      if (cs.empty()) {
        words = decode::BeamSearch(scorer, src, cfg, bias_ptr).best.tokens;
      } else {
        try {
          words = decode::Ogbs(scorer, src, cs, cfg, bias_ptr).best.tokens;
        } catch (const Infeasible& e) {
          err << "warning: line " << (i + 1) << ": " << e.what() << "; emitted unconstrained\n";
          words = decode::BeamSearch(scorer, src, cfg, bias_ptr).best.tokens;
        }
      }
    }
    sink.get() << FromWords(words, a.langs.tgt).text << "\n";
  }
  return 0;
}

struct BleuArgs {
  std::string hyp, ref;
  bool smooth = false;
};

int Bleu(const BleuArgs& a, std::ostream& out) {
  const auto r = CorpusBleu(model::ReadLines(a.hyp), model::ReadLines(a.ref), a.smooth);
  out << FormatBleu(r) << "\n";
  return 0;
}

struct GwlanArgs {
  std::string src, tgt, out, model, data, predictions, initials;
  autocomplete::GwlanGenOptions gen;
  Langs langs;
};

TypedKeyFunction KeyFunction(const std::string& initials) {
  return initials.empty() ? TypedKeyFunction::Prefix() : TypedKeyFunction::LoadInitials(initials);
}

int GwlanGen(const GwlanArgs& a, std::ostream& out) {
  const auto pairs = model::ReadParallelCorpus(a.src, a.tgt, a.langs.src, a.langs.tgt);
  const auto examples = autocomplete::GenerateGwlanData(pairs, KeyFunction(a.initials), a.gen);
  Output sink(a.out, out);
  autocomplete::WriteGwlanData(sink.get(), examples);
  return 0;
}

int GwlanEval(const GwlanArgs& a, std::ostream& out) {
  std::ifstream in(a.data, std::ios::binary);
  if (!in) throw IoError("cannot open " + a.data);
  const auto examples = autocomplete::ReadGwlanData(in);
  char buf[64];
  if (!a.predictions.empty()) {
    const auto predictions = model::ReadLines(a.predictions);
    std::vector<std::string> gold;
    for (const auto& e : examples) gold.push_back(e.gold);
    std::snprintf(buf, sizeof(buf), "%.4f", autocomplete::EvalAccuracy(predictions, gold));
    out << "examples: " << examples.size() << "\naccuracy: " << buf << "\n";
    return 0;
  }
  if (a.model.empty()) throw InvalidArgument("gwlan eval needs --model or --predictions");
  auto m = std::make_shared<const model::ReferenceModel>(model::LoadModelFile(a.model));
  const model::ReferenceScorer scorer(m);
  const auto trie = autocomplete::TargetTrie(*m, KeyFunction(a.initials));
  const auto report = autocomplete::EvaluateGwlan(scorer, trie, examples);
  out << "examples: " << report.examples << "\nsystem\taccuracy\n";
  std::snprintf(buf, sizeof(buf), "%.4f", report.complete_word_acc);
  out << "complete_word\t" << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.4f", report.transtable_acc);
  out << "transtable\t" << buf << "\n";
  return 0;
}

struct BenchArgs {
  std::string model, src;
  BenchOptions options;
  bool json = false;
};

int Bench(const BenchArgs& a, std::ostream& out) {
  const auto m = model::LoadModelFile(a.model);
  std::vector<std::string> sources;
  if (!a.src.empty()) {
    for (auto& line : model::ReadLines(a.src)) {
      if (!Tokenize(line).empty()) sources.push_back(std::move(line));
    }
  }
  const auto instances = MakeBenchInstances(m, sources, a.options);
  const auto rows = RunBench(m, instances, a.options);
  out << (a.json ? BenchJsonLines(rows) : BenchTsv(rows));
  return 0;
}

struct ServeArgs {
  std::string config, model, tm, terms, host;
  int port = 0;
};

int Serve(const ServeArgs& a, std::ostream& out) {
  service::ServiceConfig cfg = a.config.empty() ? service::ServiceConfig{}
                                                : service::ServiceConfig::LoadFile(a.config);
  cfg.ApplyEnv();
  if (!a.model.empty()) cfg.model_path = a.model;
  if (!a.tm.empty()) cfg.tm_path = a.tm;
  if (!a.terms.empty()) cfg.terms_path = a.terms;
  if (!a.host.empty()) cfg.host = a.host;
  if (a.port != 0) cfg.port = a.port;
  const service::Service svc = service::Service::FromConfig(cfg);
  service::HttpServer server(svc);
  if (!server.Bind(cfg.host, cfg.port)) {
    throw IoError("cannot bind " + cfg.host + ":" + std::to_string(cfg.port));
  }
  out << "listening on http://" << cfg.host << ":" << cfg.port << service::kApiPath << std::endl;
  return server.ListenAfterBind() ? 0 : 1;
}

struct IndexArgs {
  std::string src, tgt, out;
  Langs langs;
};

int Index(const IndexArgs& a, std::ostream& out) {
  const auto pairs = model::ReadParallelCorpus(a.src, a.tgt, a.langs.src, a.langs.tgt);
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> kept;
  for (const auto& p : pairs) {
    if (!p.first.empty() && !p.second.empty()) kept.push_back(p);
  }
  const auto index = tm::TmIndex::FromPairs(kept);
  index.SaveFile(a.out);
  out << "entries: " << index.size() << "\nindex: " << a.out << "\n";
  return 0;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interactive machine translation toolkit", "imt"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train a reference model from a parallel corpus");
  train_cmd->add_option("--src", train.src, "Source side, one sentence per line")->required();
  train_cmd->add_option("--tgt", train.tgt, "Target side, line-aligned with --src")->required();
  train_cmd->add_option("--model", train.model, "Output model archive")->required();
  train_cmd->add_option("--order", train.config.order, "LM order")->check(CLI::Range(1, 10));
  train_cmd->add_option("--em-iters", train.config.em_iters, "HMM EM iterations")->check(CLI::Range(0, 1000));
  train_cmd->add_option("--base-keep", train.config.base_keep, "Lexical pruning base")->check(CLI::Range(1, 100000));
  AddLangs(train_cmd, train.langs);

  TranslateArgs translate;
  auto* tr_cmd = app.add_subcommand("translate", "Translate a file line by line");
  tr_cmd->add_option("--model", translate.model, "Model archive")->required();
  tr_cmd->add_option("--src", translate.src, "Input file, - for stdin");
  tr_cmd->add_option("--out", translate.out, "Output file (default stdout)");
  tr_cmd->add_option("--pieces", translate.pieces, "Constraints file: piece1|piece2|... per line");
  tr_cmd->add_option("--tm", translate.tm, "Translation memory (saved index or src<TAB>tgt file)");
  tr_cmd->add_option("--lambda", translate.lambda, "TM bonus")->check(CLI::NonNegativeNumber);
  tr_cmd->add_option("--format", translate.format, "plain, xml, html or markdown")
      ->check(CLI::IsMember({"plain", "xml", "html", "markdown"}));
  tr_cmd->add_option("--beam", translate.beam, "Beam size")->check(CLI::PositiveNumber);
  tr_cmd->add_option("--max-len", translate.max_len, "Maximum output length, 0 = automatic");
  tr_cmd->add_option("--length-penalty", translate.length_penalty, "Finished scores divided by len^alpha")
      ->check(CLI::NonNegativeNumber);
  AddLangs(tr_cmd, translate.langs);

  BleuArgs bleu;
  auto* bleu_cmd = app.add_subcommand("bleu", "Corpus BLEU, case-sensitive");
  bleu_cmd->add_option("--hyp", bleu.hyp, "Hypotheses")->required();
  bleu_cmd->add_option("--ref", bleu.ref, "References")->required();
  bleu_cmd->add_flag("--smooth", bleu.smooth, "Add-one smoothing for 2..4-grams");

  GwlanArgs gwlan;
  auto* gwlan_cmd = app.add_subcommand("gwlan", "Word-level autocompletion data and evaluation");
  gwlan_cmd->require_subcommand(1);
  auto* gen_cmd = gwlan_cmd->add_subcommand("gen", "Generate a dataset from a parallel corpus");
  gen_cmd->add_option("--src", gwlan.src, "Source side")->required();
  gen_cmd->add_option("--tgt", gwlan.tgt, "Target side")->required();
  gen_cmd->add_option("--out", gwlan.out, "Dataset file (default stdout)");
  gen_cmd->add_option("--seed", gwlan.gen.seed, "Random seed");
  gen_cmd->add_option("--per-sentence", gwlan.gen.examples_per_sentence, "Examples per sentence");
  gen_cmd->add_option("--max-typed", gwlan.gen.max_typed, "Longest typed prefix")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--initials", gwlan.initials, "char<TAB>initial table for phonetic keys");
  AddLangs(gen_cmd, gwlan.langs);
  auto* eval_cmd = gwlan_cmd->add_subcommand("eval", "Accuracy of complete_word vs the TransTable baseline");
  eval_cmd->add_option("--data", gwlan.data, "Dataset file")->required();
  eval_cmd->add_option("--model", gwlan.model, "Model archive");
  eval_cmd->add_option("--predictions", gwlan.predictions, "Score a prediction file instead");
  eval_cmd->add_option("--initials", gwlan.initials, "char<TAB>initial table for phonetic keys");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Compare decoders on random constraint instances");
  bench_cmd->add_option("--model", bench.model, "Model archive")->required();
  bench_cmd->add_option("--src", bench.src, "Source sentences (default: random words)");
  bench_cmd->add_option("--instances", bench.options.instances, "Number of sentences");
  bench_cmd->add_option("--seed", bench.options.seed, "Random seed");
  bench_cmd->add_option("--beam", bench.options.beam, "Beam size")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--max-len", bench.options.max_len, "Maximum output length, 0 = automatic");
  bench_cmd->add_option("--num-pieces", bench.options.num_pieces, "Constraint pieces per sentence");
  bench_cmd->add_option("--piece-len", bench.options.piece_len, "Tokens per piece")->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--json", bench.json, "JSON lines instead of TSV");

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP JSON service");
  serve_cmd->add_option("--config", serve.config, "Service config (JSON)");
  serve_cmd->add_option("--model", serve.model, "Model archive");
  serve_cmd->add_option("--tm", serve.tm, "Example store");
  serve_cmd->add_option("--terms", serve.terms, "Term store");
  serve_cmd->add_option("--host", serve.host, "Bind address");
  serve_cmd->add_option("--port", serve.port, "Port")->check(CLI::Range(1, 65535));

  IndexArgs index;
  auto* index_cmd = app.add_subcommand("index", "Build a translation memory index");
  index_cmd->add_option("--src", index.src, "Source side")->required();
  index_cmd->add_option("--tgt", index.tgt, "Target side")->required();
  index_cmd->add_option("--out", index.out, "Output index")->required();
  AddLangs(index_cmd, index.langs);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*train_cmd) return Train(train, out);
    if (*tr_cmd) return Translate(translate, out, err);
    if (*bleu_cmd) return Bleu(bleu, out);
    if (*gen_cmd) return GwlanGen(gwlan, out);
    if (*eval_cmd) return GwlanEval(gwlan, out);
    if (*bench_cmd) return Bench(bench, out);
    if (*serve_cmd) return Serve(serve, out);
    if (*index_cmd) return Index(index, out);
  } catch (const ParseError& e) {
    err << "imt: parse error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    err << "imt: io error: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    err << "imt: error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "imt: internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace imt::cli
