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

#include "imt/cli/bleu.h"

#include <cmath>
#include <cstdio>
#include <map>

#include "imt/core/error.h"
#include "imt/core/sentence.h"

namespace imt::cli {
namespace {

using Counts = std::map<std::vector<std::string>, std::size_t>;

Counts NGrams(const std::vector<std::string>& words, std::size_t n) {
  Counts c;
  for (std::size_t i = 0; i + n <= words.size(); ++i) {
    ++c[std::vector<std::string>(words.begin() + static_cast<std::ptrdiff_t>(i),
                                 words.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return c;
}

}  // namespace

BleuResult CorpusBleu(const std::vector<std::string>& hyps, const std::vector<std::string>& refs,
                      bool smooth) {
  if (hyps.size() != refs.size()) {
    throw InvalidArgument("bleu: " + std::to_string(hyps.size()) + " hypotheses but " +
                          std::to_string(refs.size()) + " references");
  }
  BleuResult r;
  for (std::size_t s = 0; s < hyps.size(); ++s) {
    const auto h = SplitWhitespace(hyps[s]);
    const auto g = SplitWhitespace(refs[s]);
    r.hyp_len += h.size();
    r.ref_len += g.size();
    for (int n = 1; n <= kBleuOrder; ++n) {
      const Counts hc = NGrams(h, n);
      const Counts gc = NGrams(g, n);
      for (const auto& [gram, count] : hc) {
        r.totals[n - 1] += count;
        const auto it = gc.find(gram);
        if (it != gc.end()) r.matches[n - 1] += std::min(count, it->second);
      }
    }
  }
  if (r.hyp_len == 0) return r;
  r.brevity_penalty = r.hyp_len > r.ref_len
                          ? 1.0
                          : std::exp(1.0 - static_cast<double>(r.ref_len) / static_cast<double>(r.hyp_len));
  double log_sum = 0.0;
  for (int n = 0; n < kBleuOrder; ++n) {
    double m = static_cast<double>(r.matches[n]);
    double t = static_cast<double>(r.totals[n]);
    if (smooth && n > 0) {
      m += 1.0;
      t += 1.0;
    }
    if (m == 0.0 || t == 0.0) return r;
    log_sum += std::log(m / t);
  }
  r.score = 100.0 * r.brevity_penalty * std::exp(log_sum / kBleuOrder);
  return r;
}

std::string FormatBleu(const BleuResult& r) {
  char buf[256];
  auto pct = [&](int n) {
    return r.totals[n] == 0 ? 0.0 : 100.0 * static_cast<double>(r.matches[n]) / static_cast<double>(r.totals[n]);
  };
  const double ratio = r.ref_len == 0 ? 0.0 : static_cast<double>(r.hyp_len) / static_cast<double>(r.ref_len);
  std::snprintf(buf, sizeof(buf),
                "BLEU = %.2f %.1f/%.1f/%.1f/%.1f (BP = %.3f ratio = %.3f hyp_len = %zu ref_len = %zu)",
                r.score, pct(0), pct(1), pct(2), pct(3), r.brevity_penalty, ratio, r.hyp_len, r.ref_len);
  return buf;
}

}  // namespace imt::cli
