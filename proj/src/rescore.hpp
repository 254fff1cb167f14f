// Copyright 2026 The cskit Authors.
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

#ifndef CSKIT_RESCORE_HPP
#define CSKIT_RESCORE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "ngram.hpp"

namespace cskit {

struct Hypothesis {
  double acoustic_logscore = 0.0;  // finite
  std::vector<TaggedToken> tokens;
};

struct NBestList {
  std::string id;
  std::vector<Hypothesis> hyps;  // nonempty, best-first as produced upstream
};

/// JSONL, one record per utterance:
/// {"id": str, "hyps": [{"ac": number, "tokens": [{"w","lang"}...]}, ...]}
std::vector<NBestList> read_nbest(std::istream& in, const TagSet& tag_set);
std::vector<NBestList> read_nbest_file(const std::string& path,
                                       const TagSet& tag_set);
void write_nbest(std::span<const NBestList> lists, std::ostream& out);
void write_nbest_file(std::span<const NBestList> lists, const std::string& path);

struct RescoreChoice {
  std::string id;
  std::size_t rank = 0;  // index into the original list
  double acoustic = 0.0;
  double lm_log10 = 0.0;
  double combined = 0.0;
};

struct RescoreResult {
  Corpus selected;  // chosen hypotheses, directly scorable against a reference
  std::vector<RescoreChoice> choices;
};

/// Picks argmax of acoustic + lm_scale * lm_log10(sentence) +
/// word_penalty * token_count per utterance; ties keep the earlier rank.
RescoreResult rescore(std::span<const NBestList> lists, const LanguageModel& lm,
                      const TagSet& tag_set, double lm_scale,
                      double word_penalty);

}  // namespace cskit

#endif  // CSKIT_RESCORE_HPP
