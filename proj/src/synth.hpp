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

#ifndef CSKIT_SYNTH_HPP
#define CSKIT_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "rescore.hpp"

namespace cskit {

/// Knobs for the seeded synthetic corpus generator. The first registry tag
/// acts as the resource-rich hub language the others switch with.
struct SynthParams {
  std::uint64_t seed = 1;
  std::uint32_t vocab_per_lang = 30;
  std::uint32_t cs_utts = 400;    // code-switched training utterances
  std::uint32_t mono_utts = 150;  // monolingual training utterances per language
  std::uint32_t dev_utts = 150;
  std::uint32_t test_utts = 60;
  std::uint32_t nbest = 5;        // hypotheses per test utterance
  std::uint32_t min_len = 6;
  std::uint32_t max_len = 14;
  double switch_rate = 0.25;      // per-token language-switch probability
  double noise = 0.25;            // per-token hypothesis corruption probability
  double cs_dev_fraction = 0.8;   // share of dev drawn from the CS process
};

struct SynthResult {
  Corpus cs;        // mixed-language training text
  Corpus african;   // merged monolingual text of the non-hub languages
  Corpus english;   // monolingual hub text
  Corpus dev;
  Corpus test_ref;
  std::vector<NBestList> test_nbest;
};

/// Deterministic for a fixed seed and parameter set. Dev and test draw only
/// words observed in the CS training text, so the built mixtures cover them.
SynthResult gen_synth(const TagSet& tag_set, const SynthParams& params);

/// Writes tags.txt, train_cs/train_african/train_english/dev/test_ref JSONL
/// and test_nbest.jsonl under `out_dir`; returns a JSON manifest.
std::string write_synth_files(const SynthResult& result,
                              const std::string& out_dir);

}  // namespace cskit

#endif  // CSKIT_SYNTH_HPP
