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

#ifndef CSKIT_EVAL_HPP
#define CSKIT_EVAL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corpus.hpp"

namespace cskit {

enum class EditOp { match, substitute, del, ins };

struct AlignOp {
  EditOp op;
  std::optional<TaggedToken> ref;  // set for match/substitute/del
  std::optional<TaggedToken> hyp;  // set for match/substitute/ins
};

struct Alignment {
  std::vector<AlignOp> ops;
  std::uint64_t cost = 0;  // substitutions + deletions + insertions
};

/// Minimum edit distance with unit costs, computed on surfaces only; tags
/// ride along but never affect the cost. Ties in the backtrace prefer
/// match > substitute > delete > insert, so the op sequence is deterministic.
Alignment align(std::span<const TaggedToken> ref,
                std::span<const TaggedToken> hyp);

struct WerReport {
  std::uint64_t n = 0;  // reference tokens
  std::uint64_t sub = 0;
  std::uint64_t del = 0;
  std::uint64_t ins = 0;

  // Undefined (nullopt) when there are no reference tokens; the raw counts
  // stay visible either way.
  std::optional<double> wer() const {
    if (n == 0) return std::nullopt;
    return static_cast<double>(sub + del + ins) / static_cast<double>(n);
  }
};

/// Pooled corpus-level WER: counts are summed over utterances before the
/// division.
WerReport wer(std::span<const Alignment> alignments);

std::map<std::string, WerReport> per_language_wer(
    std::span<const Alignment> alignments);

struct ConfusionMatrix {
  std::vector<std::string> langs;          // row/column order
  std::vector<std::vector<std::uint64_t>> counts;  // (K+1)x(K+1), rows + INS, cols + DEL

  std::uint64_t& cell(std::size_t row, std::size_t col) {
    return counts[row][col];
  }
  std::uint64_t cell(std::size_t row, std::size_t col) const {
    return counts[row][col];
  }
  std::size_t ins_row() const { return langs.size(); }
  std::size_t del_col() const { return langs.size(); }
};

/// Tag confusion table: matches and substitutions increment
/// [ref.lang][hyp.lang] regardless of word identity; deletions go to the DEL
/// column, insertions to the INS row.
ConfusionMatrix language_confusion(std::span<const Alignment> alignments,
                                   const std::vector<std::string>& langs);

struct ScoreReport {
  WerReport overall;
  std::map<std::string, WerReport> per_language;
  ConfusionMatrix confusion;
  std::vector<Alignment> alignments;          // reference order
  std::vector<std::string> missing_hypotheses;  // scored as all deletions
  std::uint64_t utterances = 0;
};

/// Aligns each reference utterance with the hypothesis of the same id.
/// Hypotheses for unknown ids are an error; missing hypotheses score as
/// all-deletion alignments and are listed in the report.
ScoreReport score_corpora(const Corpus& ref, const Corpus& hyp);

std::string score_report_json(const ScoreReport& report);
std::string score_report_pretty(const ScoreReport& report);

}  // namespace cskit

#endif  // CSKIT_EVAL_HPP
