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

#ifndef CSKIT_LEXICON_HPP
#define CSKIT_LEXICON_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "corpus.hpp"

namespace cskit {

struct PronEntry {
  TaggedToken word;
  std::vector<std::string> phones;  // nonempty

  bool operator==(const PronEntry&) const = default;
};

struct Lexicon {
  std::vector<PronEntry> entries;  // file order, no duplicate (word, phones)
  TagSet tag_set;

  bool contains(const TaggedToken& word) const;
};

/// Lines of `word/tag<TAB>phone phone ...`; '#' starts a comment line.
Lexicon read_lexicon(std::istream& in, const TagSet& tag_set);
Lexicon read_lexicon_file(const std::string& path, const TagSet& tag_set);

struct LexiconLangStats {
  std::uint64_t words = 0;    // distinct (surface, tag) pairs
  std::uint64_t entries = 0;  // pronunciation lines
  std::set<std::string> phones;
};

struct LexiconStats {
  std::map<std::string, LexiconLangStats> per_lang;
  std::uint64_t total_words = 0;
  std::uint64_t total_entries = 0;
  std::uint64_t phones_union = 0;         // |union of inventories|
  std::uint64_t phones_disjoint_sum = 0;  // sum of inventory sizes
  // Pairwise shared-phone counts keyed "langA+langB" in registry order.
  std::map<std::string, std::uint64_t> shared_phones;
};

LexiconStats lexicon_stats(const Lexicon& lexicon);
std::string lexicon_stats_json(const Lexicon& lexicon);

struct OovItem {
  TaggedToken word;
  std::uint64_t count = 0;
};

/// Every (surface, tag) pair occurring in the corpus but missing from the
/// lexicon, sorted by surface then tag. Empty output certifies the corpus
/// as closed-vocabulary with respect to the lexicon.
std::vector<OovItem> oov_check(const Lexicon& lexicon, const Corpus& corpus);
std::string oov_check_json(const Lexicon& lexicon, const Corpus& corpus);

}  // namespace cskit

#endif  // CSKIT_LEXICON_HPP
