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

#ifndef CSKIT_CORPUS_HPP
#define CSKIT_CORPUS_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "error.hpp"

namespace cskit {

/// Registry of short lowercase language identifiers. Insertion order is
/// preserved and used wherever per-language results are reported.
class TagSet {
 public:
  TagSet() = default;

  /// Adds a tag; validates `[a-z][a-z0-9]{1,7}` and uniqueness.
  void add(const std::string& tag);
  bool contains(const std::string& tag) const;
  std::size_t size() const { return tags_.size(); }
  const std::vector<std::string>& tags() const { return tags_; }

  bool operator==(const TagSet&) const = default;

  /// The five-language registry the tool ships with.
  static TagSet default_set();
  /// One tag per line, '#' starts a comment line.
  static TagSet read_file(const std::string& path);

 private:
  std::vector<std::string> tags_;
};

struct TaggedToken {
  std::string surface;  // nonempty, no whitespace or control characters
  std::string lang;

  bool operator==(const TaggedToken&) const = default;
};

/// Rendering of a token as a single LM vocabulary unit ("surface/lang").
std::string lm_word(const TaggedToken& token);

struct Utterance {
  std::string id;
  std::vector<TaggedToken> tokens;
  std::optional<double> duration_s;
  std::optional<std::string> speaker;

  bool operator==(const Utterance&) const = default;
};

struct Corpus {
  std::vector<Utterance> utterances;
  TagSet tag_set;

  bool operator==(const Corpus&) const = default;
};

struct CorpusStats {
  std::uint64_t utterances = 0;
  std::uint64_t total_tokens = 0;
  std::map<std::string, std::uint64_t> tokens_per_lang;
  std::map<std::string, std::uint64_t> monolingual_per_lang;
  std::uint64_t monolingual_total = 0;
  std::uint64_t code_switched = 0;
  std::uint64_t switches = 0;
  // Durations are summed only for utterances that carry one.
  bool has_durations = false;
  std::map<std::string, double> mono_duration_s;
  double cs_duration_s = 0.0;
  double total_duration_s = 0.0;
};

struct ParseOptions {
  // Reference corpora must have nonempty utterances; hypothesis files may not.
  bool allow_empty_utterances = false;
};

/// Parses the tagged JSON Lines corpus format. Errors carry line numbers.
Corpus parse_jsonl_corpus(std::istream& in, const TagSet& tag_set,
                          const ParseOptions& opts = {});
Corpus parse_jsonl_corpus_file(const std::string& path, const TagSet& tag_set,
                               const ParseOptions& opts = {});

/// Parses plain monolingual text (one utterance per line, whitespace-split);
/// every token is tagged `lang` and ids are zero-padded sequence numbers.
Corpus parse_plain_corpus(std::istream& in, const std::string& lang,
                          const TagSet& tag_set);
Corpus parse_plain_corpus_file(const std::string& path, const std::string& lang,
                               const TagSet& tag_set);

/// Serializes a corpus back to tagged JSONL (inverse of parse_jsonl_corpus).
void write_jsonl_corpus(const Corpus& corpus, std::ostream& out);
void write_jsonl_corpus_file(const Corpus& corpus, const std::string& path);

/// Number of adjacent token pairs with differing language tags.
std::uint64_t count_switches(const Utterance& u);

enum class UtteranceKind { monolingual, code_switched };
struct UtteranceClass {
  UtteranceKind kind;
  std::string lang;  // set when monolingual
};

/// Classification is undefined for empty utterances (throws).
UtteranceClass classify_utterance(const Utterance& u);

CorpusStats corpus_stats(const Corpus& corpus);

std::string corpus_stats_json(const Corpus& corpus);
std::string corpus_stats_pretty(const Corpus& corpus);

}  // namespace cskit

#endif  // CSKIT_CORPUS_HPP
