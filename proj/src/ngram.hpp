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

#ifndef CSKIT_NGRAM_HPP
#define CSKIT_NGRAM_HPP

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpus.hpp"
#include "error.hpp"

namespace cskit {

inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";
inline constexpr std::string_view kUnk = "<unk>";

using WordId = std::uint32_t;
inline constexpr WordId kNoWord = std::numeric_limits<WordId>::max();

/// Interning table mapping vocabulary strings to dense ids.
class Vocab {
 public:
  WordId add(std::string_view w);
  std::optional<WordId> find(std::string_view w) const;
  const std::string& word(WordId id) const { return words_[id]; }
  std::size_t size() const { return words_.size(); }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> index_;
};

struct NGramKeyHash {
  std::size_t operator()(const std::vector<WordId>& key) const {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (WordId w : key) {
      for (int i = 0; i < 4; ++i) {
        h ^= (w >> (8 * i)) & 0xff;
        h *= 1099511628211ull;
      }
    }
    return static_cast<std::size_t>(h);
  }
};

template <typename V>
using NGramMap = std::unordered_map<std::vector<WordId>, V, NGramKeyHash>;

struct CountOfCounts {
  std::uint64_t n1 = 0;  // k-grams occurring exactly once
  std::uint64_t n2 = 0;  // k-grams occurring exactly twice
};

/// Raw n-gram counts of a padded corpus: each utterance is padded with
/// (order-1) leading "<s>" and one trailing "</s>", and every k-gram for
/// k = 1..order is counted; "<s>" is excluded from the unigram table.
class NGramCounts {
 public:
  NGramCounts(int order, Vocab vocab, std::vector<NGramMap<std::uint64_t>> grams)
      : order_(order), vocab_(std::move(vocab)), grams_(std::move(grams)) {}

  int order() const { return order_; }
  const Vocab& vocab() const { return vocab_; }
  const NGramMap<std::uint64_t>& grams(int k) const { return grams_[k - 1]; }
  NGramMap<std::uint64_t>& mutable_grams(int k) { return grams_[k - 1]; }

  CountOfCounts count_of_counts(int k) const;

  /// Debug dump: lines of `count<TAB>w1 .. wk`, orders ascending,
  /// lexicographic within each order.
  std::string to_tsv() const;

 private:
  int order_;
  Vocab vocab_;
  std::vector<NGramMap<std::uint64_t>> grams_;  // grams_[k-1]
};

NGramCounts count_ngrams(const Corpus& corpus, int order);

/// Query interface shared by backoff models and mixtures. Words are the
/// rendered vocabulary units ("surface/lang", "<s>", "</s>").
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;

  virtual std::size_t order() const = 0;
  /// Predictable vocabulary: every unit the model can emit ("<s>" excluded).
  virtual std::vector<std::string> vocabulary() const = 0;
  virtual bool in_vocab(std::string_view word) const = 0;

  /// log10 P(word | history), history ordered oldest first and truncated
  /// internally to order-1. Returns nullopt when the word gets zero or
  /// undefined probability (OOV under a closed vocabulary).
  virtual std::optional<double> try_logprob(
      std::span<const std::string> history, std::string_view word) const = 0;

  /// Maps out-of-vocabulary words to "<unk>" (trained, else uniform 1/|V|).
  virtual void set_unk_enabled(bool enabled) = 0;
  virtual bool unk_enabled() const = 0;

  /// Throwing variant of try_logprob.
  double logprob(std::span<const std::string> history,
                 std::string_view word) const;

  double logprob(std::initializer_list<std::string> history,
                 std::string_view word) const {
    return logprob(std::span<const std::string>(history.begin(), history.size()),
                   word);
  }
  std::optional<double> try_logprob(std::initializer_list<std::string> history,
                                    std::string_view word) const {
    return try_logprob(
        std::span<const std::string>(history.begin(), history.size()), word);
  }
};

using LmPtr = std::shared_ptr<LanguageModel>;

struct NGramEntry {
  double log10_prob = 0.0;
  double log10_bo = 0.0;
  bool has_prob = false;  // false for context-only entries such as "<s>"
  bool has_bo = false;
};

/// ARPA-style backoff model: per order, a map from n-grams to
/// (log10 prob, log10 backoff weight).
class NGramLm final : public LanguageModel {
 public:
  std::size_t order() const override { return tables_.size(); }
  std::vector<std::string> vocabulary() const override;
  bool in_vocab(std::string_view word) const override;
  std::optional<double> try_logprob(std::span<const std::string> history,
                                    std::string_view word) const override;
  void set_unk_enabled(bool enabled) override { unk_enabled_ = enabled; }
  bool unk_enabled() const override { return unk_enabled_; }

  const Vocab& vocab() const { return vocab_; }
  const NGramMap<NGramEntry>& table(int k) const { return tables_[k - 1]; }
  std::size_t predictable_size() const { return predictable_.size(); }

 private:
  friend NGramLm estimate_kn(const NGramCounts&,
                             std::span<const double>,
                             std::vector<std::string>*);
  friend NGramLm read_arpa(std::istream&);

  void rebuild_predictable();

  Vocab vocab_;
  std::vector<NGramMap<NGramEntry>> tables_;  // tables_[k-1]
  std::vector<WordId> predictable_;           // event unigrams
  std::optional<WordId> unk_id_;
  bool unk_enabled_ = false;
};

/// Estimates an interpolated Kneser-Ney backoff model. `discount_override`
/// is empty or one discount per order; per-order discounts default to
/// n1/(n1+2*n2) and fall back to 0.5 (with a warning) when that ratio is
/// undefined.
NGramLm estimate_kn(const NGramCounts& counts,
                    std::span<const double> discount_override = {},
                    std::vector<std::string>* warnings = nullptr);

struct Perplexity {
  double ppl = 0.0;
  double log10_total = 0.0;
  std::uint64_t token_count = 0;
  std::uint64_t oov_count = 0;
};

/// Corpus perplexity; every token plus one "</s>" per utterance is a
/// predicted event. Throws on OOV when "<unk>" is disabled.
Perplexity perplexity(const LanguageModel& lm, const Corpus& corpus);

/// log10 probability of a full sentence including the "</s>" event.
double sentence_logprob(const LanguageModel& lm,
                        std::span<const TaggedToken> tokens);

void write_arpa(const NGramLm& lm, std::ostream& out);
void write_arpa_file(const NGramLm& lm, const std::string& path);
NGramLm read_arpa(std::istream& in);
NGramLm read_arpa_file(const std::string& path);

}  // namespace cskit

#endif  // CSKIT_NGRAM_HPP
