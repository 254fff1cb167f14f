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

#include "ngram.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cskit {

namespace {

constexpr double kLogZeroWrite = -99.0;  // ARPA sentinel for "no probability"

bool is_log_zero(double v) { return !std::isfinite(v) || v <= -98.0; }

std::string format_log10(double v) {
  if (is_log_zero(v)) return "-99";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.8f", v);
  return buf;
}

}  // namespace

WordId Vocab::add(std::string_view w) {
  auto it = index_.find(std::string(w));
  if (it != index_.end()) return it->second;
  WordId id = static_cast<WordId>(words_.size());
  words_.emplace_back(w);
  index_.emplace(words_.back(), id);
  return id;
}

std::optional<WordId> Vocab::find(std::string_view w) const {
  auto it = index_.find(std::string(w));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NGramCounts count_ngrams(const Corpus& corpus, int order) {
  if (order < 1) {
    throw Error(ErrorCode::invalid_argument, "n-gram order must be >= 1");
  }
  if (corpus.utterances.empty()) {
    throw Error(ErrorCode::validation, "cannot count n-grams of an empty corpus");
  }
  Vocab vocab;
  WordId bos = order > 1 ? vocab.add(kBos) : kNoWord;
  WordId eos = vocab.add(kEos);
  std::vector<NGramMap<std::uint64_t>> grams(order);

  std::vector<WordId> ids;
  for (const auto& utt : corpus.utterances) {
    ids.clear();
    for (int i = 0; i < order - 1; ++i) ids.push_back(bos);
    for (const auto& tok : utt.tokens) ids.push_back(vocab.add(lm_word(tok)));
    ids.push_back(eos);
    for (int k = 1; k <= order; ++k) {
      for (std::size_t i = 0; i + k <= ids.size(); ++i) {
        if (k == 1 && ids[i] == bos) continue;  // "<s>" is never predicted
        std::vector<WordId> key(ids.begin() + i, ids.begin() + i + k);
        ++grams[k - 1][std::move(key)];
      }
    }
  }
  return NGramCounts(order, std::move(vocab), std::move(grams));
}

CountOfCounts NGramCounts::count_of_counts(int k) const {
  CountOfCounts cc;
  for (const auto& [key, cnt] : grams_[k - 1]) {
    if (cnt == 1) ++cc.n1;
    if (cnt == 2) ++cc.n2;
  }
  return cc;
}

std::string NGramCounts::to_tsv() const {
  std::ostringstream out;
  for (int k = 1; k <= order_; ++k) {
    std::vector<std::pair<std::string, std::uint64_t>> rows;
    rows.reserve(grams_[k - 1].size());
    for (const auto& [key, cnt] : grams_[k - 1]) {
      std::string words;
      for (std::size_t i = 0; i < key.size(); ++i) {
        if (i) words += ' ';
        words += vocab_.word(key[i]);
      }
      rows.emplace_back(std::move(words), cnt);
    }
    std::sort(rows.begin(), rows.end());
    for (const auto& [words, cnt] : rows) {
      out << cnt << '\t' << words << '\n';
    }
  }
  return out.str();
}

double LanguageModel::logprob(std::span<const std::string> history,
                              std::string_view word) const {
  auto lp = try_logprob(history, word);
  if (!lp) {
    throw Error(ErrorCode::oov, "word '" + std::string(word) +
                                    "' has no probability under this model "
                                    "(out of vocabulary, <unk> disabled)");
  }
  return *lp;
}

std::vector<std::string> NGramLm::vocabulary() const {
  std::vector<std::string> words;
  words.reserve(predictable_.size());
  for (WordId id : predictable_) words.push_back(vocab_.word(id));
  return words;
}

bool NGramLm::in_vocab(std::string_view word) const {
  auto id = vocab_.find(word);
  if (!id) return false;
  return std::binary_search(predictable_.begin(), predictable_.end(), *id);
}

void NGramLm::rebuild_predictable() {
  predictable_.clear();
  for (const auto& [key, entry] : tables_[0]) {
    if (entry.has_prob) predictable_.push_back(key[0]);
  }
  std::sort(predictable_.begin(), predictable_.end());
  unk_id_ = vocab_.find(kUnk);
  if (unk_id_ && !std::binary_search(predictable_.begin(), predictable_.end(),
                                     *unk_id_)) {
    unk_id_.reset();
  }
}

std::optional<double> NGramLm::try_logprob(std::span<const std::string> history,
                                           std::string_view word) const {
  const int n = static_cast<int>(tables_.size());
  if (word == kBos) return std::nullopt;
  std::optional<WordId> wid = vocab_.find(word);
  bool w_known = wid && std::binary_search(predictable_.begin(),
                                           predictable_.end(), *wid);

  std::size_t hlen = std::min(history.size(), static_cast<std::size_t>(n - 1));
  std::vector<WordId> hist(hlen);
  std::size_t first_valid = 0;  // windows must start at or after this index
  for (std::size_t i = 0; i < hlen; ++i) {
    auto id = vocab_.find(history[history.size() - hlen + i]);
    hist[i] = id ? *id : kNoWord;
    if (!id) first_valid = i + 1;
  }

  double acc = 0.0;
  std::vector<WordId> key;
  for (std::size_t lvl = hlen;; --lvl) {
    std::size_t start = hlen - lvl;
    bool window_ok = start >= first_valid;
    if (w_known && window_ok) {
      key.assign(hist.begin() + start, hist.end());
      key.push_back(*wid);
      auto it = tables_[lvl].find(key);
      if (it != tables_[lvl].end() && it->second.has_prob) {
        return acc + it->second.log10_prob;
      }
    }
    if (lvl == 0) break;
    if (window_ok) {
      key.assign(hist.begin() + start, hist.end());
      auto it = tables_[lvl - 1].find(key);
      if (it != tables_[lvl - 1].end() && it->second.has_bo) {
        acc += it->second.log10_bo;
      }
      // unseen histories back off with weight 1 (0 in log space)
    }
  }

  if (!w_known) {
    if (!unk_enabled_) return std::nullopt;
    if (unk_id_) {
      auto it = tables_[0].find(std::vector<WordId>{*unk_id_});
      return acc + it->second.log10_prob;
    }
    return acc + std::log10(1.0 / static_cast<double>(predictable_.size()));
  }
  // Known word with no reachable mass (possible only with a zero discount).
  return -std::numeric_limits<double>::infinity();
}

NGramLm estimate_kn(const NGramCounts& counts,
                    std::span<const double> discount_override,
                    std::vector<std::string>* warnings) {
  const int n = counts.order();
  if (!discount_override.empty() &&
      static_cast<int>(discount_override.size()) != n) {
    throw Error(ErrorCode::invalid_argument,
                "discount override must supply one value per order");
  }

  NGramLm lm;
  lm.vocab_ = counts.vocab();
  lm.tables_.assign(n, {});
  std::optional<WordId> bos = lm.vocab_.find(kBos);

  // Per-order absolute discounts.
  std::vector<double> discount(n + 1, 0.0);
  for (int k = 1; k <= n; ++k) {
    if (!discount_override.empty()) {
      double d = discount_override[k - 1];
      if (d < 0.0) {
        throw Error(ErrorCode::invalid_argument, "discounts must be >= 0");
      }
      discount[k] = d;
    } else {
      CountOfCounts cc = counts.count_of_counts(k);
      double denom = static_cast<double>(cc.n1) + 2.0 * static_cast<double>(cc.n2);
      if (denom == 0.0) {
        discount[k] = 0.5;
        if (warnings) {
          warnings->push_back(
              "order " + std::to_string(k) +
              ": degenerate count-of-counts (n1 + 2*n2 = 0); using discount 0.5");
        }
      } else {
        discount[k] = static_cast<double>(cc.n1) / denom;
      }
    }
  }

  // Continuation counts: number of distinct left extensions of each k-gram,
  // taken over the raw (k+1)-gram table.
  std::vector<NGramMap<std::uint64_t>> cont(n > 1 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) {
    auto& m = cont[k - 1];
    for (const auto& [key, cnt] : counts.grams(k + 1)) {
      std::vector<WordId> suffix(key.begin() + 1, key.end());
      ++m[std::move(suffix)];
    }
  }
  auto adjusted = [&](int k, const std::vector<WordId>& g,
                      std::uint64_t raw) -> double {
    if (k == n) return static_cast<double>(raw);
    auto it = cont[k - 1].find(g);
    if (it != cont[k - 1].end() && it->second > 0) {
      return static_cast<double>(it->second);
    }
    return static_cast<double>(raw);  // grams never seen with left context
  };
  auto is_event = [&](const std::vector<WordId>& key) {
    return !(bos && key.back() == *bos);
  };

  struct HistStat {
    double total = 0.0;
    std::uint64_t distinct = 0;
  };

  std::vector<NGramMap<double>> linear(n);  // event probabilities per order
  std::vector<NGramMap<double>> bo_weight(n > 1 ? n - 1 : 0);

  for (int k = 1; k <= n; ++k) {
    if (k == 1) {
      double total = 0.0;
      std::uint64_t vocab_events = 0;
      for (const auto& [key, cnt] : counts.grams(1)) {
        if (!is_event(key)) continue;
        total += adjusted(1, key, cnt);
        ++vocab_events;
      }
      if (vocab_events == 0) {
        throw Error(ErrorCode::validation, "no predictable unigrams in counts");
      }
      double uniform = 1.0 / static_cast<double>(vocab_events);
      double gamma = discount[1] * static_cast<double>(vocab_events) / total;
      for (const auto& [key, cnt] : counts.grams(1)) {
        if (!is_event(key)) continue;
        double a = adjusted(1, key, cnt);
        double disc = std::max(a - discount[1], 0.0);
        linear[0][key] = disc / total + gamma * uniform;
      }
    } else {
      NGramMap<HistStat> hists;
      for (const auto& [key, cnt] : counts.grams(k)) {
        if (!is_event(key)) continue;
        std::vector<WordId> h(key.begin(), key.end() - 1);
        auto& hs = hists[std::move(h)];
        hs.total += adjusted(k, key, cnt);
        ++hs.distinct;
      }
      for (const auto& [key, cnt] : counts.grams(k)) {
        if (!is_event(key)) continue;
        std::vector<WordId> h(key.begin(), key.end() - 1);
        const HistStat& hs = hists.at(h);
        double a = adjusted(k, key, cnt);
        double disc = std::max(a - discount[k], 0.0);
        double gamma = discount[k] * static_cast<double>(hs.distinct) / hs.total;
        std::vector<WordId> suffix(key.begin() + 1, key.end());
        double lower = linear[k - 2].at(suffix);
        linear[k - 1][key] = disc / hs.total + gamma * lower;
      }
      for (const auto& [h, hs] : hists) {
        bo_weight[k - 2][h] =
            discount[k] * static_cast<double>(hs.distinct) / hs.total;
      }
    }
  }

  for (int k = 1; k <= n; ++k) {
    for (const auto& [key, p] : linear[k - 1]) {
      NGramEntry& e = lm.tables_[k - 1][key];
      e.has_prob = true;
      e.log10_prob = std::log10(p);
    }
  }
  for (int k = 1; k < n; ++k) {
    for (const auto& [h, gamma] : bo_weight[k - 1]) {
      NGramEntry& e = lm.tables_[k - 1][h];  // creates context-only entries
      e.has_bo = true;
      e.log10_bo = gamma > 0.0 ? std::log10(gamma)
                               : -std::numeric_limits<double>::infinity();
    }
  }
  lm.rebuild_predictable();
  return lm;
}

Perplexity perplexity(const LanguageModel& lm, const Corpus& corpus) {
  if (corpus.utterances.empty()) {
    throw Error(ErrorCode::validation, "cannot compute perplexity of an empty corpus");
  }
  Perplexity result;
  const std::size_t ctx = lm.order() > 0 ? lm.order() - 1 : 0;
  std::vector<std::string> words;
  for (const auto& utt : corpus.utterances) {
    words.assign(ctx, std::string(kBos));
    for (const auto& tok : utt.tokens) words.push_back(lm_word(tok));
    words.emplace_back(kEos);
    for (std::size_t i = ctx; i < words.size(); ++i) {
      const std::string& w = words[i];
      if (!lm.in_vocab(w)) {
        if (!lm.unk_enabled()) {
          throw Error(ErrorCode::oov, "out-of-vocabulary word '" + w +
                                          "' in utterance '" + utt.id + "'");
        }
        ++result.oov_count;
      }
      std::span<const std::string> history(words.data(), i);
      result.log10_total += lm.logprob(history, w);
      ++result.token_count;
    }
  }
  result.ppl = std::pow(10.0, -result.log10_total /
                                  static_cast<double>(result.token_count));
  return result;
}

double sentence_logprob(const LanguageModel& lm,
                        std::span<const TaggedToken> tokens) {
  const std::size_t ctx = lm.order() > 0 ? lm.order() - 1 : 0;
  std::vector<std::string> words;
  words.assign(ctx, std::string(kBos));
  for (const auto& tok : tokens) words.push_back(lm_word(tok));
  words.emplace_back(kEos);
  double total = 0.0;
  for (std::size_t i = ctx; i < words.size(); ++i) {
    std::span<const std::string> history(words.data(), i);
    total += lm.logprob(history, words[i]);
  }
  return total;
}

void write_arpa(const NGramLm& lm, std::ostream& out) {
  const int n = static_cast<int>(lm.order());
  out << "\\data\\\n";
  for (int k = 1; k <= n; ++k) {
    out << "ngram " << k << "=" << lm.table(k).size() << "\n";
  }
  for (int k = 1; k <= n; ++k) {
    out << "\n\\" << k << "-grams:\n";
    std::vector<std::pair<std::vector<std::string>, const NGramEntry*>> rows;
    rows.reserve(lm.table(k).size());
    for (const auto& [key, entry] : lm.table(k)) {
      std::vector<std::string> words;
      words.reserve(key.size());
      for (WordId id : key) words.push_back(lm.vocab().word(id));
      rows.emplace_back(std::move(words), &entry);
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [words, entry] : rows) {
      out << (entry->has_prob ? format_log10(entry->log10_prob) : "-99");
      out << '\t';
      for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) out << ' ';
        out << words[i];
      }
      if (entry->has_bo) out << '\t' << format_log10(entry->log10_bo);
      out << "\n";
    }
  }
  out << "\n\\end\\\n";
}

void write_arpa_file(const NGramLm& lm, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot open output file: " + path);
  write_arpa(lm, out);
  if (!out) throw Error(ErrorCode::io, "failed writing " + path);
}

namespace {

bool parse_double(const std::string& field, double* out) {
  const char* begin = field.c_str();
  char* end = nullptr;
  *out = std::strtod(begin, &end);
  return end == begin + field.size() && !field.empty();
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream ss(line);
  std::string f;
  while (ss >> f) fields.push_back(std::move(f));
  return fields;
}

}  // namespace

NGramLm read_arpa(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](ErrorCode code, const std::string& msg) -> Error {
    return Error(code, "line " + std::to_string(line_no) + ": " + msg);
  };

  // Header.
  bool have_data = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line == "\\data\\") {
      have_data = true;
      break;
    }
    throw fail(ErrorCode::parse, "missing \\data\\ header");
  }
  if (!have_data) throw Error(ErrorCode::parse, "missing \\data\\ header");

  std::vector<std::size_t> declared;  // declared[k-1]
  bool pending_line = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line.rfind("ngram ", 0) == 0) {
      std::size_t eq = line.find('=');
      if (eq == std::string::npos) {
        throw fail(ErrorCode::parse, "malformed ngram count line");
      }
      int k = std::atoi(line.substr(6, eq - 6).c_str());
      long long cnt = std::atoll(line.substr(eq + 1).c_str());
      if (k < 1 || cnt < 0) {
        throw fail(ErrorCode::parse, "malformed ngram count line");
      }
      if (static_cast<std::size_t>(k) > declared.size()) declared.resize(k, 0);
      declared[k - 1] = static_cast<std::size_t>(cnt);
      continue;
    }
    pending_line = true;
    break;  // first section marker
  }
  if (!pending_line) line.clear();
  if (declared.empty()) {
    throw fail(ErrorCode::parse, "\\data\\ header declares no n-gram orders");
  }
  const int n = static_cast<int>(declared.size());

  NGramLm lm;
  lm.tables_.assign(n, {});

  bool saw_end = false;
  int section = 0;  // current order, 0 = none
  std::vector<std::size_t> loaded(n, 0);
  while (true) {
    if (line.find_first_not_of(" \t") != std::string::npos) {
      if (line == "\\end\\") {
        saw_end = true;
        break;
      }
      if (line.front() == '\\') {
        int k = std::atoi(line.substr(1).c_str());
        std::string expect = "\\" + std::to_string(k) + "-grams:";
        if (k < 1 || k > n || line != expect) {
          throw fail(ErrorCode::parse, "unexpected section marker '" + line + "'");
        }
        section = k;
      } else {
        if (section == 0) {
          throw fail(ErrorCode::parse, "entry outside of any n-gram section");
        }
        std::vector<std::string> fields = split_fields(line);
        const std::size_t k = static_cast<std::size_t>(section);
        if (fields.size() != k + 1 && fields.size() != k + 2) {
          throw fail(ErrorCode::parse, "expected log10prob, " +
                                           std::to_string(k) +
                                           " words, optional backoff");
        }
        double logp = 0.0;
        if (!parse_double(fields[0], &logp)) {
          throw fail(ErrorCode::parse, "unparsable probability '" + fields[0] + "'");
        }
        NGramEntry entry;
        if (is_log_zero(logp)) {
          entry.has_prob = false;
        } else {
          entry.has_prob = true;
          entry.log10_prob = logp;
        }
        if (fields.size() == k + 2) {
          double bo = 0.0;
          if (!parse_double(fields.back(), &bo)) {
            throw fail(ErrorCode::parse,
                       "unparsable backoff '" + fields.back() + "'");
          }
          entry.has_bo = true;
          entry.log10_bo =
              is_log_zero(bo) ? -std::numeric_limits<double>::infinity() : bo;
        }
        std::vector<WordId> key;
        key.reserve(k);
        for (std::size_t i = 1; i <= k; ++i) key.push_back(lm.vocab_.add(fields[i]));
        if (!lm.tables_[section - 1].emplace(std::move(key), entry).second) {
          throw fail(ErrorCode::validation, "duplicate n-gram entry");
        }
        ++loaded[section - 1];
      }
    }
    if (!std::getline(in, line)) break;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
  }
  if (!saw_end) {
    throw Error(ErrorCode::parse, "missing \\end\\ marker");
  }
  for (int k = 1; k <= n; ++k) {
    if (loaded[k - 1] != declared[k - 1]) {
      throw Error(ErrorCode::validation,
                  "header declares " + std::to_string(declared[k - 1]) + " " +
                      std::to_string(k) + "-grams but section lists " +
                      std::to_string(loaded[k - 1]));
    }
  }
  // Backoff chains must be resolvable: the length-(k-1) suffix of every
  // stored k-gram must itself be stored.
  for (int k = 2; k <= n; ++k) {
    for (const auto& [key, entry] : lm.tables_[k - 1]) {
      std::vector<WordId> suffix(key.begin() + 1, key.end());
      if (!lm.tables_[k - 2].count(suffix)) {
        std::string words;
        for (WordId id : key) {
          if (!words.empty()) words += ' ';
          words += lm.vocab_.word(id);
        }
        throw Error(ErrorCode::validation,
                    "unresolvable backoff chain for n-gram '" + words + "'");
      }
    }
  }
  lm.rebuild_predictable();
  if (lm.predictable_.empty()) {
    throw Error(ErrorCode::validation, "model has no predictable unigrams");
  }
  return lm;
}

NGramLm read_arpa_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open input file: " + path);
  try {
    return read_arpa(in);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

}  // namespace cskit
