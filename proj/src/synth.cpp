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

#include "synth.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include <json.hpp>

namespace cskit {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::string seq_id(const char* prefix, std::uint64_t n) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%s%06llu", prefix,
                static_cast<unsigned long long>(n));
  return buf;
}

class Generator {
 public:
  Generator(const TagSet& tags, const SynthParams& p)
      : tags_(tags.tags()), p_(p), rng_(p.seed) {
    if (tags_.size() < 2) {
      throw Error(ErrorCode::validation,
                  "synthetic generation needs at least two languages");
    }
    if (p_.vocab_per_lang == 0 || p_.min_len == 0 || p_.max_len < p_.min_len ||
        p_.cs_utts == 0 || p_.mono_utts == 0 || p_.dev_utts == 0) {
      throw Error(ErrorCode::invalid_argument, "bad synthetic size parameters");
    }
    if (p_.switch_rate < 0 || p_.switch_rate > 1 || p_.noise < 0 ||
        p_.noise > 1 || p_.cs_dev_fraction < 0 || p_.cs_dev_fraction > 1) {
      throw Error(ErrorCode::invalid_argument,
                  "rates must lie in [0, 1]");
    }
    for (const auto& lang : tags_) {
      std::vector<std::string> pool;
      pool.reserve(p_.vocab_per_lang);
      for (std::uint32_t i = 0; i < p_.vocab_per_lang; ++i) {
        char buf[24];
        std::snprintf(buf, sizeof(buf), "%s%03u", lang.c_str(), i);
        pool.push_back(buf);
      }
      pools_[lang] = std::move(pool);
    }
  }

  SynthResult run(const TagSet& tag_set) {
    SynthResult out;
    out.cs.tag_set = tag_set;
    out.african.tag_set = tag_set;
    out.english.tag_set = tag_set;
    out.dev.tag_set = tag_set;
    out.test_ref.tag_set = tag_set;

    const std::string& hub = tags_[0];
    for (std::uint32_t i = 0; i < p_.mono_utts; ++i) {
      out.english.utterances.push_back(mono_utterance(seq_id("en", i + 1), hub));
    }
    std::uint64_t n = 0;
    for (std::size_t l = 1; l < tags_.size(); ++l) {
      for (std::uint32_t i = 0; i < p_.mono_utts; ++i) {
        out.african.utterances.push_back(
            mono_utterance(seq_id("af", ++n), tags_[l]));
      }
    }
    for (std::uint32_t i = 0; i < p_.cs_utts; ++i) {
      out.cs.utterances.push_back(cs_utterance(seq_id("cs", i + 1), pools_));
    }

    collect_observed(out.cs);

    for (std::uint32_t i = 0; i < p_.dev_utts; ++i) {
      std::string id = seq_id("dv", i + 1);
      if (chance(p_.cs_dev_fraction)) {
        out.dev.utterances.push_back(cs_utterance(id, observed_));
      } else {
        std::string lang = chance(0.5) ? tags_[0] : pick_other(tags_[0]);
        if (observed_.at(lang).empty()) lang = tags_[0];
        out.dev.utterances.push_back(mono_observed_utterance(id, lang));
      }
    }
    for (std::uint32_t i = 0; i < p_.test_utts; ++i) {
      out.test_ref.utterances.push_back(
          cs_utterance(seq_id("ts", i + 1), observed_));
    }
    for (const auto& ref : out.test_ref.utterances) {
      out.test_nbest.push_back(make_nbest(ref));
    }
    return out;
  }

 private:
  using Pools = std::map<std::string, std::vector<std::string>>;

  bool chance(double p) { return real_(rng_) < p; }

  std::uint32_t length() {
    std::uniform_int_distribution<std::uint32_t> d(p_.min_len, p_.max_len);
    return d(rng_);
  }

  const std::string& pick_word(const Pools& pools, const std::string& lang) {
    const auto& pool = pools.at(lang);
    std::uniform_int_distribution<std::size_t> d(0, pool.size() - 1);
    return pool[d(rng_)];
  }

  std::string pick_other(const std::string& current) {
    std::uniform_int_distribution<std::size_t> d(1, tags_.size() - 1);
    std::string lang = tags_[d(rng_)];
    while (lang == current && tags_.size() > 2) lang = tags_[d(rng_)];
    return lang;
  }

  Utterance mono_utterance(std::string id, const std::string& lang) {
    Utterance u;
    u.id = std::move(id);
    std::uint32_t len = length();
    for (std::uint32_t i = 0; i < len; ++i) {
      u.tokens.push_back(TaggedToken{pick_word(pools_, lang), lang});
    }
    return u;
  }

  Utterance mono_observed_utterance(std::string id, const std::string& lang) {
    Utterance u;
    u.id = std::move(id);
    std::uint32_t len = length();
    for (std::uint32_t i = 0; i < len; ++i) {
      u.tokens.push_back(TaggedToken{pick_word(observed_, lang), lang});
    }
    return u;
  }

  // English-matrix insertional switching: runs of the matrix language with
  // occasional jumps to an embedded language.
  Utterance cs_utterance(std::string id, const Pools& pools) {
    Utterance u;
    u.id = std::move(id);
    const std::string& hub = tags_[0];
    std::string matrix = chance(0.6) ? hub : pick_other(hub);
    std::string current = matrix;
    std::uint32_t len = length();
    for (std::uint32_t i = 0; i < len; ++i) {
      if (i > 0 && chance(p_.switch_rate)) {
        if (current == matrix) {
          current = current == hub ? pick_other(hub) : hub;
        } else {
          current = matrix;
        }
      }
      std::string lang = current;
      if (pools.at(lang).empty()) {
        for (const auto& t : tags_) {
          if (!pools.at(t).empty()) {
            lang = t;
            break;
          }
        }
      }
      u.tokens.push_back(TaggedToken{pick_word(pools, lang), lang});
    }
    return u;
  }

  void collect_observed(const Corpus& cs) {
    std::map<std::string, std::set<std::string>> seen;
    for (const auto& lang : tags_) seen[lang];
    for (const auto& utt : cs.utterances) {
      for (const auto& tok : utt.tokens) seen[tok.lang].insert(tok.surface);
    }
    for (auto& [lang, words] : seen) {
      observed_[lang] = std::vector<std::string>(words.begin(), words.end());
    }
  }

  TaggedToken random_observed_token() {
    // Weight languages by observed vocabulary size.
    std::vector<const std::string*> langs;
    std::size_t total = 0;
    for (const auto& lang : tags_) total += observed_.at(lang).size();
    std::uniform_int_distribution<std::size_t> d(0, total - 1);
    std::size_t pick = d(rng_);
    for (const auto& lang : tags_) {
      const auto& pool = observed_.at(lang);
      if (pick < pool.size()) return TaggedToken{pool[pick], lang};
      pick -= pool.size();
    }
    return TaggedToken{observed_.at(tags_[0]).front(), tags_[0]};
  }

  NBestList make_nbest(const Utterance& ref) {
    NBestList list;
    list.id = ref.id;
    std::normal_distribution<double> jitter(0.0, 0.8);
    for (std::uint32_t h = 0; h < std::max(p_.nbest, 1u); ++h) {
      Hypothesis hyp;
      int edits = 0;
      for (const auto& tok : ref.tokens) {
        double r = real_(rng_);
        if (r < p_.noise * 0.6) {
          hyp.tokens.push_back(random_observed_token());  // substitution
          ++edits;
        } else if (r < p_.noise * 0.8) {
          ++edits;  // deletion
        } else if (r < p_.noise) {
          hyp.tokens.push_back(tok);
          hyp.tokens.push_back(random_observed_token());  // insertion
          ++edits;
        } else {
          hyp.tokens.push_back(tok);
        }
      }
      hyp.acoustic_logscore = -1.0 * edits + jitter(rng_);
      list.hyps.push_back(std::move(hyp));
    }
    return list;
  }

  std::vector<std::string> tags_;
  SynthParams p_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> real_{0.0, 1.0};
  Pools pools_;
  Pools observed_;
};

}  // namespace

SynthResult gen_synth(const TagSet& tag_set, const SynthParams& params) {
  Generator gen(tag_set, params);
  return gen.run(tag_set);
}

std::string write_synth_files(const SynthResult& result,
                              const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw Error(ErrorCode::io, "cannot create directory " + out_dir + ": " +
                                   ec.message());
  }
  auto path = [&](const char* name) { return (fs::path(out_dir) / name).string(); };

  {
    std::ofstream tags(path("tags.txt"));
    if (!tags) throw Error(ErrorCode::io, "cannot write tags.txt");
    for (const auto& t : result.cs.tag_set.tags()) tags << t << "\n";
  }
  write_jsonl_corpus_file(result.cs, path("train_cs.jsonl"));
  write_jsonl_corpus_file(result.african, path("train_african.jsonl"));
  write_jsonl_corpus_file(result.english, path("train_english.jsonl"));
  write_jsonl_corpus_file(result.dev, path("dev.jsonl"));
  write_jsonl_corpus_file(result.test_ref, path("test_ref.jsonl"));
  write_nbest_file(result.test_nbest, path("test_nbest.jsonl"));

  json manifest;
  manifest["out_dir"] = out_dir;
  json files;
  files["tags"] = path("tags.txt");
  files["train_cs"] = path("train_cs.jsonl");
  files["train_african"] = path("train_african.jsonl");
  files["train_english"] = path("train_english.jsonl");
  files["dev"] = path("dev.jsonl");
  files["test_ref"] = path("test_ref.jsonl");
  files["test_nbest"] = path("test_nbest.jsonl");
  manifest["files"] = std::move(files);
  json sizes;
  sizes["train_cs"] = result.cs.utterances.size();
  sizes["train_african"] = result.african.utterances.size();
  sizes["train_english"] = result.english.utterances.size();
  sizes["dev"] = result.dev.utterances.size();
  sizes["test_ref"] = result.test_ref.utterances.size();
  sizes["test_nbest"] = result.test_nbest.size();
  manifest["utterances"] = std::move(sizes);
  CorpusStats cs_stats = corpus_stats(result.cs);
  manifest["train_cs_switches"] = cs_stats.switches;
  manifest["train_cs_code_switched"] = cs_stats.code_switched;
  return manifest.dump(2);
}

}  // namespace cskit
