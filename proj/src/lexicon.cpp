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

#include "lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace cskit {

using json = nlohmann::ordered_json;

bool Lexicon::contains(const TaggedToken& word) const {
  for (const auto& e : entries) {
    if (e.word == word) return true;
  }
  return false;
}

Lexicon read_lexicon(std::istream& in, const TagSet& tag_set) {
  Lexicon lex;
  lex.tag_set = tag_set;
  std::unordered_set<std::string> seen;  // "surface/tag\tphone phone"
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::parse,
                  "line " + std::to_string(line_no) +
                      ": expected `word/tag<TAB>phone phone ...`");
    }
    std::string head = line.substr(0, tab);
    std::size_t slash = head.rfind('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == head.size()) {
      throw Error(ErrorCode::parse, "line " + std::to_string(line_no) +
                                        ": malformed word field '" + head + "'");
    }
    PronEntry entry;
    entry.word.surface = head.substr(0, slash);
    entry.word.lang = head.substr(slash + 1);
    if (entry.word.surface.find_first_of(" \t") != std::string::npos) {
      throw Error(ErrorCode::validation, "line " + std::to_string(line_no) +
                                             ": word contains whitespace");
    }
    if (!tag_set.contains(entry.word.lang)) {
      throw Error(ErrorCode::validation, "line " + std::to_string(line_no) +
                                             ": unknown tag '" +
                                             entry.word.lang + "'");
    }

    std::istringstream phones(line.substr(tab + 1));
    std::string p;
    while (phones >> p) entry.phones.push_back(std::move(p));
    if (entry.phones.empty()) {
      throw Error(ErrorCode::validation,
                  "line " + std::to_string(line_no) +
                      ": empty pronunciation for '" + head + "'");
    }

    std::string fingerprint = head;
    fingerprint += '\t';
    for (const auto& ph : entry.phones) {
      fingerprint += ph;
      fingerprint += ' ';
    }
    if (!seen.insert(fingerprint).second) {
      throw Error(ErrorCode::validation,
                  "line " + std::to_string(line_no) + ": duplicate entry for '" +
                      head + "'");
    }
    lex.entries.push_back(std::move(entry));
  }
  return lex;
}

Lexicon read_lexicon_file(const std::string& path, const TagSet& tag_set) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open input file: " + path);
  try {
    return read_lexicon(in, tag_set);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

LexiconStats lexicon_stats(const Lexicon& lexicon) {
  LexiconStats stats;
  std::map<std::string, std::set<std::string>> words_per_lang;
  std::set<std::string> phone_union;
  for (const auto& e : lexicon.entries) {
    auto& lang = stats.per_lang[e.word.lang];
    ++lang.entries;
    ++stats.total_entries;
    words_per_lang[e.word.lang].insert(e.word.surface);
    for (const auto& p : e.phones) {
      lang.phones.insert(p);
      phone_union.insert(p);
    }
  }
  for (auto& [lang, s] : stats.per_lang) {
    s.words = words_per_lang[lang].size();
    stats.total_words += s.words;
    stats.phones_disjoint_sum += s.phones.size();
  }
  stats.phones_union = phone_union.size();

  // Pairwise shared phones, registry order.
  const auto& tags = lexicon.tag_set.tags();
  for (std::size_t i = 0; i < tags.size(); ++i) {
    for (std::size_t j = i + 1; j < tags.size(); ++j) {
      auto a = stats.per_lang.find(tags[i]);
      auto b = stats.per_lang.find(tags[j]);
      if (a == stats.per_lang.end() || b == stats.per_lang.end()) continue;
      std::uint64_t shared = 0;
      for (const auto& p : a->second.phones) {
        if (b->second.phones.count(p)) ++shared;
      }
      stats.shared_phones[tags[i] + "+" + tags[j]] = shared;
    }
  }
  return stats;
}

std::string lexicon_stats_json(const Lexicon& lexicon) {
  LexiconStats stats = lexicon_stats(lexicon);
  json out;
  json langs;
  for (const auto& tag : lexicon.tag_set.tags()) {
    auto it = stats.per_lang.find(tag);
    json row;
    row["words"] = it == stats.per_lang.end() ? 0 : it->second.words;
    row["entries"] = it == stats.per_lang.end() ? 0 : it->second.entries;
    row["phones"] = it == stats.per_lang.end() ? 0 : it->second.phones.size();
    langs[tag] = std::move(row);
  }
  out["languages"] = std::move(langs);
  json totals;
  totals["words"] = stats.total_words;
  totals["entries"] = stats.total_entries;
  // The per-language inventories may overlap, so both accountings are given.
  totals["phones_union"] = stats.phones_union;
  totals["phones_disjoint_sum"] = stats.phones_disjoint_sum;
  out["totals"] = std::move(totals);
  json shared;
  for (const auto& [pair, n] : stats.shared_phones) shared[pair] = n;
  out["shared_phones"] = std::move(shared);
  return out.dump(2);
}

std::vector<OovItem> oov_check(const Lexicon& lexicon, const Corpus& corpus) {
  std::unordered_set<std::string> known;
  for (const auto& e : lexicon.entries) known.insert(lm_word(e.word));
  std::map<std::pair<std::string, std::string>, std::uint64_t> misses;
  for (const auto& utt : corpus.utterances) {
    for (const auto& tok : utt.tokens) {
      if (!known.count(lm_word(tok))) {
        ++misses[{tok.surface, tok.lang}];
      }
    }
  }
  std::vector<OovItem> out;
  out.reserve(misses.size());
  for (const auto& [key, count] : misses) {
    out.push_back(OovItem{TaggedToken{key.first, key.second}, count});
  }
  return out;  // map iteration is already (surface, tag) sorted
}

std::string oov_check_json(const Lexicon& lexicon, const Corpus& corpus) {
  auto items = oov_check(lexicon, corpus);
  json out;
  out["oov_types"] = items.size();
  std::uint64_t total = 0;
  json list = json::array();
  for (const auto& item : items) {
    total += item.count;
    list.push_back(json{{"w", item.word.surface},
                        {"lang", item.word.lang},
                        {"count", item.count}});
  }
  out["oov_tokens"] = total;
  out["closed_vocabulary"] = items.empty();
  out["oov"] = std::move(list);
  return out.dump(2);
}

}  // namespace cskit
