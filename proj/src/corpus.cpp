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

#include "corpus.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace cskit {

using json = nlohmann::ordered_json;

namespace {

bool valid_tag(const std::string& tag) {
  if (tag.size() < 2 || tag.size() > 8) return false;
  if (tag[0] < 'a' || tag[0] > 'z') return false;
  for (std::size_t i = 1; i < tag.size(); ++i) {
    char c = tag[i];
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'))) return false;
  }
  return true;
}

bool valid_surface(const std::string& s) {
  if (s.empty()) return false;
  for (unsigned char c : s) {
    if (c < 0x21 || c == 0x7f) return false;  // whitespace and control bytes
  }
  return true;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open input file: " + path);
  return in;
}

}  // namespace

void TagSet::add(const std::string& tag) {
  if (!valid_tag(tag)) {
    throw Error(ErrorCode::validation,
                "invalid language tag '" + tag +
                    "' (expected [a-z][a-z0-9]{1,7})");
  }
  if (contains(tag)) {
    throw Error(ErrorCode::validation, "duplicate language tag '" + tag + "'");
  }
  tags_.push_back(tag);
}

bool TagSet::contains(const std::string& tag) const {
  for (const auto& t : tags_) {
    if (t == tag) return true;
  }
  return false;
}

TagSet TagSet::default_set() {
  TagSet ts;
  for (const char* t : {"eng", "zul", "xho", "tsn", "sot"}) ts.add(t);
  return ts;
}

TagSet TagSet::read_file(const std::string& path) {
  std::ifstream in = open_input(path);
  TagSet ts;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    std::size_t end = line.find_last_not_of(" \t");
    ts.add(line.substr(start, end - start + 1));
  }
  if (ts.size() == 0) {
    throw Error(ErrorCode::validation, "tag-set file is empty: " + path);
  }
  return ts;
}

std::string lm_word(const TaggedToken& token) {
  return token.surface + "/" + token.lang;
}

Corpus parse_jsonl_corpus(std::istream& in, const TagSet& tag_set,
                          const ParseOptions& opts) {
  Corpus corpus;
  corpus.tag_set = tag_set;
  std::unordered_map<std::string, std::size_t> seen_ids;  // id -> line number
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::parse, "line " + std::to_string(line_no) +
                                        ": malformed JSON record: " + e.what());
    }
    if (!rec.is_object() || !rec.contains("id") || !rec["id"].is_string() ||
        !rec.contains("tokens") || !rec["tokens"].is_array()) {
      throw Error(ErrorCode::parse,
                  "line " + std::to_string(line_no) +
                      ": record must be {\"id\": str, \"tokens\": [...]}");
    }

    Utterance utt;
    utt.id = rec["id"].get<std::string>();
    if (utt.id.empty()) {
      throw Error(ErrorCode::validation,
                  "line " + std::to_string(line_no) + ": empty utterance id");
    }
    auto dup = seen_ids.find(utt.id);
    if (dup != seen_ids.end()) {
      throw Error(ErrorCode::validation,
                  "duplicate utterance id '" + utt.id + "' on lines " +
                      std::to_string(dup->second) + " and " +
                      std::to_string(line_no));
    }
    seen_ids.emplace(utt.id, line_no);

    for (const auto& tok : rec["tokens"]) {
      if (!tok.is_object() || !tok.contains("w") || !tok["w"].is_string() ||
          !tok.contains("lang") || !tok["lang"].is_string()) {
        throw Error(ErrorCode::parse,
                    "line " + std::to_string(line_no) +
                        ": token must be {\"w\": str, \"lang\": str}");
      }
      TaggedToken t{tok["w"].get<std::string>(), tok["lang"].get<std::string>()};
      if (!valid_surface(t.surface)) {
        throw Error(ErrorCode::validation,
                    "line " + std::to_string(line_no) + ": invalid surface '" +
                        t.surface + "'");
      }
      if (!tag_set.contains(t.lang)) {
        throw Error(ErrorCode::validation,
                    "line " + std::to_string(line_no) + ": unknown tag '" +
                        t.lang + "'");
      }
      utt.tokens.push_back(std::move(t));
    }
    if (utt.tokens.empty() && !opts.allow_empty_utterances) {
      throw Error(ErrorCode::validation,
                  "line " + std::to_string(line_no) + ": utterance '" +
                      utt.id + "' has no tokens");
    }

    if (rec.contains("dur_s")) {
      if (!rec["dur_s"].is_number()) {
        throw Error(ErrorCode::parse, "line " + std::to_string(line_no) +
                                          ": dur_s must be a number");
      }
      double d = rec["dur_s"].get<double>();
      if (d < 0.0) {
        throw Error(ErrorCode::validation, "line " + std::to_string(line_no) +
                                               ": negative duration");
      }
      utt.duration_s = d;
    }
    if (rec.contains("speaker")) {
      if (!rec["speaker"].is_string()) {
        throw Error(ErrorCode::parse, "line " + std::to_string(line_no) +
                                          ": speaker must be a string");
      }
      utt.speaker = rec["speaker"].get<std::string>();
    }
    corpus.utterances.push_back(std::move(utt));
  }
  return corpus;
}

Corpus parse_jsonl_corpus_file(const std::string& path, const TagSet& tag_set,
                               const ParseOptions& opts) {
  std::ifstream in = open_input(path);
  try {
    return parse_jsonl_corpus(in, tag_set, opts);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

Corpus parse_plain_corpus(std::istream& in, const std::string& lang,
                          const TagSet& tag_set) {
  if (!tag_set.contains(lang)) {
    throw Error(ErrorCode::validation, "unknown tag '" + lang + "'");
  }
  Corpus corpus;
  corpus.tag_set = tag_set;
  std::string line;
  std::size_t line_no = 0;
  std::uint64_t seq = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream words(line);
    Utterance utt;
    std::string w;
    while (words >> w) {
      if (!valid_surface(w)) {
        throw Error(ErrorCode::validation,
                    "line " + std::to_string(line_no) + ": invalid surface '" +
                        w + "'");
      }
      utt.tokens.push_back(TaggedToken{w, lang});
    }
    if (utt.tokens.empty()) continue;  // whitespace-only lines are skipped
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%06llu",
                  static_cast<unsigned long long>(++seq));
    utt.id = buf;
    corpus.utterances.push_back(std::move(utt));
  }
  return corpus;
}

Corpus parse_plain_corpus_file(const std::string& path, const std::string& lang,
                               const TagSet& tag_set) {
  std::ifstream in = open_input(path);
  try {
    return parse_plain_corpus(in, lang, tag_set);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

void write_jsonl_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& utt : corpus.utterances) {
    json rec;
    rec["id"] = utt.id;
    json toks = json::array();
    for (const auto& t : utt.tokens) {
      toks.push_back(json{{"w", t.surface}, {"lang", t.lang}});
    }
    rec["tokens"] = std::move(toks);
    if (utt.duration_s) rec["dur_s"] = *utt.duration_s;
    if (utt.speaker) rec["speaker"] = *utt.speaker;
    out << rec.dump() << "\n";
  }
}

void write_jsonl_corpus_file(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot open output file: " + path);
  write_jsonl_corpus(corpus, out);
  if (!out) throw Error(ErrorCode::io, "failed writing " + path);
}

std::uint64_t count_switches(const Utterance& u) {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i + 1 < u.tokens.size(); ++i) {
    if (u.tokens[i].lang != u.tokens[i + 1].lang) ++n;
  }
  return n;
}

UtteranceClass classify_utterance(const Utterance& u) {
  if (u.tokens.empty()) {
    throw Error(ErrorCode::validation,
                "utterance '" + u.id + "' is empty; classification undefined");
  }
  const std::string& first = u.tokens.front().lang;
  for (const auto& t : u.tokens) {
    if (t.lang != first) return {UtteranceKind::code_switched, ""};
  }
  return {UtteranceKind::monolingual, first};
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats s;
  s.utterances = corpus.utterances.size();
  for (const auto& utt : corpus.utterances) {
    for (const auto& t : utt.tokens) {
      ++s.tokens_per_lang[t.lang];
      ++s.total_tokens;
    }
    UtteranceClass cls = classify_utterance(utt);
    s.switches += count_switches(utt);
    bool mono = cls.kind == UtteranceKind::monolingual;
    if (mono) {
      ++s.monolingual_per_lang[cls.lang];
      ++s.monolingual_total;
    } else {
      ++s.code_switched;
    }
    if (utt.duration_s) {
      s.has_durations = true;
      s.total_duration_s += *utt.duration_s;
      if (mono) {
        s.mono_duration_s[cls.lang] += *utt.duration_s;
      } else {
        s.cs_duration_s += *utt.duration_s;
      }
    }
  }
  return s;
}

std::string corpus_stats_json(const Corpus& corpus) {
  CorpusStats s = corpus_stats(corpus);
  json out;
  out["utterances"] = s.utterances;
  out["total_tokens"] = s.total_tokens;
  json tokens, mono;
  for (const auto& lang : corpus.tag_set.tags()) {
    auto it = s.tokens_per_lang.find(lang);
    tokens[lang] = it == s.tokens_per_lang.end() ? 0 : it->second;
    auto im = s.monolingual_per_lang.find(lang);
    mono[lang] = im == s.monolingual_per_lang.end() ? 0 : im->second;
  }
  out["tokens"] = std::move(tokens);
  out["monolingual_utterances"] = std::move(mono);
  out["monolingual_total"] = s.monolingual_total;
  out["code_switched"] = s.code_switched;
  out["switches"] = s.switches;
  if (s.has_durations) {
    json dur;
    json dm;
    for (const auto& lang : corpus.tag_set.tags()) {
      auto it = s.mono_duration_s.find(lang);
      dm[lang] = it == s.mono_duration_s.end() ? 0.0 : it->second;
    }
    dur["mono_s"] = std::move(dm);
    dur["cs_s"] = s.cs_duration_s;
    dur["total_s"] = s.total_duration_s;
    out["durations"] = std::move(dur);
  }
  return out.dump(2);
}

std::string corpus_stats_pretty(const Corpus& corpus) {
  CorpusStats s = corpus_stats(corpus);
  std::ostringstream out;
  char buf[160];
  out << "Corpus summary\n";
  std::snprintf(buf, sizeof(buf),
                "  utterances %llu  (monolingual %llu, code-switched %llu)\n",
                (unsigned long long)s.utterances,
                (unsigned long long)s.monolingual_total,
                (unsigned long long)s.code_switched);
  out << buf;
  std::snprintf(buf, sizeof(buf), "  tokens %llu,  intra-sentential switches %llu\n",
                (unsigned long long)s.total_tokens,
                (unsigned long long)s.switches);
  out << buf;
  out << "\n  lang      tokens   mono-utts";
  if (s.has_durations) out << "   mono-dur(s)";
  out << "\n";
  for (const auto& lang : corpus.tag_set.tags()) {
    std::uint64_t tok = s.tokens_per_lang.count(lang) ? s.tokens_per_lang.at(lang) : 0;
    std::uint64_t mu = s.monolingual_per_lang.count(lang) ? s.monolingual_per_lang.at(lang) : 0;
    std::snprintf(buf, sizeof(buf), "  %-8s %8llu  %9llu", lang.c_str(),
                  (unsigned long long)tok, (unsigned long long)mu);
    out << buf;
    if (s.has_durations) {
      double d = s.mono_duration_s.count(lang) ? s.mono_duration_s.at(lang) : 0.0;
      std::snprintf(buf, sizeof(buf), "  %12.2f", d);
      out << buf;
    }
    out << "\n";
  }
  if (s.has_durations) {
    std::snprintf(buf, sizeof(buf), "  CS duration %.2fs, total %.2fs\n",
                  s.cs_duration_s, s.total_duration_s);
    out << buf;
  }
  return out.str();
}

}  // namespace cskit
