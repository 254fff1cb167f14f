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

#include "rescore.hpp"

#include <cmath>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

namespace cskit {

using json = nlohmann::ordered_json;

std::vector<NBestList> read_nbest(std::istream& in, const TagSet& tag_set) {
  std::vector<NBestList> lists;
  std::unordered_set<std::string> ids;
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
        !rec.contains("hyps") || !rec["hyps"].is_array()) {
      throw Error(ErrorCode::parse,
                  "line " + std::to_string(line_no) +
                      ": record must be {\"id\": str, \"hyps\": [...]}");
    }
    NBestList list;
    list.id = rec["id"].get<std::string>();
    if (!ids.insert(list.id).second) {
      throw Error(ErrorCode::validation, "line " + std::to_string(line_no) +
                                             ": duplicate utterance id '" +
                                             list.id + "'");
    }
    for (const auto& h : rec["hyps"]) {
      if (!h.is_object() || !h.contains("ac") || !h["ac"].is_number() ||
          !h.contains("tokens") || !h["tokens"].is_array()) {
        throw Error(ErrorCode::parse,
                    "line " + std::to_string(line_no) +
                        ": hypothesis must be {\"ac\": number, \"tokens\": [...]}");
      }
      Hypothesis hyp;
      hyp.acoustic_logscore = h["ac"].get<double>();
      if (!std::isfinite(hyp.acoustic_logscore)) {
        throw Error(ErrorCode::validation,
                    "line " + std::to_string(line_no) +
                        ": nonfinite acoustic score in '" + list.id + "'");
      }
      for (const auto& tok : h["tokens"]) {
        if (!tok.is_object() || !tok.contains("w") || !tok["w"].is_string() ||
            !tok.contains("lang") || !tok["lang"].is_string()) {
          throw Error(ErrorCode::parse,
                      "line " + std::to_string(line_no) +
                          ": token must be {\"w\": str, \"lang\": str}");
        }
        TaggedToken t{tok["w"].get<std::string>(),
                      tok["lang"].get<std::string>()};
        if (!tag_set.contains(t.lang)) {
          throw Error(ErrorCode::validation,
                      "line " + std::to_string(line_no) + ": unknown tag '" +
                          t.lang + "'");
        }
        hyp.tokens.push_back(std::move(t));
      }
      list.hyps.push_back(std::move(hyp));
    }
    if (list.hyps.empty()) {
      throw Error(ErrorCode::validation, "line " + std::to_string(line_no) +
                                             ": utterance '" + list.id +
                                             "' has an empty hypothesis list");
    }
    lists.push_back(std::move(list));
  }
  return lists;
}

std::vector<NBestList> read_nbest_file(const std::string& path,
                                       const TagSet& tag_set) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open input file: " + path);
  try {
    return read_nbest(in, tag_set);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

void write_nbest(std::span<const NBestList> lists, std::ostream& out) {
  for (const auto& list : lists) {
    json rec;
    rec["id"] = list.id;
    json hyps = json::array();
    for (const auto& h : list.hyps) {
      json toks = json::array();
      for (const auto& t : h.tokens) {
        toks.push_back(json{{"w", t.surface}, {"lang", t.lang}});
      }
      hyps.push_back(json{{"ac", h.acoustic_logscore}, {"tokens", std::move(toks)}});
    }
    rec["hyps"] = std::move(hyps);
    out << rec.dump() << "\n";
  }
}

void write_nbest_file(std::span<const NBestList> lists, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot open output file: " + path);
  write_nbest(lists, out);
  if (!out) throw Error(ErrorCode::io, "failed writing " + path);
}

RescoreResult rescore(std::span<const NBestList> lists, const LanguageModel& lm,
                      const TagSet& tag_set, double lm_scale,
                      double word_penalty) {
  if (lm_scale < 0.0) {
    throw Error(ErrorCode::invalid_argument, "lm_scale must be >= 0");
  }
  RescoreResult result;
  result.selected.tag_set = tag_set;
  for (const auto& list : lists) {
    if (list.hyps.empty()) {
      throw Error(ErrorCode::validation,
                  "utterance '" + list.id + "' has an empty hypothesis list");
    }
    RescoreChoice best;
    std::size_t best_rank = 0;
    double best_score = 0.0;
    for (std::size_t r = 0; r < list.hyps.size(); ++r) {
      const Hypothesis& h = list.hyps[r];
      double lm_log10 = sentence_logprob(lm, h.tokens);
      double combined = h.acoustic_logscore + lm_scale * lm_log10 +
                        word_penalty * static_cast<double>(h.tokens.size());
      if (r == 0 || combined > best_score) {
        best_score = combined;
        best_rank = r;
        best = RescoreChoice{list.id, r, h.acoustic_logscore, lm_log10, combined};
      }
    }
    Utterance utt;
    utt.id = list.id;
    utt.tokens = list.hyps[best_rank].tokens;
    result.selected.utterances.push_back(std::move(utt));
    result.choices.push_back(best);
  }
  return result;
}

}  // namespace cskit
