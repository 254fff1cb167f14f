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

#include "eval.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <json.hpp>

namespace cskit {

using json = nlohmann::ordered_json;

Alignment align(std::span<const TaggedToken> ref,
                std::span<const TaggedToken> hyp) {
  const std::size_t m = ref.size(), n = hyp.size();
  std::vector<std::uint32_t> dp((m + 1) * (n + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& {
    return dp[i * (n + 1) + j];
  };
  for (std::size_t i = 0; i <= m; ++i) at(i, 0) = static_cast<std::uint32_t>(i);
  for (std::size_t j = 0; j <= n; ++j) at(0, j) = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      std::uint32_t diag =
          at(i - 1, j - 1) + (ref[i - 1].surface == hyp[j - 1].surface ? 0 : 1);
      std::uint32_t best = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
      at(i, j) = best;
    }
  }

  Alignment out;
  out.cost = at(m, n);
  out.ops.reserve(std::max(m, n));
  std::size_t i = m, j = n;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && ref[i - 1].surface == hyp[j - 1].surface &&
        at(i, j) == at(i - 1, j - 1)) {
      out.ops.push_back({EditOp::match, ref[i - 1], hyp[j - 1]});
      --i, --j;
    } else if (i > 0 && j > 0 && at(i, j) == at(i - 1, j - 1) + 1) {
      out.ops.push_back({EditOp::substitute, ref[i - 1], hyp[j - 1]});
      --i, --j;
    } else if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      out.ops.push_back({EditOp::del, ref[i - 1], std::nullopt});
      --i;
    } else {
      out.ops.push_back({EditOp::ins, std::nullopt, hyp[j - 1]});
      --j;
    }
  }
  std::reverse(out.ops.begin(), out.ops.end());
  return out;
}

WerReport wer(std::span<const Alignment> alignments) {
  WerReport r;
  for (const auto& a : alignments) {
    for (const auto& op : a.ops) {
      switch (op.op) {
        case EditOp::match:
          ++r.n;
          break;
        case EditOp::substitute:
          ++r.n;
          ++r.sub;
          break;
        case EditOp::del:
          ++r.n;
          ++r.del;
          break;
        case EditOp::ins:
          ++r.ins;
          break;
      }
    }
  }
  return r;
}

std::map<std::string, WerReport> per_language_wer(
    std::span<const Alignment> alignments) {
  std::map<std::string, WerReport> out;
  for (const auto& a : alignments) {
    for (const auto& op : a.ops) {
      switch (op.op) {
        case EditOp::match:
          ++out[op.ref->lang].n;
          break;
        case EditOp::substitute: {
          WerReport& r = out[op.ref->lang];
          ++r.n;
          ++r.sub;
          break;
        }
        case EditOp::del: {
          WerReport& r = out[op.ref->lang];
          ++r.n;
          ++r.del;
          break;
        }
        case EditOp::ins:
          // An inserted word has no reference tag; attribute it to the
          // hypothesis token's language.
          ++out[op.hyp->lang].ins;
          break;
      }
    }
  }
  return out;
}

ConfusionMatrix language_confusion(std::span<const Alignment> alignments,
                                   const std::vector<std::string>& langs) {
  ConfusionMatrix cm;
  cm.langs = langs;
  cm.counts.assign(langs.size() + 1,
                   std::vector<std::uint64_t>(langs.size() + 1, 0));
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < langs.size(); ++i) index[langs[i]] = i;
  auto idx = [&](const std::string& lang) -> std::size_t {
    auto it = index.find(lang);
    if (it == index.end()) {
      throw Error(ErrorCode::validation,
                  "tag '" + lang + "' missing from the confusion language list");
    }
    return it->second;
  };
  for (const auto& a : alignments) {
    for (const auto& op : a.ops) {
      switch (op.op) {
        case EditOp::match:
        case EditOp::substitute:
          ++cm.cell(idx(op.ref->lang), idx(op.hyp->lang));
          break;
        case EditOp::del:
          ++cm.cell(idx(op.ref->lang), cm.del_col());
          break;
        case EditOp::ins:
          ++cm.cell(cm.ins_row(), idx(op.hyp->lang));
          break;
      }
    }
  }
  return cm;
}

namespace {

unsigned scoring_threads() {
  if (const char* env = std::getenv("CSKIT_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(std::min(v, 64l));
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : std::min(hw, 8u);
}

}  // namespace

ScoreReport score_corpora(const Corpus& ref, const Corpus& hyp) {
  std::unordered_map<std::string, const Utterance*> ref_by_id;
  for (const auto& u : ref.utterances) ref_by_id[u.id] = &u;
  std::unordered_map<std::string, const Utterance*> hyp_by_id;
  for (const auto& u : hyp.utterances) {
    if (!ref_by_id.count(u.id)) {
      throw Error(ErrorCode::validation,
                  "hypothesis for unknown utterance id '" + u.id + "'");
    }
    hyp_by_id[u.id] = &u;
  }

  ScoreReport report;
  report.utterances = ref.utterances.size();
  report.alignments.resize(ref.utterances.size());

  static const std::vector<TaggedToken> kEmpty;
  const unsigned threads =
      std::min<std::size_t>(scoring_threads(), std::max<std::size_t>(ref.utterances.size(), 1));
  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Utterance& r = ref.utterances[i];
      auto it = hyp_by_id.find(r.id);
      const std::vector<TaggedToken>& h =
          it == hyp_by_id.end() ? kEmpty : it->second->tokens;
      report.alignments[i] = align(r.tokens, h);
    }
  };
  if (threads <= 1) {
    worker(0, ref.utterances.size());
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (ref.utterances.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      std::size_t begin = t * chunk;
      std::size_t end = std::min(begin + chunk, ref.utterances.size());
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  for (const auto& u : ref.utterances) {
    if (!hyp_by_id.count(u.id)) report.missing_hypotheses.push_back(u.id);
  }
  report.overall = wer(report.alignments);
  report.per_language = per_language_wer(report.alignments);
  report.confusion = language_confusion(report.alignments, ref.tag_set.tags());
  return report;
}

namespace {

json wer_json(const WerReport& r) {
  json out;
  out["N"] = r.n;
  out["S"] = r.sub;
  out["D"] = r.del;
  out["I"] = r.ins;
  auto w = r.wer();
  if (w) {
    out["wer"] = *w;
  } else {
    out["wer"] = nullptr;  // errors against zero reference tokens
  }
  return out;
}

}  // namespace

std::string score_report_json(const ScoreReport& report) {
  json out;
  out["utterances"] = report.utterances;
  out["overall"] = wer_json(report.overall);
  json per_lang;
  for (const auto& lang : report.confusion.langs) {
    auto it = report.per_language.find(lang);
    per_lang[lang] = wer_json(it == report.per_language.end() ? WerReport{}
                                                              : it->second);
  }
  out["per_language"] = std::move(per_lang);
  json conf;
  json rows = json::array();
  for (const auto& l : report.confusion.langs) rows.push_back(l);
  rows.push_back("INS");
  json cols = json::array();
  for (const auto& l : report.confusion.langs) cols.push_back(l);
  cols.push_back("DEL");
  conf["rows"] = std::move(rows);
  conf["cols"] = std::move(cols);
  conf["counts"] = report.confusion.counts;
  out["confusion"] = std::move(conf);
  out["missing_hypotheses"] = report.missing_hypotheses;
  return out.dump(2);
}

std::string score_report_pretty(const ScoreReport& report) {
  std::ostringstream out;
  char buf[192];
  auto wer_line = [&](const std::string& name, const WerReport& r) {
    auto w = r.wer();
    std::string ws = w ? [&] {
      char b[32];
      std::snprintf(b, sizeof(b), "%6.2f", 100.0 * *w);
      return std::string(b);
    }() : std::string("  n/a ");
    std::snprintf(buf, sizeof(buf),
                  "  %-8s WER %s%%   N=%-7llu S=%-6llu D=%-6llu I=%-6llu\n",
                  name.c_str(), ws.c_str(), (unsigned long long)r.n,
                  (unsigned long long)r.sub, (unsigned long long)r.del,
                  (unsigned long long)r.ins);
    out << buf;
  };
  out << "Scoring report (" << report.utterances << " utterances)\n";
  wer_line("total", report.overall);
  out << "\nPer-language WER (tags stripped for alignment):\n";
  for (const auto& lang : report.confusion.langs) {
    auto it = report.per_language.find(lang);
    wer_line(lang, it == report.per_language.end() ? WerReport{} : it->second);
  }
  out << "\nLanguage confusion (rows: reference + INS, cols: hypothesis + DEL):\n";
  out << "        ";
  for (const auto& l : report.confusion.langs) {
    std::snprintf(buf, sizeof(buf), " %7s", l.c_str());
    out << buf;
  }
  out << "     DEL\n";
  std::vector<std::string> row_names = report.confusion.langs;
  row_names.push_back("INS");
  for (std::size_t r = 0; r < row_names.size(); ++r) {
    std::snprintf(buf, sizeof(buf), "  %-6s", row_names[r].c_str());
    out << buf;
    for (std::size_t c = 0; c < report.confusion.langs.size() + 1; ++c) {
      std::snprintf(buf, sizeof(buf), " %7llu",
                    (unsigned long long)report.confusion.cell(r, c));
      out << buf;
    }
    out << "\n";
  }
  if (!report.missing_hypotheses.empty()) {
    out << "\nwarning: " << report.missing_hypotheses.size()
        << " reference utterance(s) had no hypothesis and were scored as "
           "deletions\n";
  }
  return out.str();
}

}  // namespace cskit
