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

#include "cskit/cskit.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "corpus.hpp"
#include "eval.hpp"
#include "interp.hpp"
#include "lexicon.hpp"
#include "ngram.hpp"
#include "rescore.hpp"
#include "synth.hpp"

using json = nlohmann::ordered_json;

struct cskit_tagset {
  cskit::TagSet impl;
};
struct cskit_corpus {
  cskit::Corpus impl;
};
struct cskit_counts {
  cskit::NGramCounts impl;
};
struct cskit_lm {
  cskit::LmPtr impl;
};
struct cskit_lexicon {
  cskit::Lexicon impl;
};
struct cskit_nbest {
  std::vector<cskit::NBestList> impl;
};

namespace {

thread_local std::string g_last_error;

cskit_status to_status(cskit::ErrorCode code) {
  switch (code) {
    case cskit::ErrorCode::invalid_argument:
      return CSKIT_EINVAL;
    case cskit::ErrorCode::io:
      return CSKIT_EIO;
    case cskit::ErrorCode::parse:
      return CSKIT_EPARSE;
    case cskit::ErrorCode::validation:
      return CSKIT_EVALIDATE;
    case cskit::ErrorCode::oov:
      return CSKIT_EOOV;
    case cskit::ErrorCode::internal:
      return CSKIT_EINTERNAL;
  }
  return CSKIT_EINTERNAL;
}

template <typename Fn>
cskit_status guarded(Fn&& fn) {
  try {
    fn();
    return CSKIT_OK;
  } catch (const cskit::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CSKIT_EINTERNAL;
  }
}

cskit_status fail_invalid(const char* message) {
  g_last_error = message;
  return CSKIT_EINVAL;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    if (!out.empty()) out += '\n';
    out += l;
  }
  return out;
}

json fit_to_json(const cskit::WeightFit& fit) {
  json out;
  out["weights"] = fit.weights;
  out["ppl_trace"] = fit.ppl_trace;
  out["iterations"] = fit.iterations;
  out["converged"] = fit.converged;
  return out;
}

}  // namespace

extern "C" {

const char* cskit_version(void) { return "0.1.0"; }

const char* cskit_last_error(void) { return g_last_error.c_str(); }

void cskit_string_free(char* s) { std::free(s); }

/* ---- tag sets ---- */

cskit_status cskit_tagset_new(cskit_tagset** out) {
  if (!out) return fail_invalid("null output pointer");
  return guarded([&] { *out = new cskit_tagset{}; });
}

cskit_status cskit_tagset_default(cskit_tagset** out) {
  if (!out) return fail_invalid("null output pointer");
  return guarded([&] { *out = new cskit_tagset{cskit::TagSet::default_set()}; });
}

cskit_status cskit_tagset_read(const char* path, cskit_tagset** out) {
  if (!path || !out) return fail_invalid("null argument");
  return guarded([&] { *out = new cskit_tagset{cskit::TagSet::read_file(path)}; });
}

cskit_status cskit_tagset_add(cskit_tagset* ts, const char* tag) {
  if (!ts || !tag) return fail_invalid("null argument");
  return guarded([&] { ts->impl.add(tag); });
}

size_t cskit_tagset_size(const cskit_tagset* ts) {
  return ts ? ts->impl.size() : 0;
}

const char* cskit_tagset_tag(const cskit_tagset* ts, size_t index) {
  if (!ts || index >= ts->impl.size()) return nullptr;
  return ts->impl.tags()[index].c_str();
}

void cskit_tagset_free(cskit_tagset* ts) { delete ts; }

/* ---- corpora ---- */

cskit_status cskit_corpus_read_tagged(const char* path, const cskit_tagset* ts,
                                      int allow_empty, cskit_corpus** out) {
  if (!path || !ts || !out) return fail_invalid("null argument");
  return guarded([&] {
    cskit::ParseOptions opts;
    opts.allow_empty_utterances = allow_empty != 0;
    *out = new cskit_corpus{
        cskit::parse_jsonl_corpus_file(path, ts->impl, opts)};
  });
}

cskit_status cskit_corpus_read_plain(const char* path, const char* lang,
                                     const cskit_tagset* ts,
                                     cskit_corpus** out) {
  if (!path || !lang || !ts || !out) return fail_invalid("null argument");
  return guarded([&] {
    *out = new cskit_corpus{cskit::parse_plain_corpus_file(path, lang, ts->impl)};
  });
}

cskit_status cskit_corpus_write_tagged(const cskit_corpus* c, const char* path) {
  if (!c || !path) return fail_invalid("null argument");
  return guarded([&] { cskit::write_jsonl_corpus_file(c->impl, path); });
}

size_t cskit_corpus_size(const cskit_corpus* c) {
  return c ? c->impl.utterances.size() : 0;
}

cskit_status cskit_corpus_stats(const cskit_corpus* c, int pretty, char** out) {
  if (!c || !out) return fail_invalid("null argument");
  return guarded([&] {
    *out = dup_string(pretty ? cskit::corpus_stats_pretty(c->impl)
                             : cskit::corpus_stats_json(c->impl));
  });
}

void cskit_corpus_free(cskit_corpus* c) { delete c; }

/* ---- counts ---- */

cskit_status cskit_count_ngrams(const cskit_corpus* c, uint32_t order,
                                cskit_counts** out) {
  if (!c || !out) return fail_invalid("null argument");
  return guarded([&] {
    *out = new cskit_counts{
        cskit::count_ngrams(c->impl, static_cast<int>(order))};
  });
}

cskit_status cskit_counts_tsv(const cskit_counts* counts, char** out) {
  if (!counts || !out) return fail_invalid("null argument");
  return guarded([&] { *out = dup_string(counts->impl.to_tsv()); });
}

void cskit_counts_free(cskit_counts* counts) { delete counts; }

/* ---- language models ---- */

cskit_status cskit_lm_train_kn(const cskit_corpus* c, uint32_t order,
                               const double* discounts, size_t n_discounts,
                               char** warnings, cskit_lm** out) {
  if (!c || !out) return fail_invalid("null argument");
  if (!discounts && n_discounts != 0) {
    return fail_invalid("discount count given without values");
  }
  return guarded([&] {
    std::vector<std::string> warn;
    auto counts = cskit::count_ngrams(c->impl, static_cast<int>(order));
    auto lm = std::make_shared<cskit::NGramLm>(cskit::estimate_kn(
        counts, std::span<const double>(discounts, n_discounts), &warn));
    if (warnings) *warnings = dup_string(join_lines(warn));
    *out = new cskit_lm{std::move(lm)};
  });
}

cskit_status cskit_lm_read(const char* path, cskit_lm** out) {
  if (!path || !out) return fail_invalid("null argument");
  return guarded([&] { *out = new cskit_lm{cskit::read_lm_auto(path)}; });
}

cskit_status cskit_lm_read_arpa(const char* path, cskit_lm** out) {
  if (!path || !out) return fail_invalid("null argument");
  return guarded([&] {
    *out = new cskit_lm{
        std::make_shared<cskit::NGramLm>(cskit::read_arpa_file(path))};
  });
}

cskit_status cskit_lm_write_arpa(const cskit_lm* lm, const char* path) {
  if (!lm || !path) return fail_invalid("null argument");
  auto* ngram = dynamic_cast<const cskit::NGramLm*>(lm->impl.get());
  if (!ngram) {
    g_last_error = "only backoff n-gram models serialize to ARPA";
    return CSKIT_EINVAL;
  }
  return guarded([&] { cskit::write_arpa_file(*ngram, path); });
}

cskit_status cskit_lm_interpolate(const cskit_lm* const* components,
                                  const double* weights, size_t n,
                                  cskit_lm** out) {
  if (!components || !weights || !out) return fail_invalid("null argument");
  return guarded([&] {
    std::vector<cskit::LmPtr> comps;
    comps.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      if (!components[i]) {
        throw cskit::Error(cskit::ErrorCode::invalid_argument,
                           "null mixture component");
      }
      comps.push_back(components[i]->impl);
    }
    *out = new cskit_lm{cskit::interpolate(
        std::move(comps), std::vector<double>(weights, weights + n))};
  });
}

size_t cskit_lm_component_count(const cskit_lm* lm) {
  if (!lm) return 0;
  auto* mix = dynamic_cast<const cskit::InterpolatedLm*>(lm->impl.get());
  return mix ? mix->components().size() : 0;
}

cskit_status cskit_lm_component(const cskit_lm* lm, size_t index,
                                cskit_lm** out) {
  if (!lm || !out) return fail_invalid("null argument");
  auto* mix = dynamic_cast<const cskit::InterpolatedLm*>(lm->impl.get());
  if (!mix) return fail_invalid("model is not a mixture");
  if (index >= mix->components().size()) {
    return fail_invalid("component index out of range");
  }
  *out = new cskit_lm{mix->components()[index]};
  return CSKIT_OK;
}

cskit_status cskit_lm_weights(const cskit_lm* lm, double* out) {
  if (!lm || !out) return fail_invalid("null argument");
  auto* mix = dynamic_cast<const cskit::InterpolatedLm*>(lm->impl.get());
  if (!mix) return fail_invalid("model is not a mixture");
  for (size_t i = 0; i < mix->weights().size(); ++i) out[i] = mix->weights()[i];
  return CSKIT_OK;
}

uint32_t cskit_lm_order(const cskit_lm* lm) {
  return lm ? static_cast<uint32_t>(lm->impl->order()) : 0;
}

cskit_status cskit_lm_set_unk(cskit_lm* lm, int enabled) {
  if (!lm) return fail_invalid("null argument");
  return guarded([&] { lm->impl->set_unk_enabled(enabled != 0); });
}

cskit_status cskit_lm_logprob(const cskit_lm* lm, const char* const* history,
                              size_t history_len, const char* word,
                              double* out) {
  if (!lm || !word || !out || (!history && history_len != 0)) {
    return fail_invalid("null argument");
  }
  return guarded([&] {
    std::vector<std::string> hist(history, history + history_len);
    *out = lm->impl->logprob(hist, word);
  });
}

cskit_status cskit_lm_perplexity(const cskit_lm* lm, const cskit_corpus* c,
                                 char** out_json) {
  if (!lm || !c || !out_json) return fail_invalid("null argument");
  return guarded([&] {
    cskit::Perplexity p = cskit::perplexity(*lm->impl, c->impl);
    json out;
    out["ppl"] = p.ppl;
    out["log10_total"] = p.log10_total;
    out["tokens"] = p.token_count;
    out["oov"] = p.oov_count;
    *out_json = dup_string(out.dump(2));
  });
}

void cskit_lm_free(cskit_lm* lm) { delete lm; }

/* ---- weight fitting ---- */

cskit_status cskit_fit_weights(const cskit_lm* const* components, size_t n,
                               const cskit_corpus* dev, const double* init,
                               double tol, uint32_t max_iter, int use_grid,
                               double grid_step, double* out_weights,
                               char** out_json) {
  if (!components || !dev || n == 0) return fail_invalid("null argument");
  return guarded([&] {
    std::vector<cskit::LmPtr> comps;
    comps.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      if (!components[i]) {
        throw cskit::Error(cskit::ErrorCode::invalid_argument,
                           "null mixture component");
      }
      comps.push_back(components[i]->impl);
    }
    cskit::WeightFit fit;
    if (use_grid) {
      fit = cskit::fit_weights_grid(comps, dev->impl, grid_step);
    } else {
      std::optional<std::vector<double>> init_w;
      if (init) init_w = std::vector<double>(init, init + n);
      fit = cskit::fit_weights_em(comps, dev->impl, init_w, tol,
                                  static_cast<int>(max_iter));
    }
    if (out_weights) {
      for (size_t i = 0; i < n; ++i) out_weights[i] = fit.weights[i];
    }
    if (out_json) *out_json = dup_string(fit_to_json(fit).dump(2));
  });
}

cskit_status cskit_mixture_write(const char* path,
                                 const char* const* component_paths,
                                 const double* weights, size_t n) {
  if (!path || !component_paths || !weights) return fail_invalid("null argument");
  return guarded([&] {
    std::vector<std::string> paths(component_paths, component_paths + n);
    cskit::write_mixture_file(path, paths,
                              std::span<const double>(weights, n));
  });
}

cskit_status cskit_build_5lingual(const cskit_corpus* cs,
                                  const cskit_corpus* african,
                                  const cskit_corpus* english,
                                  const cskit_corpus* dev, uint32_t order,
                                  uint32_t rescore_order, double tol,
                                  uint32_t max_iter, cskit_lm** out_recognition,
                                  cskit_lm** out_rescoring,
                                  char** out_fit_json) {
  if (!cs || !african || !english || !dev || !out_recognition || !out_rescoring) {
    return fail_invalid("null argument");
  }
  return guarded([&] {
    cskit::FiveLingualBuild build = cskit::build_5lingual(
        cs->impl, african->impl, english->impl, dev->impl,
        static_cast<int>(order), static_cast<int>(rescore_order), tol,
        static_cast<int>(max_iter));
    *out_recognition = new cskit_lm{build.recognition};
    *out_rescoring = new cskit_lm{build.rescoring};
    if (out_fit_json) *out_fit_json = dup_string(fit_to_json(build.fit).dump(2));
  });
}

/* ---- lexica ---- */

cskit_status cskit_lexicon_read(const char* path, const cskit_tagset* ts,
                                cskit_lexicon** out) {
  if (!path || !ts || !out) return fail_invalid("null argument");
  return guarded([&] {
    *out = new cskit_lexicon{cskit::read_lexicon_file(path, ts->impl)};
  });
}

cskit_status cskit_lexicon_stats(const cskit_lexicon* lex, char** out_json) {
  if (!lex || !out_json) return fail_invalid("null argument");
  return guarded([&] { *out_json = dup_string(cskit::lexicon_stats_json(lex->impl)); });
}

cskit_status cskit_lexicon_oov(const cskit_lexicon* lex, const cskit_corpus* c,
                               char** out_json) {
  if (!lex || !c || !out_json) return fail_invalid("null argument");
  return guarded([&] {
    *out_json = dup_string(cskit::oov_check_json(lex->impl, c->impl));
  });
}

void cskit_lexicon_free(cskit_lexicon* lex) { delete lex; }

/* ---- n-best rescoring ---- */

cskit_status cskit_nbest_read(const char* path, const cskit_tagset* ts,
                              cskit_nbest** out) {
  if (!path || !ts || !out) return fail_invalid("null argument");
  return guarded([&] {
    *out = new cskit_nbest{cskit::read_nbest_file(path, ts->impl)};
  });
}

size_t cskit_nbest_size(const cskit_nbest* nbest) {
  return nbest ? nbest->impl.size() : 0;
}

void cskit_nbest_free(cskit_nbest* nbest) { delete nbest; }

cskit_status cskit_rescore(const cskit_nbest* nbest, const cskit_lm* lm,
                           const cskit_tagset* ts, double lm_scale,
                           double word_penalty, cskit_corpus** out_selected,
                           char** out_json) {
  if (!nbest || !lm || !ts || !out_selected) return fail_invalid("null argument");
  return guarded([&] {
    cskit::RescoreResult result = cskit::rescore(nbest->impl, *lm->impl,
                                                 ts->impl, lm_scale,
                                                 word_penalty);
    if (out_json) {
      std::uint64_t reranked = 0;
      for (const auto& choice : result.choices) {
        if (choice.rank != 0) ++reranked;
      }
      json summary;
      summary["utterances"] = result.choices.size();
      summary["reranked"] = reranked;
      summary["lm_scale"] = lm_scale;
      summary["word_penalty"] = word_penalty;
      *out_json = dup_string(summary.dump(2));
    }
    *out_selected = new cskit_corpus{std::move(result.selected)};
  });
}

/* ---- scoring ---- */

cskit_status cskit_score(const cskit_corpus* ref, const cskit_corpus* hyp,
                         int pretty, char** out_report, char** out_warnings) {
  if (!ref || !hyp || !out_report) return fail_invalid("null argument");
  return guarded([&] {
    cskit::ScoreReport report = cskit::score_corpora(ref->impl, hyp->impl);
    *out_report = dup_string(pretty ? cskit::score_report_pretty(report)
                                    : cskit::score_report_json(report));
    if (out_warnings) {
      std::vector<std::string> warn;
      for (const auto& id : report.missing_hypotheses) {
        warn.push_back("missing hypothesis for utterance '" + id +
                       "', scored as deletions");
      }
      *out_warnings = dup_string(join_lines(warn));
    }
  });
}

/* ---- synthetic data ---- */

void cskit_synth_params_init(cskit_synth_params* params) {
  if (!params) return;
  cskit::SynthParams d;
  params->seed = d.seed;
  params->vocab_per_lang = d.vocab_per_lang;
  params->cs_utts = d.cs_utts;
  params->mono_utts = d.mono_utts;
  params->dev_utts = d.dev_utts;
  params->test_utts = d.test_utts;
  params->nbest = d.nbest;
  params->min_len = d.min_len;
  params->max_len = d.max_len;
  params->switch_rate = d.switch_rate;
  params->noise = d.noise;
  params->cs_dev_fraction = d.cs_dev_fraction;
}

cskit_status cskit_gen_synth(const cskit_tagset* ts,
                             const cskit_synth_params* params,
                             const char* out_dir, char** out_json) {
  if (!ts || !params || !out_dir) return fail_invalid("null argument");
  return guarded([&] {
    cskit::SynthParams p;
    p.seed = params->seed;
    p.vocab_per_lang = params->vocab_per_lang;
    p.cs_utts = params->cs_utts;
    p.mono_utts = params->mono_utts;
    p.dev_utts = params->dev_utts;
    p.test_utts = params->test_utts;
    p.nbest = params->nbest;
    p.min_len = params->min_len;
    p.max_len = params->max_len;
    p.switch_rate = params->switch_rate;
    p.noise = params->noise;
    p.cs_dev_fraction = params->cs_dev_fraction;
    cskit::SynthResult result = cskit::gen_synth(ts->impl, p);
    std::string manifest = cskit::write_synth_files(result, out_dir);
    if (out_json) *out_json = dup_string(manifest);
  });
}

} /* extern "C" */
