/* Copyright 2026 The cskit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the cskit shared library.
 *
 * Handles are opaque; every function returns a cskit_status (CSKIT_OK on
 * success) unless noted. On failure cskit_last_error() describes what went
 * wrong (thread-local). Strings returned through char** out-parameters are
 * owned by the caller and released with cskit_string_free().
 *
 * Language models and corpora work on tagged word units: a token `hello`
 * tagged `eng` is the single vocabulary unit `hello/eng`. Sentence
 * boundaries use `<s>` and `</s>`.
 */

#ifndef CSKIT_H
#define CSKIT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cskit_status {
  CSKIT_OK = 0,
  CSKIT_EINVAL = 1,    /* bad argument, null handle, out-of-range knob */
  CSKIT_EIO = 2,       /* file cannot be opened, read or written */
  CSKIT_EPARSE = 3,    /* malformed input text */
  CSKIT_EVALIDATE = 4, /* well-formed input breaking a domain rule */
  CSKIT_EOOV = 5,      /* out-of-vocabulary word under a closed vocabulary */
  CSKIT_EINTERNAL = 6
} cskit_status;

const char* cskit_version(void);
const char* cskit_last_error(void);
void cskit_string_free(char* s);

/* ---- language-tag registries -------------------------------------------- */

typedef struct cskit_tagset cskit_tagset;

cskit_status cskit_tagset_new(cskit_tagset** out);
/* The bundled five-language registry: eng zul xho tsn sot. */
cskit_status cskit_tagset_default(cskit_tagset** out);
/* One tag per line, '#' comments. */
cskit_status cskit_tagset_read(const char* path, cskit_tagset** out);
cskit_status cskit_tagset_add(cskit_tagset* ts, const char* tag);
size_t cskit_tagset_size(const cskit_tagset* ts);
/* Borrowed pointer, valid while the registry lives. NULL if out of range. */
const char* cskit_tagset_tag(const cskit_tagset* ts, size_t index);
void cskit_tagset_free(cskit_tagset* ts);

/* ---- corpora ------------------------------------------------------------- */

typedef struct cskit_corpus cskit_corpus;

/* Tagged JSONL: {"id", "tokens": [{"w","lang"}...], "dur_s"?, "speaker"?}.
 * allow_empty permits token-less utterances (hypothesis files). */
cskit_status cskit_corpus_read_tagged(const char* path, const cskit_tagset* ts,
                                      int allow_empty, cskit_corpus** out);
/* Plain text, one utterance per line, every token tagged `lang`. */
cskit_status cskit_corpus_read_plain(const char* path, const char* lang,
                                     const cskit_tagset* ts,
                                     cskit_corpus** out);
cskit_status cskit_corpus_write_tagged(const cskit_corpus* c, const char* path);
size_t cskit_corpus_size(const cskit_corpus* c);
/* Token counts, switch counts, monolingual/CS split; pretty != 0 renders a
 * table instead of JSON. */
cskit_status cskit_corpus_stats(const cskit_corpus* c, int pretty, char** out);
void cskit_corpus_free(cskit_corpus* c);

/* ---- n-gram counts ------------------------------------------------------- */

typedef struct cskit_counts cskit_counts;

cskit_status cskit_count_ngrams(const cskit_corpus* c, uint32_t order,
                                cskit_counts** out);
/* TSV dump: `count<TAB>w1 .. wk`, orders ascending. */
cskit_status cskit_counts_tsv(const cskit_counts* counts, char** out);
void cskit_counts_free(cskit_counts* counts);

/* ---- language models ----------------------------------------------------- */

typedef struct cskit_lm cskit_lm;

/* Interpolated Kneser-Ney. `discounts` is NULL or one value per order to
 * override the n1/(n1+2*n2) estimates. `warnings` (optional) receives
 * newline-separated estimation warnings. */
cskit_status cskit_lm_train_kn(const cskit_corpus* c, uint32_t order,
                               const double* discounts, size_t n_discounts,
                               char** warnings, cskit_lm** out);
/* Loads an ARPA file or a mixture weight file (format sniffed). */
cskit_status cskit_lm_read(const char* path, cskit_lm** out);
cskit_status cskit_lm_read_arpa(const char* path, cskit_lm** out);
/* Fails on mixtures; only backoff n-gram models serialize to ARPA. */
cskit_status cskit_lm_write_arpa(const cskit_lm* lm, const char* path);

/* Static mixture with simplex weights; components are retained (the new
 * handle shares ownership, the inputs remain valid and owned by the caller). */
cskit_status cskit_lm_interpolate(const cskit_lm* const* components,
                                  const double* weights, size_t n,
                                  cskit_lm** out);
size_t cskit_lm_component_count(const cskit_lm* lm); /* 0 for plain models */
cskit_status cskit_lm_component(const cskit_lm* lm, size_t index,
                                cskit_lm** out);
cskit_status cskit_lm_weights(const cskit_lm* lm, double* out /* n slots */);

uint32_t cskit_lm_order(const cskit_lm* lm);
/* Map out-of-vocabulary words to <unk> (trained, else uniform). Mixtures
 * forward the flag to every component. */
cskit_status cskit_lm_set_unk(cskit_lm* lm, int enabled);
/* log10 P(word | history); history is oldest-first. */
cskit_status cskit_lm_logprob(const cskit_lm* lm, const char* const* history,
                              size_t history_len, const char* word,
                              double* out);
/* {"ppl", "log10_total", "tokens", "oov"} for a tagged corpus. */
cskit_status cskit_lm_perplexity(const cskit_lm* lm, const cskit_corpus* c,
                                 char** out_json);
void cskit_lm_free(cskit_lm* lm);

/* ---- mixture weight fitting ---------------------------------------------- */

/* EM (or exhaustive grid search when use_grid != 0) for mixture weights on a
 * development corpus. `init` is NULL or n simplex weights. out_weights gets
 * n values; out_json reports {"weights","ppl_trace","iterations","converged"}.
 */
cskit_status cskit_fit_weights(const cskit_lm* const* components, size_t n,
                               const cskit_corpus* dev, const double* init,
                               double tol, uint32_t max_iter, int use_grid,
                               double grid_step, double* out_weights,
                               char** out_json);

/* Weight file {"weights": [...], "components": [paths]}; component paths are
 * stored relative to the weight file where possible and resolved against its
 * directory on load. */
cskit_status cskit_mixture_write(const char* path,
                                 const char* const* component_paths,
                                 const double* weights, size_t n);

/* Trains CS / African / English Kneser-Ney components, fits weights on dev
 * at `order`, and returns the `order` mixture plus an identically weighted
 * `rescore_order` mixture. */
cskit_status cskit_build_5lingual(const cskit_corpus* cs,
                                  const cskit_corpus* african,
                                  const cskit_corpus* english,
                                  const cskit_corpus* dev, uint32_t order,
                                  uint32_t rescore_order, double tol,
                                  uint32_t max_iter, cskit_lm** out_recognition,
                                  cskit_lm** out_rescoring, char** out_fit_json);

/* ---- pronunciation lexica ------------------------------------------------ */

typedef struct cskit_lexicon cskit_lexicon;

/* Lines of `word/tag<TAB>phone phone ...`; '#' comments. */
cskit_status cskit_lexicon_read(const char* path, const cskit_tagset* ts,
                                cskit_lexicon** out);
cskit_status cskit_lexicon_stats(const cskit_lexicon* lex, char** out_json);
/* Tagged words of the corpus missing from the lexicon, with counts. */
cskit_status cskit_lexicon_oov(const cskit_lexicon* lex, const cskit_corpus* c,
                               char** out_json);
void cskit_lexicon_free(cskit_lexicon* lex);

/* ---- n-best rescoring ---------------------------------------------------- */

typedef struct cskit_nbest cskit_nbest;

/* JSONL: {"id", "hyps": [{"ac": number, "tokens": [...]}, ...]}. */
cskit_status cskit_nbest_read(const char* path, const cskit_tagset* ts,
                              cskit_nbest** out);
size_t cskit_nbest_size(const cskit_nbest* nbest);
void cskit_nbest_free(cskit_nbest* nbest);

/* Picks argmax of ac + lm_scale*log10 P(sentence) + word_penalty*len per
 * utterance (ties keep the earlier hypothesis). `out_selected` is a corpus of
 * the winning hypotheses; out_json (optional) summarizes the choices. */
cskit_status cskit_rescore(const cskit_nbest* nbest, const cskit_lm* lm,
                           const cskit_tagset* ts, double lm_scale,
                           double word_penalty, cskit_corpus** out_selected,
                           char** out_json);

/* ---- scoring ------------------------------------------------------------- */

/* Tag-stripped WER plus per-language breakdown and the language confusion
 * matrix with INS/DEL margins. pretty != 0 renders tables instead of JSON.
 * out_warnings (optional) lists utterances scored without a hypothesis. */
cskit_status cskit_score(const cskit_corpus* ref, const cskit_corpus* hyp,
                         int pretty, char** out_report, char** out_warnings);

/* ---- synthetic data ------------------------------------------------------ */

typedef struct cskit_synth_params {
  uint64_t seed;
  uint32_t vocab_per_lang;
  uint32_t cs_utts;
  uint32_t mono_utts;
  uint32_t dev_utts;
  uint32_t test_utts;
  uint32_t nbest;
  uint32_t min_len;
  uint32_t max_len;
  double switch_rate;
  double noise;
  double cs_dev_fraction;
} cskit_synth_params;

void cskit_synth_params_init(cskit_synth_params* params); /* defaults */

/* Writes a self-contained experiment (training corpora, dev, test reference,
 * n-best lists, tags.txt) under out_dir; returns a JSON manifest. */
cskit_status cskit_gen_synth(const cskit_tagset* ts,
                             const cskit_synth_params* params,
                             const char* out_dir, char** out_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CSKIT_H */
