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

// Command-line front end over the cskit C API. Reports go to stdout (JSON
// unless --pretty), diagnostics to stderr. Exit codes: 0 success, 1 usage
// error, 2 data/validation error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cskit/cskit.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct CliError {
  int code;
  std::string message;
};

void check(cskit_status status) {
  if (status != CSKIT_OK) {
    throw CliError{kExitData, cskit_last_error()};
  }
}

struct StringOut {
  char* value = nullptr;
  ~StringOut() { cskit_string_free(value); }
  char** out() { return &value; }
  std::string str() const { return value ? value : ""; }
};

using TagSetPtr = std::unique_ptr<cskit_tagset, decltype(&cskit_tagset_free)>;
using CorpusPtr = std::unique_ptr<cskit_corpus, decltype(&cskit_corpus_free)>;
using CountsPtr = std::unique_ptr<cskit_counts, decltype(&cskit_counts_free)>;
using LmPtr = std::unique_ptr<cskit_lm, decltype(&cskit_lm_free)>;
using LexiconPtr = std::unique_ptr<cskit_lexicon, decltype(&cskit_lexicon_free)>;
using NBestPtr = std::unique_ptr<cskit_nbest, decltype(&cskit_nbest_free)>;

TagSetPtr load_tags(const std::string& tags_path) {
  cskit_tagset* ts = nullptr;
  if (tags_path.empty()) {
    check(cskit_tagset_default(&ts));
  } else {
    check(cskit_tagset_read(tags_path.c_str(), &ts));
  }
  return TagSetPtr(ts, cskit_tagset_free);
}

CorpusPtr load_corpus(const std::string& path, const cskit_tagset* ts,
                      bool plain, const std::string& plain_lang,
                      bool allow_empty = false) {
  cskit_corpus* c = nullptr;
  if (plain) {
    check(cskit_corpus_read_plain(path.c_str(), plain_lang.c_str(), ts, &c));
  } else {
    check(cskit_corpus_read_tagged(path.c_str(), ts, allow_empty ? 1 : 0, &c));
  }
  return CorpusPtr(c, cskit_corpus_free);
}

LmPtr load_lm(const std::string& path) {
  cskit_lm* lm = nullptr;
  check(cskit_lm_read(path.c_str(), &lm));
  return LmPtr(lm, cskit_lm_free);
}

// Reports go to stdout unless --out was given.
void emit_report(const std::string& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report;
    if (report.empty() || report.back() != '\n') std::cout << "\n";
  } else {
    std::ofstream f(out_path);
    if (!f) throw CliError{kExitData, "cannot open output file: " + out_path};
    f << report;
    if (report.empty() || report.back() != '\n') f << "\n";
  }
}

void emit_warnings(const StringOut& warnings) {
  if (warnings.value && warnings.value[0]) {
    std::cerr << "warning: " << warnings.str() << "\n";
  }
}

std::vector<double> parse_weight_list(const std::string& csv) {
  std::vector<double> out;
  std::string item;
  std::istringstream ss(csv);
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw CliError{kExitUsage, "bad numeric list element '" + item + "'"};
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cskit: code-switching language modeling and scoring toolkit"};
  app.require_subcommand(1);

  std::string tags_path;
  app.add_option("--tags", tags_path,
                 "tag registry file (one tag per line; default: eng zul xho tsn sot)");

  // stats
  auto* stats = app.add_subcommand("stats", "corpus composition statistics");
  std::string stats_in, stats_out, stats_lang;
  bool stats_plain = false, stats_pretty = false;
  stats->add_option("--in", stats_in, "corpus (tagged JSONL)")->required();
  stats->add_flag("--plain", stats_plain, "input is plain text");
  stats->add_option("--lang", stats_lang, "tag for --plain input");
  stats->add_flag("--pretty", stats_pretty, "human-readable table");
  stats->add_option("--out", stats_out, "write the report here instead of stdout");

  // count
  auto* count = app.add_subcommand("count", "dump raw n-gram counts as TSV");
  std::string count_in, count_out, count_lang;
  bool count_plain = false;
  unsigned count_order = 3;
  count->add_option("--in", count_in, "corpus (tagged JSONL)")->required();
  count->add_option("--order", count_order, "n-gram order")->required();
  count->add_flag("--plain", count_plain, "input is plain text");
  count->add_option("--lang", count_lang, "tag for --plain input");
  count->add_option("--out", count_out, "output TSV path (default stdout)");

  // train-kn
  auto* train = app.add_subcommand("train-kn",
                                   "train an interpolated Kneser-Ney model");
  std::string train_in, train_out, train_lang, train_discounts;
  bool train_plain = false;
  unsigned train_order = 3;
  train->add_option("--in", train_in, "training corpus (tagged JSONL)")->required();
  train->add_option("--order", train_order, "n-gram order")->required();
  train->add_option("--out", train_out, "output ARPA path")->required();
  train->add_flag("--plain", train_plain, "input is plain text");
  train->add_option("--lang", train_lang, "tag for --plain input");
  train->add_option("--discount", train_discounts,
                    "override discounts: one value, or one per order (comma list)");

  // ppl
  auto* ppl = app.add_subcommand("ppl", "corpus perplexity under a model");
  std::string ppl_lm, ppl_in, ppl_out;
  bool ppl_unk = false;
  ppl->add_option("--lm", ppl_lm, "ARPA model or mixture weight file")->required();
  ppl->add_option("--in", ppl_in, "corpus (tagged JSONL)")->required();
  ppl->add_flag("--unk", ppl_unk, "map out-of-vocabulary words to <unk>");
  ppl->add_option("--out", ppl_out, "write the report here instead of stdout");

  // interp-fit
  auto* fitcmd = app.add_subcommand("interp-fit",
                                    "learn mixture weights on development data");
  std::vector<std::string> fit_lms;
  std::string fit_dev, fit_out, fit_init;
  double fit_tol = 1e-4, fit_grid_step = 0.05;
  unsigned fit_max_iter = 100;
  bool fit_grid = false;
  fitcmd->add_option("--lm", fit_lms, "component model paths (repeatable)")
      ->required()
      ->expected(-1);
  fitcmd->add_option("--dev", fit_dev, "development corpus (tagged JSONL)")->required();
  fitcmd->add_option("--out", fit_out, "mixture weight file to write");
  fitcmd->add_option("--init", fit_init, "initial weights (comma list)");
  fitcmd->add_option("--tol", fit_tol, "perplexity improvement tolerance");
  fitcmd->add_option("--max-iter", fit_max_iter, "EM iteration cap");
  fitcmd->add_flag("--grid", fit_grid, "exhaustive grid search instead of EM");
  fitcmd->add_option("--grid-step", fit_grid_step, "grid resolution");

  // build-5lingual
  auto* build = app.add_subcommand(
      "build-5lingual", "train CS/African/English components and mix them");
  std::string b_cs, b_af, b_en, b_dev, b_dir;
  unsigned b_order = 3, b_rescore_order = 5, b_max_iter = 100;
  double b_tol = 1e-4;
  build->add_option("--cs", b_cs, "code-switched training corpus")->required();
  build->add_option("--african", b_af, "merged African monolingual corpus")->required();
  build->add_option("--english", b_en, "English monolingual corpus")->required();
  build->add_option("--dev", b_dev, "development corpus")->required();
  build->add_option("--order", b_order, "recognition model order");
  build->add_option("--rescore-order", b_rescore_order, "rescoring model order");
  build->add_option("--out-dir", b_dir, "directory for ARPA and mixture files")
      ->required();
  build->add_option("--tol", b_tol, "EM tolerance");
  build->add_option("--max-iter", b_max_iter, "EM iteration cap");

  // rescore
  auto* resc = app.add_subcommand("rescore", "re-rank n-best lists with a model");
  std::string r_nbest, r_lm, r_out;
  double r_scale = 1.0, r_penalty = 0.0;
  bool r_unk = false;
  resc->add_option("--nbest", r_nbest, "n-best JSONL")->required();
  resc->add_option("--lm", r_lm, "ARPA model or mixture weight file")->required();
  resc->add_option("--out", r_out, "selected hypotheses (tagged JSONL)")->required();
  resc->add_option("--lm-scale", r_scale, "language model scale");
  resc->add_option("--word-penalty", r_penalty, "per-token score adjustment");
  resc->add_flag("--unk", r_unk, "map out-of-vocabulary words to <unk>");

  // score
  auto* score = app.add_subcommand("score",
                                   "tag-stripped WER and language confusion");
  std::string s_ref, s_hyp, s_out;
  bool s_pretty = false;
  score->add_option("--ref", s_ref, "reference corpus (tagged JSONL)")->required();
  score->add_option("--hyp", s_hyp, "hypothesis corpus (tagged JSONL)")->required();
  score->add_flag("--pretty", s_pretty, "human-readable tables");
  score->add_option("--out", s_out, "write the report here instead of stdout");

  // lexicon-stats
  auto* lexstats = app.add_subcommand("lexicon-stats",
                                      "word/entry/phone statistics of a lexicon");
  std::string lx_path, lx_out;
  lexstats->add_option("--lex", lx_path, "pronunciation lexicon")->required();
  lexstats->add_option("--out", lx_out, "write the report here instead of stdout");

  // oov-check
  auto* oov = app.add_subcommand("oov-check",
                                 "certify a corpus as closed-vocabulary");
  std::string o_lex, o_in, o_out;
  oov->add_option("--lex", o_lex, "pronunciation lexicon")->required();
  oov->add_option("--in", o_in, "corpus (tagged JSONL)")->required();
  oov->add_option("--out", o_out, "write the report here instead of stdout");

  // gen-synth
  auto* synth = app.add_subcommand("gen-synth",
                                   "seeded synthetic code-switching test data");
  std::string g_dir, g_out;
  cskit_synth_params g_params;
  cskit_synth_params_init(&g_params);
  synth->add_option("--out-dir", g_dir, "output directory")->required();
  synth->add_option("--seed", g_params.seed, "random seed");
  synth->add_option("--vocab", g_params.vocab_per_lang, "words per language");
  synth->add_option("--cs-utts", g_params.cs_utts, "CS training utterances");
  synth->add_option("--mono-utts", g_params.mono_utts,
                    "monolingual training utterances per language");
  synth->add_option("--dev-utts", g_params.dev_utts, "development utterances");
  synth->add_option("--test-utts", g_params.test_utts, "test utterances");
  synth->add_option("--nbest", g_params.nbest, "hypotheses per test utterance");
  synth->add_option("--min-len", g_params.min_len, "minimum utterance length");
  synth->add_option("--max-len", g_params.max_len, "maximum utterance length");
  synth->add_option("--switch-rate", g_params.switch_rate,
                    "per-token language switch probability");
  synth->add_option("--noise", g_params.noise,
                    "per-token hypothesis corruption probability");
  synth->add_option("--cs-dev-fraction", g_params.cs_dev_fraction,
                    "share of dev drawn from the CS process");
  synth->add_option("--out", g_out, "write the manifest here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    TagSetPtr ts = load_tags(tags_path);

    if (*stats) {
      if (stats_plain && stats_lang.empty()) {
        throw CliError{kExitUsage, "--plain requires --lang"};
      }
      CorpusPtr c = load_corpus(stats_in, ts.get(), stats_plain, stats_lang);
      StringOut report;
      check(cskit_corpus_stats(c.get(), stats_pretty ? 1 : 0, report.out()));
      emit_report(report.str(), stats_out);
    } else if (*count) {
      if (count_plain && count_lang.empty()) {
        throw CliError{kExitUsage, "--plain requires --lang"};
      }
      CorpusPtr c = load_corpus(count_in, ts.get(), count_plain, count_lang);
      cskit_counts* raw = nullptr;
      check(cskit_count_ngrams(c.get(), count_order, &raw));
      CountsPtr counts(raw, cskit_counts_free);
      StringOut tsv;
      check(cskit_counts_tsv(counts.get(), tsv.out()));
      emit_report(tsv.str(), count_out);
    } else if (*train) {
      if (train_plain && train_lang.empty()) {
        throw CliError{kExitUsage, "--plain requires --lang"};
      }
      CorpusPtr c = load_corpus(train_in, ts.get(), train_plain, train_lang);
      std::vector<double> discounts;
      if (!train_discounts.empty()) {
        discounts = parse_weight_list(train_discounts);
        if (discounts.size() == 1) discounts.assign(train_order, discounts[0]);
      }
      StringOut warnings;
      cskit_lm* raw = nullptr;
      check(cskit_lm_train_kn(c.get(), train_order,
                              discounts.empty() ? nullptr : discounts.data(),
                              discounts.size(), warnings.out(), &raw));
      LmPtr lm(raw, cskit_lm_free);
      emit_warnings(warnings);
      check(cskit_lm_write_arpa(lm.get(), train_out.c_str()));
      std::cout << "{\n  \"order\": " << train_order << ",\n  \"out\": \""
                << train_out << "\",\n  \"utterances\": "
                << cskit_corpus_size(c.get()) << "\n}\n";
    } else if (*ppl) {
      LmPtr lm = load_lm(ppl_lm);
      if (ppl_unk) check(cskit_lm_set_unk(lm.get(), 1));
      CorpusPtr c = load_corpus(ppl_in, ts.get(), false, "");
      StringOut report;
      check(cskit_lm_perplexity(lm.get(), c.get(), report.out()));
      emit_report(report.str(), ppl_out);
    } else if (*fitcmd) {
      std::vector<LmPtr> lms;
      std::vector<const cskit_lm*> raw;
      for (const auto& p : fit_lms) {
        lms.push_back(load_lm(p));
        raw.push_back(lms.back().get());
      }
      CorpusPtr dev = load_corpus(fit_dev, ts.get(), false, "");
      std::vector<double> init;
      if (!fit_init.empty()) {
        init = parse_weight_list(fit_init);
        if (init.size() != raw.size()) {
          throw CliError{kExitUsage, "--init must list one weight per --lm"};
        }
      }
      std::vector<double> weights(raw.size(), 0.0);
      StringOut report;
      check(cskit_fit_weights(raw.data(), raw.size(), dev.get(),
                              init.empty() ? nullptr : init.data(), fit_tol,
                              fit_max_iter, fit_grid ? 1 : 0, fit_grid_step,
                              weights.data(), report.out()));
      if (!fit_out.empty()) {
        std::vector<const char*> paths;
        for (const auto& p : fit_lms) paths.push_back(p.c_str());
        check(cskit_mixture_write(fit_out.c_str(), paths.data(), weights.data(),
                                  weights.size()));
      }
      emit_report(report.str(), "");
    } else if (*build) {
      CorpusPtr cs = load_corpus(b_cs, ts.get(), false, "");
      CorpusPtr af = load_corpus(b_af, ts.get(), false, "");
      CorpusPtr en = load_corpus(b_en, ts.get(), false, "");
      CorpusPtr dev = load_corpus(b_dev, ts.get(), false, "");
      cskit_lm* recog_raw = nullptr;
      cskit_lm* resc_raw = nullptr;
      StringOut fit_json;
      check(cskit_build_5lingual(cs.get(), af.get(), en.get(), dev.get(),
                                 b_order, b_rescore_order, b_tol, b_max_iter,
                                 &recog_raw, &resc_raw, fit_json.out()));
      LmPtr recog(recog_raw, cskit_lm_free);
      LmPtr rescoring(resc_raw, cskit_lm_free);

      std::filesystem::create_directories(b_dir);
      const char* names[3] = {"cs", "african", "english"};
      auto write_mixture = [&](const cskit_lm* mix, unsigned order,
                               const std::string& tag) {
        std::vector<std::string> paths;
        std::vector<const char*> cpaths;
        double weights[3];
        check(cskit_lm_weights(mix, weights));
        for (size_t i = 0; i < 3; ++i) {
          cskit_lm* comp_raw = nullptr;
          check(cskit_lm_component(mix, i, &comp_raw));
          LmPtr comp(comp_raw, cskit_lm_free);
          std::string path = b_dir + "/lm_" + names[i] + "." +
                             std::to_string(order) + "g.arpa";
          check(cskit_lm_write_arpa(comp.get(), path.c_str()));
          paths.push_back(path);
        }
        for (const auto& p : paths) cpaths.push_back(p.c_str());
        std::string mixture_path = b_dir + "/mixture." + tag + ".json";
        check(cskit_mixture_write(mixture_path.c_str(), cpaths.data(), weights, 3));
        return mixture_path;
      };
      std::string recog_path = write_mixture(recog.get(), b_order, std::to_string(b_order) + "g");
      std::string resc_path =
          write_mixture(rescoring.get(), b_rescore_order, std::to_string(b_rescore_order) + "g");

      // Wrap the fit report with the emitted paths.
      std::string fit = fit_json.str();
      std::string report = "{\n  \"recognition_mixture\": \"" + recog_path +
                           "\",\n  \"rescoring_mixture\": \"" + resc_path +
                           "\",\n  \"fit\": " + (fit.empty() ? "null" : fit) +
                           "\n}";
      emit_report(report, "");
    } else if (*resc) {
      NBestPtr nbest = [&] {
        cskit_nbest* raw = nullptr;
        check(cskit_nbest_read(r_nbest.c_str(), ts.get(), &raw));
        return NBestPtr(raw, cskit_nbest_free);
      }();
      LmPtr lm = load_lm(r_lm);
      if (r_unk) check(cskit_lm_set_unk(lm.get(), 1));
      cskit_corpus* selected_raw = nullptr;
      StringOut report;
      check(cskit_rescore(nbest.get(), lm.get(), ts.get(), r_scale, r_penalty,
                          &selected_raw, report.out()));
      CorpusPtr selected(selected_raw, cskit_corpus_free);
      check(cskit_corpus_write_tagged(selected.get(), r_out.c_str()));
      emit_report(report.str(), "");
    } else if (*score) {
      CorpusPtr ref = load_corpus(s_ref, ts.get(), false, "");
      CorpusPtr hyp = load_corpus(s_hyp, ts.get(), false, "", /*allow_empty=*/true);
      StringOut report, warnings;
      check(cskit_score(ref.get(), hyp.get(), s_pretty ? 1 : 0, report.out(),
                        warnings.out()));
      emit_warnings(warnings);
      emit_report(report.str(), s_out);
    } else if (*lexstats) {
      cskit_lexicon* raw = nullptr;
      check(cskit_lexicon_read(lx_path.c_str(), ts.get(), &raw));
      LexiconPtr lex(raw, cskit_lexicon_free);
      StringOut report;
      check(cskit_lexicon_stats(lex.get(), report.out()));
      emit_report(report.str(), lx_out);
    } else if (*oov) {
      cskit_lexicon* raw = nullptr;
      check(cskit_lexicon_read(o_lex.c_str(), ts.get(), &raw));
      LexiconPtr lex(raw, cskit_lexicon_free);
      CorpusPtr c = load_corpus(o_in, ts.get(), false, "");
      StringOut report;
      check(cskit_lexicon_oov(lex.get(), c.get(), report.out()));
      emit_report(report.str(), o_out);
    } else if (*synth) {
      StringOut report;
      check(cskit_gen_synth(ts.get(), &g_params, g_dir.c_str(), report.out()));
      emit_report(report.str(), g_out);
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}
