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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "cskit/cskit.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("cskit_capi_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name, const std::string& content) const {
    fs::path p = path / name;
    std::ofstream f(p);
    f << content;
    return p.string();
  }
  std::string at(const std::string& name) const { return (path / name).string(); }
};

struct Owned {
  char* s = nullptr;
  ~Owned() { cskit_string_free(s); }
  std::string str() const { return s ? s : ""; }
};

const char* kTinyCorpus =
    R"({"id":"u1","tokens":[{"w":"hello","lang":"eng"},{"w":"molo","lang":"xho"}]})" "\n"
    R"({"id":"u2","tokens":[{"w":"hello","lang":"eng"},{"w":"world","lang":"eng"}]})" "\n"
    R"({"id":"u3","tokens":[{"w":"molo","lang":"xho"},{"w":"hello","lang":"eng"}]})" "\n";

}  // namespace

TEST_CASE("tag registries over the C surface") {
  cskit_tagset* ts = nullptr;
  REQUIRE(cskit_tagset_default(&ts) == CSKIT_OK);
  CHECK(cskit_tagset_size(ts) == 5);
  CHECK(std::string(cskit_tagset_tag(ts, 0)) == "eng");
  CHECK(cskit_tagset_tag(ts, 99) == nullptr);
  CHECK(cskit_tagset_add(ts, "eng") == CSKIT_EVALIDATE);
  CHECK(std::string(cskit_last_error()).find("eng") != std::string::npos);
  CHECK(cskit_tagset_add(ts, "nbl") == CSKIT_OK);
  cskit_tagset_free(ts);
}

TEST_CASE("corpus, training, perplexity and ARPA io over the C surface") {
  TempDir dir;
  std::string corpus_path = dir.file("c.jsonl", kTinyCorpus);

  cskit_tagset* ts = nullptr;
  REQUIRE(cskit_tagset_default(&ts) == CSKIT_OK);

  cskit_corpus* corpus = nullptr;
  REQUIRE(cskit_corpus_read_tagged(corpus_path.c_str(), ts, 0, &corpus) == CSKIT_OK);
  CHECK(cskit_corpus_size(corpus) == 3);

  Owned stats;
  REQUIRE(cskit_corpus_stats(corpus, 0, &stats.s) == CSKIT_OK);
  json s = json::parse(stats.str());
  CHECK(s["utterances"] == 3);
  CHECK(s["tokens"]["eng"] == 4);
  CHECK(s["switches"] == 2);

  cskit_counts* counts = nullptr;
  REQUIRE(cskit_count_ngrams(corpus, 2, &counts) == CSKIT_OK);
  Owned tsv;
  REQUIRE(cskit_counts_tsv(counts, &tsv.s) == CSKIT_OK);
  CHECK(tsv.str().find("hello/eng") != std::string::npos);
  cskit_counts_free(counts);

  cskit_lm* lm = nullptr;
  Owned warnings;
  REQUIRE(cskit_lm_train_kn(corpus, 2, nullptr, 0, &warnings.s, &lm) == CSKIT_OK);
  CHECK(cskit_lm_order(lm) == 2);

  double lp = 0.0;
  const char* hist[] = {"hello/eng"};
  REQUIRE(cskit_lm_logprob(lm, hist, 1, "world/eng", &lp) == CSKIT_OK);
  CHECK(lp < 0.0);
  CHECK(cskit_lm_logprob(lm, nullptr, 0, "zzz/eng", &lp) == CSKIT_EOOV);

  Owned ppl;
  REQUIRE(cskit_lm_perplexity(lm, corpus, &ppl.s) == CSKIT_OK);
  json p = json::parse(ppl.str());
  CHECK(p["tokens"] == 9);
  CHECK(p["oov"] == 0);
  CHECK(p["ppl"].get<double>() > 1.0);

  std::string arpa_path = dir.at("m.arpa");
  REQUIRE(cskit_lm_write_arpa(lm, arpa_path.c_str()) == CSKIT_OK);
  cskit_lm* lm2 = nullptr;
  REQUIRE(cskit_lm_read(arpa_path.c_str(), &lm2) == CSKIT_OK);
  double lp2 = 0.0;
  REQUIRE(cskit_lm_logprob(lm2, hist, 1, "world/eng", &lp2) == CSKIT_OK);
  CHECK(std::abs(lp - lp2) <= 1e-7);

  cskit_lm_free(lm2);
  cskit_lm_free(lm);
  cskit_corpus_free(corpus);
  cskit_tagset_free(ts);
}

TEST_CASE("mixtures, weight fitting and persistence over the C surface") {
  TempDir dir;
  cskit_tagset* ts = nullptr;
  REQUIRE(cskit_tagset_default(&ts) == CSKIT_OK);

  std::string a_path = dir.file(
      "a.jsonl",
      R"({"id":"a1","tokens":[{"w":"aa","lang":"eng"},{"w":"ab","lang":"eng"}]})" "\n");
  std::string b_path = dir.file(
      "b.jsonl",
      R"({"id":"b1","tokens":[{"w":"ba","lang":"zul"},{"w":"bb","lang":"zul"}]})" "\n");
  cskit_corpus *ca = nullptr, *cb = nullptr;
  REQUIRE(cskit_corpus_read_tagged(a_path.c_str(), ts, 0, &ca) == CSKIT_OK);
  REQUIRE(cskit_corpus_read_tagged(b_path.c_str(), ts, 0, &cb) == CSKIT_OK);

  cskit_lm *la = nullptr, *lb = nullptr;
  REQUIRE(cskit_lm_train_kn(ca, 1, nullptr, 0, nullptr, &la) == CSKIT_OK);
  REQUIRE(cskit_lm_train_kn(cb, 1, nullptr, 0, nullptr, &lb) == CSKIT_OK);

  const cskit_lm* comps[] = {la, lb};
  double weights[] = {0.5, 0.5};
  cskit_lm* mix = nullptr;
  REQUIRE(cskit_lm_interpolate(comps, weights, 2, &mix) == CSKIT_OK);
  CHECK(cskit_lm_component_count(mix) == 2);
  double w_out[2] = {0, 0};
  REQUIRE(cskit_lm_weights(mix, w_out) == CSKIT_OK);
  CHECK(w_out[0] == 0.5);

  double bad[] = {0.9, 0.5};
  cskit_lm* reject = nullptr;
  CHECK(cskit_lm_interpolate(comps, bad, 2, &reject) == CSKIT_EVALIDATE);

  double fitted[2] = {0, 0};
  Owned fit_json;
  REQUIRE(cskit_fit_weights(comps, 2, ca, nullptr, 1e-4, 50, 0, 0.05, fitted,
                            &fit_json.s) == CSKIT_OK);
  json fit = json::parse(fit_json.str());
  CHECK(fit["converged"].get<bool>());
  CHECK(fitted[0] > fitted[1]);  // dev is drawn from component a

  std::string arpa_a = dir.at("a.arpa"), arpa_b = dir.at("b.arpa");
  REQUIRE(cskit_lm_write_arpa(la, arpa_a.c_str()) == CSKIT_OK);
  REQUIRE(cskit_lm_write_arpa(lb, arpa_b.c_str()) == CSKIT_OK);
  const char* paths[] = {arpa_a.c_str(), arpa_b.c_str()};
  std::string mix_path = dir.at("mix.json");
  REQUIRE(cskit_mixture_write(mix_path.c_str(), paths, weights, 2) == CSKIT_OK);
  cskit_lm* loaded = nullptr;
  REQUIRE(cskit_lm_read(mix_path.c_str(), &loaded) == CSKIT_OK);
  CHECK(cskit_lm_component_count(loaded) == 2);

  cskit_lm* comp0 = nullptr;
  REQUIRE(cskit_lm_component(mix, 0, &comp0) == CSKIT_OK);
  double l1 = 0, l2 = 0;
  REQUIRE(cskit_lm_logprob(comp0, nullptr, 0, "aa/eng", &l1) == CSKIT_OK);
  REQUIRE(cskit_lm_logprob(la, nullptr, 0, "aa/eng", &l2) == CSKIT_OK);
  CHECK(l1 == l2);

  cskit_lm_free(comp0);
  cskit_lm_free(loaded);
  cskit_lm_free(mix);
  cskit_lm_free(la);
  cskit_lm_free(lb);
  cskit_corpus_free(ca);
  cskit_corpus_free(cb);
  cskit_tagset_free(ts);
}

TEST_CASE("scoring and lexica over the C surface") {
  TempDir dir;
  cskit_tagset* ts = nullptr;
  REQUIRE(cskit_tagset_default(&ts) == CSKIT_OK);

  std::string ref_path = dir.file("ref.jsonl", kTinyCorpus);
  std::string hyp_path = dir.file(
      "hyp.jsonl",
      R"({"id":"u1","tokens":[{"w":"hello","lang":"eng"},{"w":"molo","lang":"zul"}]})" "\n"
      R"({"id":"u2","tokens":[{"w":"hello","lang":"eng"},{"w":"world","lang":"eng"}]})" "\n"
      R"({"id":"u3","tokens":[{"w":"molo","lang":"xho"},{"w":"hello","lang":"eng"}]})" "\n");
  cskit_corpus *ref = nullptr, *hyp = nullptr;
  REQUIRE(cskit_corpus_read_tagged(ref_path.c_str(), ts, 0, &ref) == CSKIT_OK);
  REQUIRE(cskit_corpus_read_tagged(hyp_path.c_str(), ts, 1, &hyp) == CSKIT_OK);

  Owned report, warn;
  REQUIRE(cskit_score(ref, hyp, 0, &report.s, &warn.s) == CSKIT_OK);
  json r = json::parse(report.str());
  CHECK(r["overall"]["N"] == 6);
  CHECK(r["overall"]["S"] == 0);  // only the tag differs, surfaces match
  CHECK(r["overall"]["wer"] == 0.0);
  CHECK(r["confusion"]["counts"][2][1] == 1);  // XHO row, ZUL column
  CHECK(warn.str().empty());

  Owned pretty;
  REQUIRE(cskit_score(ref, hyp, 1, &pretty.s, nullptr) == CSKIT_OK);
  CHECK(pretty.str().find("Language confusion") != std::string::npos);

  std::string lex_path = dir.file("lex.txt",
                                  "hello/eng\tHH AH L OW\n"
                                  "world/eng\tW ER L D\n"
                                  "molo/xho\tM O L O\n");
  cskit_lexicon* lex = nullptr;
  REQUIRE(cskit_lexicon_read(lex_path.c_str(), ts, &lex) == CSKIT_OK);
  Owned lex_stats;
  REQUIRE(cskit_lexicon_stats(lex, &lex_stats.s) == CSKIT_OK);
  json ls = json::parse(lex_stats.str());
  CHECK(ls["totals"]["words"] == 3);
  Owned oov;
  REQUIRE(cskit_lexicon_oov(lex, ref, &oov.s) == CSKIT_OK);
  json o = json::parse(oov.str());
  CHECK(o["closed_vocabulary"].get<bool>());

  cskit_lexicon_free(lex);
  cskit_corpus_free(ref);
  cskit_corpus_free(hyp);
  cskit_tagset_free(ts);
}

TEST_CASE("synthetic generation and rescoring over the C surface") {
  TempDir dir;
  cskit_tagset* ts = nullptr;
  REQUIRE(cskit_tagset_default(&ts) == CSKIT_OK);

  cskit_synth_params params;
  cskit_synth_params_init(&params);
  params.seed = 7;
  params.cs_utts = 60;
  params.mono_utts = 20;
  params.dev_utts = 20;
  params.test_utts = 8;
  params.vocab_per_lang = 12;

  Owned manifest;
  REQUIRE(cskit_gen_synth(ts, &params, dir.at("synth").c_str(), &manifest.s) ==
          CSKIT_OK);
  json m = json::parse(manifest.str());
  CHECK(m["utterances"]["train_cs"] == 60);

  // Determinism: a second run with the same seed produces identical bytes.
  Owned manifest2;
  REQUIRE(cskit_gen_synth(ts, &params, dir.at("synth2").c_str(), &manifest2.s) ==
          CSKIT_OK);
  auto slurp = [](const std::string& p) {
    std::ifstream f(p);
    return std::string(std::istreambuf_iterator<char>(f), {});
  };
  CHECK(slurp(dir.at("synth") + "/train_cs.jsonl") ==
        slurp(dir.at("synth2") + "/train_cs.jsonl"));
  CHECK(slurp(dir.at("synth") + "/test_nbest.jsonl") ==
        slurp(dir.at("synth2") + "/test_nbest.jsonl"));

  cskit_corpus* cs = nullptr;
  REQUIRE(cskit_corpus_read_tagged((dir.at("synth") + "/train_cs.jsonl").c_str(),
                                   ts, 0, &cs) == CSKIT_OK);
  cskit_lm* lm = nullptr;
  REQUIRE(cskit_lm_train_kn(cs, 3, nullptr, 0, nullptr, &lm) == CSKIT_OK);

  cskit_nbest* nbest = nullptr;
  REQUIRE(cskit_nbest_read((dir.at("synth") + "/test_nbest.jsonl").c_str(), ts,
                           &nbest) == CSKIT_OK);
  CHECK(cskit_nbest_size(nbest) == 8);

  cskit_corpus* selected = nullptr;
  Owned rescore_json;
  REQUIRE(cskit_rescore(nbest, lm, ts, 1.0, 0.0, &selected, &rescore_json.s) ==
          CSKIT_OK);
  CHECK(cskit_corpus_size(selected) == 8);
  REQUIRE(cskit_corpus_write_tagged(selected, dir.at("sel.jsonl").c_str()) ==
          CSKIT_OK);

  cskit_corpus* test_ref = nullptr;
  REQUIRE(cskit_corpus_read_tagged((dir.at("synth") + "/test_ref.jsonl").c_str(),
                                   ts, 0, &test_ref) == CSKIT_OK);
  Owned score;
  REQUIRE(cskit_score(test_ref, selected, 0, &score.s, nullptr) == CSKIT_OK);
  json sc = json::parse(score.str());
  CHECK(sc["overall"]["N"].get<int>() > 0);

  cskit_corpus_free(test_ref);
  cskit_corpus_free(selected);
  cskit_nbest_free(nbest);
  cskit_lm_free(lm);
  cskit_corpus_free(cs);
  cskit_tagset_free(ts);
}

TEST_CASE("error reporting carries codes and messages") {
  cskit_tagset* ts = nullptr;
  REQUIRE(cskit_tagset_default(&ts) == CSKIT_OK);
  cskit_corpus* c = nullptr;
  CHECK(cskit_corpus_read_tagged("/nonexistent/file.jsonl", ts, 0, &c) == CSKIT_EIO);
  CHECK(std::strlen(cskit_last_error()) > 0);
  CHECK(cskit_corpus_read_tagged(nullptr, ts, 0, &c) == CSKIT_EINVAL);

  cskit_lm* lm = nullptr;
  CHECK(cskit_lm_read("/nonexistent/model.arpa", &lm) == CSKIT_EIO);
  cskit_tagset_free(ts);
}
