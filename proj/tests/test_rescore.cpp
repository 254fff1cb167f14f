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
#include <random>
#include <sstream>

#include "rescore.hpp"

using namespace cskit;

namespace {

TagSet one_tag() {
  TagSet ts;
  ts.add("eng");
  return ts;
}

std::vector<NBestList> parse(const std::string& text, const TagSet& ts) {
  std::istringstream in(text);
  return read_nbest(in, ts);
}

// Unigram model with chosen probabilities, loaded through ARPA.
NGramLm unigram_lm(const std::vector<std::pair<std::string, double>>& probs) {
  std::ostringstream arpa;
  arpa << "\\data\\\nngram 1=" << probs.size() << "\n\n\\1-grams:\n";
  char buf[64];
  for (const auto& [w, p] : probs) {
    std::snprintf(buf, sizeof(buf), "%.12f", p);  // p given as log10 already
    arpa << buf << "\t" << w << "\n";
  }
  arpa << "\\end\\\n";
  std::istringstream in(arpa.str());
  return read_arpa(in);
}

}  // namespace

TEST_CASE("n-best parsing") {
  std::string text =
      R"({"id":"u1","hyps":[{"ac":-1.5,"tokens":[{"w":"a","lang":"eng"}]},)"
      R"({"ac":-2.0,"tokens":[{"w":"b","lang":"eng"}]}]})" "\n";
  auto lists = parse(text, one_tag());
  REQUIRE(lists.size() == 1);
  CHECK(lists[0].id == "u1");
  REQUIRE(lists[0].hyps.size() == 2);
  CHECK(lists[0].hyps[0].acoustic_logscore == doctest::Approx(-1.5));
  CHECK(lists[0].hyps[1].tokens[0].surface == "b");
}

TEST_CASE("n-best parsing rejects bad records") {
  CHECK_THROWS_AS(parse(R"({"id":"u1","hyps":[]})" "\n", one_tag()), Error);
  // Out-of-range floats cannot represent a finite acoustic score.
  CHECK_THROWS_AS(
      parse(R"({"id":"u1","hyps":[{"ac":1e999,"tokens":[]}]})" "\n", one_tag()),
      Error);
  std::string dup =
      R"({"id":"u1","hyps":[{"ac":0,"tokens":[]}]})" "\n"
      R"({"id":"u1","hyps":[{"ac":0,"tokens":[]}]})" "\n";
  CHECK_THROWS_AS(parse(dup, one_tag()), Error);
  CHECK_THROWS_AS(
      parse(R"({"id":"u1","hyps":[{"ac":0,"tokens":[{"w":"a","lang":"fra"}]}]})" "\n",
            one_tag()),
      Error);
}

TEST_CASE("n-best lists survive a write/read cycle") {
  std::string text =
      R"({"id":"u1","hyps":[{"ac":-1.25,"tokens":[{"w":"a","lang":"eng"}]}]})" "\n"
      R"({"id":"u2","hyps":[{"ac":0.5,"tokens":[]}]})" "\n";
  auto lists = parse(text, one_tag());
  std::ostringstream out;
  write_nbest(lists, out);
  auto again = parse(out.str(), one_tag());
  REQUIRE(again.size() == 2);
  CHECK(again[0].hyps[0].acoustic_logscore == lists[0].hyps[0].acoustic_logscore);
  CHECK(again[0].hyps[0].tokens == lists[0].hyps[0].tokens);
  CHECK(again[1].hyps[0].tokens.empty());
}

TEST_CASE("lm_scale 0 returns the acoustic argmax") {
  NGramLm lm = unigram_lm({{"a/eng", -0.6}, {"b/eng", -0.6}, {"</s>", -0.3}});
  std::mt19937 rng(31);
  for (int t = 0; t < 100; ++t) {
    NBestList list;
    list.id = "u";
    std::size_t best = 0;
    for (int h = 0, n = 1 + rng() % 6; h < n; ++h) {
      Hypothesis hyp;
      hyp.acoustic_logscore = -static_cast<double>(rng() % 1000) / 10.0;
      hyp.tokens = {{rng() % 2 ? "a" : "b", "eng"}};
      list.hyps.push_back(hyp);
      if (hyp.acoustic_logscore > list.hyps[best].acoustic_logscore) {
        best = list.hyps.size() - 1;
      }
    }
    RescoreResult result = rescore({&list, 1}, lm, one_tag(), 0.0, 0.0);
    CHECK(result.choices[0].rank == best);
  }
}

TEST_CASE("with equal acoustics any positive scale prefers the LM choice") {
  NGramLm lm = unigram_lm({{"good/eng", -0.2}, {"bad/eng", -2.0}, {"</s>", -0.6}});
  NBestList list;
  list.id = "u";
  list.hyps = {{-3.0, {{"bad", "eng"}}}, {-3.0, {{"good", "eng"}}}};
  for (double scale : {0.25, 1.0, 7.5}) {
    RescoreResult r = rescore({&list, 1}, lm, one_tag(), scale, 0.0);
    CHECK(r.choices[0].rank == 1);
    CHECK(r.selected.utterances[0].tokens[0].surface == "good");
  }
  // At scale 0 the tie goes to the earlier hypothesis.
  RescoreResult r0 = rescore({&list, 1}, lm, one_tag(), 0.0, 0.0);
  CHECK(r0.choices[0].rank == 0);
}

TEST_CASE("frozen combination arithmetic selects H1") {
  // H1: ac -10, sentence log10 = -2; H2: ac -8, sentence log10 = -5.
  // Combined at scale 1: -12 vs -13, so H1 wins despite the worse acoustics.
  NGramLm lm = unigram_lm({{"x/eng", -1.5}, {"y/eng", -4.5}, {"</s>", -0.5}});
  NBestList list;
  list.id = "u";
  list.hyps = {{-8.0, {{"y", "eng"}}}, {-10.0, {{"x", "eng"}}}};
  RescoreResult r = rescore({&list, 1}, lm, one_tag(), 1.0, 0.0);
  CHECK(r.choices[0].rank == 1);
  CHECK(r.choices[0].combined == doctest::Approx(-12.0).epsilon(1e-9));
  CHECK(r.choices[0].lm_log10 == doctest::Approx(-2.0).epsilon(1e-9));
}

TEST_CASE("adding a constant to one list's acoustics never changes the pick") {
  NGramLm lm = unigram_lm({{"a/eng", -0.9}, {"b/eng", -0.4}, {"</s>", -0.5}});
  std::mt19937 rng(37);
  for (int t = 0; t < 50; ++t) {
    NBestList list;
    list.id = "u";
    for (int h = 0; h < 4; ++h) {
      Hypothesis hyp;
      hyp.acoustic_logscore = -static_cast<double>(rng() % 100) / 7.0;
      int len = 1 + rng() % 3;
      for (int i = 0; i < len; ++i) hyp.tokens.push_back({rng() % 2 ? "a" : "b", "eng"});
      list.hyps.push_back(hyp);
    }
    RescoreResult before = rescore({&list, 1}, lm, one_tag(), 1.0, 0.0);
    NBestList shifted = list;
    for (auto& h : shifted.hyps) h.acoustic_logscore += 123.456;
    RescoreResult after = rescore({&shifted, 1}, lm, one_tag(), 1.0, 0.0);
    CHECK(before.choices[0].rank == after.choices[0].rank);
  }
}

TEST_CASE("huge lm_scale converges to the LM-best hypothesis") {
  NGramLm lm = unigram_lm({{"a/eng", -0.9}, {"b/eng", -0.4}, {"</s>", -0.5}});
  std::mt19937 rng(41);
  for (int t = 0; t < 50; ++t) {
    NBestList list;
    list.id = "u";
    double best_lm = -1e300;
    std::size_t best_rank = 0;
    for (int h = 0; h < 5; ++h) {
      Hypothesis hyp;
      hyp.acoustic_logscore = -static_cast<double>(rng() % 50);
      int len = 1 + rng() % 4;
      for (int i = 0; i < len; ++i) hyp.tokens.push_back({rng() % 2 ? "a" : "b", "eng"});
      list.hyps.push_back(hyp);
      double lp = sentence_logprob(lm, list.hyps.back().tokens);
      if (lp > best_lm + 1e-12) {
        best_lm = lp;
        best_rank = list.hyps.size() - 1;
      }
    }
    RescoreResult r = rescore({&list, 1}, lm, one_tag(), 1e6, 0.0);
    CHECK(sentence_logprob(lm, list.hyps[r.choices[0].rank].tokens) ==
          doctest::Approx(best_lm).epsilon(1e-9));
  }
}

TEST_CASE("word penalty shifts length preference") {
  NGramLm lm = unigram_lm({{"a/eng", -0.5}, {"</s>", -0.5}});
  NBestList list;
  list.id = "u";
  list.hyps = {{0.0, {{"a", "eng"}, {"a", "eng"}, {"a", "eng"}}},
               {0.0, {{"a", "eng"}}}};
  // Scale 0 plus a positive per-word bonus prefers the longer hypothesis.
  RescoreResult longer = rescore({&list, 1}, lm, one_tag(), 0.0, 1.0);
  CHECK(longer.choices[0].rank == 0);
  RescoreResult shorter = rescore({&list, 1}, lm, one_tag(), 0.0, -1.0);
  CHECK(shorter.choices[0].rank == 1);
}

TEST_CASE("oov in a hypothesis surfaces as an error unless <unk> is on") {
  NGramLm lm = unigram_lm({{"a/eng", -0.5}, {"</s>", -0.5}});
  NBestList list;
  list.id = "u";
  list.hyps = {{0.0, {{"zzz", "eng"}}}};
  CHECK_THROWS_AS(rescore({&list, 1}, lm, one_tag(), 1.0, 0.0), Error);
  lm.set_unk_enabled(true);
  RescoreResult r = rescore({&list, 1}, lm, one_tag(), 1.0, 0.0);
  CHECK(r.selected.utterances[0].tokens[0].surface == "zzz");
}
