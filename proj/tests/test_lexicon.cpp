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

#include <random>
#include <set>
#include <sstream>

#include "lexicon.hpp"

using namespace cskit;

namespace {

TagSet two_tags() {
  TagSet ts;
  ts.add("eng");
  ts.add("zul");
  return ts;
}

Lexicon parse(const std::string& text, const TagSet& ts) {
  std::istringstream in(text);
  return read_lexicon(in, ts);
}

}  // namespace

TEST_CASE("minimal lexicon entry") {
  Lexicon lex = parse("hello/eng\tHH AH L OW\n", two_tags());
  REQUIRE(lex.entries.size() == 1);
  CHECK(lex.entries[0].word.surface == "hello");
  CHECK(lex.entries[0].word.lang == "eng");
  CHECK(lex.entries[0].phones.size() == 4);
}

TEST_CASE("comments and blank lines are skipped") {
  Lexicon lex = parse("# header\n\nhello/eng\tHH AH L OW\n", two_tags());
  CHECK(lex.entries.size() == 1);
}

TEST_CASE("duplicate entries are rejected") {
  std::string text = "hello/eng\tHH AH L OW\nhello/eng\tHH AH L OW\n";
  try {
    parse(text, two_tags());
    FAIL("expected duplicate-entry error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  // A second pronunciation of the same word is fine.
  Lexicon lex = parse("hello/eng\tHH AH L OW\nhello/eng\tHH EH L OW\n", two_tags());
  CHECK(lex.entries.size() == 2);
}

TEST_CASE("malformed lines are rejected") {
  CHECK_THROWS_AS(parse("x/eng\t\n", two_tags()), Error);        // no phones
  CHECK_THROWS_AS(parse("x/eng HH\n", two_tags()), Error);       // no tab
  CHECK_THROWS_AS(parse("x/fra\tHH\n", two_tags()), Error);      // unknown tag
  CHECK_THROWS_AS(parse("/eng\tHH\n", two_tags()), Error);       // empty word
  CHECK_THROWS_AS(parse("noslash\tHH\n", two_tags()), Error);    // missing tag
}

TEST_CASE("stats: words vs entries per language") {
  std::string text =
      "one/eng\tW AH N\n"
      "one/eng\tHH W AH N\n"
      "two/eng\tT UW\n"
      "kunye/zul\tK U N Y E\n";
  LexiconStats s = lexicon_stats(parse(text, two_tags()));
  CHECK(s.per_lang.at("eng").words == 2);
  CHECK(s.per_lang.at("eng").entries == 3);
  CHECK(s.per_lang.at("zul").words == 1);
  CHECK(s.per_lang.at("zul").entries == 1);
  CHECK(s.total_words == 3);
  CHECK(s.total_entries == 4);
}

TEST_CASE("stats: empty lexicon is all zero") {
  LexiconStats s = lexicon_stats(parse("", two_tags()));
  CHECK(s.per_lang.empty());
  CHECK(s.total_words == 0);
  CHECK(s.total_entries == 0);
  CHECK(s.phones_union == 0);
  CHECK(s.phones_disjoint_sum == 0);
}

TEST_CASE("stats: phone inventories, union vs disjoint sum, shared counts") {
  std::string text =
      "pa/eng\tp a\n"
      "pb/zul\tp b\n";
  LexiconStats s = lexicon_stats(parse(text, two_tags()));
  CHECK(s.per_lang.at("eng").phones == std::set<std::string>{"p", "a"});
  CHECK(s.per_lang.at("zul").phones == std::set<std::string>{"p", "b"});
  CHECK(s.phones_union == 3);
  CHECK(s.phones_disjoint_sum == 4);
  CHECK(s.shared_phones.at("eng+zul") == 1);
}

TEST_CASE("phone inventory equals the brute-force union of entry phones") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    std::ostringstream text;
    std::set<std::string> expected_eng;
    int n = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      text << "w" << i << "/eng\t";
      int phones = 1 + static_cast<int>(rng() % 4);
      for (int p = 0; p < phones; ++p) {
        std::string ph = "p" + std::to_string(rng() % 6);
        expected_eng.insert(ph);
        text << ph << (p + 1 == phones ? "" : " ");
      }
      text << "\n";
    }
    LexiconStats s = lexicon_stats(parse(text.str(), two_tags()));
    CHECK(s.per_lang.at("eng").phones == expected_eng);
  }
}

TEST_CASE("oov_check certifies closed vocabularies") {
  Lexicon lex = parse("a/eng\tA\nb/eng\tB\nfoo/zul\tF\n", two_tags());
  Corpus covered;
  covered.tag_set = two_tags();
  Utterance u;
  u.id = "u1";
  u.tokens = {{"a", "eng"}, {"b", "eng"}, {"foo", "zul"}};
  covered.utterances.push_back(u);
  CHECK(oov_check(lex, covered).empty());
}

TEST_CASE("oov_check lists misses with counts, tag-sensitively") {
  Lexicon lex = parse("a/eng\tA\nfoo/zul\tF\n", two_tags());
  Corpus c;
  c.tag_set = two_tags();
  Utterance u;
  u.id = "u1";
  // `foo` exists only with tag zul; the eng-tagged uses are OOV.
  u.tokens = {{"foo", "eng"}, {"foo", "eng"}, {"foo", "eng"}, {"a", "eng"},
              {"foo", "zul"}};
  c.utterances.push_back(u);
  auto misses = oov_check(lex, c);
  REQUIRE(misses.size() == 1);
  CHECK(misses[0].word.surface == "foo");
  CHECK(misses[0].word.lang == "eng");
  CHECK(misses[0].count == 3);
}

TEST_CASE("random sub-lexicon corpora never report OOV") {
  std::mt19937 rng(13);
  std::ostringstream text;
  for (int i = 0; i < 25; ++i) {
    text << "w" << i << "/" << (i % 2 ? "eng" : "zul") << "\tP" << i % 7 << "\n";
  }
  Lexicon lex = parse(text.str(), two_tags());
  for (int trial = 0; trial < 20; ++trial) {
    Corpus c;
    c.tag_set = two_tags();
    Utterance u;
    u.id = "u";
    int len = 1 + static_cast<int>(rng() % 20);
    for (int i = 0; i < len; ++i) {
      const auto& e = lex.entries[rng() % lex.entries.size()];
      u.tokens.push_back(e.word);
    }
    c.utterances.push_back(u);
    CHECK(oov_check(lex, c).empty());
  }
}
