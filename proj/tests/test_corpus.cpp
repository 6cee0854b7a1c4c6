#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "topicstab/corpus.hpp"
#include "topicstab/error.hpp"

using namespace topicstab;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("topicstab_test_corpus_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Corpus small_corpus(int docs = 6) {
  std::vector<RawDocument> raw;
  for (int i = 0; i < docs; ++i) {
    raw.push_back({"doc" + std::to_string(i), "alpha beta gamma delta alpha beta " + std::string(i % 2 ? "kant hume" : "mill kant")});
  }
  return build_corpus(raw, TokenizerConfig{});
}

std::multiset<std::string> words_of(const Corpus& c, const Document& d) {
  std::multiset<std::string> out;
  for (WordId t : d.tokens) out.insert(c.vocabulary().word(t));
  return out;
}

}  // namespace

TEST_CASE("tokenize applies lowercase, split, and length rules") {
  TokenizerConfig config;
  CHECK(tokenize("The Dog dog.", config) == std::vector<std::string>{"the", "dog", "dog"});
  CHECK(tokenize("", config).empty());
  CHECK(tokenize("Aristotle's ethics; Kant!", config) == std::vector<std::string>{"aristotle", "ethics", "kant"});
}

TEST_CASE("tokenize honours stoplist and min length") {
  TokenizerConfig config;
  config.stoplist = {"the"};
  config.min_token_length = 4;
  CHECK(tokenize("The dog ate the Bone42bone", config) == std::vector<std::string>{"bone", "bone"});
  config.min_token_length = 0;
  CHECK_THROWS_AS(config.validate(), InvalidArgument);
}

TEST_CASE("build_corpus drops rare words and assigns first-occurrence ids") {
  TokenizerConfig config;
  config.min_token_length = 1;
  const Corpus c = build_corpus({{"d1", "a b b"}, {"d2", "b c"}}, config);
  CHECK(c.vocabulary().words() == std::vector<std::string>{"b"});
  REQUIRE(c.num_documents() == 2);
  CHECK(c.documents()[0].tokens == std::vector<WordId>{0, 0});
  CHECK(c.documents()[1].tokens == std::vector<WordId>{0});
}

TEST_CASE("build_corpus single repeated word") {
  const Corpus c = build_corpus({{"only", "xx xx"}}, TokenizerConfig{});
  CHECK(c.vocabulary().size() == 1);
  REQUIRE(c.num_documents() == 1);
  CHECK(c.documents()[0].tokens.size() == 2);
}

TEST_CASE("build_corpus is deterministic and fingerprints track content") {
  const Corpus a = small_corpus();
  const Corpus b = small_corpus();
  CHECK(a.fingerprint() == b.fingerprint());
  CHECK(a.fingerprint().size() == 64);
  const Corpus c = small_corpus(5);
  CHECK(c.fingerprint() != a.fingerprint());
}

TEST_CASE("build_corpus drops emptied documents and reports them") {
  BuildDiagnostics diag;
  const Corpus c = build_corpus({{"a", "kant kant"}, {"b", "hume"}, {"c", "!!"}}, TokenizerConfig{}, &diag);
  CHECK(c.num_documents() == 1);
  CHECK(diag.input_documents == 3);
  CHECK(diag.dropped_empty_documents == 2);
  CHECK(diag.dropped_word_types == 1);
}

TEST_CASE("build_corpus error paths") {
  CHECK_THROWS_WITH_AS(build_corpus({{"x", "aa aa"}, {"x", "bb bb"}}, TokenizerConfig{}),
                       doctest::Contains("'x'"), InvalidArgument);
  CHECK_THROWS_AS(build_corpus({{"x", "aa bb"}}, TokenizerConfig{}), InvalidArgument);
  CHECK_THROWS_AS(build_corpus({}, TokenizerConfig{}), InvalidArgument);
}

TEST_CASE("vocabulary rejects duplicates and inverts its index") {
  CHECK_THROWS_AS(Vocabulary({"a", "b", "a"}), InvalidArgument);
  Vocabulary v({"x", "y", "z"});
  for (WordId i = 0; i < v.size(); ++i) CHECK(*v.find(v.word(i)) == i);
  CHECK_FALSE(v.find("w").has_value());
}

TEST_CASE("sample_corpus full sample keeps the document set") {
  const Corpus c = small_corpus();
  const Corpus s = sample_corpus(c, c.num_documents(), 7);
  std::set<std::string> src, dst;
  for (const auto& d : c.documents()) src.insert(d.id);
  for (const auto& d : s.documents()) dst.insert(d.id);
  CHECK(src == dst);
  std::vector<std::string> a = c.vocabulary().words(), b = s.vocabulary().words();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
}

TEST_CASE("sample_corpus is deterministic and leaves the source untouched") {
  const Corpus c = small_corpus();
  const std::string before = c.fingerprint();
  const Corpus s1 = sample_corpus(c, 3, 99);
  const Corpus s2 = sample_corpus(c, 3, 99);
  CHECK(s1.fingerprint() == s2.fingerprint());
  CHECK(s1.documents() == s2.documents());
  CHECK(c.fingerprint() == before);
}

TEST_CASE("sample_corpus rejects out-of-range sizes") {
  const Corpus c = small_corpus();
  CHECK_THROWS_WITH_AS(sample_corpus(c, 0, 1), doctest::Contains("[1, 6]"), InvalidArgument);
  CHECK_THROWS_AS(sample_corpus(c, 7, 1), InvalidArgument);
}

TEST_CASE("sample_corpus single-document draws are uniform") {
  const Corpus c = build_corpus({{"a", "kant kant"}, {"b", "hume hume"}, {"c", "mill mill"}}, TokenizerConfig{});
  std::map<std::string, int> hits;
  const int trials = 3000;
  for (int seed = 0; seed < trials; ++seed) ++hits[sample_corpus(c, 1, static_cast<std::uint64_t>(seed)).documents()[0].id];
  for (const auto& [id, count] : hits) CHECK(std::abs(count / double(trials) - 1.0 / 3.0) <= 0.03);
  CHECK(hits.size() == 3);
}

TEST_CASE("property: samples are duplicate-free subsets with preserved token multisets") {
  const Corpus c = small_corpus(12);
  std::map<std::string, const Document*> by_id;
  for (const auto& d : c.documents()) by_id[d.id] = &d;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 1 + seed % c.num_documents();
    const Corpus s = sample_corpus(c, n, seed);
    REQUIRE(s.num_documents() == n);
    std::set<std::string> ids;
    for (const auto& d : s.documents()) {
      REQUIRE(ids.insert(d.id).second);
      REQUIRE(by_id.count(d.id) == 1);
      // Restrict the source multiset to the rebuilt vocabulary.
      std::multiset<std::string> expected;
      for (const auto& w : words_of(c, *by_id[d.id])) {
        if (s.vocabulary().find(w)) expected.insert(w);
      }
      REQUIRE(words_of(s, d) == expected);
    }
  }
}

TEST_CASE("corpus file round-trips and validates") {
  const fs::path dir = scratch_dir("io");
  const Corpus c = small_corpus();
  save_corpus(c, dir / "c.jsonl");
  const Corpus back = load_corpus(dir / "c.jsonl");
  CHECK(back.fingerprint() == c.fingerprint());
  CHECK(back.documents() == c.documents());
  CHECK(back.vocabulary() == c.vocabulary());

  std::ifstream in(dir / "c.jsonl");
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  {
    std::ofstream out(dir / "truncated.jsonl");
    out << header << '\n' << first << '\n';
  }
  CHECK_THROWS_WITH_AS(load_corpus(dir / "truncated.jsonl"), doctest::Contains("'D'"), FormatError);
  {
    std::string bad = header;
    bad.replace(bad.find("\"version\":1"), 11, "\"version\":9");
    std::ofstream out(dir / "version.jsonl");
    out << bad << '\n';
  }
  CHECK_THROWS_WITH_AS(load_corpus(dir / "version.jsonl"), doctest::Contains("'version'"), FormatError);
}

TEST_CASE("raw input readers") {
  const fs::path dir = scratch_dir("raw");
  fs::create_directories(dir / "texts");
  std::ofstream(dir / "texts" / "b.txt") << "Hume on ethics";
  std::ofstream(dir / "texts" / "a.txt") << "Kant on ethics";
  const auto from_dir = read_raw_documents(dir / "texts");
  REQUIRE(from_dir.size() == 2);
  CHECK(from_dir[0].id == "a.txt");
  CHECK(from_dir[1].text == "Hume on ethics");

  std::ofstream(dir / "docs.jsonl") << "{\"id\":\"x\",\"text\":\"one two\"}\n\n{\"id\":\"y\",\"text\":\"three\"}\n";
  const auto from_jsonl = read_raw_documents(dir / "docs.jsonl");
  REQUIRE(from_jsonl.size() == 2);
  CHECK(from_jsonl[1].id == "y");

  std::ofstream(dir / "bad.jsonl") << "{\"id\":\"x\"}\n";
  CHECK_THROWS_WITH_AS(read_raw_documents(dir / "bad.jsonl"), doctest::Contains("'text'"), FormatError);

  std::ofstream(dir / "stop.txt") << "The\nand  of\n";
  CHECK(read_stoplist(dir / "stop.txt") == std::set<std::string>{"the", "and", "of"});
}
