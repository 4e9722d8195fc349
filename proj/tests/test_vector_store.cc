#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "generators.h"
#include "xcoref/errors.h"
#include "xcoref/vector_store.h"

using namespace xcoref;

namespace {

Token tok(std::string text, bool stop = false) {
  Token t;
  t.text = std::move(text);
  t.lemma = t.text;
  t.stopword = stop;
  return t;
}

VectorStore small_store() {
  std::stringstream in("x 1 0 2\ny 3 4 0\nh 0 2 2\nw 1 1 1\n");
  return VectorStore::parse(in);
}

}  // namespace

TEST_CASE("parse infers the dimension and rejects inconsistent lines") {
  std::stringstream two("a 1 2 3\nb 4 5 6\n");
  const VectorStore s = VectorStore::parse(two);
  CHECK(s.dimension() == 3);
  CHECK(s.size() == 2);

  std::stringstream mixed("a 1 2 3\nb 4 5 6 7\n");
  CHECK_THROWS_AS(VectorStore::parse(mixed), FormatError);
  std::stringstream text("a 1 x 3\n");
  CHECK_THROWS_AS(VectorStore::parse(text), FormatError);

  std::stringstream header("2 3\na 1 2 3\nb 4 5 6\n");
  CHECK(VectorStore::parse(header).size() == 2);
  std::stringstream limited("a 1 2 3\nb 4 5 6\nc 7 8 9\n");
  CHECK(VectorStore::parse(limited, 2).size() == 2);

  CHECK_THROWS_AS(VectorStore::load("/nonexistent/vectors.txt"), Error);
}

TEST_CASE("fixture vectors are returned exactly as written") {
  const std::string path = std::string(XCOREF_FIXTURE_DIR) + "/micro/vectors.txt";
  const VectorStore store = VectorStore::load(path);
  // Separate parse of the same file.
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);  // header
  std::size_t checked = 0;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string token;
    fields >> token;
    WordVector expected;
    for (double x; fields >> x;) expected.push_back(x);
    const LookupResult r = store.lookup_with_path(token);
    CHECK(r.path == LookupPath::kExact);
    CHECK(r.vector == expected);
    ++checked;
  }
  CHECK(checked == store.size());
  CHECK(checked >= 50);
}

TEST_CASE("lookup falls back to lowercase, then to a seeded OOV vector") {
  const VectorStore s = small_store();
  CHECK(s.lookup_with_path("x").path == LookupPath::kExact);
  CHECK(s.lookup_with_path("X").path == LookupPath::kLowercase);
  CHECK(s.lookup("X") == s.lookup("x"));
  const LookupResult oov = s.lookup_with_path("zebra");
  CHECK(oov.path == LookupPath::kOov);
  CHECK(s.lookup("zebra") == oov.vector);

  double norm = 0.0;
  for (double x : oov.vector) norm += x * x;
  CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-12));

  // Same seed in a fresh store gives the same vector; another seed does not.
  std::stringstream again("x 1 0 2\n");
  CHECK(VectorStore::parse(again).lookup("zebra") == oov.vector);
  std::stringstream other("x 1 0 2\n");
  CHECK(VectorStore::parse(other, std::nullopt, 7).lookup("zebra") != oov.vector);
}

TEST_CASE("distinct OOV tokens are nearly orthogonal in 50 dimensions") {
  const VectorStore s(50);
  std::mt19937_64 rng(3);
  int close = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::string a = "tok" + std::to_string(rng());
    const std::string b = "tok" + std::to_string(rng());
    if (cosine(s.lookup(a), s.lookup(b)) >= 0.9) ++close;
  }
  CHECK(close == 0);
}

TEST_CASE("phrase_mean") {
  const VectorStore s = small_store();
  CHECK(phrase_mean(s, std::vector<Token>{tok("x")}) == s.lookup("x"));
  CHECK(phrase_mean(s, std::vector<Token>{tok("x"), tok("x")}) == s.lookup("x"));
  const WordVector xy = phrase_mean(s, std::vector<Token>{tok("x"), tok("y")});
  CHECK(xy == WordVector{2.0, 2.0, 1.0});
  // Stopwords drop out unless nothing else is left.
  CHECK(phrase_mean(s, std::vector<Token>{tok("x"), tok("y", true)}) == s.lookup("x"));
  CHECK(phrase_mean(s, std::vector<Token>{tok("y", true)}) == s.lookup("y"));
  CHECK_THROWS_AS(phrase_mean(s, std::vector<Token>{}), EmptyInput);
}

TEST_CASE("weighted_phrase_vector") {
  const VectorStore s = small_store();
  const std::vector<Token> hw = {tok("h"), tok("w")};
  // (2 v(h) + v(w)) / 2 with v(h) = (0,2,2), v(w) = (1,1,1).
  CHECK(weighted_phrase_vector(s, hw, 0, 2.0) == WordVector{0.5, 2.5, 2.5});

  const std::vector<Token> single = {tok("y")};
  CHECK(cosine(weighted_phrase_vector(s, single, 0, 5.0), s.lookup("y")) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(weighted_phrase_vector(s, std::vector<Token>{}, 0, 2.0), EmptyInput);

  // k = 1 is phrase_mean under the same filtering.
  testing::Rng rng(5);
  const auto corpus = testing::random_corpus(rng);
  const CorpusIndex index(corpus.corpus);
  for (const Mention &m : corpus.corpus.mentions) {
    const auto span = index.span_tokens(m);
    const auto a = weighted_phrase_vector(corpus.store, span, m.head_index - m.span_start, 1.0);
    const auto b = phrase_mean(corpus.store, span);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
  }
}

TEST_CASE("cosine") {
  const WordVector v = {0.3, -1.2, 4.0};
  CHECK(cosine(v, v) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cosine(WordVector{1, 0}, WordVector{0, 1}) == 0.0);
  CHECK(std::fabs(cosine(WordVector{1, 1}, WordVector{1, 0}) - 0.70710678) < 1e-8);
  CHECK(cosine(WordVector{0, 0}, WordVector{1, 0}) == 0.0);
  CHECK_THROWS_AS(cosine(WordVector{1, 0}, WordVector{1, 0, 0}), DimensionMismatch);

  std::mt19937_64 rng(9);
  const auto vs = testing::random_vectors(rng, 40, 7);
  for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
    const WordVector &a = vs[i];
    const WordVector &b = vs[i + 1];
    CHECK(cosine(a, b) == cosine(b, a));
    WordVector scaled = a;
    for (double &x : scaled) x *= 3.7;
    CHECK(std::fabs(cosine(scaled, b) - cosine(a, b)) < 1e-9);
    CHECK(cosine(a, b) <= 1.0);
    CHECK(cosine(a, b) >= -1.0);
  }
}
