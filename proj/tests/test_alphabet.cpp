#include <catch_amalgamated.hpp>

#include "autstruct/alphabet.hpp"
#include "autstruct/errors.hpp"
#include "support/oracles.hpp"

using namespace autstruct;

namespace {
  AlphabetPtr ab() {
    return std::make_shared<OrderedAlphabet const>(
        OrderedAlphabet::self_inverse({"a", "b"}));
  }
}  // namespace

TEST_CASE("short-lex examples", "[alphabet]") {
  auto a = ab();
  auto w = [&](char const* s) { return parse_word(s, *a); };
  CHECK(a->compare(Word{}, w("a")) == std::strong_ordering::less);
  CHECK(a->compare(w("ab"), w("ba")) == std::strong_ordering::less);
  CHECK(a->compare(w("ba"), w("aaa")) == std::strong_ordering::less);
  CHECK(a->compare(w("abba"), w("abba")) == std::strong_ordering::equal);
  std::vector<Word> chain{Word{}, w("a"), w("b"), w("aa"), w("ab"), w("ba")};
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    CHECK(shortlex_less(chain[i], chain[i + 1]));
  }
}

TEST_CASE("short-lex is a strict total order on short words", "[alphabet]") {
  auto const words = oracle::words_upto(2, 4);
  for (auto const& u : words) {
    CHECK_FALSE(shortlex_less(u, u));
    for (auto const& v : words) {
      bool const lt = shortlex_less(u, v), gt = shortlex_less(v, u);
      CHECK((lt + gt + (u == v)) == 1);
      if (lt) {
        CHECK(u.size() <= v.size());
      }
    }
  }
  // words_upto lists words in short-lex order, so transitivity reduces to
  // the listed order being increasing.
  for (std::size_t i = 0; i + 1 < words.size(); ++i) {
    CHECK(shortlex_less(words[i], words[i + 1]));
  }
}

TEST_CASE("compare rejects foreign letters", "[alphabet]") {
  auto a = ab();
  CHECK_THROWS_AS(a->compare(Word{0}, Word{7}), UsageError);
}

TEST_CASE("formal inversion", "[alphabet]") {
  auto a = oracle::case_alphabet({"a", "b"});
  auto w = [&](char const* s) { return parse_word(s, *a); };
  CHECK(invert_word(*a, Word{}).empty());
  CHECK(invert_word(*a, w("a")) == w("A"));
  CHECK(invert_word(*a, w("ab")) == w("BA"));
  for (auto const& u : oracle::words_upto(4, 4)) {
    CHECK(invert_word(*a, invert_word(*a, u)) == u);
  }
}

TEST_CASE("padding", "[alphabet]") {
  auto         a = oracle::case_alphabet({"a", "b", "c"});
  Letter const $ = a->padding();
  auto         w = [&](char const* s) { return parse_word(s, *a); };
  CHECK(pad(*a, w("ab"), w("a"))
        == PaddedPair{{w("a")[0], w("a")[0]}, {w("b")[0], $}});
  CHECK(pad(*a, Word{}, Word{}).empty());
  CHECK(pad(*a, w("a"), w("abc"))
        == PaddedPair{{w("a")[0], w("a")[0]}, {$, w("b")[0]}, {$, w("c")[0]}});
  auto const words = oracle::words_upto(3, 3);
  for (auto const& u : words) {
    for (auto const& v : words) {
      auto p = pad(*a, u, v);
      CHECK(p.size() == std::max(u.size(), v.size()));
      CHECK(is_valid_padded(*a, p));
      CHECK(unpad(*a, p) == std::pair{u, v});
    }
  }
  CHECK_FALSE(is_valid_padded(*a, PaddedPair{{$, $}}));
  CHECK_FALSE(is_valid_padded(*a, PaddedPair{{$, 0}, {0, 0}}));
}

TEST_CASE("word parsing", "[alphabet]") {
  auto a = oracle::case_alphabet({"a", "b", "c", "d", "e", "f", "g", "h", "i"});
  auto n = [&](char const* s) { return *a->find(s); };
  CHECK(parse_word("abAe", *a) == Word{n("a"), n("b"), n("A"), n("e")});
  CHECK(parse_word("(ahIE)^2", *a)
        == Word{n("a"), n("h"), n("I"), n("E"), n("a"), n("h"), n("I"), n("E")});
  CHECK(parse_word("a^4", *a) == Word(4, n("a")));
  CHECK(parse_word("(ab)^-1", *a) == Word{n("B"), n("A")});
  CHECK(parse_word("a*b c", *a) == Word{n("a"), n("b"), n("c")});
  CHECK(parse_word("IdWord", *a).empty());
  CHECK_THROWS_AS(parse_word("az", *a), ParseError);
  CHECK_THROWS_AS(parse_word("(ab", *a), ParseError);
  CHECK_THROWS_AS(parse_word("a^", *a), ParseError);
  for (auto const& w : oracle::words_upto(4, 3)) {
    CHECK(parse_word(print_word(w, *a), *a) == w);
  }
}

TEST_CASE("multi-character names print with separators", "[alphabet]") {
  auto a = std::make_shared<OrderedAlphabet const>(
      OrderedAlphabet::with_case_inverses({"x1", "x2"}));
  Word w{0, 3, 2};
  CHECK(print_word(w, *a) == "x1*X2*x2");
  CHECK(parse_word("x1*X2*x2", *a) == w);
  CHECK(parse_word("x1^-1", *a) == Word{1});
}

TEST_CASE("presentation parsing", "[alphabet]") {
  auto p = parse_presentation(
      "# comment\n"
      "generators: a b\n"
      "relators:\n"
      "a^4, abAB\n"
      "equations:\n"
      "ab = ba\n");
  auto const& a = *p.alphabet;
  CHECK(a.names() == std::vector<std::string>{"a", "A", "b", "B"});
  CHECK(a.inverse(0) == 1);
  REQUIRE(p.relators.size() == 3);
  CHECK(p.relators[2] == parse_word("abAB", a));
  auto m = p.monoid_relators();
  CHECK(m.size() == 7);
  CHECK(m[3] == Word{0, 1});

  auto q = parse_presentation("generators: a b\ninverses: a a\n");
  CHECK(q.alphabet->names() == std::vector<std::string>{"a", "b", "B"});
  CHECK(q.alphabet->inverse(0) == 0);

  auto r = parse_presentation(
      "generators: a b\nordering: b B a A\nrelators:\nab\n");
  CHECK(r.alphabet->names() == std::vector<std::string>{"b", "B", "a", "A"});
  CHECK(r.relators[0] == Word{2, 0});

  // Upper-case name resolves to the inverse of its lower-case partner.
  auto s = parse_presentation("generators: a\ninverses: a a\nrelators:\nA\n");
  CHECK(s.relators[0] == Word{0});

  auto reparsed = parse_presentation(print_presentation(p));
  CHECK(*reparsed.alphabet == *p.alphabet);
  CHECK(reparsed.relators == p.relators);
}

TEST_CASE("malformed presentations", "[alphabet]") {
  CHECK_THROWS_AS(parse_presentation("relators:\nab\n"), ParseError);
  CHECK_THROWS_AS(parse_presentation("generators: a\nrelators:\nab\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_presentation("generators: a a\n"), ParseError);
  CHECK_THROWS_AS(parse_presentation("generators: a\nfoo: b\n"), ParseError);
  CHECK_THROWS_AS(parse_presentation("generators: a\nordering: a\n"),
                  ParseError);
  try {
    parse_presentation("generators: a\nrelators:\na^4\nq\n");
    FAIL("expected a parse error");
  } catch (ParseError const& e) {
    CHECK(e.line() == 4);
  }
}
