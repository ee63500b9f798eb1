#include <catch_amalgamated.hpp>

#include "autstruct/fsa2.hpp"
#include "autstruct/fsa_io.hpp"
#include "support/oracles.hpp"

using namespace autstruct;

TEST_CASE("one-variable round trip", "[fsa_io]") {
  std::mt19937 rng(5);
  auto         fa = FsaAlphabet::one_var(oracle::case_alphabet({"a", "b"}));
  for (int i = 0; i < 20; ++i) {
    Fsa x = oracle::random_fsa(rng, fa, 7);
    CHECK(parse_fsa(print_fsa(x)) == x);
  }
  Fsa e = empty_language(fa);
  CHECK(parse_fsa(print_fsa(e)) == e);
}

TEST_CASE("two-variable round trip", "[fsa_io]") {
  auto a  = std::make_shared<OrderedAlphabet const>(
      OrderedAlphabet::self_inverse({"a", "b"}));
  Fsa  gt = gt_automaton(a);
  auto text = print_fsa(gt);
  CHECK(text.find("$/a") != std::string::npos);
  CHECK(text.find("$/$") == std::string::npos);
  CHECK(parse_fsa(text) == gt);
}

TEST_CASE("labels section", "[fsa_io]") {
  auto a  = oracle::case_alphabet({"a"});
  auto fa = FsaAlphabet::one_var(a);
  Fsa  x  = all_words(fa);
  std::vector<Word> labels{Word{}};
  auto doc = parse_fsa_document(print_fsa(x, &labels));
  REQUIRE(doc.labels);
  CHECK(*doc.labels == labels);
  CHECK(doc.fsa == x);
}

TEST_CASE("hand-written one-variable machine", "[fsa_io]") {
  Fsa x = parse_fsa(
      "fsa\n"
      "alphabet: a A\n"
      "states: 2\n"
      "initial: 1\n"
      "accepting: 2\n"
      "transitions:\n"
      "1 a 2\n"
      "2 A 1\n"
      "end\n");
  CHECK(x.num_states() == 2);
  CHECK(x.alphabet().base().inverse(0) == 1);
  CHECK(accepts(x, Word{0, 1, 0}));
  CHECK_FALSE(accepts(x, Word{0, 1}));
}

TEST_CASE("malformed machines", "[fsa_io]") {
  CHECK_THROWS_AS(parse_fsa("fsa\nalphabet: a\nstates: 1\ninitial: 2\n"
                            "accepting:\ntransitions:\nend\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_fsa("fsa\nalphabet: a\nstates: 1\ninitial: 1\n"
                            "accepting:\ntransitions:\n1 q 1\nend\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_fsa("fsa\nalphabet: a\nstates: 1\ninitial: 1\n"
                            "accepting:\ntransitions:\n1 a 1\n1 a 1\nend\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_fsa("nonsense\n"), ParseError);
}
