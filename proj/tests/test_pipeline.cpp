#include <catch_amalgamated.hpp>

#include <algorithm>

#include "autstruct/fsa2.hpp"
#include "autstruct/pipeline.hpp"
#include "support/oracles.hpp"

using namespace autstruct;

namespace {
  AutomaticStructure verified(std::string const& text) {
    auto r = run_pipeline(parse_presentation(text), PipelineConfig{});
    REQUIRE(std::holds_alternative<AutomaticStructure>(r));
    return std::get<AutomaticStructure>(std::move(r));
  }

  std::string const kFree2 = "generators: a b\n";
  std::string const kZ2    = "generators: a b\nrelators:\nabAB\n";
  std::string const kF26
      = "generators: a b c d e f\nrelators:\nabC, bcD, cdE, deF, efA, faB\n";

  // W = complement(A* E A*) with E the first projection of D1 restricted
  // to padded pairs (s, t) with s > t.
  Fsa literal_word_acceptor(Fsa const& d1) {
    auto const& base = d1.alphabet().base_ptr();
    Fsa const   rel  = intersect(intersect(d1, gt_automaton(base)), padding_filter(base));
    Fsa const   e    = exists(rel);
    Fsa const   any  = all_words(e.alphabet());
    return minimize(complement(concat(concat(any, e), any)));
  }

  // The postcondition suite on a verified structure, words up to max_len.
  void check_postconditions(AutomaticStructure const& s, Presentation const& p,
                            std::size_t max_len) {
    auto const& a      = *s.alphabet;
    auto const& m      = s.multipliers;
    Fsa const&  w      = s.word_acceptor;
    Fsa const   d1     = s.d1.to_fsa();
    for (Letter x = 0; x < a.size(); ++x) {
      CHECK(is_empty(intersect(w, complement(exists(m.by_letter[x])))));
    }
    CHECK(equal_languages(exists(m.equality), w));

    std::vector<Word> short_words;
    for_each_word(w, max_len + 1, [&](Word const& u) {
      short_words.push_back(u);
      return true;
    });
    for (auto const& u : short_words) {
      if (u.size() > max_len) {
        continue;
      }
      for (Letter x = 0; x < a.size(); ++x) {
        std::size_t partners = 0;
        Word        partner;
        for (auto const& v : short_words) {
          if (accepts_pair(m.by_letter[x], u, v)) {
            ++partners;
            partner = v;
          }
        }
        CHECK(partners == 1);
        Word ux = u;
        ux.push_back(x);
        CHECK(partner == reduce_via_d1(d1, ux));
      }
    }

    CompositeCache cache(m, Budget{});
    for (auto const& r : p.monoid_relators()) {
      CHECK(equal_languages(cache.get(r), m.equality));
    }
  }
}  // namespace

TEST_CASE("fused word-acceptor matches the literal construction", "[pipeline]") {
  for (auto const& text : {kFree2, kZ2, kF26}) {
    auto const s  = verified(text);
    Fsa const  d1 = s.d1.to_fsa();
    CHECK(make_word_acceptor(d1) == literal_word_acceptor(d1));
  }
  for (auto const& g : oracle::finite_groups()) {
    auto const s  = verified(g.presentation);
    Fsa const  d1 = s.d1.to_fsa();
    CHECK(make_word_acceptor(d1) == literal_word_acceptor(d1));
  }
}

TEST_CASE("finite groups: the word-acceptor accepts exactly the normal forms",
          "[pipeline]") {
  for (auto const& g : oracle::finite_groups()) {
    INFO(g.name);
    auto const p     = parse_presentation(g.presentation);
    auto const s     = verified(g.presentation);
    auto const group = oracle::make_group(g, s.alphabet);
    std::set<Word> expected;
    for (auto const& [perm, word] : group.normal_forms()) {
      expected.insert(word);
    }
    std::size_t longest = 0;
    for (auto const& u : expected) {
      longest = std::max(longest, u.size());
    }
    CHECK(oracle::language(s.word_acceptor, longest + 2) == expected);
    check_postconditions(s, p, 6);
  }
}

TEST_CASE("infinite groups: postconditions", "[pipeline]") {
  for (auto const& text : {kFree2, kZ2, kF26}) {
    INFO(text);
    auto const s = verified(text);
    check_postconditions(s, parse_presentation(text), text == kF26 ? 3 : 4);
  }
}

TEST_CASE("free group word-acceptor accepts the freely reduced words",
          "[pipeline]") {
  auto const s = verified(kFree2);
  CHECK(s.word_acceptor.num_states() == 5);
  for (auto const& u : oracle::words_upto(4, 6)) {
    CHECK(accepts(s.word_acceptor, u) == oracle::freely_reduced(*s.alphabet, u));
  }
}

TEST_CASE("multipliers reject a non-injective acceptor", "[pipeline]") {
  auto const  c4 = oracle::finite_groups()[3];
  auto const  s  = verified(c4.presentation);
  auto const  g  = oracle::make_group(c4, s.alphabet);
  auto const  r  = make_multipliers(all_words(s.word_acceptor.alphabet()), s.d2);
  REQUIRE(std::holds_alternative<WitnessFailure>(r));
  auto const& wf = std::get<WitnessFailure>(r);
  CHECK(wf.u != wf.v);
  CHECK(g.equal(wf.u, wf.v));
}

TEST_CASE("multiplier check reports missing differences", "[pipeline]") {
  auto const    s      = verified(kZ2);
  Reducer const reduce = make_reducer(s.d1.to_fsa());
  // Differences limited to the generators cannot track (u, ua) pairs such
  // as (b, ab).
  std::vector<Word> labels{Word{}};
  for (Letter x = 0; x < s.alphabet->size(); ++x) {
    labels.push_back(Word{x});
  }
  auto const d2 = build_d2(labels, s.alphabet, reduce);
  auto       built = make_multipliers(s.word_acceptor, d2);
  REQUIRE(std::holds_alternative<Multipliers>(built));
  auto const missing = check_multipliers(s.word_acceptor,
                                         std::get<Multipliers>(built), d2, reduce);
  REQUIRE(missing);
  CHECK_FALSE(missing->labels.empty());
  CHECK_FALSE(check_multipliers(s.word_acceptor, s.multipliers, s.d2, reduce));
}

TEST_CASE("axiom check finds a false relator", "[pipeline]") {
  auto const s = verified(oracle::finite_groups()[3].presentation);  // C4
  Word const a3{0, 0, 0}, a4{0, 0, 0, 0};
  CHECK_FALSE(axiom_check(s.multipliers, {a4}));
  auto const bad = axiom_check(s.multipliers, {a4, a3});
  REQUIRE(bad);
  CHECK(*bad == a3);
}

TEST_CASE("second-loop limit and state budget give diagnoses", "[pipeline]") {
  auto const p = parse_presentation(kF26);
  {
    // F(2,6) needs one return to Step 3.
    auto const ok = verified(kF26);
    REQUIRE(ok.report.loop2_count >= 1);
    PipelineConfig c;
    c.max_loop2 = 0;
    auto r = run_pipeline(p, c);
    REQUIRE(std::holds_alternative<Diagnosis>(r));
    CHECK(std::get<Diagnosis>(r).stage == "step 3");
    CHECK_FALSE(std::get<Diagnosis>(r).budget_exceeded);
  }
  {
    PipelineConfig c;
    c.budget.max_states = 5;
    c.max_loop1         = 1;
    auto r = run_pipeline(p, c);
    REQUIRE(std::holds_alternative<Diagnosis>(r));
    CHECK(std::get<Diagnosis>(r).budget_exceeded);
    CHECK(std::get<Diagnosis>(r).report.loop1_count == 2);
  }
}

TEST_CASE("checkpoints arrive in stage order and resume reproduces W",
          "[pipeline]") {
  auto const                     p = parse_presentation(kF26);
  std::vector<std::string>       stages;
  std::optional<WordDiffMachine> saved;
  PipelineConfig                 c;
  c.checkpoint = [&](std::string const& stage, PipelineState const& st) {
    stages.push_back(stage);
    if (stage == "d1") {
      saved = *st.d1;
    }
  };
  auto r = run_pipeline(p, c);
  REQUIRE(std::holds_alternative<AutomaticStructure>(r));
  auto const& s = std::get<AutomaticStructure>(r);
  REQUIRE(stages.size() >= 4);
  CHECK(stages[0] == "d1");
  CHECK(stages[1] == "wa");
  CHECK(stages[2] == "d2");
  CHECK(stages.back() == "mult");

  ResumePoint rp;
  rp.d1 = saved;
  auto again = run_pipeline(p, PipelineConfig{}, rp);
  REQUIRE(std::holds_alternative<AutomaticStructure>(again));
  auto const& t = std::get<AutomaticStructure>(again);
  CHECK(t.word_acceptor == s.word_acceptor);
  CHECK(t.report.events.front().rfind("step 1 skipped", 0) == 0);
}

TEST_CASE("building W from D2 after a restart still verifies", "[pipeline]") {
  PipelineConfig c;
  c.use_d2_for_d1 = true;
  auto r = run_pipeline(parse_presentation(kF26), c);
  REQUIRE(std::holds_alternative<AutomaticStructure>(r));
  CHECK(std::get<AutomaticStructure>(r).word_acceptor == verified(kF26).word_acceptor);
}

TEST_CASE("report lists the summary numbers", "[pipeline]") {
  auto const        s    = verified(kFree2);
  std::string const text = format_report(s.report, *s.alphabet);
  CHECK(text.find("stop reason: verified") != std::string::npos);
  CHECK(text.find("word-acceptor states: 5 (complete 6)") != std::string::npos);
  CHECK(text.find("mult_a:") != std::string::npos);
}
