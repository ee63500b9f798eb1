#ifndef AUTSTRUCT_PIPELINE_HPP_
#define AUTSTRUCT_PIPELINE_HPP_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "autstruct/fsa.hpp"
#include "autstruct/rewrite.hpp"
#include "autstruct/worddiff.hpp"

namespace autstruct {

  ////////////////////////////////////////////////////////////////////////
  // Individual steps
  ////////////////////////////////////////////////////////////////////////

  // Step 1: completion until the harvested difference machine is unchanged
  // over `threshold` consecutive checkpoints; returns that machine.
  WordDiffMachine complete_until_stable(RuleSystem&    rs,
                                        KbLimits const& limits,
                                        std::size_t     threshold,
                                        KbStatus*       status = nullptr);

  // Step 2: words with no factor s admitting t < s with pad(s, t) accepted
  // by the difference machine (accept label the empty word).
  Fsa make_word_acceptor(Fsa const& d1, Budget budget = {});

  // Two words accepted by W that are equal in the group.
  struct WitnessFailure {
    Word u;
    Word v;
  };

  struct Multipliers {
    Fsa              equality;
    std::vector<Fsa> by_letter;  // indexed by letter
    std::size_t      product_states = 0;
    // Labels of difference states on accepted paths of some multiplier.
    std::vector<Word> differences;
  };

  // Step 4: the product of W, W and the difference machine d2, with one
  // accept set per letter, each minimized.
  std::variant<Multipliers, WitnessFailure> make_multipliers(
      Fsa const& w, WordDiffMachine const& d2, Budget budget = {});

  struct MissingDifferences {
    std::vector<Word> labels;
    // Equations found when no new labels could explain a witness.
    std::vector<std::pair<Word, Word>> equations;
  };

  // Step 5: every W-word u has some partner under each multiplier.
  // Returns nothing when the check passes.
  std::optional<MissingDifferences> check_multipliers(
      Fsa const&               w,
      Multipliers const&       m,
      WordDiffMachine const&   d2,
      Reducer const&           reduce,
      std::size_t              witnesses_per_letter = 16);

  // Step 6: the composite of the multipliers along each monoid relator
  // must equal the equality multiplier.  Returns the first failing
  // relator.
  std::optional<Word> axiom_check(Multipliers const&       m,
                                  std::vector<Word> const& relators,
                                  Budget                   budget = {});

  // Two-variable machine for the word w built by balanced composition,
  // memoized across calls.
  class CompositeCache {
   public:
    CompositeCache(Multipliers const& m, Budget budget);
    Fsa const& get(Word const& w);

   private:
    Multipliers const*  _m;
    Budget              _budget;
    std::map<Word, Fsa> _memo;
  };

  ////////////////////////////////////////////////////////////////////////
  // Driver
  ////////////////////////////////////////////////////////////////////////

  struct PipelineState;

  struct PipelineConfig {
    KbLimits    kb;
    std::size_t max_loop1 = 5;    // returns to Step 1
    std::size_t max_loop2 = 100;  // returns to Step 3 per Step-1 attempt
    Budget      budget;
    // Build W from D2 instead of D1 after the first pass.
    bool        use_d2_for_d1 = false;
    std::size_t witnesses_per_letter = 16;
    // Extra checkpoints D1 must stay unchanged after a Step-1 return.
    std::size_t stability_increment = 1;
    // Receives one line per event.
    std::function<void(std::string const&)> log;
    // Called with each stage's name once its artifacts are available.
    std::function<void(std::string const&, PipelineState const&)> checkpoint;
  };

  struct StageTime {
    std::string stage;
    double      seconds;
  };

  struct PipelineReport {
    std::size_t              loop1_count = 0;
    std::size_t              loop2_count = 0;
    std::vector<std::size_t> d1_sizes;
    std::vector<std::size_t> d2_sizes;
    std::size_t              wa_states = 0;
    std::size_t              wa_complete_states = 0;  // with failure state
    std::size_t              product_states = 0;
    std::vector<std::size_t> multiplier_states;  // per letter, minimized
    std::vector<std::size_t> multiplier_complete_states;
    std::size_t              equality_states = 0;
    std::size_t              word_differences = 0;
    std::size_t              kb_rules = 0;
    std::string              kb_status;
    std::vector<StageTime>   timings;
    std::vector<std::string> events;
    std::string              stop_reason;
    double                   total_seconds = 0;
  };

  std::string format_report(PipelineReport const&  r,
                            OrderedAlphabet const& alphabet);

  struct AutomaticStructure {
    AlphabetPtr       alphabet;
    Fsa               word_acceptor;
    Multipliers       multipliers;
    WordDiffMachine   d1;
    WordDiffMachine   d2;
    bool              verified = false;
    PipelineReport    report;
  };

  struct Diagnosis {
    std::string    stage;
    std::string    message;
    bool           budget_exceeded = false;
    PipelineReport report;
  };

  // Intermediate artifacts passed to PipelineConfig::checkpoint.
  struct PipelineState {
    WordDiffMachine const*   d1 = nullptr;
    WordDiffMachine const*   d2 = nullptr;
    Fsa const*               word_acceptor = nullptr;
    Multipliers const*       multipliers = nullptr;
    PipelineReport const*    report = nullptr;
  };

  // Optional starting point: a saved D1 (and D2 labels) replaces Step 1
  // until the first return to it.
  struct ResumePoint {
    std::optional<WordDiffMachine> d1;
    std::vector<Word>              d2_labels;
  };

  std::variant<AutomaticStructure, Diagnosis> run_pipeline(
      Presentation const&   p,
      PipelineConfig const& config,
      ResumePoint const&    resume = {});

  // Reducer backed by a word-difference machine.
  Reducer make_reducer(Fsa const& d1);

}  // namespace autstruct

#endif  // AUTSTRUCT_PIPELINE_HPP_
