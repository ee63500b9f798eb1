#ifndef AUTSTRUCT_WORDDIFF_HPP_
#define AUTSTRUCT_WORDDIFF_HPP_

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "autstruct/fsa.hpp"
#include "autstruct/rewrite.hpp"

namespace autstruct {

  using Reducer = std::function<Word(std::span<Letter const>)>;

  // Two-variable automaton whose states are labelled by group elements
  // (stored as their least known representatives).  A transition from a
  // state labelled d on (x, y) leads to the state labelled x^-1 d y.
  // State 0 is labelled by the empty word and is initial.
  class WordDiffMachine {
   public:
    explicit WordDiffMachine(AlphabetPtr alphabet);

    FsaAlphabet const& pair_alphabet() const noexcept {
      return _pairs;
    }
    OrderedAlphabet const& alphabet() const noexcept {
      return _pairs.base();
    }
    AlphabetPtr const& alphabet_ptr() const noexcept {
      return _pairs.base_ptr();
    }

    State num_states() const noexcept {
      return static_cast<State>(_labels.size());
    }
    Word const& label(State s) const {
      return _labels.at(s);
    }
    std::vector<Word> const& labels() const noexcept {
      return _labels;
    }
    std::optional<State> find(std::span<Letter const> label) const;

    // Returns the state with this label, adding it if absent.
    State add_state(Word label);
    State target(State s, Letter pair) const noexcept {
      return _trans[std::size_t(s) * _pairs.size() + pair];
    }
    // Sets a transition; a conflicting existing target is amalgamated
    // with the new one.
    void add_transition(State s, Letter pair, State t);

    // Merges states believed equal in the group, cascading through
    // transitions that then collide.  The surviving label is the short-lex
    // least one.  Inaccessible states are removed afterwards.
    void amalgamate(State i, State j);

    // Every state reachable from state 0.
    void remove_inaccessible();

    std::size_t num_transitions() const;

    // The automaton with accept state the one labelled accept_label.
    Fsa to_fsa(std::span<Letter const> accept_label = {}) const;

    std::string serialize() const;
    static WordDiffMachine deserialize(std::string_view text);

   private:
    void  merge_pending();
    State find_root(State s);

    FsaAlphabet                _pairs;
    std::vector<Word>          _labels;
    std::map<Word, State>      _index;
    std::vector<State>         _trans;
    std::vector<State>         _parent;
    std::vector<std::pair<State, State>> _pending;
  };

  // Word differences of the rules (u, v): d_0 = empty, d_i = reduce of
  // x_i^-1 d_{i-1} y_i where pad(u, v) = (x_1, y_1) ... (x_m, y_m).
  WordDiffMachine harvest_d1(RuleSystem const& rules);

  // Same recurrence over explicit equations u = v, using `reduce`.
  void add_difference_paths(WordDiffMachine&                         m,
                            std::vector<std::pair<Word, Word>> const& pairs,
                            Reducer const&                           reduce);

  // Machine on labels closed under inversion and containing every
  // generator and the empty word; x^-1 d y is a transition whenever its
  // reduction is a label.  Labels not accessible from the empty word are
  // dropped.  `equal_lengths_only` omits letters involving padding.
  WordDiffMachine build_d2(std::vector<Word> const& labels,
                           AlphabetPtr const&       alphabet,
                           Reducer const&           reduce,
                           bool                     equal_lengths_only = false);

  // Incremental rewriting with a word-difference machine: after each
  // appended letter the word is rewritten until no factor s admits t
  // short-lex smaller than s with pad(s, t) accepted.
  class D1Reducer {
   public:
    // d1 is a two-variable automaton (typically WordDiffMachine::to_fsa()).
    explicit D1Reducer(Fsa d1);

    void clear();
    void push_back(Letter x);
    void append(std::span<Letter const> w);
    Word const& word() const noexcept {
      return _word;
    }
    Word reduce(std::span<Letter const> w);

   private:
    struct Node {
      State         state;
      std::uint8_t  cmp;    // 0 equal so far, 1 s ahead, 2 t ahead
      bool          ended;  // t exhausted
      std::uint32_t prev;   // index in the previous layer, or kRoot
      Letter        y;      // letter of t read, padding if none
    };
    static constexpr std::uint32_t kRoot = 0xffffffff;

    void step(Letter x);

    Fsa                             _d1;
    Word                            _word;
    std::vector<std::vector<Node>>  _layers;
    std::vector<std::uint32_t>      _stamp;
    std::uint32_t                   _clock = 0;
    Word                            _input;
  };

  Word reduce_via_d1(Fsa const& d1, std::span<Letter const> w);

}  // namespace autstruct

#endif  // AUTSTRUCT_WORDDIFF_HPP_
