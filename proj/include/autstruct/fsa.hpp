#ifndef AUTSTRUCT_FSA_HPP_
#define AUTSTRUCT_FSA_HPP_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "autstruct/alphabet.hpp"
#include "autstruct/errors.hpp"

namespace autstruct {

  using State                    = std::uint32_t;
  inline constexpr State kNoState = std::numeric_limits<State>::max();

  // The input alphabet of an automaton: either the generators of an ordered
  // alphabet, or the padded pairs (A+$) x (A+$) minus ($,$).  Pair (i, j) is
  // encoded as i * (n + 1) + j where n = |A| and $ = n.
  class FsaAlphabet {
   public:
    static FsaAlphabet one_var(AlphabetPtr base);
    static FsaAlphabet two_var(AlphabetPtr base);

    std::size_t size() const noexcept {
      return _size;
    }
    bool is_two_var() const noexcept {
      return _two_var;
    }
    AlphabetPtr const& base_ptr() const noexcept {
      return _base;
    }
    OrderedAlphabet const& base() const noexcept {
      return *_base;
    }

    Letter padding() const noexcept {
      return _base->padding();
    }
    Letter pair(Letter x, Letter y) const noexcept {
      return x * (padding() + 1) + y;
    }
    Letter first(Letter a) const noexcept {
      return a / (padding() + 1);
    }
    Letter second(Letter a) const noexcept {
      return a % (padding() + 1);
    }

    std::string letter_name(Letter a) const;
    // Inverse of letter_name; throws ParseError on unknown tokens.
    Letter parse_letter(std::string_view token) const;

    bool operator==(FsaAlphabet const& that) const noexcept;

   private:
    FsaAlphabet(AlphabetPtr base, bool two_var);

    AlphabetPtr _base;
    bool        _two_var = false;
    std::size_t _size    = 0;
  };

  enum class Storage : std::uint8_t { automatic, dense, sparse };

  struct Edge {
    Letter letter;
    State  target;
  };

  // Per-call state budget for constructions that may blow up.
  struct Budget {
    std::size_t max_states = 20'000'000;
  };

  // Partial deterministic finite automaton.  States are 0 .. num_states()-1;
  // an automaton with no states has the empty language.  Transitions are
  // stored either as a dense table or as per-state sorted edge lists.
  class Fsa {
   public:
    Fsa(FsaAlphabet alphabet);  // empty language

    FsaAlphabet const& alphabet() const noexcept {
      return _alphabet;
    }
    State num_states() const noexcept {
      return static_cast<State>(_accepting.size());
    }
    State initial() const noexcept {
      return _initial;
    }
    bool is_accepting(State s) const noexcept {
      return _accepting[s];
    }
    std::vector<State> accepting_states() const;
    std::size_t        num_accepting() const;
    std::size_t        num_edges() const noexcept {
      return _num_edges;
    }
    Storage storage() const noexcept {
      return _storage;
    }

    State target(State s, Letter a) const noexcept {
      if (_storage == Storage::dense) {
        return _dense[static_cast<std::size_t>(s) * _alphabet.size() + a];
      }
      auto first = _edges.begin() + _offsets[s];
      auto last  = _edges.begin() + _offsets[s + 1];
      auto it    = std::lower_bound(
          first, last, a, [](Edge const& e, Letter x) { return e.letter < x; });
      return (it != last && it->letter == a) ? it->target : kNoState;
    }

    // Calls f(letter, target) for each defined transition of s, in letter
    // order.
    template <typename F>
    void for_each_edge(State s, F&& f) const {
      if (_storage == Storage::dense) {
        std::size_t const k   = _alphabet.size();
        State const*      row = _dense.data() + static_cast<std::size_t>(s) * k;
        for (std::size_t a = 0; a < k; ++a) {
          if (row[a] != kNoState) {
            f(static_cast<Letter>(a), row[a]);
          }
        }
      } else {
        for (auto i = _offsets[s]; i < _offsets[s + 1]; ++i) {
          f(_edges[i].letter, _edges[i].target);
        }
      }
    }

    // Same machine with a different accept set.
    Fsa with_accepting(std::vector<bool> accepting) const;
    Fsa with_storage(Storage storage) const;

    // Equal alphabets, states, initial state, accept states and transitions.
    bool operator==(Fsa const& that) const;

   private:
    friend class FsaBuilder;

    FsaAlphabet                _alphabet;
    State                      _initial = kNoState;
    std::vector<bool>          _accepting;
    Storage                    _storage   = Storage::sparse;
    std::size_t                _num_edges = 0;
    std::vector<State>         _dense;
    std::vector<std::uint64_t> _offsets{0};
    std::vector<Edge>          _edges;
  };

  // Accumulates states and transitions, then freezes them into an Fsa.
  class FsaBuilder {
   public:
    explicit FsaBuilder(FsaAlphabet alphabet);

    State add_state(bool accepting = false);
    void  add_states(State count);
    void  set_accepting(State s, bool accepting = true);
    void  set_initial(State s);
    // A second transition on the same (state, letter) is an error.
    void add_edge(State from, Letter a, State to);

    State num_states() const noexcept {
      return static_cast<State>(_accepting.size());
    }

    Fsa build(Storage storage = Storage::automatic) &&;

   private:
    struct FullEdge {
      State  from;
      Letter letter;
      State  to;
    };
    FsaAlphabet           _alphabet;
    State                 _initial = kNoState;
    std::vector<bool>     _accepting;
    std::vector<FullEdge> _edges;
  };

  // Storage chosen by Storage::automatic: dense when the table is small
  // and the alphabet narrow.
  Storage choose_storage(std::size_t num_states, std::size_t alphabet_size);

  // Nondeterministic automaton without epsilon moves.
  class Nfa {
   public:
    explicit Nfa(FsaAlphabet alphabet);

    FsaAlphabet const& alphabet() const noexcept {
      return _alphabet;
    }
    State add_state(bool accepting = false);
    void  add_initial(State s);
    void  set_accepting(State s, bool accepting = true);
    void  add_edge(State from, Letter a, State to);

    State num_states() const noexcept {
      return static_cast<State>(_accepting.size());
    }
    std::vector<State> const& initial() const noexcept {
      return _initial;
    }
    bool is_accepting(State s) const noexcept {
      return _accepting[s];
    }
    std::vector<Edge> const& edges(State s) const {
      return _out[s];
    }

   private:
    FsaAlphabet                    _alphabet;
    std::vector<State>             _initial;
    std::vector<bool>              _accepting;
    std::vector<std::vector<Edge>> _out;
  };

  ////////////////////////////////////////////////////////////////////////
  // Subset construction over an implicit nondeterministic machine
  ////////////////////////////////////////////////////////////////////////

  namespace detail {
    // Interned sorted node sets.
    class SubsetTable {
     public:
      SubsetTable();
      // Returns (id, inserted).
      std::pair<State, bool>          intern(std::vector<std::uint64_t> const& s);
      std::span<std::uint64_t const> get(State id) const {
        return {_pool.data() + _start[id], _start[id + 1] - _start[id]};
      }
      std::size_t size() const noexcept {
        return _start.size() - 1;
      }

     private:
      struct Hash {
        SubsetTable const* table;
        std::size_t        operator()(State id) const;
      };
      struct Eq {
        SubsetTable const* table;
        bool               operator()(State a, State b) const;
      };
      std::vector<std::uint64_t>          _pool;
      std::vector<std::size_t>            _start;
      std::unordered_set<State, Hash, Eq> _index;
    };
  }  // namespace detail

  // Deterministic automaton equivalent to the implicit machine whose nodes
  // are 64-bit ids.  `successors(node, out)` appends (letter, node) pairs;
  // `accepting(node)` classifies nodes.  Only reachable subsets are built;
  // the result is not minimized.
  template <typename Successors, typename Accepting>
  Fsa subset_construction(FsaAlphabet const&         alphabet,
                          std::vector<std::uint64_t> initial,
                          Successors&&               successors,
                          Accepting&&                accepting,
                          std::string_view           operation,
                          Budget                     budget = {}) {
    std::sort(initial.begin(), initial.end());
    initial.erase(std::unique(initial.begin(), initial.end()), initial.end());
    FsaBuilder builder(alphabet);
    if (initial.empty()) {
      return std::move(builder).build();
    }
    detail::SubsetTable                         table;
    std::vector<std::pair<Letter, std::uint64_t>> moves;
    std::vector<std::uint64_t>                  next;
    table.intern(initial);
    builder.add_state();
    builder.set_initial(0);
    for (State id = 0; id < table.size(); ++id) {
      moves.clear();
      bool accept = false;
      {
        auto members = table.get(id);
        for (std::size_t i = 0; i < members.size(); ++i) {
          std::uint64_t node = table.get(id)[i];
          accept             = accept || accepting(node);
          successors(node, moves);
        }
      }
      if (accept) {
        builder.set_accepting(id);
      }
      std::sort(moves.begin(), moves.end());
      moves.erase(std::unique(moves.begin(), moves.end()), moves.end());
      for (std::size_t i = 0; i < moves.size();) {
        Letter const a = moves[i].first;
        next.clear();
        for (; i < moves.size() && moves[i].first == a; ++i) {
          next.push_back(moves[i].second);
        }
        auto [target, inserted] = table.intern(next);
        if (inserted) {
          if (table.size() > budget.max_states) {
            throw BudgetExceeded(std::string(operation), budget.max_states);
          }
          builder.add_state();
        }
        builder.add_edge(id, a, target);
      }
    }
    return std::move(builder).build();
  }

  ////////////////////////////////////////////////////////////////////////
  // Operations
  ////////////////////////////////////////////////////////////////////////

  // Iterated transition; kNoState when undefined.
  State delta_star(Fsa const& x, State s, std::span<Letter const> w);
  bool  accepts(Fsa const& x, std::span<Letter const> w);

  // Removes states that are not accessible or not co-accessible.  State
  // order is preserved.
  Fsa  trim(Fsa const& x);
  bool is_trim(Fsa const& x);

  // Breadth-first renumbering from the initial state, letters in order.
  Fsa canonicalize(Fsa const& x);

  // Unique minimal trimmed partial automaton, canonically numbered.
  Fsa minimize(Fsa const& x);

  // States of the minimal complete automaton for a minimized x: one more
  // than x when some transition is missing (the failure state).
  std::size_t complete_size(Fsa const& x);

  Fsa determinize(Nfa const& n, Budget budget = {});

  // Boolean and regular operations; results are trimmed and minimized.
  Fsa intersect(Fsa const& x, Fsa const& y);
  Fsa unite(Fsa const& x, Fsa const& y);
  Fsa complement(Fsa const& x);
  Fsa concat(Fsa const& x, Fsa const& y, Budget budget = {});

  bool equal_languages(Fsa const& x, Fsa const& y);
  bool is_empty(Fsa const& x);

  Fsa empty_language(FsaAlphabet const& alphabet);
  Fsa all_words(FsaAlphabet const& alphabet);
  Fsa single_word(FsaAlphabet const& alphabet, std::span<Letter const> w);

  void require_same_alphabet(Fsa const& x, Fsa const& y, std::string_view op);

  // Calls f on the accepted words of length <= max_len in short-lex order
  // until it returns false.
  void for_each_word(Fsa const&                              x,
                     std::size_t                             max_len,
                     std::function<bool(Word const&)> const& f);

  // The first `count` accepted words in short-lex order, none longer than
  // max_len.
  std::vector<Word> shortlex_first(Fsa const& x,
                                   std::size_t count,
                                   std::size_t max_len);

}  // namespace autstruct

#endif  // AUTSTRUCT_FSA_HPP_
