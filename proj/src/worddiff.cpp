#include "autstruct/worddiff.hpp"

#include <set>

#include "autstruct/fsa_io.hpp"

namespace autstruct {

  ////////////////////////////////////////////////////////////////////////
  // WordDiffMachine
  ////////////////////////////////////////////////////////////////////////

  WordDiffMachine::WordDiffMachine(AlphabetPtr alphabet)
      : _pairs(FsaAlphabet::two_var(std::move(alphabet))) {
    add_state({});
  }

  std::optional<State> WordDiffMachine::find(
      std::span<Letter const> label) const {
    auto it = _index.find(Word(label.begin(), label.end()));
    if (it == _index.end()) {
      return std::nullopt;
    }
    State s = it->second;
    while (_parent[s] != s) {
      s = _parent[s];
    }
    return s;
  }

  State WordDiffMachine::find_root(State s) {
    while (_parent[s] != s) {
      _parent[s] = _parent[_parent[s]];
      s          = _parent[s];
    }
    return s;
  }

  State WordDiffMachine::add_state(Word label) {
    if (auto it = _index.find(label); it != _index.end()) {
      return find_root(it->second);
    }
    auto const id = static_cast<State>(_labels.size());
    _index.emplace(label, id);
    _labels.push_back(std::move(label));
    _parent.push_back(id);
    _trans.resize(_trans.size() + _pairs.size(), kNoState);
    return id;
  }

  void WordDiffMachine::add_transition(State s, Letter pair, State t) {
    s              = find_root(s);
    t              = find_root(t);
    State& current = _trans[std::size_t(s) * _pairs.size() + pair];
    if (current == kNoState) {
      current = t;
    } else if (find_root(current) != t) {
      _pending.emplace_back(current, t);
      merge_pending();
    }
  }

  void WordDiffMachine::merge_pending() {
    std::size_t const k = _pairs.size();
    while (!_pending.empty()) {
      auto [a, b] = _pending.back();
      _pending.pop_back();
      a = find_root(a);
      b = find_root(b);
      if (a == b) {
        continue;
      }
      State keep = shortlex_less(_labels[b], _labels[a]) ? b : a;
      State drop = keep == a ? b : a;
      _parent[drop] = keep;
      for (std::size_t l = 0; l < k; ++l) {
        State td = _trans[drop * k + l];
        if (td == kNoState) {
          continue;
        }
        State& tk = _trans[keep * k + l];
        if (tk == kNoState) {
          tk = td;
        } else if (find_root(tk) != find_root(td)) {
          _pending.emplace_back(tk, td);
        }
      }
    }
  }

  void WordDiffMachine::amalgamate(State i, State j) {
    if (i >= num_states() || j >= num_states()) {
      throw UsageError("amalgamate: state out of range");
    }
    _pending.emplace_back(i, j);
    merge_pending();
    remove_inaccessible();
  }

  void WordDiffMachine::remove_inaccessible() {
    std::size_t const  k    = _pairs.size();
    State const        root = find_root(0);
    std::vector<State> order{root};
    std::vector<State> newid(num_states(), kNoState);
    newid[root] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      State s = order[i];
      for (std::size_t l = 0; l < k; ++l) {
        State t = _trans[s * k + l];
        if (t == kNoState) {
          continue;
        }
        t = find_root(t);
        if (newid[t] == kNoState) {
          newid[t] = static_cast<State>(order.size());
          order.push_back(t);
        }
      }
    }
    std::vector<Word>  labels(order.size());
    std::vector<State> trans(order.size() * k, kNoState);
    for (std::size_t i = 0; i < order.size(); ++i) {
      State s   = order[i];
      labels[i] = std::move(_labels[s]);
      for (std::size_t l = 0; l < k; ++l) {
        State t = _trans[s * k + l];
        if (t != kNoState) {
          trans[i * k + l] = newid[find_root(t)];
        }
      }
    }
    _labels = std::move(labels);
    _trans  = std::move(trans);
    _parent.resize(_labels.size());
    _index.clear();
    for (State s = 0; s < _labels.size(); ++s) {
      _parent[s] = s;
      _index.emplace(_labels[s], s);
    }
  }

  std::size_t WordDiffMachine::num_transitions() const {
    return static_cast<std::size_t>(std::count_if(
        _trans.begin(), _trans.end(), [](State t) { return t != kNoState; }));
  }

  Fsa WordDiffMachine::to_fsa(std::span<Letter const> accept_label) const {
    auto accept = find(accept_label);
    if (!accept) {
      throw UsageError("to_fsa: '" + print_word(accept_label, alphabet())
                       + "' is not a state label");
    }
    std::size_t const k = _pairs.size();
    FsaBuilder        b(_pairs);
    b.add_states(num_states());
    b.set_initial(0);
    b.set_accepting(*accept);
    for (State s = 0; s < num_states(); ++s) {
      for (std::size_t l = 0; l < k; ++l) {
        if (State t = _trans[s * k + l]; t != kNoState) {
          b.add_edge(s, static_cast<Letter>(l), t);
        }
      }
    }
    return std::move(b).build();
  }

  std::string WordDiffMachine::serialize() const {
    return print_fsa(to_fsa(), &_labels);
  }

  WordDiffMachine WordDiffMachine::deserialize(std::string_view text) {
    FsaDocument doc = parse_fsa_document(text);
    if (!doc.labels) {
      throw ParseError("word-difference machine without 'labels:'");
    }
    Fsa const& x = doc.fsa;
    if (!x.alphabet().is_two_var() || x.num_states() == 0
        || x.initial() != 0 || !(*doc.labels)[0].empty()) {
      throw ParseError("word-difference machine must start at the empty label");
    }
    WordDiffMachine m(x.alphabet().base_ptr());
    for (State s = 1; s < x.num_states(); ++s) {
      if (m.add_state((*doc.labels)[s]) != s) {
        throw ParseError("repeated word-difference label");
      }
    }
    for (State s = 0; s < x.num_states(); ++s) {
      x.for_each_edge(s, [&](Letter a, State t) {
        m._trans[std::size_t(s) * m._pairs.size() + a] = t;
      });
    }
    return m;
  }

  ////////////////////////////////////////////////////////////////////////
  // Construction
  ////////////////////////////////////////////////////////////////////////

  namespace {
    // x^-1 d y, with padding acting as the empty word.
    Word conjugate(OrderedAlphabet const& a, Letter x, Word const& d, Letter y) {
      Word w;
      w.reserve(d.size() + 2);
      if (x != a.padding()) {
        w.push_back(a.inverse(x));
      }
      w.insert(w.end(), d.begin(), d.end());
      if (y != a.padding()) {
        w.push_back(y);
      }
      return w;
    }
  }  // namespace

  void add_difference_paths(WordDiffMachine&                         m,
                            std::vector<std::pair<Word, Word>> const& pairs,
                            Reducer const&                           reduce) {
    auto const&  a = m.alphabet();
    auto const&  fa = m.pair_alphabet();
    Letter const $ = a.padding();
    for (auto const& [u, v] : pairs) {
      State             d = 0;
      std::size_t const n = std::max(u.size(), v.size());
      for (std::size_t i = 0; i < n; ++i) {
        Letter x = i < u.size() ? u[i] : $;
        Letter y = i < v.size() ? v[i] : $;
        Word   label = m.label(d);
        State  t = m.add_state(reduce(conjugate(a, x, label, y)));
        m.add_transition(d, fa.pair(x, y), t);
        d = *m.find(m.label(t));
      }
      if (d != 0) {
        m.amalgamate(d, 0);
      }
    }
    m.remove_inaccessible();
  }

  WordDiffMachine harvest_d1(RuleSystem const& rules) {
    WordDiffMachine                    m(rules.alphabet_ptr());
    std::vector<std::pair<Word, Word>> pairs;
    for (auto& r : rules.rules()) {
      pairs.emplace_back(std::move(r.lhs), std::move(r.rhs));
    }
    add_difference_paths(
        m, pairs, [&rules](std::span<Letter const> w) { return rules.reduce(w); });
    return m;
  }

  WordDiffMachine build_d2(std::vector<Word> const& labels,
                           AlphabetPtr const&       alphabet,
                           Reducer const&           reduce,
                           bool                     equal_lengths_only) {
    auto const&  a = *alphabet;
    Letter const $ = a.padding();
    std::set<Word> candidates{Word{}};
    for (auto const& l : labels) {
      Word r = reduce(l);
      candidates.insert(reduce(invert_word(a, r)));
      candidates.insert(std::move(r));
    }
    for (Letter x = 0; x < a.size(); ++x) {
      candidates.insert(reduce(Word{x}));
    }
    WordDiffMachine m(alphabet);
    auto const&     fa = m.pair_alphabet();
    for (State s = 0; s < m.num_states(); ++s) {
      Word const label = m.label(s);
      for (Letter x = 0; x <= $; ++x) {
        for (Letter y = 0; y <= $; ++y) {
          if ((x == $ && y == $) || (equal_lengths_only && (x == $ || y == $))) {
            continue;
          }
          Word r = reduce(conjugate(a, x, label, y));
          if (candidates.count(r) != 0) {
            State t = m.add_state(std::move(r));
            m.add_transition(s, fa.pair(x, y), t);
          }
        }
      }
    }
    return m;
  }

  ////////////////////////////////////////////////////////////////////////
  // D1Reducer
  ////////////////////////////////////////////////////////////////////////

  D1Reducer::D1Reducer(Fsa d1) : _d1(std::move(d1)) {
    if (!_d1.alphabet().is_two_var()) {
      throw UsageError("D1Reducer: two-variable automaton required");
    }
    _stamp.assign(std::size_t(_d1.num_states()) * 6, 0);
    clear();
  }

  void D1Reducer::clear() {
    _word.clear();
    _input.clear();
    _layers.assign(1, {});
    if (_d1.num_states() > 0) {
      _layers[0].push_back(
          {_d1.initial(), 0, false, kRoot, _d1.alphabet().padding()});
    }
  }

  void D1Reducer::push_back(Letter x) {
    if (x >= _d1.alphabet().padding()) {
      throw UsageError("D1Reducer: letter out of range");
    }
    _input.push_back(x);
    while (!_input.empty()) {
      Letter a = _input.back();
      _input.pop_back();
      step(a);
    }
  }

  void D1Reducer::append(std::span<Letter const> w) {
    for (Letter x : w) {
      push_back(x);
    }
  }

  Word D1Reducer::reduce(std::span<Letter const> w) {
    clear();
    append(w);
    return _word;
  }

  void D1Reducer::step(Letter x) {
    auto const&  fa = _d1.alphabet();
    Letter const $  = fa.padding();
    std::vector<Node> next;
    if (_d1.num_states() > 0) {
      next.push_back({_d1.initial(), 0, false, kRoot, $});
    }
    if (++_clock == 0) {
      std::fill(_stamp.begin(), _stamp.end(), 0);
      _clock = 1;
    }
    auto key = [](State s, std::uint8_t cmp, bool ended) {
      return std::size_t(s) * 6 + cmp * 2 + (ended ? 1 : 0);
    };
    if (!next.empty()) {
      _stamp[key(next[0].state, 0, false)] = _clock;
    }
    auto const& prev = _layers.back();
    for (std::uint32_t i = 0; i < prev.size(); ++i) {
      Node const& n = prev[i];
      for (Letter y = 0; y <= $; ++y) {
        if (n.ended && y != $) {
          continue;
        }
        State t = _d1.target(n.state, fa.pair(x, y));
        if (t == kNoState) {
          continue;
        }
        bool         ended = n.ended || y == $;
        std::uint8_t cmp   = n.cmp;
        if (y != $ && cmp == 0) {
          cmp = x > y ? 1 : (x < y ? 2 : 0);
        }
        if (_d1.is_accepting(t) && (ended || cmp == 1)) {
          // Factor s = word[p..] x rewrites to t.
          Word                  t_word;
          if (y != $) {
            t_word.push_back(y);
          }
          std::size_t   layer = _layers.size() - 1;
          std::uint32_t idx   = i;
          while (_layers[layer][idx].prev != kRoot) {
            Node const& m = _layers[layer][idx];
            if (m.y != $) {
              t_word.push_back(m.y);
            }
            idx = m.prev;
            --layer;
          }
          std::size_t const p = layer;
          _word.resize(p);
          _layers.resize(p + 1);
          // t_word is reversed; pushing it as is makes t[0] next.
          _input.insert(_input.end(), t_word.begin(), t_word.end());
          return;
        }
        auto k = key(t, cmp, ended);
        if (_stamp[k] != _clock) {
          _stamp[k] = _clock;
          next.push_back({t, cmp, ended, i, y});
        }
      }
    }
    _word.push_back(x);
    _layers.push_back(std::move(next));
  }

  Word reduce_via_d1(Fsa const& d1, std::span<Letter const> w) {
    return D1Reducer(d1).reduce(w);
  }

}  // namespace autstruct
