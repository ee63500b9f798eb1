#include "autstruct/fsa.hpp"

#include <deque>
#include <numeric>
#include <unordered_map>

namespace autstruct {

  ////////////////////////////////////////////////////////////////////////
  // FsaAlphabet
  ////////////////////////////////////////////////////////////////////////

  FsaAlphabet::FsaAlphabet(AlphabetPtr base, bool two_var)
      : _base(std::move(base)), _two_var(two_var) {
    if (!_base) {
      throw UsageError("FsaAlphabet: null base alphabet");
    }
    std::size_t const n = _base->size();
    _size               = _two_var ? (n + 1) * (n + 1) - 1 : n;
  }

  FsaAlphabet FsaAlphabet::one_var(AlphabetPtr base) {
    return FsaAlphabet(std::move(base), false);
  }

  FsaAlphabet FsaAlphabet::two_var(AlphabetPtr base) {
    return FsaAlphabet(std::move(base), true);
  }

  std::string FsaAlphabet::letter_name(Letter a) const {
    if (a >= _size) {
      throw UsageError("letter " + std::to_string(a) + " out of range");
    }
    if (!_two_var) {
      return _base->name(a);
    }
    auto side = [this](Letter x) {
      return x == padding() ? std::string("$") : _base->name(x);
    };
    return side(first(a)) + "/" + side(second(a));
  }

  Letter FsaAlphabet::parse_letter(std::string_view token) const {
    auto side = [this, token](std::string_view s) -> Letter {
      if (s == "$") {
        return padding();
      }
      if (auto x = _base->find(s)) {
        return *x;
      }
      throw ParseError("unknown letter '" + std::string(token) + "'");
    };
    if (!_two_var) {
      if (token == "$") {
        throw ParseError("'$' is not a letter of a one-variable alphabet");
      }
      return side(token);
    }
    auto slash = token.find('/');
    if (slash == std::string_view::npos) {
      throw ParseError("expected pair letter x/y, got '" + std::string(token)
                       + "'");
    }
    Letter x = side(token.substr(0, slash));
    Letter y = side(token.substr(slash + 1));
    if (x == padding() && y == padding()) {
      throw ParseError("'$/$' is not a letter");
    }
    return pair(x, y);
  }

  bool FsaAlphabet::operator==(FsaAlphabet const& that) const noexcept {
    return _two_var == that._two_var
           && (_base == that._base || *_base == *that._base);
  }

  void require_same_alphabet(Fsa const& x, Fsa const& y, std::string_view op) {
    if (!(x.alphabet() == y.alphabet())) {
      throw UsageError(std::string(op) + ": alphabet mismatch");
    }
  }

  ////////////////////////////////////////////////////////////////////////
  // Fsa
  ////////////////////////////////////////////////////////////////////////

  Fsa::Fsa(FsaAlphabet alphabet) : _alphabet(std::move(alphabet)) {}

  std::vector<State> Fsa::accepting_states() const {
    std::vector<State> out;
    for (State s = 0; s < num_states(); ++s) {
      if (_accepting[s]) {
        out.push_back(s);
      }
    }
    return out;
  }

  std::size_t Fsa::num_accepting() const {
    return static_cast<std::size_t>(
        std::count(_accepting.begin(), _accepting.end(), true));
  }

  Fsa Fsa::with_accepting(std::vector<bool> accepting) const {
    if (accepting.size() != _accepting.size()) {
      throw UsageError("with_accepting: wrong number of states");
    }
    Fsa out        = *this;
    out._accepting = std::move(accepting);
    return out;
  }

  Fsa Fsa::with_storage(Storage storage) const {
    FsaBuilder b(_alphabet);
    b.add_states(num_states());
    for (State s = 0; s < num_states(); ++s) {
      b.set_accepting(s, _accepting[s]);
      for_each_edge(s, [&](Letter a, State t) { b.add_edge(s, a, t); });
    }
    if (_initial != kNoState) {
      b.set_initial(_initial);
    }
    return std::move(b).build(storage);
  }

  bool Fsa::operator==(Fsa const& that) const {
    if (!(_alphabet == that._alphabet) || num_states() != that.num_states()
        || _initial != that._initial || _accepting != that._accepting
        || _num_edges != that._num_edges) {
      return false;
    }
    for (State s = 0; s < num_states(); ++s) {
      std::vector<Edge> mine, theirs;
      for_each_edge(s, [&](Letter a, State t) { mine.push_back({a, t}); });
      that.for_each_edge(s,
                         [&](Letter a, State t) { theirs.push_back({a, t}); });
      if (mine.size() != theirs.size()
          || !std::equal(mine.begin(),
                         mine.end(),
                         theirs.begin(),
                         [](Edge const& p, Edge const& q) {
                           return p.letter == q.letter && p.target == q.target;
                         })) {
        return false;
      }
    }
    return true;
  }

  Storage choose_storage(std::size_t num_states, std::size_t alphabet_size) {
    constexpr std::size_t kMaxDenseAlphabet = 64;
    constexpr std::size_t kMaxDenseEntries  = std::size_t(1) << 24;
    if (alphabet_size <= kMaxDenseAlphabet
        && num_states * alphabet_size <= kMaxDenseEntries) {
      return Storage::dense;
    }
    return Storage::sparse;
  }

  ////////////////////////////////////////////////////////////////////////
  // FsaBuilder
  ////////////////////////////////////////////////////////////////////////

  FsaBuilder::FsaBuilder(FsaAlphabet alphabet) : _alphabet(std::move(alphabet)) {}

  State FsaBuilder::add_state(bool accepting) {
    _accepting.push_back(accepting);
    return static_cast<State>(_accepting.size() - 1);
  }

  void FsaBuilder::add_states(State count) {
    _accepting.resize(_accepting.size() + count, false);
  }

  void FsaBuilder::set_accepting(State s, bool accepting) {
    if (s >= _accepting.size()) {
      throw UsageError("FsaBuilder: state out of range");
    }
    _accepting[s] = accepting;
  }

  void FsaBuilder::set_initial(State s) {
    if (s >= _accepting.size()) {
      throw UsageError("FsaBuilder: initial state out of range");
    }
    _initial = s;
  }

  void FsaBuilder::add_edge(State from, Letter a, State to) {
    if (from >= _accepting.size() || to >= _accepting.size()
        || a >= _alphabet.size()) {
      throw UsageError("FsaBuilder: transition out of range");
    }
    _edges.push_back({from, a, to});
  }

  Fsa FsaBuilder::build(Storage storage) && {
    Fsa out(_alphabet);
    State const n = static_cast<State>(_accepting.size());
    if (n > 0 && _initial == kNoState) {
      throw UsageError("FsaBuilder: no initial state");
    }
    out._initial   = n == 0 ? kNoState : _initial;
    out._accepting = std::move(_accepting);
    if (storage == Storage::automatic) {
      storage = choose_storage(n, _alphabet.size());
    }
    out._storage = storage;

    std::vector<std::uint64_t> offsets(n + 1, 0);
    for (auto const& e : _edges) {
      ++offsets[e.from + 1];
    }
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    std::vector<Edge>          edges(_edges.size());
    std::vector<std::uint64_t> fill(offsets.begin(), offsets.end() - 1);
    for (auto const& e : _edges) {
      edges[fill[e.from]++] = {e.letter, e.to};
    }
    _edges.clear();
    _edges.shrink_to_fit();
    for (State s = 0; s < n; ++s) {
      auto first = edges.begin() + offsets[s];
      auto last  = edges.begin() + offsets[s + 1];
      std::sort(first, last, [](Edge const& p, Edge const& q) {
        return p.letter < q.letter;
      });
      if (std::adjacent_find(first,
                             last,
                             [](Edge const& p, Edge const& q) {
                               return p.letter == q.letter;
                             })
          != last) {
        throw UsageError("FsaBuilder: nondeterministic transition from state "
                         + std::to_string(s));
      }
    }
    out._num_edges = edges.size();
    if (storage == Storage::dense) {
      std::size_t const k = _alphabet.size();
      out._dense.assign(static_cast<std::size_t>(n) * k, kNoState);
      for (State s = 0; s < n; ++s) {
        for (auto i = offsets[s]; i < offsets[s + 1]; ++i) {
          out._dense[static_cast<std::size_t>(s) * k + edges[i].letter]
              = edges[i].target;
        }
      }
      out._offsets = {0};
    } else {
      out._offsets = std::move(offsets);
      out._edges   = std::move(edges);
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Nfa
  ////////////////////////////////////////////////////////////////////////

  Nfa::Nfa(FsaAlphabet alphabet) : _alphabet(std::move(alphabet)) {}

  State Nfa::add_state(bool accepting) {
    _accepting.push_back(accepting);
    _out.emplace_back();
    return static_cast<State>(_accepting.size() - 1);
  }

  void Nfa::add_initial(State s) {
    if (s >= num_states()) {
      throw UsageError("Nfa: initial state out of range");
    }
    _initial.push_back(s);
  }

  void Nfa::set_accepting(State s, bool accepting) {
    _accepting.at(s) = accepting;
  }

  void Nfa::add_edge(State from, Letter a, State to) {
    if (from >= num_states() || to >= num_states() || a >= _alphabet.size()) {
      throw UsageError("Nfa: transition out of range");
    }
    _out[from].push_back({a, to});
  }

  namespace detail {
    SubsetTable::SubsetTable()
        : _start{0}, _index(16, Hash{this}, Eq{this}) {}

    std::size_t SubsetTable::Hash::operator()(State id) const {
      auto        s = table->get(id);
      std::size_t h = s.size();
      for (auto x : s) {
        h ^= std::hash<std::uint64_t>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6)
             + (h >> 2);
      }
      return h;
    }

    bool SubsetTable::Eq::operator()(State a, State b) const {
      auto p = table->get(a);
      auto q = table->get(b);
      return p.size() == q.size() && std::equal(p.begin(), p.end(), q.begin());
    }

    std::pair<State, bool> SubsetTable::intern(
        std::vector<std::uint64_t> const& s) {
      auto const id = static_cast<State>(size());
      _pool.insert(_pool.end(), s.begin(), s.end());
      _start.push_back(_pool.size());
      auto [it, inserted] = _index.insert(id);
      if (!inserted) {
        _pool.resize(_start[id]);
        _start.pop_back();
        return {*it, false};
      }
      return {id, true};
    }
  }  // namespace detail

  Fsa determinize(Nfa const& n, Budget budget) {
    std::vector<std::uint64_t> initial(n.initial().begin(), n.initial().end());
    return subset_construction(
        n.alphabet(),
        std::move(initial),
        [&n](std::uint64_t node, auto& out) {
          for (auto const& e : n.edges(static_cast<State>(node))) {
            out.emplace_back(e.letter, e.target);
          }
        },
        [&n](std::uint64_t node) {
          return n.is_accepting(static_cast<State>(node));
        },
        "determinize",
        budget);
  }

  ////////////////////////////////////////////////////////////////////////
  // Basic queries
  ////////////////////////////////////////////////////////////////////////

  State delta_star(Fsa const& x, State s, std::span<Letter const> w) {
    for (Letter a : w) {
      if (s == kNoState) {
        return kNoState;
      }
      if (a >= x.alphabet().size()) {
        throw UsageError("delta_star: letter out of range");
      }
      s = x.target(s, a);
    }
    return s;
  }

  bool accepts(Fsa const& x, std::span<Letter const> w) {
    if (x.num_states() == 0) {
      return false;
    }
    State s = delta_star(x, x.initial(), w);
    return s != kNoState && x.is_accepting(s);
  }

  namespace {
    // Accessible and co-accessible flags.
    std::vector<bool> useful_states(Fsa const& x) {
      State const       n = x.num_states();
      std::vector<bool> reach(n, false), coreach(n, false);
      if (n == 0) {
        return reach;
      }
      std::vector<State> stack{x.initial()};
      reach[x.initial()] = true;
      while (!stack.empty()) {
        State s = stack.back();
        stack.pop_back();
        x.for_each_edge(s, [&](Letter, State t) {
          if (!reach[t]) {
            reach[t] = true;
            stack.push_back(t);
          }
        });
      }
      std::vector<std::uint64_t> offsets(n + 1, 0);
      for (State s = 0; s < n; ++s) {
        x.for_each_edge(s, [&](Letter, State t) { ++offsets[t + 1]; });
      }
      std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
      std::vector<State>         preds(offsets[n]);
      std::vector<std::uint64_t> fill(offsets.begin(), offsets.end() - 1);
      for (State s = 0; s < n; ++s) {
        x.for_each_edge(s, [&](Letter, State t) { preds[fill[t]++] = s; });
      }
      for (State s = 0; s < n; ++s) {
        if (x.is_accepting(s)) {
          coreach[s] = true;
          stack.push_back(s);
        }
      }
      while (!stack.empty()) {
        State t = stack.back();
        stack.pop_back();
        for (auto i = offsets[t]; i < offsets[t + 1]; ++i) {
          if (!coreach[preds[i]]) {
            coreach[preds[i]] = true;
            stack.push_back(preds[i]);
          }
        }
      }
      for (State s = 0; s < n; ++s) {
        reach[s] = reach[s] && coreach[s];
      }
      return reach;
    }

    // Restricts x to the states with keep[s], renumbering by `order` (a
    // permutation listing kept states in their new order).
    Fsa renumber(Fsa const& x, std::vector<State> const& order) {
      std::vector<State> newid(x.num_states(), kNoState);
      for (State i = 0; i < order.size(); ++i) {
        newid[order[i]] = i;
      }
      FsaBuilder b(x.alphabet());
      if (order.empty() || newid[x.initial()] == kNoState) {
        return std::move(b).build();
      }
      b.add_states(static_cast<State>(order.size()));
      for (State i = 0; i < order.size(); ++i) {
        State s = order[i];
        b.set_accepting(i, x.is_accepting(s));
        x.for_each_edge(s, [&](Letter a, State t) {
          if (newid[t] != kNoState) {
            b.add_edge(i, a, newid[t]);
          }
        });
      }
      b.set_initial(newid[x.initial()]);
      return std::move(b).build();
    }
  }  // namespace

  Fsa trim(Fsa const& x) {
    auto const         keep = useful_states(x);
    std::vector<State> order;
    for (State s = 0; s < x.num_states(); ++s) {
      if (keep[s]) {
        order.push_back(s);
      }
    }
    if (order.empty() || !keep[x.initial()]) {
      return empty_language(x.alphabet());
    }
    return renumber(x, order);
  }

  bool is_trim(Fsa const& x) {
    auto const keep = useful_states(x);
    return std::all_of(keep.begin(), keep.end(), [](bool b) { return b; });
  }

  Fsa canonicalize(Fsa const& x) {
    if (x.num_states() == 0) {
      return x;
    }
    std::vector<State> order{x.initial()};
    std::vector<bool>  seen(x.num_states(), false);
    seen[x.initial()] = true;
    for (std::size_t i = 0; i < order.size(); ++i) {
      x.for_each_edge(order[i], [&](Letter, State t) {
        if (!seen[t]) {
          seen[t] = true;
          order.push_back(t);
        }
      });
    }
    return renumber(x, order);
  }

  ////////////////////////////////////////////////////////////////////////
  // Minimization: partition refinement for partial DFAs (Valmari and
  // Lehtinen), O(m log n) on m transitions.
  ////////////////////////////////////////////////////////////////////////

  namespace {
    class RefinablePartition {
     public:
      explicit RefinablePartition(std::size_t n)
          : elems(n), loc(n), set_of(n, 0), first(n + 1), past(n + 1) {
        std::iota(elems.begin(), elems.end(), 0);
        std::iota(loc.begin(), loc.end(), 0);
        count = n > 0 ? 1 : 0;
        if (count) {
          first[0] = 0;
          past[0]  = n;
        }
      }

      // marked and touched are shared scratch arrays of size >= max sets.
      void mark(std::size_t e,
                std::vector<std::size_t>& marked,
                std::vector<std::size_t>& touched,
                std::size_t&              ntouched) {
        std::size_t s = set_of[e], i = loc[e], j = first[s] + marked[s];
        elems[i]       = elems[j];
        loc[elems[i]]  = i;
        elems[j]       = e;
        loc[e]         = j;
        if (marked[s]++ == 0) {
          touched[ntouched++] = s;
        }
      }

      void split(std::vector<std::size_t>& marked,
                 std::vector<std::size_t>& touched,
                 std::size_t&              ntouched) {
        while (ntouched) {
          std::size_t s = touched[--ntouched], j = first[s] + marked[s];
          if (j == past[s]) {
            marked[s] = 0;
            continue;
          }
          if (marked[s] <= past[s] - j) {
            first[count] = first[s];
            past[count]  = first[s] = j;
          } else {
            past[count]  = past[s];
            first[count] = past[s] = j;
          }
          for (std::size_t i = first[count]; i < past[count]; ++i) {
            set_of[elems[i]] = count;
          }
          marked[s] = marked[count++] = 0;
        }
      }

      std::vector<std::size_t> elems, loc, set_of, first, past;
      std::size_t              count = 0;
    };
  }  // namespace

  std::size_t complete_size(Fsa const& x) {
    std::size_t const full = std::size_t(x.num_states()) * x.alphabet().size();
    return x.num_states() + (x.num_edges() == full && full > 0 ? 0 : 1);
  }

  Fsa minimize(Fsa const& input) {
    Fsa const   x = trim(input);
    State const n = x.num_states();
    if (n == 0) {
      return x;
    }
    std::vector<State>  tail, head;
    std::vector<Letter> label;
    tail.reserve(x.num_edges());
    for (State s = 0; s < n; ++s) {
      x.for_each_edge(s, [&](Letter a, State t) {
        tail.push_back(s);
        label.push_back(a);
        head.push_back(t);
      });
    }
    std::size_t const m = tail.size();

    std::size_t const        scratch = std::max<std::size_t>(n, m) + 1;
    std::vector<std::size_t> marked(scratch, 0), touched(scratch, 0);
    std::size_t              ntouched = 0;

    RefinablePartition blocks(n);
    for (State s = 0; s < n; ++s) {
      if (x.is_accepting(s)) {
        blocks.mark(s, marked, touched, ntouched);
      }
    }
    blocks.split(marked, touched, ntouched);

    RefinablePartition cords(m);
    if (m > 0) {
      std::sort(cords.elems.begin(),
                cords.elems.end(),
                [&](std::size_t p, std::size_t q) {
                  return label[p] < label[q];
                });
      cords.count = marked[0] = 0;
      Letter a                = label[cords.elems[0]];
      for (std::size_t i = 0; i < m; ++i) {
        std::size_t t = cords.elems[i];
        if (label[t] != a) {
          a                         = label[t];
          cords.past[cords.count++] = i;
          cords.first[cords.count]  = i;
          marked[cords.count]       = 0;
        }
        cords.set_of[t] = cords.count;
        cords.loc[t]    = i;
      }
      cords.past[cords.count++] = m;
    }

    // Incoming transitions per state.
    std::vector<std::size_t> in_first(n + 1, 0), in_list(m);
    for (std::size_t t = 0; t < m; ++t) {
      ++in_first[head[t]];
    }
    for (State q = 0; q < n; ++q) {
      in_first[q + 1] += in_first[q];
    }
    for (std::size_t t = m; t-- > 0;) {
      in_list[--in_first[head[t]]] = t;
    }

    std::size_t b = 1, c = 0;
    while (c < cords.count) {
      for (std::size_t i = cords.first[c]; i < cords.past[c]; ++i) {
        blocks.mark(tail[cords.elems[i]], marked, touched, ntouched);
      }
      blocks.split(marked, touched, ntouched);
      ++c;
      while (b < blocks.count) {
        for (std::size_t i = blocks.first[b]; i < blocks.past[b]; ++i) {
          std::size_t q = blocks.elems[i];
          for (std::size_t j = in_first[q]; j < in_first[q + 1]; ++j) {
            cords.mark(in_list[j], marked, touched, ntouched);
          }
        }
        cords.split(marked, touched, ntouched);
        ++b;
      }
    }

    FsaBuilder builder(x.alphabet());
    builder.add_states(static_cast<State>(blocks.count));
    for (State s = 0; s < n; ++s) {
      if (x.is_accepting(s)) {
        builder.set_accepting(static_cast<State>(blocks.set_of[s]));
      }
    }
    for (std::size_t t = 0; t < m; ++t) {
      std::size_t const blk = blocks.set_of[tail[t]];
      if (blocks.elems[blocks.first[blk]] == tail[t]) {
        builder.add_edge(static_cast<State>(blk),
                         label[t],
                         static_cast<State>(blocks.set_of[head[t]]));
      }
    }
    builder.set_initial(static_cast<State>(blocks.set_of[x.initial()]));
    return canonicalize(std::move(builder).build());
  }

  ////////////////////////////////////////////////////////////////////////
  // Boolean and regular operations
  ////////////////////////////////////////////////////////////////////////

  namespace {
    // Product over reachable pairs.  Missing components are kNoState when
    // `partial` is set (used by union).
    template <typename Accept>
    Fsa product(Fsa const& x, Fsa const& y, bool partial, Accept&& accept) {
      FsaBuilder                              b(x.alphabet());
      std::unordered_map<std::uint64_t, State> ids;
      std::vector<std::pair<State, State>>    pairs;
      auto key = [](State p, State q) {
        return (static_cast<std::uint64_t>(p) << 32) | q;
      };
      auto intern = [&](State p, State q) {
        auto [it, inserted] = ids.emplace(key(p, q), b.num_states());
        if (inserted) {
          bool acc = accept(p == kNoState ? false : x.is_accepting(p),
                            q == kNoState ? false : y.is_accepting(q));
          b.add_state(acc);
          pairs.emplace_back(p, q);
        }
        return it->second;
      };
      State const x0 = x.num_states() ? x.initial() : kNoState;
      State const y0 = y.num_states() ? y.initial() : kNoState;
      if ((!partial && (x0 == kNoState || y0 == kNoState))
          || (x0 == kNoState && y0 == kNoState)) {
        return empty_language(x.alphabet());
      }
      b.set_initial(intern(x0, y0));
      std::vector<Edge> ex, ey;
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [p, q] = pairs[i];
        ex.clear();
        ey.clear();
        if (p != kNoState) {
          x.for_each_edge(p, [&](Letter a, State t) { ex.push_back({a, t}); });
        }
        if (q != kNoState) {
          y.for_each_edge(q, [&](Letter a, State t) { ey.push_back({a, t}); });
        }
        std::size_t ix = 0, iy = 0;
        while (ix < ex.size() || iy < ey.size()) {
          Letter ax = ix < ex.size() ? ex[ix].letter : kNoState;
          Letter ay = iy < ey.size() ? ey[iy].letter : kNoState;
          if (ax == ay) {
            b.add_edge(static_cast<State>(i), ax, intern(ex[ix].target, ey[iy].target));
            ++ix;
            ++iy;
          } else if (ax < ay) {
            if (partial) {
              b.add_edge(static_cast<State>(i), ax, intern(ex[ix].target, kNoState));
            }
            ++ix;
          } else {
            if (partial) {
              b.add_edge(static_cast<State>(i), ay, intern(kNoState, ey[iy].target));
            }
            ++iy;
          }
        }
      }
      return std::move(b).build();
    }
  }  // namespace

  Fsa intersect(Fsa const& x, Fsa const& y) {
    require_same_alphabet(x, y, "intersect");
    return minimize(product(x, y, false, [](bool p, bool q) { return p && q; }));
  }

  Fsa unite(Fsa const& x, Fsa const& y) {
    require_same_alphabet(x, y, "unite");
    return minimize(product(x, y, true, [](bool p, bool q) { return p || q; }));
  }

  Fsa complement(Fsa const& x) {
    std::size_t const k    = x.alphabet().size();
    State const       n    = x.num_states();
    State const       sink = n;
    FsaBuilder        b(x.alphabet());
    b.add_states(n + 1);
    b.set_accepting(sink, true);
    for (Letter a = 0; a < k; ++a) {
      b.add_edge(sink, a, sink);
    }
    for (State s = 0; s < n; ++s) {
      b.set_accepting(s, !x.is_accepting(s));
      Letter next = 0;
      x.for_each_edge(s, [&](Letter a, State t) {
        for (; next < a; ++next) {
          b.add_edge(s, next, sink);
        }
        b.add_edge(s, a, t);
        next = a + 1;
      });
      for (; next < k; ++next) {
        b.add_edge(s, next, sink);
      }
    }
    b.set_initial(n == 0 ? sink : x.initial());
    return minimize(std::move(b).build());
  }

  Fsa concat(Fsa const& x, Fsa const& y, Budget budget) {
    require_same_alphabet(x, y, "concat");
    if (x.num_states() == 0 || y.num_states() == 0) {
      return empty_language(x.alphabet());
    }
    Nfa         n(x.alphabet());
    State const nx = x.num_states();
    for (State s = 0; s < nx; ++s) {
      n.add_state(false);
    }
    for (State s = 0; s < y.num_states(); ++s) {
      n.add_state(y.is_accepting(s));
    }
    State const y0 = nx + y.initial();
    n.add_initial(x.initial());
    if (x.is_accepting(x.initial())) {
      n.add_initial(y0);
    }
    for (State s = 0; s < nx; ++s) {
      x.for_each_edge(s, [&](Letter a, State t) {
        n.add_edge(s, a, t);
        if (x.is_accepting(t)) {
          n.add_edge(s, a, y0);
        }
      });
    }
    for (State s = 0; s < y.num_states(); ++s) {
      y.for_each_edge(s, [&](Letter a, State t) { n.add_edge(nx + s, a, nx + t); });
    }
    return minimize(determinize(n, budget));
  }

  bool is_empty(Fsa const& x) {
    if (x.num_states() == 0) {
      return true;
    }
    std::vector<bool>  seen(x.num_states(), false);
    std::vector<State> stack{x.initial()};
    seen[x.initial()] = true;
    while (!stack.empty()) {
      State s = stack.back();
      stack.pop_back();
      if (x.is_accepting(s)) {
        return false;
      }
      x.for_each_edge(s, [&](Letter, State t) {
        if (!seen[t]) {
          seen[t] = true;
          stack.push_back(t);
        }
      });
    }
    return true;
  }

  bool equal_languages(Fsa const& x, Fsa const& y) {
    require_same_alphabet(x, y, "equal_languages");
    return minimize(x) == minimize(y);
  }

  Fsa empty_language(FsaAlphabet const& alphabet) {
    return Fsa(alphabet);
  }

  Fsa all_words(FsaAlphabet const& alphabet) {
    FsaBuilder b(alphabet);
    b.add_state(true);
    b.set_initial(0);
    for (Letter a = 0; a < alphabet.size(); ++a) {
      b.add_edge(0, a, 0);
    }
    return std::move(b).build();
  }

  Fsa single_word(FsaAlphabet const& alphabet, std::span<Letter const> w) {
    FsaBuilder b(alphabet);
    b.add_states(static_cast<State>(w.size() + 1));
    b.set_initial(0);
    b.set_accepting(static_cast<State>(w.size()));
    for (std::size_t i = 0; i < w.size(); ++i) {
      b.add_edge(static_cast<State>(i), w[i], static_cast<State>(i + 1));
    }
    return std::move(b).build();
  }

  void for_each_word(Fsa const&                              x,
                     std::size_t                             max_len,
                     std::function<bool(Word const&)> const& f) {
    Fsa const t = trim(x);
    State const n = t.num_states();
    if (n == 0) {
      return;
    }
    // finish[k][s]: some path of exactly k letters leads from s to an
    // accept state.
    std::vector<std::vector<bool>> finish{std::vector<bool>(n)};
    for (State s = 0; s < n; ++s) {
      finish[0][s] = t.is_accepting(s);
    }
    auto extend = [&]() {
      auto const&       prev = finish.back();
      std::vector<bool> next(n, false);
      bool              any = false;
      for (State s = 0; s < n; ++s) {
        t.for_each_edge(s, [&](Letter, State u) {
          if (prev[u]) {
            next[s] = true;
          }
        });
        any = any || next[s];
      }
      finish.push_back(std::move(next));
      return any;
    };
    Word word;
    // Depth-first in letter order with `left` letters still to place.
    std::function<bool(State, std::size_t)> walk = [&](State s, std::size_t left) {
      if (left == 0) {
        return f(word);
      }
      bool go_on = true;
      t.for_each_edge(s, [&](Letter a, State u) {
        if (go_on && finish[left - 1][u]) {
          word.push_back(a);
          go_on = walk(u, left - 1);
          word.pop_back();
        }
      });
      return go_on;
    };
    for (std::size_t len = 0; len <= max_len; ++len) {
      if (len > 0 && !extend()) {
        return;
      }
      if (finish[len][t.initial()] && !walk(t.initial(), len)) {
        return;
      }
    }
  }

  std::vector<Word> shortlex_first(Fsa const& x,
                                   std::size_t count,
                                   std::size_t max_len) {
    std::vector<Word> out;
    if (count == 0) {
      return out;
    }
    for_each_word(x, max_len, [&](Word const& w) {
      out.push_back(w);
      return out.size() < count;
    });
    return out;
  }

}  // namespace autstruct
