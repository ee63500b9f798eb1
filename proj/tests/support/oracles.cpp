#include "support/oracles.hpp"

#include <deque>

namespace oracle {

  using namespace autstruct;

  std::vector<Word> words_upto(std::size_t k, std::size_t max_len) {
    std::vector<Word> out{Word{}};
    std::size_t       begin = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
      std::size_t const end = out.size();
      for (std::size_t i = begin; i < end; ++i) {
        for (Letter a = 0; a < k; ++a) {
          Word w = out[i];
          w.push_back(a);
          out.push_back(std::move(w));
        }
      }
      begin = end;
    }
    return out;
  }

  std::set<Word> language(Fsa const& x, std::size_t max_len) {
    std::set<Word> out;
    for (auto const& w : words_upto(x.alphabet().size(), max_len)) {
      if (accepts(x, w)) {
        out.insert(w);
      }
    }
    return out;
  }

  Fsa random_fsa(std::mt19937&      rng,
                 FsaAlphabet const& alphabet,
                 std::size_t        max_states,
                 double             edge_probability) {
    std::uniform_int_distribution<std::size_t> nstates(1, max_states);
    std::bernoulli_distribution                edge(edge_probability);
    std::bernoulli_distribution                acc(0.4);
    std::size_t const                          n = nstates(rng);
    std::uniform_int_distribution<State>       target(0, State(n - 1));
    FsaBuilder                                 b(alphabet);
    b.add_states(State(n));
    b.set_initial(0);
    for (State s = 0; s < n; ++s) {
      b.set_accepting(s, acc(rng));
      for (Letter a = 0; a < alphabet.size(); ++a) {
        if (edge(rng)) {
          b.add_edge(s, a, target(rng));
        }
      }
    }
    return std::move(b).build();
  }

  AlphabetPtr case_alphabet(std::vector<std::string> const& gens) {
    return std::make_shared<OrderedAlphabet const>(
        OrderedAlphabet::with_case_inverses(gens));
  }

  bool freely_reduced(OrderedAlphabet const& a, Word const& w) {
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (a.inverse(w[i]) == w[i + 1]) {
        return false;
      }
    }
    return true;
  }

  PermGroup::PermGroup(AlphabetPtr alphabet, std::vector<Perm> generators)
      : _alphabet(std::move(alphabet)), _gens(std::move(generators)) {
    _n = _gens.empty() ? 0 : _gens[0].size();
  }

  PermGroup::Perm PermGroup::compose(Perm const& p, Perm const& q) const {
    Perm r(_n);
    for (std::size_t i = 0; i < _n; ++i) {
      r[i] = q[p[i]];
    }
    return r;
  }

  PermGroup::Perm PermGroup::evaluate(Word const& w) const {
    Perm p(_n);
    for (std::size_t i = 0; i < _n; ++i) {
      p[i] = static_cast<int>(i);
    }
    for (Letter x : w) {
      p = compose(p, _gens.at(x));
    }
    return p;
  }

  bool PermGroup::is_identity(Word const& w) const {
    return evaluate(w) == evaluate({});
  }

  bool PermGroup::equal(Word const& u, Word const& v) const {
    return evaluate(u) == evaluate(v);
  }

  std::size_t PermGroup::order() const {
    return normal_forms().size();
  }

  std::map<PermGroup::Perm, Word> PermGroup::normal_forms() const {
    std::map<Perm, Word> nf;
    std::deque<Word>     queue{Word{}};
    nf.emplace(evaluate({}), Word{});
    while (!queue.empty()) {
      Word w = queue.front();
      queue.pop_front();
      for (Letter x = 0; x < _gens.size(); ++x) {
        Word v = w;
        v.push_back(x);
        if (nf.emplace(evaluate(v), v).second) {
          queue.push_back(v);
        }
      }
    }
    return nf;
  }

  Word PermGroup::normal_form(Word const& w) const {
    return normal_forms().at(evaluate(w));
  }

  namespace {
    using Perm = PermGroup::Perm;

    Perm cycle_shift(int n, int k) {
      Perm p(n);
      for (int i = 0; i < n; ++i) {
        p[i] = ((i + k) % n + n) % n;
      }
      return p;
    }

    // Right multiplication by a unit in Q8.  Elements are 4 * sign + unit
    // with units 1, i, j, k.
    Perm quaternion_right(int unit) {
      // table[x][y] = (sign, unit) of x * y for units.
      static int const sign[4][4] = {
          {0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
      static int const prod[4][4] = {
          {0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
      Perm p(8);
      for (int e = 0; e < 8; ++e) {
        int s = e / 4, u = e % 4;
        int s2 = (s + sign[u][unit]) % 2;
        p[e]   = 4 * s2 + prod[u][unit];
      }
      return p;
    }

    Perm inverse(Perm const& p) {
      Perm q(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) {
        q[p[i]] = static_cast<int>(i);
      }
      return q;
    }
  }  // namespace

  std::vector<NamedGroup> finite_groups() {
    Perm const s3a{1, 0, 2}, s3b{0, 2, 1};
    Perm const r4 = cycle_shift(4, 1), f4{0, 3, 2, 1};
    Perm const qi = quaternion_right(1), qj = quaternion_right(2);
    return {
        {"S3",
         "generators: a b\ninverses: a a b b\nrelators:\n(ab)^3\n",
         {s3a, s3b}},
        {"D4",
         "generators: a b\ninverses: a A b b\nrelators:\na^4\n(ab)^2\n",
         {r4, inverse(r4), f4}},
        {"Q8",
         "generators: a b\nrelators:\na^4, aaBB, baBa\n",
         {qi, inverse(qi), qj, inverse(qj)}},
        {"C4", "generators: a\nrelators:\na^4\n", {r4, inverse(r4)}},
    };
  }

  PermGroup make_group(NamedGroup const& g, AlphabetPtr const& alphabet) {
    return PermGroup(alphabet, g.images);
  }

}  // namespace oracle
