#include "autstruct/analysis.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "autstruct/fsa2.hpp"

namespace autstruct {

  std::vector<Word> enumerate(Fsa const& x, std::size_t max_len) {
    std::vector<Word> out;
    for_each_word(x, max_len, [&](Word const& w) {
      out.push_back(w);
      return true;
    });
    return out;
  }

  std::optional<mpz_class> language_size(Fsa const& x) {
    Fsa const   t = trim(x);
    State const n = t.num_states();
    if (n == 0) {
      return mpz_class(0);
    }
    // Kahn's algorithm; a leftover state lies on a cycle, and in a trimmed
    // automaton every cycle pumps accepted words.
    std::vector<std::size_t> indegree(n, 0);
    for (State s = 0; s < n; ++s) {
      t.for_each_edge(s, [&](Letter, State u) { ++indegree[u]; });
    }
    std::vector<State> order;
    for (State s = 0; s < n; ++s) {
      if (indegree[s] == 0) {
        order.push_back(s);
      }
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
      t.for_each_edge(order[i], [&](Letter, State u) {
        if (--indegree[u] == 0) {
          order.push_back(u);
        }
      });
    }
    if (order.size() != n) {
      return std::nullopt;
    }
    std::vector<mpz_class> paths(n, 0);
    paths[t.initial()] = 1;
    mpz_class total    = 0;
    for (State s : order) {
      if (t.is_accepting(s)) {
        total += paths[s];
      }
      t.for_each_edge(s, [&](Letter, State u) { paths[u] += paths[s]; });
    }
    return total;
  }

  std::vector<mpz_class> length_counts(Fsa const& x, std::size_t max_len) {
    Fsa const              t = trim(x);
    State const            n = t.num_states();
    std::vector<mpz_class> out(max_len + 1, 0);
    if (n == 0) {
      return out;
    }
    std::vector<mpz_class> cur(n, 0), next(n, 0);
    cur[t.initial()] = 1;
    for (std::size_t len = 0; len <= max_len; ++len) {
      for (State s = 0; s < n; ++s) {
        if (t.is_accepting(s)) {
          out[len] += cur[s];
        }
      }
      if (len == max_len) {
        break;
      }
      std::fill(next.begin(), next.end(), 0);
      for (State s = 0; s < n; ++s) {
        if (cur[s] != 0) {
          t.for_each_edge(s, [&](Letter, State u) { next[u] += cur[s]; });
        }
      }
      std::swap(cur, next);
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Rational series
  ////////////////////////////////////////////////////////////////////////

  namespace {
    using Poly = std::vector<mpq_class>;

    void strip(Poly& p) {
      while (!p.empty() && p.back() == 0) {
        p.pop_back();
      }
    }

    // Remainder of a by b (b nonzero).
    Poly poly_mod(Poly a, Poly const& b) {
      strip(a);
      while (a.size() >= b.size() && !a.empty()) {
        mpq_class const   f     = a.back() / b.back();
        std::size_t const shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) {
          a[shift + i] -= f * b[i];
        }
        a.pop_back();
        strip(a);
      }
      return a;
    }

    Poly poly_div(Poly a, Poly const& b) {
      strip(a);
      if (a.size() < b.size()) {
        return {};
      }
      Poly q(a.size() - b.size() + 1, 0);
      while (a.size() >= b.size() && !a.empty()) {
        mpq_class const   f     = a.back() / b.back();
        std::size_t const shift = a.size() - b.size();
        q[shift]                = f;
        for (std::size_t i = 0; i < b.size(); ++i) {
          a[shift + i] -= f * b[i];
        }
        a.pop_back();
        strip(a);
      }
      strip(q);
      return q;
    }

    Poly poly_gcd(Poly a, Poly b) {
      strip(a);
      strip(b);
      while (!b.empty()) {
        Poly r = poly_mod(a, b);
        a      = std::move(b);
        b      = std::move(r);
      }
      return a;
    }

    // Shortest linear recurrence (connection polynomial with constant
    // term 1) generating s, by Berlekamp-Massey over the rationals.
    std::pair<Poly, std::size_t> berlekamp_massey(std::vector<mpq_class> const& s) {
      Poly        c{1}, b{1};
      std::size_t len = 0, m = 1;
      mpq_class   last_d = 1;
      for (std::size_t i = 0; i < s.size(); ++i) {
        mpq_class d = s[i];
        for (std::size_t j = 1; j <= len && j < c.size(); ++j) {
          d += c[j] * s[i - j];
        }
        if (d == 0) {
          ++m;
          continue;
        }
        Poly            t    = c;
        mpq_class const coef = d / last_d;
        if (c.size() < b.size() + m) {
          c.resize(b.size() + m, 0);
        }
        for (std::size_t j = 0; j < b.size(); ++j) {
          c[j + m] -= coef * b[j];
        }
        if (2 * len <= i) {
          len    = i + 1 - len;
          b      = std::move(t);
          last_d = d;
          m      = 1;
        } else {
          ++m;
        }
      }
      strip(c);
      return {c, len};
    }

    std::string format_poly(std::vector<mpz_class> const& p, char var) {
      std::ostringstream out;
      bool               first = true;
      std::size_t        terms = 0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0) {
          continue;
        }
        ++terms;
        mpz_class const mag = abs(p[i]);
        if (first) {
          out << (p[i] < 0 ? "-" : "");
        } else {
          out << (p[i] < 0 ? " - " : " + ");
        }
        first = false;
        if (i == 0) {
          out << mag;
          continue;
        }
        if (mag != 1) {
          out << mag << '*';
        }
        out << var;
        if (i > 1) {
          out << '^' << i;
        }
      }
      if (terms == 0) {
        return "0";
      }
      return terms > 1 ? "(" + out.str() + ")" : out.str();
    }
  }  // namespace

  std::vector<mpz_class> RationalSeries::expand(std::size_t n) const {
    std::vector<mpz_class> a(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
      mpz_class v = k < numerator.size() ? numerator[k] : mpz_class(0);
      for (std::size_t j = 1; j <= k && j < denominator.size(); ++j) {
        v -= denominator[j] * a[k - j];
      }
      a[k] = v;  // denominator(0) == 1
    }
    return a;
  }

  std::string RationalSeries::to_string(char var) const {
    return format_poly(numerator, var) + "/" + format_poly(denominator, var);
  }

  RationalSeries growth_series(Fsa const& x) {
    Fsa const   t = trim(x);
    State const n = t.num_states();
    if (n == 0) {
      return {{}, {1}};
    }
    // The counts satisfy a recurrence of order at most n from index n on,
    // so 2n + 2 terms pin down the minimal one.
    auto const             counts = length_counts(t, 2 * std::size_t(n) + 2);
    std::vector<mpq_class> s(counts.begin(), counts.end());
    auto [c, len] = berlekamp_massey(s);
    Poly p(len, 0);
    for (std::size_t i = 0; i < len; ++i) {
      for (std::size_t j = 0; j <= i && j < c.size(); ++j) {
        p[i] += c[j] * s[i - j];
      }
    }
    strip(p);
    Poly g = poly_gcd(p, c);
    if (g.size() > 1) {
      p = poly_div(p, g);
      c = poly_div(c, g);
    }
    // Scale to denominator(0) = 1; the coefficients are then integers.
    mpq_class const c0 = c[0];
    RationalSeries  out;
    for (auto& v : p) {
      v /= c0;
      out.numerator.push_back(v.get_num());
    }
    for (auto& v : c) {
      v /= c0;
      out.denominator.push_back(v.get_num());
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Geodesics
  ////////////////////////////////////////////////////////////////////////

  Fsa build_wdg(std::vector<Word> const& labels,
                AlphabetPtr const&       alphabet,
                Reducer const&           reduce) {
    return build_d2(labels, alphabet, reduce, true).to_fsa();
  }

  std::vector<Word> pair_differences(OrderedAlphabet const&  a,
                                     std::span<Letter const> u,
                                     std::span<Letter const> v,
                                     Reducer const&          reduce) {
    std::vector<Word> out;
    Word              d;
    std::size_t const n = std::max(u.size(), v.size());
    for (std::size_t i = 0; i < n; ++i) {
      Word w;
      if (i < u.size()) {
        w.push_back(a.inverse(u[i]));
      }
      w.insert(w.end(), d.begin(), d.end());
      if (i < v.size()) {
        w.push_back(v[i]);
      }
      d = reduce(w);
      out.push_back(d);
    }
    return out;
  }

  namespace {
    // A random geodesic of the given length, grown one letter at a time;
    // extensions that shorten are rejected.
    Word random_geodesic(std::mt19937_64& rng, OrderedAlphabet const& a,
                         std::size_t length, Reducer const& reduce) {
      Word                u;
      std::vector<Letter> letters(a.size());
      for (Letter x = 0; x < a.size(); ++x) {
        letters[x] = x;
      }
      while (u.size() < length) {
        std::shuffle(letters.begin(), letters.end(), rng);
        bool grown = false;
        for (Letter x : letters) {
          u.push_back(x);
          if (reduce(u).size() == u.size()) {
            grown = true;
            break;
          }
          u.pop_back();
        }
        if (!grown) {
          break;
        }
      }
      return u;
    }
  }  // namespace

  std::variant<GeodesicResult, NotConverged> geodesic_word_acceptor(
      AutomaticStructure const&                      s,
      GeodesicConfig const&                          cfg,
      std::function<void(std::string const&)> const& log) {
    if (!s.verified) {
      throw UsageError("geodesic_word_acceptor: structure not verified");
    }
    auto const&    a      = *s.alphabet;
    Reducer const  reduce = make_reducer(s.d1.to_fsa());
    std::set<Word> labels(s.multipliers.differences.begin(),
                          s.multipliers.differences.end());
    labels.insert(Word{});
    std::size_t const wd_size = labels.size();
    std::mt19937_64   rng(cfg.rng_seed);
    std::uniform_int_distribution<std::size_t> length(
        1, std::max<std::size_t>(1, cfg.max_sample_length));
    std::vector<std::size_t> trajectory;
    auto say = [&](std::string const& text) {
      if (log) {
        log(text);
      }
    };

    auto sample = [&] {
      std::size_t added = 0;
      for (std::size_t i = 0; i < cfg.sample_count; ++i) {
        Word const u = random_geodesic(rng, a, length(rng), reduce);
        Word const v = reduce(u);
        for (auto const& d : pair_differences(a, u, v, reduce)) {
          added += labels.insert(d).second;
          added += labels.insert(reduce(invert_word(a, d))).second;
        }
      }
      return added;
    };
    if (cfg.sample_first) {
      for (std::size_t r = 0; r < cfg.max_rounds && sample() > 0; ++r) {
      }
      say("geodesic: sampling raised the differences to "
          + std::to_string(labels.size()));
    }

    for (std::size_t round = 0; round <= cfg.max_rounds; ++round) {
      Fsa const wdg = build_wdg({labels.begin(), labels.end()}, s.alphabet, reduce);
      Fsa       cur = minimize(s.word_acceptor);
      trajectory.assign(1, cur.num_states());
      for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
        Fsa next = minimize(exists(pair_and(wdg, cur, Track::second)));
        trajectory.push_back(next.num_states());
        if (next == cur) {
          say("geodesic: converged with " + std::to_string(labels.size())
              + " differences after " + std::to_string(it) + " iterations");
          return GeodesicResult{std::move(cur), labels.size(), wd_size, it,
                                round, trajectory};
        }
        cur = std::move(next);
      }
      say("geodesic: no fixed point with " + std::to_string(labels.size())
          + " differences");
      if (sample() == 0) {
        break;
      }
    }
    return NotConverged{labels.size(), trajectory};
  }

}  // namespace autstruct
