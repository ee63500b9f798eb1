#include "autstruct/fsa2.hpp"

namespace autstruct {

  namespace {
    void require_two_var(Fsa const& z, char const* op) {
      if (!z.alphabet().is_two_var()) {
        throw UsageError(std::string(op) + ": two-variable automaton required");
      }
    }

    void require_one_var(Fsa const& x, char const* op) {
      if (x.alphabet().is_two_var()) {
        throw UsageError(std::string(op) + ": one-variable automaton required");
      }
    }

    // States from which acceptance is reachable using only letters whose
    // first component is padding (when first_padded) or whose second
    // component is padding.
    std::vector<bool> padded_closure(Fsa const& z, bool first_padded) {
      auto const&        fa = z.alphabet();
      Letter const       $  = fa.padding();
      State const        n  = z.num_states();
      std::vector<std::vector<State>> preds(n);
      for (State s = 0; s < n; ++s) {
        z.for_each_edge(s, [&](Letter a, State t) {
          if ((first_padded ? fa.first(a) : fa.second(a)) == $) {
            preds[t].push_back(s);
          }
        });
      }
      std::vector<bool>  good(n, false);
      std::vector<State> stack;
      for (State s = 0; s < n; ++s) {
        if (z.is_accepting(s)) {
          good[s] = true;
          stack.push_back(s);
        }
      }
      while (!stack.empty()) {
        State t = stack.back();
        stack.pop_back();
        for (State s : preds[t]) {
          if (!good[s]) {
            good[s] = true;
            stack.push_back(s);
          }
        }
      }
      return good;
    }
  }  // namespace

  Word pair_word(FsaAlphabet const&      alphabet,
                 std::span<Letter const> u,
                 std::span<Letter const> v) {
    if (!alphabet.is_two_var()) {
      throw UsageError("pair_word: two-variable alphabet required");
    }
    Letter const $ = alphabet.padding();
    Word         out(std::max(u.size(), v.size()));
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = alphabet.pair(i < u.size() ? u[i] : $, i < v.size() ? v[i] : $);
    }
    return out;
  }

  bool accepts_pair(Fsa const&              z,
                    std::span<Letter const> u,
                    std::span<Letter const> v) {
    return accepts(z, pair_word(z.alphabet(), u, v));
  }

  Fsa padding_filter(AlphabetPtr const& alphabet) {
    auto const   fa = FsaAlphabet::two_var(alphabet);
    Letter const $  = fa.padding();
    FsaBuilder   b(fa);
    // 0: both tracks live, 1: first ended, 2: second ended.
    b.add_state(true);
    b.add_state(true);
    b.add_state(true);
    b.set_initial(0);
    for (Letter a = 0; a < fa.size(); ++a) {
      Letter x = fa.first(a), y = fa.second(a);
      if (x == $ && y == $) {
        continue;
      }
      if (x == $) {
        b.add_edge(0, a, 1);
        b.add_edge(1, a, 1);
      } else if (y == $) {
        b.add_edge(0, a, 2);
        b.add_edge(2, a, 2);
      } else {
        b.add_edge(0, a, 0);
      }
    }
    return std::move(b).build();
  }

  Fsa gt_automaton(AlphabetPtr const& alphabet) {
    auto const   fa = FsaAlphabet::two_var(alphabet);
    Letter const $  = fa.padding();
    enum : State { eq, ahead, behind, longer };
    FsaBuilder b(fa);
    b.add_state(false);  // eq
    b.add_state(true);   // ahead: equal length so far, u lexicographically larger
    b.add_state(false);  // behind
    b.add_state(true);   // longer: v has ended
    b.set_initial(eq);
    for (Letter a = 0; a < fa.size(); ++a) {
      Letter x = fa.first(a), y = fa.second(a);
      if (x == $) {
        continue;
      }
      if (y == $) {
        for (State s : {eq, ahead, behind, longer}) {
          b.add_edge(s, a, longer);
        }
        continue;
      }
      b.add_edge(eq, a, x == y ? eq : (x > y ? ahead : behind));
      b.add_edge(ahead, a, ahead);
      b.add_edge(behind, a, behind);
    }
    return minimize(std::move(b).build());
  }

  Fsa exists(Fsa const& z, Budget budget) {
    require_two_var(z, "exists");
    auto const&  fa     = z.alphabet();
    auto const   out_fa = FsaAlphabet::one_var(fa.base_ptr());
    Letter const $      = fa.padding();
    if (z.num_states() == 0) {
      return empty_language(out_fa);
    }
    auto const closure = padded_closure(z, true);
    // Node 2s + 1 means the second track has ended.
    auto successors = [&](std::uint64_t node, auto& out) {
      State const s     = static_cast<State>(node >> 1);
      bool const  ended = node & 1;
      z.for_each_edge(s, [&](Letter a, State t) {
        Letter x = fa.first(a), y = fa.second(a);
        if (x == $ || (ended && y != $)) {
          return;
        }
        out.emplace_back(x, (std::uint64_t(t) << 1) | (y == $ ? 1 : 0));
      });
    };
    auto accepting = [&](std::uint64_t node) {
      State const s = static_cast<State>(node >> 1);
      return z.is_accepting(s) || ((node & 1) == 0 && closure[s]);
    };
    return minimize(subset_construction(out_fa,
                                        {std::uint64_t(z.initial()) << 1},
                                        successors,
                                        accepting,
                                        "exists",
                                        budget));
  }

  Fsa exists_second(Fsa const& z, Budget budget) {
    require_two_var(z, "exists_second");
    return exists(swap_tracks(z), budget);
  }

  Fsa diagonal(Fsa const& x) {
    require_one_var(x, "diagonal");
    auto const fa = FsaAlphabet::two_var(x.alphabet().base_ptr());
    FsaBuilder b(fa);
    b.add_states(x.num_states());
    for (State s = 0; s < x.num_states(); ++s) {
      b.set_accepting(s, x.is_accepting(s));
      x.for_each_edge(s, [&](Letter a, State t) { b.add_edge(s, fa.pair(a, a), t); });
    }
    if (x.num_states() > 0) {
      b.set_initial(x.initial());
    }
    return std::move(b).build();
  }

  Fsa swap_tracks(Fsa const& z) {
    require_two_var(z, "swap_tracks");
    auto const& fa = z.alphabet();
    FsaBuilder  b(fa);
    b.add_states(z.num_states());
    for (State s = 0; s < z.num_states(); ++s) {
      b.set_accepting(s, z.is_accepting(s));
      z.for_each_edge(s, [&](Letter a, State t) {
        b.add_edge(s, fa.pair(fa.second(a), fa.first(a)), t);
      });
    }
    if (z.num_states() > 0) {
      b.set_initial(z.initial());
    }
    return std::move(b).build(z.storage());
  }

  Fsa compose(Fsa const& z1, Fsa const& z2, Budget budget) {
    require_two_var(z1, "compose");
    require_same_alphabet(z1, z2, "compose");
    auto const&  fa = z1.alphabet();
    Letter const $  = fa.padding();
    if (z1.num_states() == 0 || z2.num_states() == 0) {
      return empty_language(fa);
    }
    State const n1 = z1.num_states(), n2 = z2.num_states();

    // Pairs (p, q) from which both machines can reach acceptance while the
    // outer words are exhausted and only the middle word continues:
    // z1 reads ($, w) while z2 reads (w, $).
    std::vector<bool> overhang(std::size_t(n1) * n2, false);
    {
      std::vector<std::vector<std::pair<Letter, State>>> pred1(n1), pred2(n2);
      for (State p = 0; p < n1; ++p) {
        z1.for_each_edge(p, [&](Letter a, State t) {
          if (fa.first(a) == $) {
            pred1[t].emplace_back(fa.second(a), p);
          }
        });
      }
      for (State q = 0; q < n2; ++q) {
        z2.for_each_edge(q, [&](Letter a, State t) {
          if (fa.second(a) == $) {
            pred2[t].emplace_back(fa.first(a), q);
          }
        });
      }
      std::vector<std::pair<State, State>> stack;
      for (State p = 0; p < n1; ++p) {
        if (!z1.is_accepting(p)) {
          continue;
        }
        for (State q = 0; q < n2; ++q) {
          if (z2.is_accepting(q)) {
            overhang[std::size_t(p) * n2 + q] = true;
            stack.emplace_back(p, q);
          }
        }
      }
      while (!stack.empty()) {
        auto [p, q] = stack.back();
        stack.pop_back();
        for (auto const& [w1, pp] : pred1[p]) {
          for (auto const& [w2, qq] : pred2[q]) {
            if (w1 == w2 && !overhang[std::size_t(pp) * n2 + qq]) {
              overhang[std::size_t(pp) * n2 + qq] = true;
              stack.emplace_back(pp, qq);
            }
          }
        }
      }
    }

    // Node layout: p (high 32 bits), q, and three bits recording which of
    // u, w, v has ended.
    constexpr unsigned u_ended = 1, w_ended = 2, v_ended = 4;
    auto pack = [](State p, State q, unsigned flags) {
      return (std::uint64_t(p) << 32) | (std::uint64_t(q) << 3) | flags;
    };
    auto successors = [&](std::uint64_t node, auto& out) {
      State const    p     = static_cast<State>(node >> 32);
      State const    q     = static_cast<State>((node >> 3) & 0x1fffffff);
      unsigned const flags = node & 7;
      // Emits the composite step on input (x, y) with middle letter w.
      auto emit = [&](Letter x, Letter y, Letter w, State p2, State q2) {
        if (x == $ && y == $) {
          return;
        }
        if (((flags & u_ended) && x != $) || ((flags & v_ended) && y != $)
            || ((flags & w_ended) && w != $)) {
          return;
        }
        unsigned f = flags | (x == $ ? u_ended : 0u) | (y == $ ? v_ended : 0u)
                     | (w == $ ? w_ended : 0u);
        out.emplace_back(fa.pair(x, y), pack(p2, q2, f));
      };
      z1.for_each_edge(p, [&](Letter a, State p2) {
        Letter x = fa.first(a), w = fa.second(a);
        for (Letter y = 0; y <= $; ++y) {
          if (w == $ && y == $) {
            // z2 has finished reading (w, v).
            emit(x, y, w, p2, q);
          } else {
            State q2 = z2.target(q, fa.pair(w, y));
            if (q2 != kNoState) {
              emit(x, y, w, p2, q2);
            }
          }
        }
      });
      // z1 has finished reading (u, w); only z2 moves, on ($, y).
      z2.for_each_edge(q, [&](Letter a, State q2) {
        if (fa.first(a) == $) {
          emit($, fa.second(a), $, p, q2);
        }
      });
    };
    auto accepting = [&](std::uint64_t node) {
      State const p = static_cast<State>(node >> 32);
      State const q = static_cast<State>((node >> 3) & 0x1fffffff);
      if (node & w_ended) {
        return z1.is_accepting(p) && z2.is_accepting(q);
      }
      return bool(overhang[std::size_t(p) * n2 + q]);
    };
    return minimize(subset_construction(fa,
                                        {pack(z1.initial(), z2.initial(), 0)},
                                        successors,
                                        accepting,
                                        "compose",
                                        budget));
  }

  Fsa pair_and(Fsa const& z, Fsa const& x, Track track, Budget budget) {
    require_two_var(z, "pair_and");
    require_one_var(x, "pair_and");
    if (!(*z.alphabet().base_ptr() == *x.alphabet().base_ptr())) {
      throw UsageError("pair_and: alphabet mismatch");
    }
    auto const&  fa = z.alphabet();
    Letter const $  = fa.padding();
    if (z.num_states() == 0 || x.num_states() == 0) {
      return empty_language(fa);
    }
    auto successors = [&](std::uint64_t node, auto& out) {
      State const s = static_cast<State>(node >> 32);
      State const r = static_cast<State>(node & 0xffffffff);
      z.for_each_edge(s, [&](Letter a, State t) {
        Letter c  = track == Track::first ? fa.first(a) : fa.second(a);
        State  r2 = c == $ ? r : x.target(r, c);
        if (r2 != kNoState) {
          out.emplace_back(a, (std::uint64_t(t) << 32) | r2);
        }
      });
    };
    auto accepting = [&](std::uint64_t node) {
      return z.is_accepting(static_cast<State>(node >> 32))
             && x.is_accepting(static_cast<State>(node & 0xffffffff));
    };
    return minimize(subset_construction(
        fa,
        {(std::uint64_t(z.initial()) << 32) | x.initial()},
        successors,
        accepting,
        "pair_and",
        budget));
  }

}  // namespace autstruct
