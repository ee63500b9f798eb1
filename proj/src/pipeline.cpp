#include "autstruct/pipeline.hpp"

#include <chrono>
#include <iomanip>
#include <memory>
#include <set>
#include <sstream>
#include <unordered_map>

#include "autstruct/fsa2.hpp"

namespace autstruct {

  Reducer make_reducer(Fsa const& d1) {
    auto r = std::make_shared<D1Reducer>(d1);
    return [r](std::span<Letter const> w) { return r->reduce(w); };
  }

  ////////////////////////////////////////////////////////////////////////
  // Step 2
  ////////////////////////////////////////////////////////////////////////

  Fsa make_word_acceptor(Fsa const& d1, Budget budget) {
    if (!d1.alphabet().is_two_var()) {
      throw UsageError("make_word_acceptor: two-variable automaton required");
    }
    AlphabetPtr const& base = d1.alphabet().base_ptr();
    auto const&        fa   = d1.alphabet();
    Letter const       $    = fa.padding();
    auto const         one  = FsaAlphabet::one_var(base);
    Fsa const rel = intersect(intersect(d1, gt_automaton(base)), padding_filter(base));
    if (rel.num_states() == 0) {
      return all_words(one);
    }
    // States of rel from which ($, y) letters alone reach acceptance: the
    // first track has ended, so reaching one means a reducible factor.
    State const       n = rel.num_states();
    std::vector<bool> found(n, false);
    {
      std::vector<std::vector<State>> pred(n);
      for (State s = 0; s < n; ++s) {
        rel.for_each_edge(s, [&](Letter a, State t) {
          if (fa.first(a) == $) {
            pred[t].push_back(s);
          }
        });
      }
      std::vector<State> stack;
      for (State s = 0; s < n; ++s) {
        if (rel.is_accepting(s)) {
          found[s] = true;
          stack.push_back(s);
        }
      }
      while (!stack.empty()) {
        State t = stack.back();
        stack.pop_back();
        for (State s : pred[t]) {
          if (!found[s]) {
            found[s] = true;
            stack.push_back(s);
          }
        }
      }
    }
    // Subset construction for A* E A*, where E projects rel onto its first
    // track, with every subset that has seen a reducible factor dropped:
    // what remains is the complement.  Each subset holds the rel states of
    // all factor candidates ending at the current position.
    detail::SubsetTable          table;
    FsaBuilder                   b(one);
    std::vector<std::uint64_t>   next;
    std::size_t const            k = base->size();
    table.intern({rel.initial()});
    b.add_state(true);
    b.set_initial(0);
    for (State id = 0; id < table.size(); ++id) {
      for (Letter x = 0; x < k; ++x) {
        next.assign(1, rel.initial());
        bool dead = false;
        for (auto node : table.get(id)) {
          for (Letter y = 0; y <= $ && !dead; ++y) {
            State t = rel.target(static_cast<State>(node), fa.pair(x, y));
            if (t != kNoState) {
              dead = found[t];
              next.push_back(t);
            }
          }
          if (dead) {
            break;
          }
        }
        if (dead) {
          continue;
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        auto [target, inserted] = table.intern(next);
        if (inserted) {
          if (table.size() > budget.max_states) {
            throw BudgetExceeded("word-acceptor", budget.max_states);
          }
          b.add_state(true);
        }
        b.add_edge(id, x, target);
      }
    }
    return minimize(std::move(b).build());
  }

  ////////////////////////////////////////////////////////////////////////
  // Step 4
  ////////////////////////////////////////////////////////////////////////

  namespace {
    constexpr unsigned kFirstEnded  = 1;
    constexpr unsigned kSecondEnded = 2;
    constexpr unsigned kDiverged    = 4;

    struct ProductNode {
      State    w1;
      State    w2;
      State    d;
      unsigned flags;

      std::uint64_t key() const {
        return (std::uint64_t(w1) << 42) | (std::uint64_t(w2) << 20)
               | (std::uint64_t(d) << 3) | flags;
      }
    };
  }  // namespace

  std::variant<Multipliers, WitnessFailure> make_multipliers(
      Fsa const& w_in, WordDiffMachine const& d2, Budget budget) {
    Fsa const w = minimize(w_in);
    if (!(*w.alphabet().base_ptr() == d2.alphabet())) {
      throw UsageError("make_multipliers: alphabet mismatch");
    }
    auto const&       fa = d2.pair_alphabet();
    auto const&       a  = d2.alphabet();
    Letter const      $  = a.padding();
    std::size_t const k  = fa.size();
    if (w.num_states() == 0) {
      throw UsageError("make_multipliers: empty word-acceptor");
    }
    if (w.num_states() >= (1u << 22) || d2.num_states() >= (1u << 17)) {
      throw BudgetExceeded("multiplier product", budget.max_states);
    }

    std::vector<ProductNode>               nodes;
    std::vector<std::pair<State, Letter>>  parent;
    std::unordered_map<std::uint64_t, State> ids;
    FsaBuilder                             b(fa);

    auto intern = [&](ProductNode const& n, State from, Letter via) {
      auto [it, inserted] = ids.emplace(n.key(), State(nodes.size()));
      if (inserted) {
        if (nodes.size() >= budget.max_states) {
          throw BudgetExceeded("multiplier product", budget.max_states);
        }
        nodes.push_back(n);
        parent.emplace_back(from, via);
        b.add_state();
      }
      return it->second;
    };

    auto path_to = [&](State s) {
      Word pairs;
      while (s != 0) {
        pairs.push_back(parent[s].second);
        s = parent[s].first;
      }
      std::reverse(pairs.begin(), pairs.end());
      Word u, v;
      for (Letter l : pairs) {
        if (fa.first(l) != $) {
          u.push_back(fa.first(l));
        }
        if (fa.second(l) != $) {
          v.push_back(fa.second(l));
        }
      }
      return WitnessFailure{std::move(u), std::move(v)};
    };

    intern({w.initial(), w.initial(), 0, 0}, kNoState, 0);
    b.set_initial(0);
    for (State id = 0; id < nodes.size(); ++id) {
      ProductNode const n = nodes[id];
      if (n.d == 0 && (n.flags & kDiverged) && w.is_accepting(n.w1)
          && w.is_accepting(n.w2)) {
        return path_to(id);
      }
      for (Letter l = 0; l < k; ++l) {
        State const d = d2.target(n.d, l);
        if (d == kNoState) {
          continue;
        }
        Letter const x = fa.first(l), y = fa.second(l);
        if (((n.flags & kFirstEnded) && x != $)
            || ((n.flags & kSecondEnded) && y != $)) {
          continue;
        }
        State const w1 = x == $ ? n.w1 : w.target(n.w1, x);
        State const w2 = y == $ ? n.w2 : w.target(n.w2, y);
        if (w1 == kNoState || w2 == kNoState) {
          continue;
        }
        unsigned f = n.flags | (x == $ ? kFirstEnded : 0u)
                     | (y == $ ? kSecondEnded : 0u) | (x != y ? kDiverged : 0u);
        b.add_edge(id, l, intern({w1, w2, d, f}, id, l));
      }
    }

    // The state reached from the empty label on ($, x) carries the
    // reduced form of x.
    std::vector<State> letter_label(a.size(), kNoState);
    for (Letter x = 0; x < a.size(); ++x) {
      letter_label[x] = d2.target(0, fa.pair($, x));
    }
    Fsa const   product = std::move(b).build();
    Multipliers out{Fsa(fa), {}, nodes.size(), {}};
    {
      // Every product node is accessible; keep those that can still reach
      // an accept state of some multiplier.
      std::vector<bool> is_label(d2.num_states(), false);
      is_label[0] = true;
      for (State l : letter_label) {
        if (l != kNoState) {
          is_label[l] = true;
        }
      }
      std::vector<std::vector<State>> pred(nodes.size());
      for (State s = 0; s < nodes.size(); ++s) {
        product.for_each_edge(s, [&](Letter, State t) { pred[t].push_back(s); });
      }
      std::vector<bool>  live(nodes.size(), false);
      std::vector<State> stack;
      for (State s = 0; s < nodes.size(); ++s) {
        if (is_label[nodes[s].d] && w.is_accepting(nodes[s].w1)
            && w.is_accepting(nodes[s].w2)) {
          live[s] = true;
          stack.push_back(s);
        }
      }
      while (!stack.empty()) {
        State t = stack.back();
        stack.pop_back();
        for (State s : pred[t]) {
          if (!live[s]) {
            live[s] = true;
            stack.push_back(s);
          }
        }
      }
      std::vector<bool> used(d2.num_states(), false);
      for (State s = 0; s < nodes.size(); ++s) {
        if (live[s]) {
          used[nodes[s].d] = true;
        }
      }
      for (State d = 0; d < d2.num_states(); ++d) {
        if (used[d]) {
          out.differences.push_back(d2.label(d));
        }
      }
    }
    auto accept_for = [&](State label) {
      std::vector<bool> acc(nodes.size(), false);
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        acc[i] = nodes[i].d == label && w.is_accepting(nodes[i].w1)
                 && w.is_accepting(nodes[i].w2);
      }
      return minimize(product.with_accepting(std::move(acc)));
    };
    out.equality = accept_for(0);
    for (Letter x = 0; x < a.size(); ++x) {
      out.by_letter.push_back(letter_label[x] == kNoState
                                  ? empty_language(fa)
                                  : accept_for(letter_label[x]));
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Step 5
  ////////////////////////////////////////////////////////////////////////

  namespace {
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

  std::optional<MissingDifferences> check_multipliers(
      Fsa const&             w,
      Multipliers const&     m,
      WordDiffMachine const& d2,
      Reducer const&         reduce,
      std::size_t            witnesses_per_letter) {
    auto const&  a   = d2.alphabet();
    Letter const $   = a.padding();
    bool         failed = false;
    std::set<Word>                     fresh;
    std::set<std::pair<Word, Word>>    equations;
    for (Letter x = 0; x < a.size(); ++x) {
      Fsa const bad = intersect(w, complement(exists(m.by_letter[x])));
      if (is_empty(bad)) {
        continue;
      }
      failed = true;
      Word const rx = reduce(Word{x});
      for (auto const& u : shortlex_first(bad, witnesses_per_letter,
                                          bad.num_states() + 64)) {
        Word ux = u;
        ux.push_back(x);
        Word const        v = reduce(ux);
        Word              d;
        bool              all_known = true;
        std::size_t const n = std::max(u.size(), v.size());
        for (std::size_t i = 0; i < n; ++i) {
          Letter xi = i < u.size() ? u[i] : $;
          Letter yi = i < v.size() ? v[i] : $;
          d         = reduce(conjugate(a, xi, d, yi));
          if (!d2.find(d)) {
            all_known = false;
            if (fresh.insert(d).second) {
              fresh.insert(reduce(invert_word(a, d)));
            }
          }
        }
        if (all_known && d != rx) {
          equations.emplace(d, rx);
        }
      }
    }
    if (!failed) {
      return std::nullopt;
    }
    MissingDifferences out;
    for (auto const& l : fresh) {
      if (!d2.find(l)) {
        out.labels.push_back(l);
      }
    }
    out.equations.assign(equations.begin(), equations.end());
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Step 6
  ////////////////////////////////////////////////////////////////////////

  CompositeCache::CompositeCache(Multipliers const& m, Budget budget)
      : _m(&m), _budget(budget) {}

  Fsa const& CompositeCache::get(Word const& w) {
    if (w.empty()) {
      return _m->equality;
    }
    if (w.size() == 1) {
      return _m->by_letter.at(w[0]);
    }
    if (auto it = _memo.find(w); it != _memo.end()) {
      return it->second;
    }
    std::size_t const h = (w.size() + 1) / 2;
    Word const        s(w.begin(), w.begin() + h);
    Word const        t(w.begin() + h, w.end());
    Fsa const&        ms = get(s);
    Fsa const&        mt = get(t);
    Fsa               c  = compose(ms, mt, _budget);
    return _memo.emplace(w, std::move(c)).first->second;
  }

  std::optional<Word> axiom_check(Multipliers const&       m,
                                  std::vector<Word> const& relators,
                                  Budget                   budget) {
    CompositeCache cache(m, budget);
    for (auto const& r : relators) {
      if (!(cache.get(r) == m.equality)) {
        return r;
      }
    }
    return std::nullopt;
  }

  ////////////////////////////////////////////////////////////////////////
  // Report
  ////////////////////////////////////////////////////////////////////////

  std::string format_report(PipelineReport const&  r,
                            OrderedAlphabet const& alphabet) {
    std::ostringstream out;
    auto list = [&](std::vector<std::size_t> const& v) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        out << (i ? " " : "") << v[i];
      }
    };
    out << "stop reason: " << r.stop_reason << '\n';
    out << "word-acceptor states: " << r.wa_states << " (complete "
        << r.wa_complete_states << ")\n";
    if (!r.multiplier_states.empty()) {
      auto range = [&](std::vector<std::size_t> const& v) {
        auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        out << *lo << '-' << *hi;
      };
      out << "multiplier states: ";
      range(r.multiplier_states);
      out << " (complete ";
      range(r.multiplier_complete_states);
      out << ")\n";
      for (Letter x = 0; x < r.multiplier_states.size(); ++x) {
        out << "  mult_" << alphabet.name(x) << ": " << r.multiplier_states[x]
            << " (complete " << r.multiplier_complete_states[x] << ")\n";
      }
      out << "equality multiplier states: " << r.equality_states << '\n';
      out << "multiplier product states: " << r.product_states << '\n';
      out << "word differences: " << r.word_differences << '\n';
    }
    out << "first loop: " << r.loop1_count << '\n';
    out << "second loop: " << r.loop2_count << '\n';
    out << "D1 sizes: ";
    list(r.d1_sizes);
    out << "\nD2 sizes: ";
    list(r.d2_sizes);
    out << "\nrewriting rules: " << r.kb_rules << " (" << r.kb_status << ")\n";
    out << std::fixed << std::setprecision(2);
    for (auto const& t : r.timings) {
      out << "time " << t.stage << ": " << t.seconds << " s\n";
    }
    out << "total time: " << r.total_seconds << " s\n";
    out << "events:\n";
    for (auto const& e : r.events) {
      out << "  " << e << '\n';
    }
    return out.str();
  }

  WordDiffMachine complete_until_stable(RuleSystem&    rs,
                                        KbLimits const& limits,
                                        std::size_t     threshold,
                                        KbStatus*       status) {
    std::vector<Word> last;
    std::size_t       last_edges = 0;
    std::size_t       same       = 0;
    auto observer = [&](RuleSystem const& sys) {
      auto const d1 = harvest_d1(sys);
      if (d1.labels() == last && d1.num_transitions() == last_edges) {
        ++same;
      } else {
        same       = 0;
        last       = d1.labels();
        last_edges = d1.num_transitions();
      }
      return same < threshold;
    };
    KbStatus const st = rs.run(limits, observer);
    if (status) {
      *status = st;
    }
    return harvest_d1(rs);
  }

  ////////////////////////////////////////////////////////////////////////
  // Driver
  ////////////////////////////////////////////////////////////////////////

  namespace {
    using Clock = std::chrono::steady_clock;

    class Driver {
     public:
      Driver(Presentation const& p, PipelineConfig const& config)
          : _p(p), _config(config), _start(Clock::now()) {}

      std::variant<AutomaticStructure, Diagnosis> run(ResumePoint const& resume);

     private:
      void event(std::string const& text) {
        _report.events.push_back(text);
        if (_config.log) {
          _config.log(text);
        }
      }

      template <typename F>
      auto timed(std::string const& stage, F&& f) {
        auto const t0     = Clock::now();
        struct Stop {
          Driver*            self;
          std::string const* stage;
          Clock::time_point  t0;
          ~Stop() {
            double dt = std::chrono::duration<double>(Clock::now() - t0).count();
            for (auto& t : self->_report.timings) {
              if (t.stage == *stage) {
                t.seconds += dt;
                return;
              }
            }
            self->_report.timings.push_back({*stage, dt});
          }
        } stop{this, &stage, t0};
        return f();
      }

      void checkpoint(std::string const& stage, PipelineState const& st) {
        if (_config.checkpoint) {
          _config.checkpoint(stage, st);
        }
      }

      Diagnosis diagnose(std::string stage, std::string message, bool budget) {
        _report.stop_reason = stage + ": " + message;
        finish();
        return Diagnosis{std::move(stage), std::move(message), budget, _report};
      }

      void finish() {
        _report.total_seconds
            = std::chrono::duration<double>(Clock::now() - _start).count();
      }

      WordDiffMachine step1(RuleSystem& rs, std::size_t threshold);

      Presentation const&   _p;
      PipelineConfig const& _config;
      Clock::time_point     _start;
      PipelineReport        _report;
    };

    WordDiffMachine Driver::step1(RuleSystem& rs, std::size_t threshold) {
      KbStatus        st = KbStatus::stopped;
      WordDiffMachine d1 = timed("knuth-bendix", [&] {
        return complete_until_stable(rs, _config.kb, threshold, &st);
      });
      _report.kb_rules  = rs.num_rules();
      _report.kb_status = to_string(st);
      _report.d1_sizes.push_back(d1.num_states());
      event("step 1: " + to_string(st) + ", " + std::to_string(rs.num_rules())
            + " rules after " + std::to_string(rs.stats().overlaps)
            + " overlaps; D1 has " + std::to_string(d1.num_states())
            + " states");
      return d1;
    }

    std::variant<AutomaticStructure, Diagnosis> Driver::run(ResumePoint const& resume) {
      auto const&       a  = *_p.alphabet;
      RuleSystem        rs = seed_rules(_p);
      std::size_t       threshold = _config.kb.stability_threshold;
      std::vector<Word> extra = resume.d2_labels;
      std::optional<WordDiffMachine> d1 = resume.d1;
      std::optional<WordDiffMachine> last_d2;
      std::string                    why_restart;
      bool                           budget_hit = false;

      for (std::size_t attempt = 0;; ++attempt) {
        if (attempt > 0) {
          ++_report.loop1_count;
          if (_report.loop1_count > _config.max_loop1) {
            return diagnose("step 1",
                            "gave up after " + std::to_string(_config.max_loop1)
                                + " returns (" + why_restart + ")",
                            budget_hit);
          }
          event("return to step 1: " + why_restart);
        }
        if (!d1 || attempt > 0) {
          d1 = step1(rs, threshold);
        } else {
          _report.d1_sizes.push_back(d1->num_states());
          event("step 1 skipped: D1 loaded with " + std::to_string(d1->num_states())
                + " states");
        }
        checkpoint("d1", PipelineState{&*d1, nullptr, nullptr, nullptr, &_report});
        Fsa const     d1f    = d1->to_fsa();
        Reducer const reduce = make_reducer(d1f);

        // Step 2.
        std::vector<Word> labels = d1->labels();
        labels.insert(labels.end(), extra.begin(), extra.end());
        std::optional<Fsa> w;
        try {
          w = timed("word-acceptor", [&] {
            if (_config.use_d2_for_d1 && attempt > 0 && last_d2) {
              std::vector<Word> all = labels;
              all.insert(all.end(), last_d2->labels().begin(), last_d2->labels().end());
              return make_word_acceptor(build_d2(all, _p.alphabet, reduce).to_fsa(),
                                        _config.budget);
            }
            return make_word_acceptor(d1f, _config.budget);
          });
        } catch (BudgetExceeded const& e) {
          budget_hit  = true;
          why_restart = std::string("step 2: ") + e.what();
          threshold += _config.stability_increment;
          continue;
        }
        _report.wa_states = w->num_states();
        _report.wa_complete_states = complete_size(*w);
        event("step 2: word-acceptor has " + std::to_string(w->num_states())
              + " states");
        checkpoint("wa", PipelineState{&*d1, nullptr, &*w, nullptr, &_report});

        bool restart = false;
        for (std::size_t round = 0; !restart; ++round) {
          if (round > 0) {
            ++_report.loop2_count;
            if (round > _config.max_loop2) {
              return diagnose("step 3", "second loop limit reached", false);
            }
          }
          // Step 3.
          WordDiffMachine d2 = timed("difference closure", [&] {
            return build_d2(labels, _p.alphabet, reduce);
          });
          _report.d2_sizes.push_back(d2.num_states());
          event("step 3: D2 has " + std::to_string(d2.num_states()) + " states");
          checkpoint("d2", PipelineState{&*d1, &d2, &*w, nullptr, &_report});
          last_d2 = d2;

          // Step 4.
          std::variant<Multipliers, WitnessFailure> built = WitnessFailure{};
          try {
            built = timed("multipliers", [&] {
              return make_multipliers(*w, d2, _config.budget);
            });
          } catch (BudgetExceeded const& e) {
            budget_hit  = true;
            why_restart = std::string("step 4: ") + e.what();
            threshold += _config.stability_increment;
            restart = true;
            break;
          }
          if (auto* wf = std::get_if<WitnessFailure>(&built)) {
            why_restart = "step 4: " + print_word(wf->u, a) + " = "
                          + print_word(wf->v, a) + " are both accepted";
            rs.add_equation(wf->u, wf->v);
            restart = true;
            break;
          }
          auto& mult = std::get<Multipliers>(built);
          _report.product_states = mult.product_states;
          _report.equality_states = mult.equality.num_states();
          _report.word_differences = mult.differences.size();
          _report.multiplier_states.clear();
          _report.multiplier_complete_states.clear();
          for (auto const& m : mult.by_letter) {
            _report.multiplier_states.push_back(m.num_states());
            _report.multiplier_complete_states.push_back(complete_size(m));
          }
          event("step 4: product has " + std::to_string(mult.product_states)
                + " states");

          // Step 5.
          auto missing = timed("multiplier check", [&] {
            return check_multipliers(*w, mult, d2, reduce,
                                     _config.witnesses_per_letter);
          });
          if (missing) {
            if (!missing->labels.empty()) {
              event("step 5: " + std::to_string(missing->labels.size())
                    + " missing word differences");
              labels.insert(labels.end(), missing->labels.begin(),
                            missing->labels.end());
              extra.insert(extra.end(), missing->labels.begin(),
                           missing->labels.end());
              continue;
            }
            for (auto const& [u, v] : missing->equations) {
              rs.add_equation(u, v);
            }
            why_restart = "step 5: no missing differences explain the failure";
            threshold += _config.stability_increment;
            restart = true;
            break;
          }
          event("step 5: multipliers complete");
          checkpoint("mult", PipelineState{&*d1, &d2, &*w, &mult, &_report});

          // Step 6.
          std::optional<Word> bad;
          try {
            bad = timed("axiom check", [&] {
              return axiom_check(mult, _p.monoid_relators(), _config.budget);
            });
          } catch (BudgetExceeded const& e) {
            finish();
            return diagnose("step 6", e.what(), true);
          }
          if (bad) {
            why_restart = "step 6: relator " + print_word(*bad, a) + " failed";
            threshold += _config.stability_increment;
            restart = true;
            break;
          }
          event("step 6: all relators verified");
          _report.stop_reason = "verified";
          finish();
          return AutomaticStructure{_p.alphabet, std::move(*w), std::move(mult),
                                    std::move(*d1), std::move(d2), true, _report};
        }
      }
    }
  }  // namespace

  std::variant<AutomaticStructure, Diagnosis> run_pipeline(
      Presentation const&   p,
      PipelineConfig const& config,
      ResumePoint const&    resume) {
    return Driver(p, config).run(resume);
  }

}  // namespace autstruct
