#include "autstruct/rewrite.hpp"

#include <sstream>

#include "autstruct/errors.hpp"

namespace autstruct {

  std::string to_string(KbStatus status) {
    switch (status) {
      case KbStatus::confluent:
        return "confluent";
      case KbStatus::stopped:
        return "stopped";
      case KbStatus::limit_reached:
        return "limit reached";
    }
    return "?";
  }

  ////////////////////////////////////////////////////////////////////////
  // Trie
  ////////////////////////////////////////////////////////////////////////

  RuleSystem::Trie::Trie(std::size_t alphabet_size) : _k(alphabet_size) {
    clear();
  }

  void RuleSystem::Trie::clear() {
    _child.assign(_k, kNone);
    _rule.assign(1, kNone);
  }

  void RuleSystem::Trie::insert(std::span<Letter const> w,
                                std::uint32_t           rule,
                                bool                    reversed) {
    std::uint32_t node = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      Letter        a    = reversed ? w[w.size() - 1 - i] : w[i];
      std::uint32_t next = child(node, a);
      if (next == kNone) {
        next = static_cast<std::uint32_t>(_rule.size());
        _rule.push_back(kNone);
        _child.resize(_child.size() + _k, kNone);
        _child[std::size_t(node) * _k + a] = next;
      }
      node = next;
    }
    _rule[node] = rule;
  }

  void RuleSystem::Trie::erase(std::span<Letter const> w, bool reversed) {
    std::uint32_t node = 0;
    for (std::size_t i = 0; i < w.size() && node != kNone; ++i) {
      node = child(node, reversed ? w[w.size() - 1 - i] : w[i]);
    }
    if (node != kNone) {
      _rule[node] = kNone;
    }
  }

  template <typename F>
  void RuleSystem::Trie::for_each_below(std::uint32_t node, F&& f) const {
    std::vector<std::uint32_t> stack;
    for (std::size_t a = 0; a < _k; ++a) {
      if (auto c = child(node, static_cast<Letter>(a)); c != kNone) {
        stack.push_back(c);
      }
    }
    while (!stack.empty()) {
      std::uint32_t n = stack.back();
      stack.pop_back();
      if (_rule[n] != kNone) {
        f(_rule[n]);
      }
      for (std::size_t a = 0; a < _k; ++a) {
        if (auto c = child(n, static_cast<Letter>(a)); c != kNone) {
          stack.push_back(c);
        }
      }
    }
  }

  ////////////////////////////////////////////////////////////////////////
  // RuleSystem
  ////////////////////////////////////////////////////////////////////////

  RuleSystem::RuleSystem(AlphabetPtr alphabet)
      : _alphabet(std::move(alphabet)),
        _forward(_alphabet->size()),
        _backward(_alphabet->size()) {}

  Word RuleSystem::reduce(std::span<Letter const> w) const {
    Word out(w.begin(), w.end());
    reduce_in_place(out);
    return out;
  }

  void RuleSystem::reduce_in_place(Word& w) const {
    Word todo(w.rbegin(), w.rend());
    w.clear();
    while (!todo.empty()) {
      w.push_back(todo.back());
      todo.pop_back();
      std::uint32_t node = 0;
      for (std::size_t i = w.size(); i-- > 0;) {
        node = _backward.child(node, w[i]);
        if (node == kNone) {
          break;
        }
        std::uint32_t r = _backward.rule(node);
        if (r != kNone) {
          Entry const& e = _entries[r];
          w.resize(i);
          todo.insert(todo.end(), e.rhs.rbegin(), e.rhs.rend());
          break;
        }
      }
    }
  }

  bool RuleSystem::is_reduced(std::span<Letter const> w) const {
    for (std::size_t end = 1; end <= w.size(); ++end) {
      std::uint32_t node = 0;
      for (std::size_t i = end; i-- > 0;) {
        node = _backward.child(node, w[i]);
        if (node == kNone) {
          break;
        }
        if (_backward.rule(node) != kNone) {
          return false;
        }
      }
    }
    return true;
  }

  bool RuleSystem::lhs_reducible(std::uint32_t id) const {
    Word const& u = _entries[id].lhs;
    for (std::size_t end = 1; end <= u.size(); ++end) {
      std::uint32_t node = 0;
      for (std::size_t i = end; i-- > 0;) {
        node = _backward.child(node, u[i]);
        if (node == kNone) {
          break;
        }
        std::uint32_t r = _backward.rule(node);
        if (r != kNone && r != id) {
          return true;
        }
      }
    }
    return false;
  }

  bool RuleSystem::add_rule(Word lhs, Word rhs, std::size_t max_length) {
    if (shortlex_less(lhs, rhs)) {
      std::swap(lhs, rhs);
    }
    if (lhs.size() > max_length) {
      ++_stats.rules_discarded;
      return false;
    }
    auto const id = static_cast<std::uint32_t>(_entries.size());
    _forward.insert(lhs, id, false);
    _backward.insert(lhs, id, true);
    _pending.emplace(lhs.size(), id);
    _entries.push_back({std::move(lhs), std::move(rhs), true, false, _next_order++});
    ++_num_active;
    ++_stats.rules_added;
    return true;
  }

  void RuleSystem::deactivate(std::uint32_t id) {
    Entry& e = _entries[id];
    if (!e.active) {
      return;
    }
    _forward.erase(e.lhs, false);
    _backward.erase(e.lhs, true);
    e.active = false;
    --_num_active;
    ++_stats.rules_removed;
    ++_dead_since_rebuild;
  }

  void RuleSystem::maybe_rebuild_tries() {
    if (_dead_since_rebuild < 4096 || _dead_since_rebuild < _num_active) {
      return;
    }
    _forward.clear();
    _backward.clear();
    for (std::uint32_t id = 0; id < _entries.size(); ++id) {
      if (_entries[id].active) {
        _forward.insert(_entries[id].lhs, id, false);
        _backward.insert(_entries[id].lhs, id, true);
      }
    }
    _dead_since_rebuild = 0;
  }

  bool RuleSystem::add_equation(std::span<Letter const> u,
                                std::span<Letter const> v) {
    if (!_alphabet->contains(u) || !_alphabet->contains(v)) {
      throw UsageError("add_equation: word not over the alphabet");
    }
    Word a = reduce(u), b = reduce(v);
    if (a == b) {
      return false;
    }
    return add_rule(std::move(a), std::move(b), _max_length);
  }

  void RuleSystem::resolve(std::span<Letter const> u1,
                           std::span<Letter const> v1,
                           KbLimits const&         limits) {
    Word a = reduce(u1), b = reduce(v1);
    if (a != b) {
      add_rule(std::move(a), std::move(b), limits.max_rule_length);
    }
  }

  std::vector<Rule> RuleSystem::rules() const {
    std::vector<Rule> out;
    out.reserve(_num_active);
    for (auto const& e : _entries) {
      if (e.active) {
        out.push_back({e.lhs, e.rhs});
      }
    }
    return out;
  }

  void RuleSystem::tidy() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::uint32_t id = 0; id < _entries.size(); ++id) {
        if (!_entries[id].active) {
          continue;
        }
        if (lhs_reducible(id)) {
          Word lhs = _entries[id].lhs, rhs = _entries[id].rhs;
          deactivate(id);
          Word a = reduce(lhs), b = reduce(rhs);
          if (a != b) {
            add_rule(std::move(a), std::move(b), _max_length);
          }
          changed = true;
        } else {
          reduce_in_place(_entries[id].rhs);
        }
      }
    }
    maybe_rebuild_tries();
  }

  void RuleSystem::process(std::uint32_t id, KbLimits const& limits) {
    if (!_entries[id].active) {
      return;
    }
    if (lhs_reducible(id)) {
      Word lhs = _entries[id].lhs, rhs = _entries[id].rhs;
      deactivate(id);
      resolve(lhs, rhs, limits);
      return;
    }
    reduce_in_place(_entries[id].rhs);
    Word const u   = _entries[id].lhs;
    Word const ru  = _entries[id].rhs;
    std::size_t const m = u.size();

    // (rule, overlap length): u's suffix equals the rule's prefix, or the
    // rule's suffix equals u's prefix.
    std::vector<std::pair<std::uint32_t, std::size_t>> right, left;
    auto eligible = [&](std::uint32_t s, std::size_t overlap) {
      Entry const& e = _entries[s];
      if (!e.active || !(e.processed || s == id)) {
        return false;
      }
      if (m + e.lhs.size() - overlap > limits.max_overlap_length) {
        ++_stats.overlaps_skipped;
        return false;
      }
      return true;
    };
    for (std::size_t i = 1; i < m; ++i) {
      std::uint32_t node = 0;
      for (std::size_t j = i; j < m && node != kNone; ++j) {
        node = _forward.child(node, u[j]);
      }
      if (node == kNone) {
        continue;
      }
      _forward.for_each_below(node, [&](std::uint32_t s) {
        if (eligible(s, m - i)) {
          right.emplace_back(s, m - i);
        }
      });
    }
    for (std::size_t p = 1; p < m; ++p) {
      std::uint32_t node = 0;
      for (std::size_t j = p; j-- > 0 && node != kNone;) {
        node = _backward.child(node, u[j]);
      }
      if (node == kNone) {
        continue;
      }
      _backward.for_each_below(node, [&](std::uint32_t s) {
        if (s != id && eligible(s, p)) {
          left.emplace_back(s, p);
        }
      });
    }
    _entries[id].processed = true;

    Word x, y;
    for (auto const& [s, k] : right) {
      // u = u0 o, lhs_s = o s1:  ru s1 = u0 rhs_s.
      Word const& ls = _entries[s].lhs;
      Word const& rs = _entries[s].rhs;
      x.assign(ru.begin(), ru.end());
      x.insert(x.end(), ls.begin() + k, ls.end());
      y.assign(u.begin(), u.end() - k);
      y.insert(y.end(), rs.begin(), rs.end());
      ++_stats.overlaps;
      resolve(x, y, limits);
    }
    for (auto const& [s, k] : left) {
      // lhs_s = s0 o, u = o u1:  rhs_s u1 = s0 ru.
      Word const& ls = _entries[s].lhs;
      Word const& rs = _entries[s].rhs;
      x.assign(rs.begin(), rs.end());
      x.insert(x.end(), u.begin() + k, u.end());
      y.assign(ls.begin(), ls.end() - k);
      y.insert(y.end(), ru.begin(), ru.end());
      ++_stats.overlaps;
      resolve(x, y, limits);
    }
  }

  KbStatus RuleSystem::run(KbLimits const& limits, Observer const& observer) {
    _max_length             = limits.max_rule_length;
    std::size_t next_checkpoint = _stats.overlaps + limits.checkpoint_interval;
    while (!_pending.empty()) {
      if (_num_active > limits.max_rule_count) {
        return KbStatus::limit_reached;
      }
      auto const id = static_cast<std::uint32_t>(_pending.top().second);
      _pending.pop();
      process(id, limits);
      if (_stats.overlaps >= next_checkpoint) {
        next_checkpoint = _stats.overlaps + limits.checkpoint_interval;
        tidy();
        ++_stats.checkpoints;
        if (observer && !observer(*this)) {
          return KbStatus::stopped;
        }
      }
    }
    tidy();
    if (!_pending.empty()) {
      return run(limits, observer);
    }
    return confluent() ? KbStatus::confluent : KbStatus::limit_reached;
  }

  std::string RuleSystem::dump() const {
    std::ostringstream out;
    for (auto const& e : _entries) {
      if (e.active) {
        out << print_word(e.lhs, *_alphabet) << " -> "
            << print_word(e.rhs, *_alphabet) << '\n';
      }
    }
    return out.str();
  }

  RuleSystem seed_rules(Presentation const& p) {
    RuleSystem   rs(p.alphabet);
    auto const&  a = *p.alphabet;
    for (Letter x = 0; x < a.size(); ++x) {
      Word xx{x, a.inverse(x)};
      rs.add_equation(xx, Word{});
    }
    for (auto const& r : p.relators) {
      std::size_t const h = (r.size() + 1) / 2;
      Word              s(r.begin(), r.begin() + h);
      Word t = invert_word(a, std::span<Letter const>(r).subspan(h));
      rs.add_equation(s, t);
    }
    return rs;
  }

  RuleSystem kb_run(Presentation const&         p,
                    KbLimits const&             limits,
                    RuleSystem::Observer const& observer,
                    KbStatus*                   status) {
    RuleSystem rs = seed_rules(p);
    KbStatus   st = rs.run(limits, observer);
    if (status != nullptr) {
      *status = st;
    }
    return rs;
  }

}  // namespace autstruct
