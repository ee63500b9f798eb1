#ifndef AUTSTRUCT_REWRITE_HPP_
#define AUTSTRUCT_REWRITE_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "autstruct/alphabet.hpp"

namespace autstruct {

  struct Rule {
    Word lhs;
    Word rhs;

    bool operator==(Rule const&) const = default;
  };

  struct KbLimits {
    // Rules whose left side would be longer than this are dropped, which
    // forfeits confluence but not soundness.
    std::size_t max_rule_length = 64;
    std::size_t max_rule_count  = 2'000'000;
    // Overlaps whose combined word is longer than this are skipped.
    std::size_t max_overlap_length = 128;
    // Overlaps resolved between observer calls.
    std::size_t checkpoint_interval = 2000;
    // Consecutive identical harvests that count as stable.
    std::size_t stability_threshold = 2;
  };

  enum class KbStatus : std::uint8_t { confluent, stopped, limit_reached };

  std::string to_string(KbStatus status);

  struct KbStats {
    std::size_t rules_added     = 0;
    std::size_t rules_removed   = 0;
    std::size_t overlaps        = 0;
    std::size_t rules_discarded = 0;
    std::size_t overlaps_skipped = 0;
    std::size_t checkpoints     = 0;
  };

  // A string rewriting system for a group presentation under the short-lex
  // order, together with the completion procedure.  The completion can be
  // interrupted by its observer and resumed by calling run() again.
  class RuleSystem {
   public:
    // Returns true to continue, false to stop.
    using Observer = std::function<bool(RuleSystem const&)>;

    explicit RuleSystem(AlphabetPtr alphabet);

    AlphabetPtr const& alphabet_ptr() const noexcept {
      return _alphabet;
    }
    OrderedAlphabet const& alphabet() const noexcept {
      return *_alphabet;
    }

    // Adds the identity u = v after reducing both sides; no-op when they
    // reduce to the same word.  Returns true if a rule was added.
    bool add_equation(std::span<Letter const> u, std::span<Letter const> v);

    // Rewrites to a word containing no left-hand side, always applying the
    // rule whose left side ends earliest (and is shortest among those).
    Word reduce(std::span<Letter const> w) const;
    bool is_reduced(std::span<Letter const> w) const;

    // Active rules in insertion order.
    std::vector<Rule> rules() const;
    std::size_t       num_rules() const noexcept {
      return _num_active;
    }

    // Removes rules whose left side contains another left side and fully
    // reduces right sides.  Removed rules are fed back as equations.
    void tidy();

    KbStatus run(KbLimits const& limits, Observer const& observer = {});

    bool confluent() const noexcept {
      return _pending.empty() && _stats.rules_discarded == 0
             && _stats.overlaps_skipped == 0;
    }
    KbStats const& stats() const noexcept {
      return _stats;
    }

    // "lhs -> rhs" per line.
    std::string dump() const;

   private:
    static constexpr std::uint32_t kNone = 0xffffffff;

    struct Entry {
      Word          lhs;
      Word          rhs;
      bool          active    = true;
      bool          processed = false;
      std::uint64_t order     = 0;
    };

    // Letter trie over left sides, read forwards or backwards.
    class Trie {
     public:
      explicit Trie(std::size_t alphabet_size);
      void          insert(std::span<Letter const> w, std::uint32_t rule, bool reversed);
      void          erase(std::span<Letter const> w, bool reversed);
      std::uint32_t child(std::uint32_t node, Letter a) const noexcept {
        return _child[std::size_t(node) * _k + a];
      }
      std::uint32_t rule(std::uint32_t node) const noexcept {
        return _rule[node];
      }
      // Rules stored strictly below node.
      template <typename F>
      void for_each_below(std::uint32_t node, F&& f) const;
      void clear();

     private:
      std::size_t                _k;
      std::vector<std::uint32_t> _child;
      std::vector<std::uint32_t> _rule;
    };

    bool add_rule(Word lhs, Word rhs, std::size_t max_length);
    void deactivate(std::uint32_t id);
    void process(std::uint32_t id, KbLimits const& limits);
    void resolve(std::span<Letter const> u1,
                 std::span<Letter const> v1,
                 KbLimits const&         limits);
    // Some other rule's left side occurs in rule id's left side.
    bool lhs_reducible(std::uint32_t id) const;
    void reduce_in_place(Word& w) const;
    void maybe_rebuild_tries();

    AlphabetPtr        _alphabet;
    std::vector<Entry> _entries;
    Trie               _forward;
    Trie               _backward;
    std::size_t        _num_active = 0;
    std::size_t        _dead_since_rebuild = 0;
    std::uint64_t      _next_order = 0;
    std::size_t        _max_length = std::numeric_limits<std::size_t>::max();
    using QueueItem = std::pair<std::size_t, std::uint64_t>;  // (length, id)
    std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>>
            _pending;
    KbStats _stats;
  };

  // Initial system: x X -> empty for each generator, plus one balanced
  // equation per relator r = st with |s| = ceil(|r| / 2), namely s = t^-1.
  RuleSystem seed_rules(Presentation const& p);

  // Seeds and completes.  The observer is called every checkpoint_interval
  // overlaps.
  RuleSystem kb_run(Presentation const&          p,
                    KbLimits const&              limits,
                    RuleSystem::Observer const&  observer = {},
                    KbStatus*                    status   = nullptr);

}  // namespace autstruct

#endif  // AUTSTRUCT_REWRITE_HPP_
