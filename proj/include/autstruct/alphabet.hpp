#ifndef AUTSTRUCT_ALPHABET_HPP_
#define AUTSTRUCT_ALPHABET_HPP_

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace autstruct {

  // Letters are indices into an alphabet; for one-variable alphabets these
  // are generator indices, for pair alphabets flat pair indices.
  using Letter = std::uint32_t;
  using Word   = std::vector<Letter>;

  // Ordered, inversion-closed monoid generating set.  The generator order is
  // the index order.  The padding symbol $ is not a generator; it is
  // represented by the index size().
  class OrderedAlphabet {
   public:
    OrderedAlphabet(std::vector<std::string> names,
                    std::vector<Letter>      inverse);

    // Generators x0 X0 x1 X1 ... where Xi is the case-changed name of xi.
    static OrderedAlphabet with_case_inverses(
        std::vector<std::string> const& generators);

    // Generators all self-inverse, in the given order.
    static OrderedAlphabet self_inverse(std::vector<std::string> names);

    std::size_t size() const noexcept {
      return _names.size();
    }
    Letter padding() const noexcept {
      return static_cast<Letter>(_names.size());
    }
    std::string const& name(Letter x) const;
    Letter             inverse(Letter x) const;
    std::vector<std::string> const& names() const noexcept {
      return _names;
    }

    // Exact name lookup.
    std::optional<Letter> find(std::string_view name) const;
    // Exact lookup, falling back to the inverse of the case-changed name.
    std::optional<Letter> resolve(std::string_view name) const;

    // True when every name is a single character, so words print without
    // separators.
    bool compact() const noexcept {
      return _compact;
    }

    bool contains(std::span<Letter const> w) const noexcept;

    // Short-lex comparison that validates both words.
    std::strong_ordering compare(std::span<Letter const> u,
                                 std::span<Letter const> v) const;

    bool operator==(OrderedAlphabet const& that) const noexcept {
      return _names == that._names && _inverse == that._inverse;
    }

   private:
    std::vector<std::string> _names;
    std::vector<Letter>      _inverse;
    bool                     _compact;
  };

  using AlphabetPtr = std::shared_ptr<OrderedAlphabet const>;

  // Short-lex order: shorter first, then lexicographic by generator index.
  std::strong_ordering shortlex_compare(std::span<Letter const> u,
                                        std::span<Letter const> v) noexcept;

  inline bool shortlex_less(std::span<Letter const> u,
                            std::span<Letter const> v) noexcept {
    return shortlex_compare(u, v) == std::strong_ordering::less;
  }

  Word invert_word(OrderedAlphabet const& alphabet, std::span<Letter const> w);

  // Concatenation helper.
  Word concat_words(std::span<Letter const> u, std::span<Letter const> v);

  // One letter of a padded pair; the padding symbol is alphabet.padding().
  struct PaddedLetter {
    Letter first;
    Letter second;

    bool operator==(PaddedLetter const&) const = default;
  };

  using PaddedPair = std::vector<PaddedLetter>;

  PaddedPair pad(OrderedAlphabet const&  alphabet,
                 std::span<Letter const> u,
                 std::span<Letter const> v);

  std::pair<Word, Word> unpad(OrderedAlphabet const& alphabet,
                              PaddedPair const&      p);

  // Checks the padding discipline: no ($,$), padding only as a suffix of
  // one track.
  bool is_valid_padded(OrderedAlphabet const& alphabet, PaddedPair const& p);

  // Word grammar:  word := term+ ; term := atom ('^' integer)? ;
  // atom := name | '(' word ')'.  Names may be separated by '*' or
  // whitespace; otherwise the longest matching name is taken.  "IdWord"
  // denotes the empty word.
  Word        parse_word(std::string_view text, OrderedAlphabet const& alphabet);
  std::string print_word(std::span<Letter const> w,
                         OrderedAlphabet const&  alphabet);

  // Group presentation over an ordered alphabet.
  struct Presentation {
    AlphabetPtr       alphabet;
    std::vector<Word> relators;

    // Relators plus the inverse relators x x^-1 for every generator x.
    std::vector<Word> monoid_relators() const;
  };

  // Parses the line-oriented presentation format:
  //   generators: a b c
  //   inverses: a A  b B      (optional; "a a" for a self-inverse generator)
  //   ordering: a A b B c C   (optional; overrides the default order)
  //   relators:
  //   a^4
  //   equations:
  //   ab = c
  Presentation parse_presentation(std::string_view text);
  Presentation read_presentation(std::string const& path);
  std::string  print_presentation(Presentation const& p);

}  // namespace autstruct

#endif  // AUTSTRUCT_ALPHABET_HPP_
