#ifndef AUTSTRUCT_FSA2_HPP_
#define AUTSTRUCT_FSA2_HPP_

#include "autstruct/fsa.hpp"

namespace autstruct {

  // Two-variable automata are Fsa objects over FsaAlphabet::two_var.

  // Encodes pad(u, v) as a word over the pair alphabet.
  Word pair_word(FsaAlphabet const&      alphabet,
                 std::span<Letter const> u,
                 std::span<Letter const> v);

  bool accepts_pair(Fsa const&              z,
                    std::span<Letter const> u,
                    std::span<Letter const> v);

  // Accepts exactly the valid padded words.
  Fsa padding_filter(AlphabetPtr const& alphabet);

  // Accepts pad(u, v) iff u is short-lex greater than v.
  Fsa gt_automaton(AlphabetPtr const& alphabet);

  // { u | pad(u, v) accepted for some v }, and the same for v.
  Fsa exists(Fsa const& z, Budget budget = {});
  Fsa exists_second(Fsa const& z, Budget budget = {});

  // Accepts pad(u, u) for u in L(x).
  Fsa diagonal(Fsa const& x);

  // Exchanges the two tracks.
  Fsa swap_tracks(Fsa const& z);

  // { pad(u, v) | pad(u, w) in L(z1) and pad(w, v) in L(z2) for some w }.
  // The middle word may outlast both u and v.
  Fsa compose(Fsa const& z1, Fsa const& z2, Budget budget = {});

  enum class Track : std::uint8_t { first, second };

  // Accepts pad(u, v) in L(z) whose chosen track lies in L(x).
  Fsa pair_and(Fsa const& z, Fsa const& x, Track track, Budget budget = {});

}  // namespace autstruct

#endif  // AUTSTRUCT_FSA2_HPP_
