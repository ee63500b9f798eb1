#ifndef AUTSTRUCT_ANALYSIS_HPP_
#define AUTSTRUCT_ANALYSIS_HPP_

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "autstruct/fsa.hpp"
#include "autstruct/pipeline.hpp"

namespace autstruct {

  // Accepted words of length <= max_len in short-lex order.
  std::vector<Word> enumerate(Fsa const& x, std::size_t max_len);

  // Number of accepted words, or nothing when the language is infinite.
  std::optional<mpz_class> language_size(Fsa const& x);

  // Number of accepted words of each length 0 .. max_len.
  std::vector<mpz_class> length_counts(Fsa const& x, std::size_t max_len);

  // numerator / denominator with integer coefficients, lowest degree
  // first.  Normalized: denominator(0) = 1, the two polynomials coprime,
  // and the content of all coefficients together is 1.
  struct RationalSeries {
    std::vector<mpz_class> numerator;
    std::vector<mpz_class> denominator;

    // First n coefficients of the power series.
    std::vector<mpz_class> expand(std::size_t n) const;
    std::string            to_string(char var = 't') const;
    bool                   operator==(RationalSeries const&) const = default;
  };

  // Generating function of the language by length.
  RationalSeries growth_series(Fsa const& x);

  // Equal-length two-variable machine on the closure of `labels`, accept
  // label the empty word, reductions by `reduce`.
  Fsa build_wdg(std::vector<Word> const& labels,
                AlphabetPtr const&       alphabet,
                Reducer const&           reduce);

  struct GeodesicConfig {
    std::size_t   sample_count       = 200;
    std::size_t   max_sample_length  = 50;
    std::uint64_t rng_seed           = 20240611;
    std::size_t   max_iterations     = 8;
    std::size_t   max_rounds         = 20;
    // Sample until a round adds nothing before the first iteration,
    // instead of only after the iteration fails to settle.
    bool          sample_first       = true;
  };

  struct GeodesicResult {
    Fsa                      acceptor;
    std::size_t              wdg_size = 0;  // labels used
    std::size_t              wd_size  = 0;  // labels of the structure
    std::size_t              iterations = 0;
    std::size_t              rounds     = 0;
    std::vector<std::size_t> trajectory;  // state counts of W_0, W_1, ...
  };

  struct NotConverged {
    std::size_t              wdg_size = 0;
    std::vector<std::size_t> trajectory;
  };

  // Fixed-point iteration W_{i+1} = { u | (u, v) accepted, v in W_i },
  // enlarging the difference set with sampled geodesics until it settles.
  std::variant<GeodesicResult, NotConverged> geodesic_word_acceptor(
      AutomaticStructure const& s,
      GeodesicConfig const&     cfg,
      std::function<void(std::string const&)> const& log = {});

  // Word differences of the equal-length pair (u, v).
  std::vector<Word> pair_differences(OrderedAlphabet const&  a,
                                     std::span<Letter const> u,
                                     std::span<Letter const> v,
                                     Reducer const&          reduce);

}  // namespace autstruct

#endif  // AUTSTRUCT_ANALYSIS_HPP_
