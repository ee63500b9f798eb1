#ifndef AUTSTRUCT_FSA_IO_HPP_
#define AUTSTRUCT_FSA_IO_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "autstruct/fsa.hpp"

namespace autstruct {

  // Text format, states 1-based, 0 meaning "no state":
  //
  //   fsa
  //   generators: a A b B      # underlying ordered alphabet
  //   inverses: a A  b B
  //   alphabet: a A b B        # or pair letters a/a a/A ... $/B
  //   states: 5
  //   initial: 1
  //   accepting: 1 2 3 4 5
  //   labels:                  # optional, word-difference machines only
  //   1 IdWord
  //   transitions:
  //   1 a 2
  //   end
  //
  // The generators and inverses lines may be omitted for one-variable
  // machines, in which case the alphabet line gives the generators and
  // inverses follow the case-change convention.
  struct FsaDocument {
    Fsa                              fsa;
    std::optional<std::vector<Word>> labels;
  };

  std::string print_fsa(Fsa const& x, std::vector<Word> const* labels = nullptr);
  FsaDocument parse_fsa_document(std::string_view text);
  Fsa         parse_fsa(std::string_view text);

  FsaDocument read_fsa_document(std::string const& path);
  Fsa         read_fsa(std::string const& path);
  void        write_fsa(std::string const&       path,
                        Fsa const&               x,
                        std::vector<Word> const* labels = nullptr);

  std::string read_text_file(std::string const& path);
  void        write_text_file(std::string const& path, std::string_view text);

}  // namespace autstruct

#endif  // AUTSTRUCT_FSA_IO_HPP_
