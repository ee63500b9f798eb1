#include "autstruct/fsa_io.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace autstruct {

  namespace {
    std::string_view strip(std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
      }
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
      }
      return s;
    }

    std::vector<std::string> tokens(std::string_view s) {
      std::vector<std::string> out;
      std::istringstream       in{std::string(s)};
      std::string              t;
      while (in >> t) {
        out.push_back(t);
      }
      return out;
    }

    std::string swap_case(std::string s) {
      for (char& c : s) {
        auto u = static_cast<unsigned char>(c);
        c      = static_cast<char>(std::islower(u) ? std::toupper(u)
                                                   : std::tolower(u));
      }
      return s;
    }

    State parse_state(std::string const& tok, std::size_t line) {
      try {
        std::size_t used = 0;
        long long   v    = std::stoll(tok, &used);
        if (used != tok.size() || v < 0 || v > 0xfffffffeLL) {
          throw ParseError("bad state '" + tok + "'", line);
        }
        return static_cast<State>(v);
      } catch (std::logic_error const&) {
        throw ParseError("bad state '" + tok + "'", line);
      }
    }

    AlphabetPtr make_alphabet(std::vector<std::string> const& names,
                              std::vector<std::string> const& inverse_tokens,
                              std::size_t                     line) {
      std::map<std::string, std::string> inv;
      if (inverse_tokens.size() % 2 != 0) {
        throw ParseError("inverses: expected pairs", line);
      }
      for (std::size_t i = 0; i < inverse_tokens.size(); i += 2) {
        inv[inverse_tokens[i]]     = inverse_tokens[i + 1];
        inv[inverse_tokens[i + 1]] = inverse_tokens[i];
      }
      std::vector<Letter> inverse(names.size());
      for (std::size_t i = 0; i < names.size(); ++i) {
        std::string partner;
        if (auto it = inv.find(names[i]); it != inv.end()) {
          partner = it->second;
        } else if (inverse_tokens.empty()) {
          partner = swap_case(names[i]);
          if (std::find(names.begin(), names.end(), partner) == names.end()) {
            partner = names[i];
          }
        } else {
          throw ParseError("no inverse declared for '" + names[i] + "'", line);
        }
        auto pos = std::find(names.begin(), names.end(), partner);
        if (pos == names.end()) {
          throw ParseError("inverse '" + partner + "' is not a generator", line);
        }
        inverse[i] = static_cast<Letter>(pos - names.begin());
      }
      try {
        return std::make_shared<OrderedAlphabet const>(names, inverse);
      } catch (UsageError const& e) {
        throw ParseError(e.what(), line);
      }
    }
  }  // namespace

  std::string print_fsa(Fsa const& x, std::vector<Word> const* labels) {
    auto const&        fa   = x.alphabet();
    auto const&        base = fa.base();
    std::ostringstream out;
    out << "fsa\ngenerators:";
    for (auto const& n : base.names()) {
      out << ' ' << n;
    }
    out << "\ninverses:";
    for (Letter a = 0; a < base.size(); ++a) {
      if (base.inverse(a) >= a) {
        out << ' ' << base.name(a) << ' ' << base.name(base.inverse(a));
      }
    }
    out << "\nalphabet:";
    for (Letter a = 0; a < fa.size(); ++a) {
      if (fa.is_two_var() && fa.first(a) == fa.padding()
          && fa.second(a) == fa.padding()) {
        continue;
      }
      out << ' ' << fa.letter_name(a);
    }
    out << "\nstates: " << x.num_states();
    out << "\ninitial: " << (x.num_states() ? x.initial() + 1 : 0);
    out << "\naccepting:";
    for (State s : x.accepting_states()) {
      out << ' ' << s + 1;
    }
    out << '\n';
    if (labels != nullptr) {
      if (labels->size() != x.num_states()) {
        throw UsageError("print_fsa: one label per state required");
      }
      out << "labels:\n";
      for (State s = 0; s < x.num_states(); ++s) {
        out << s + 1 << ' ' << print_word((*labels)[s], base) << '\n';
      }
    }
    out << "transitions:\n";
    for (State s = 0; s < x.num_states(); ++s) {
      x.for_each_edge(s, [&](Letter a, State t) {
        out << s + 1 << ' ' << fa.letter_name(a) << ' ' << t + 1 << '\n';
      });
    }
    out << "end\n";
    return out.str();
  }

  FsaDocument parse_fsa_document(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string        raw;
    std::size_t        lineno = 0;

    std::vector<std::string> generators, inverses, letters;
    std::size_t              alphabet_line = 0;
    bool                     have_gens = false, have_states = false;
    State                    num_states = 0, initial = 0;
    std::vector<State>       accepting;
    std::vector<std::pair<State, std::string>>                 label_lines;
    std::vector<std::tuple<State, std::string, State, std::size_t>> edges;
    enum class Section { header, labels, transitions, done } section
        = Section::header;
    bool seen_magic = false;

    while (std::getline(in, raw)) {
      ++lineno;
      std::string_view line = raw;
      if (auto h = line.find('#'); h != std::string_view::npos) {
        line = line.substr(0, h);
      }
      line = strip(line);
      if (line.empty()) {
        continue;
      }
      if (!seen_magic) {
        if (line != "fsa") {
          throw ParseError("expected 'fsa'", lineno);
        }
        seen_magic = true;
        continue;
      }
      if (section == Section::done) {
        throw ParseError("text after 'end'", lineno);
      }
      if (line == "end") {
        section = Section::done;
        continue;
      }
      auto colon = line.find(':');
      if (colon != std::string_view::npos) {
        std::string_view key  = strip(line.substr(0, colon));
        std::string_view rest = strip(line.substr(colon + 1));
        if (key == "generators") {
          generators = tokens(rest);
          have_gens  = true;
        } else if (key == "inverses") {
          inverses = tokens(rest);
        } else if (key == "alphabet") {
          letters       = tokens(rest);
          alphabet_line = lineno;
        } else if (key == "states") {
          num_states  = parse_state(std::string(rest), lineno);
          have_states = true;
        } else if (key == "initial") {
          initial = parse_state(std::string(rest), lineno);
        } else if (key == "accepting") {
          for (auto const& t : tokens(rest)) {
            accepting.push_back(parse_state(t, lineno));
          }
        } else if (key == "labels") {
          section = Section::labels;
        } else if (key == "transitions") {
          section = Section::transitions;
        } else {
          throw ParseError("unknown key '" + std::string(key) + "'", lineno);
        }
        continue;
      }
      if (section == Section::labels) {
        auto sp = line.find_first_of(" \t");
        if (sp == std::string_view::npos) {
          throw ParseError("expected '<state> <word>'", lineno);
        }
        label_lines.emplace_back(
            parse_state(std::string(line.substr(0, sp)), lineno),
            std::string(strip(line.substr(sp))));
      } else if (section == Section::transitions) {
        auto t = tokens(line);
        if (t.size() != 3) {
          throw ParseError("expected '<from> <letter> <to>'", lineno);
        }
        edges.emplace_back(
            parse_state(t[0], lineno), t[1], parse_state(t[2], lineno), lineno);
      } else {
        throw ParseError("unexpected line", lineno);
      }
    }
    if (!seen_magic) {
      throw ParseError("empty automaton file");
    }
    if (section != Section::done) {
      throw ParseError("missing 'end'", lineno);
    }
    if (!have_states) {
      throw ParseError("missing 'states:'");
    }
    if (letters.empty() && !have_gens) {
      throw ParseError("missing 'alphabet:'");
    }

    bool const two_var
        = !letters.empty() && letters.front().find('/') != std::string::npos;
    if (!have_gens) {
      if (two_var) {
        throw ParseError("two-variable machines need a 'generators:' line",
                         alphabet_line);
      }
      generators = letters;
    }
    AlphabetPtr base = make_alphabet(generators, inverses, lineno);
    FsaAlphabet fa   = two_var ? FsaAlphabet::two_var(base)
                               : FsaAlphabet::one_var(base);
    for (auto const& t : letters) {
      fa.parse_letter(t);
    }

    FsaBuilder b(fa);
    b.add_states(num_states);
    if (num_states > 0) {
      if (initial == 0 || initial > num_states) {
        throw ParseError("initial state out of range");
      }
      b.set_initial(initial - 1);
    }
    for (State s : accepting) {
      if (s == 0 || s > num_states) {
        throw ParseError("accept state out of range");
      }
      b.set_accepting(s - 1);
    }
    for (auto const& [from, tok, to, ln] : edges) {
      Letter a;
      try {
        a = fa.parse_letter(tok);
      } catch (ParseError const& e) {
        throw ParseError(e.what(), ln);
      }
      if (from == 0 || from > num_states || to > num_states) {
        throw ParseError("state out of range", ln);
      }
      if (to == 0) {
        continue;
      }
      b.add_edge(from - 1, a, to - 1);
    }

    FsaDocument doc{Fsa(fa), std::nullopt};
    try {
      doc.fsa = std::move(b).build();
    } catch (UsageError const& e) {
      throw ParseError(e.what());
    }
    if (!label_lines.empty()) {
      std::vector<Word> labels(num_states);
      std::vector<bool> have(num_states, false);
      for (auto const& [s, w] : label_lines) {
        if (s == 0 || s > num_states || have[s - 1]) {
          throw ParseError("bad or repeated label state " + std::to_string(s));
        }
        labels[s - 1] = parse_word(w, *base);
        have[s - 1]   = true;
      }
      if (std::find(have.begin(), have.end(), false) != have.end()) {
        throw ParseError("every state needs a label");
      }
      doc.labels = std::move(labels);
    }
    return doc;
  }

  Fsa parse_fsa(std::string_view text) {
    return parse_fsa_document(text).fsa;
  }

  std::string read_text_file(std::string const& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw UsageError("cannot open '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

  void write_text_file(std::string const& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw UsageError("cannot write '" + path + "'");
    }
    out << text;
    if (!out) {
      throw UsageError("error writing '" + path + "'");
    }
  }

  FsaDocument read_fsa_document(std::string const& path) {
    return parse_fsa_document(read_text_file(path));
  }

  Fsa read_fsa(std::string const& path) {
    return read_fsa_document(path).fsa;
  }

  void write_fsa(std::string const&       path,
                 Fsa const&               x,
                 std::vector<Word> const* labels) {
    write_text_file(path, print_fsa(x, labels));
  }

}  // namespace autstruct
