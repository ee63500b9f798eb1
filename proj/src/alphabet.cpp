#include "autstruct/alphabet.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "autstruct/errors.hpp"

namespace autstruct {

  namespace {
    constexpr std::string_view kReserved = "^()*=#$,/:";
    constexpr std::string_view kIdWord   = "IdWord";

    bool valid_name(std::string_view name) {
      if (name.empty() || name == kIdWord) {
        return false;
      }
      return std::none_of(name.begin(), name.end(), [](char c) {
        return std::isspace(static_cast<unsigned char>(c))
               || kReserved.find(c) != std::string_view::npos;
      });
    }

    std::string case_swap(std::string_view name) {
      std::string out(name);
      for (char& c : out) {
        auto u = static_cast<unsigned char>(c);
        if (std::islower(u)) {
          c = static_cast<char>(std::toupper(u));
        } else if (std::isupper(u)) {
          c = static_cast<char>(std::tolower(u));
        }
      }
      return out;
    }
  }  // namespace

  OrderedAlphabet::OrderedAlphabet(std::vector<std::string> names,
                                   std::vector<Letter>      inverse)
      : _names(std::move(names)), _inverse(std::move(inverse)) {
    if (_names.size() != _inverse.size()) {
      throw UsageError("alphabet: names and inverse table differ in size");
    }
    for (std::size_t i = 0; i < _names.size(); ++i) {
      if (!valid_name(_names[i])) {
        throw UsageError("alphabet: invalid generator name '" + _names[i]
                         + "'");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (_names[i] == _names[j]) {
          throw UsageError("alphabet: duplicate generator name '" + _names[i]
                           + "'");
        }
      }
      if (_inverse[i] >= _names.size() || _inverse[_inverse[i]] != i) {
        throw UsageError("alphabet: inverse map is not an involution at '"
                         + _names[i] + "'");
      }
    }
    _compact = std::all_of(_names.begin(), _names.end(), [](auto const& n) {
      return n.size() == 1;
    });
  }

  OrderedAlphabet OrderedAlphabet::with_case_inverses(
      std::vector<std::string> const& generators) {
    std::vector<std::string> names;
    std::vector<Letter>      inverse;
    for (auto const& g : generators) {
      auto const i = static_cast<Letter>(names.size());
      names.push_back(g);
      names.push_back(case_swap(g));
      inverse.push_back(i + 1);
      inverse.push_back(i);
    }
    return OrderedAlphabet(std::move(names), std::move(inverse));
  }

  OrderedAlphabet OrderedAlphabet::self_inverse(std::vector<std::string> names) {
    std::vector<Letter> inverse(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
      inverse[i] = static_cast<Letter>(i);
    }
    return OrderedAlphabet(std::move(names), std::move(inverse));
  }

  std::string const& OrderedAlphabet::name(Letter x) const {
    if (x >= _names.size()) {
      throw UsageError("alphabet: letter index " + std::to_string(x)
                       + " out of range");
    }
    return _names[x];
  }

  Letter OrderedAlphabet::inverse(Letter x) const {
    if (x >= _inverse.size()) {
      throw UsageError("alphabet: letter index " + std::to_string(x)
                       + " out of range");
    }
    return _inverse[x];
  }

  std::optional<Letter> OrderedAlphabet::find(std::string_view name) const {
    for (std::size_t i = 0; i < _names.size(); ++i) {
      if (_names[i] == name) {
        return static_cast<Letter>(i);
      }
    }
    return std::nullopt;
  }

  std::optional<Letter> OrderedAlphabet::resolve(std::string_view name) const {
    if (auto x = find(name)) {
      return x;
    }
    if (auto x = find(case_swap(name))) {
      return _inverse[*x];
    }
    return std::nullopt;
  }

  bool OrderedAlphabet::contains(std::span<Letter const> w) const noexcept {
    return std::all_of(
        w.begin(), w.end(), [this](Letter x) { return x < _names.size(); });
  }

  std::strong_ordering OrderedAlphabet::compare(
      std::span<Letter const> u,
      std::span<Letter const> v) const {
    if (!contains(u) || !contains(v)) {
      throw UsageError("shortlex_compare: word is not over this alphabet");
    }
    return shortlex_compare(u, v);
  }

  std::strong_ordering shortlex_compare(std::span<Letter const> u,
                                        std::span<Letter const> v) noexcept {
    if (u.size() != v.size()) {
      return u.size() <=> v.size();
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (u[i] != v[i]) {
        return u[i] <=> v[i];
      }
    }
    return std::strong_ordering::equal;
  }

  Word invert_word(OrderedAlphabet const& alphabet, std::span<Letter const> w) {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      out.push_back(alphabet.inverse(*it));
    }
    return out;
  }

  Word concat_words(std::span<Letter const> u, std::span<Letter const> v) {
    Word out;
    out.reserve(u.size() + v.size());
    out.insert(out.end(), u.begin(), u.end());
    out.insert(out.end(), v.begin(), v.end());
    return out;
  }

  PaddedPair pad(OrderedAlphabet const&  alphabet,
                 std::span<Letter const> u,
                 std::span<Letter const> v) {
    Letter const $ = alphabet.padding();
    PaddedPair   out(std::max(u.size(), v.size()));
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = {i < u.size() ? u[i] : $, i < v.size() ? v[i] : $};
    }
    return out;
  }

  std::pair<Word, Word> unpad(OrderedAlphabet const& alphabet,
                              PaddedPair const&      p) {
    std::pair<Word, Word> out;
    for (auto const& [x, y] : p) {
      if (x != alphabet.padding()) {
        out.first.push_back(x);
      }
      if (y != alphabet.padding()) {
        out.second.push_back(y);
      }
    }
    return out;
  }

  bool is_valid_padded(OrderedAlphabet const& alphabet, PaddedPair const& p) {
    Letter const $     = alphabet.padding();
    bool         ended1 = false, ended2 = false;
    for (auto const& [x, y] : p) {
      if (x > $ || y > $ || (x == $ && y == $)) {
        return false;
      }
      if ((ended1 && x != $) || (ended2 && y != $)) {
        return false;
      }
      ended1 = ended1 || x == $;
      ended2 = ended2 || y == $;
    }
    return true;
  }

  ////////////////////////////////////////////////////////////////////////
  // Word parsing
  ////////////////////////////////////////////////////////////////////////

  namespace {
    class WordParser {
     public:
      WordParser(std::string_view text, OrderedAlphabet const& alphabet)
          : _text(text), _alphabet(alphabet) {
        for (auto const& n : alphabet.names()) {
          _candidates.push_back(n);
          std::string swapped = case_swap(n);
          if (!alphabet.find(swapped)) {
            _candidates.push_back(swapped);
          }
        }
        _candidates.emplace_back(kIdWord);
        std::stable_sort(_candidates.begin(),
                         _candidates.end(),
                         [](auto const& a, auto const& b) {
                           return a.size() > b.size();
                         });
      }

      Word parse() {
        Word w = parse_sequence();
        skip_separators();
        if (_pos != _text.size()) {
          fail("unexpected '" + std::string(1, _text[_pos]) + "'");
        }
        return w;
      }

     private:
      [[noreturn]] void fail(std::string const& why) const {
        throw ParseError("word '" + std::string(_text) + "': " + why
                         + " at offset " + std::to_string(_pos));
      }

      void skip_separators() {
        while (_pos < _text.size()
               && (std::isspace(static_cast<unsigned char>(_text[_pos]))
                   || _text[_pos] == '*')) {
          ++_pos;
        }
      }

      Word parse_sequence() {
        Word w;
        bool any = false;
        while (true) {
          skip_separators();
          if (_pos == _text.size() || _text[_pos] == ')') {
            break;
          }
          Word t = parse_term();
          w.insert(w.end(), t.begin(), t.end());
          any = true;
        }
        if (!any) {
          fail("empty word");
        }
        return w;
      }

      Word parse_term() {
        Word atom;
        if (_text[_pos] == '(') {
          ++_pos;
          atom = parse_sequence();
          skip_separators();
          if (_pos == _text.size() || _text[_pos] != ')') {
            fail("missing ')'");
          }
          ++_pos;
        } else {
          atom = parse_name();
        }
        skip_separators();
        if (_pos < _text.size() && _text[_pos] == '^') {
          ++_pos;
          skip_separators();
          long exponent = parse_integer();
          return power(atom, exponent);
        }
        return atom;
      }

      long parse_integer() {
        std::size_t start = _pos;
        if (_pos < _text.size() && (_text[_pos] == '-' || _text[_pos] == '+')) {
          ++_pos;
        }
        while (_pos < _text.size()
               && std::isdigit(static_cast<unsigned char>(_text[_pos]))) {
          ++_pos;
        }
        std::string digits(_text.substr(start, _pos - start));
        if (digits.empty() || digits == "-" || digits == "+") {
          fail("expected integer exponent");
        }
        return std::stol(digits);
      }

      Word power(Word const& atom, long exponent) const {
        Word const base = exponent < 0 ? invert_word(_alphabet, atom) : atom;
        Word       out;
        for (long i = 0; i < std::labs(exponent); ++i) {
          out.insert(out.end(), base.begin(), base.end());
        }
        return out;
      }

      Word parse_name() {
        for (auto const& c : _candidates) {
          if (_text.substr(_pos, c.size()) == c) {
            _pos += c.size();
            if (c == kIdWord) {
              return {};
            }
            return {*_alphabet.resolve(c)};
          }
        }
        fail("unknown generator");
      }

      std::string_view         _text;
      OrderedAlphabet const&   _alphabet;
      std::vector<std::string> _candidates;
      std::size_t              _pos = 0;
    };
  }  // namespace

  Word parse_word(std::string_view text, OrderedAlphabet const& alphabet) {
    return WordParser(text, alphabet).parse();
  }

  std::string print_word(std::span<Letter const> w,
                         OrderedAlphabet const&  alphabet) {
    if (w.empty()) {
      return std::string(kIdWord);
    }
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i > 0 && !alphabet.compact()) {
        out += '*';
      }
      out += alphabet.name(w[i]);
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Presentations
  ////////////////////////////////////////////////////////////////////////

  std::vector<Word> Presentation::monoid_relators() const {
    std::vector<Word> out = relators;
    for (Letter x = 0; x < alphabet->size(); ++x) {
      out.push_back({x, alphabet->inverse(x)});
    }
    return out;
  }

  namespace {
    std::vector<std::string> split_tokens(std::string_view s) {
      std::vector<std::string> out;
      std::istringstream       in{std::string(s)};
      std::string              tok;
      while (in >> tok) {
        out.push_back(tok);
      }
      return out;
    }

    std::string_view trim(std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
      }
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
      }
      return s;
    }

    // Splits a relator line on commas outside parentheses.
    std::vector<std::string> split_list(std::string_view s) {
      std::vector<std::string> out;
      int                      depth = 0;
      std::string              cur;
      for (char c : s) {
        if (c == '(') {
          ++depth;
        } else if (c == ')') {
          --depth;
        }
        if (c == ',' && depth == 0) {
          out.emplace_back(trim(cur));
          cur.clear();
        } else {
          cur += c;
        }
      }
      if (!trim(cur).empty()) {
        out.emplace_back(trim(cur));
      }
      return out;
    }
  }  // namespace

  Presentation parse_presentation(std::string_view text) {
    enum class Section { none, relators, equations };
    std::vector<std::string>                          generators;
    std::vector<std::pair<std::string, std::string>>  inverse_pairs;
    std::vector<std::string>                          ordering;
    std::vector<std::pair<std::string, std::size_t>>  relator_text;
    std::vector<std::pair<std::string, std::size_t>>  equation_text;
    bool                                              have_generators = false;
    Section                                           section = Section::none;

    std::istringstream in{std::string(text)};
    std::string        raw;
    std::size_t        lineno = 0;
    while (std::getline(in, raw)) {
      ++lineno;
      std::string_view line = raw;
      if (auto hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      line = trim(line);
      if (line.empty()) {
        continue;
      }
      auto colon = line.find(':');
      if (colon != std::string_view::npos) {
        std::string_view key  = trim(line.substr(0, colon));
        std::string_view rest = trim(line.substr(colon + 1));
        if (key == "generators") {
          generators      = split_tokens(rest);
          have_generators = true;
          section         = Section::none;
          continue;
        } else if (key == "inverses") {
          auto toks = split_tokens(rest);
          if (toks.size() % 2 != 0) {
            throw ParseError("inverses: expected pairs of names", lineno);
          }
          for (std::size_t i = 0; i < toks.size(); i += 2) {
            inverse_pairs.emplace_back(toks[i], toks[i + 1]);
          }
          section = Section::none;
          continue;
        } else if (key == "ordering") {
          ordering = split_tokens(rest);
          section  = Section::none;
          continue;
        } else if (key == "relators") {
          section = Section::relators;
          line    = rest;
        } else if (key == "equations") {
          section = Section::equations;
          line    = rest;
        } else {
          throw ParseError("unknown section '" + std::string(key) + "'",
                           lineno);
        }
        if (line.empty()) {
          continue;
        }
      }
      switch (section) {
        case Section::relators:
          for (auto& r : split_list(line)) {
            relator_text.emplace_back(r, lineno);
          }
          break;
        case Section::equations:
          for (auto& e : split_list(line)) {
            equation_text.emplace_back(e, lineno);
          }
          break;
        case Section::none:
          throw ParseError("text outside of a section", lineno);
      }
    }
    if (!have_generators || generators.empty()) {
      throw ParseError("missing 'generators:' line");
    }

    // Build the letter list: each generator followed by its inverse unless
    // the inverse is itself listed (or the generator is self-inverse).
    std::map<std::string, std::string> declared;
    for (auto const& [x, y] : inverse_pairs) {
      for (auto const& [p, q] : {std::pair{x, y}, std::pair{y, x}}) {
        auto it = declared.find(p);
        if (it != declared.end() && it->second != q) {
          throw ParseError("conflicting inverse declarations for '" + p + "'");
        }
        declared[p] = q;
      }
    }
    std::vector<std::string> names;
    auto known = [&](std::string const& n) {
      return std::find(names.begin(), names.end(), n) != names.end();
    };
    auto listed = [&](std::string const& n) {
      return std::find(generators.begin(), generators.end(), n)
             != generators.end();
    };
    std::map<std::string, std::string> inverse_of;
    for (auto const& g : generators) {
      if (known(g)) {
        throw ParseError("generator '" + g + "' listed twice");
      }
      names.push_back(g);
      auto        it  = declared.find(g);
      std::string inv = it != declared.end() ? it->second : case_swap(g);
      if (it == declared.end() && inv == g) {
        throw ParseError("generator '" + g
                         + "' needs an explicit inverse declaration");
      }
      inverse_of[g]   = inv;
      inverse_of[inv] = g;
      if (inv != g && !listed(inv) && !known(inv)) {
        names.push_back(inv);
      }
    }
    for (auto const& [x, y] : declared) {
      if (!known(x)) {
        throw ParseError("inverse declared for unknown generator '" + x + "'");
      }
    }
    if (!ordering.empty()) {
      std::vector<std::string> a = ordering, b = names;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a != b) {
        throw ParseError("ordering: must list every letter exactly once");
      }
      names = ordering;
    }
    std::vector<Letter> inverse(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
      auto const& inv = inverse_of.at(names[i]);
      inverse[i] = static_cast<Letter>(
          std::find(names.begin(), names.end(), inv) - names.begin());
    }

    Presentation p;
    try {
      p.alphabet = std::make_shared<OrderedAlphabet const>(names, inverse);
    } catch (UsageError const& e) {
      throw ParseError(e.what());
    }
    for (auto const& [r, ln] : relator_text) {
      try {
        p.relators.push_back(parse_word(r, *p.alphabet));
      } catch (ParseError const& e) {
        throw ParseError(e.what(), ln);
      }
    }
    for (auto const& [e, ln] : equation_text) {
      auto eq = e.find('=');
      if (eq == std::string::npos) {
        throw ParseError("equation without '='", ln);
      }
      try {
        auto lhs = std::string(trim(std::string_view(e).substr(0, eq)));
        auto rhs = std::string(trim(std::string_view(e).substr(eq + 1)));
        Word u   = lhs == "1" ? Word{} : parse_word(lhs, *p.alphabet);
        Word v   = rhs == "1" ? Word{} : parse_word(rhs, *p.alphabet);
        p.relators.push_back(concat_words(u, invert_word(*p.alphabet, v)));
      } catch (ParseError const& err) {
        throw ParseError(err.what(), ln);
      }
    }
    return p;
  }

  Presentation read_presentation(std::string const& path) {
    std::ifstream in(path);
    if (!in) {
      throw UsageError("cannot open presentation file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_presentation(buf.str());
  }

  std::string print_presentation(Presentation const& p) {
    auto const&        a = *p.alphabet;
    std::ostringstream out;
    out << "generators:";
    for (auto const& n : a.names()) {
      out << ' ' << n;
    }
    out << "\ninverses:";
    for (Letter x = 0; x < a.size(); ++x) {
      if (a.inverse(x) >= x) {
        out << "  " << a.name(x) << ' ' << a.name(a.inverse(x));
      }
    }
    out << "\nordering:";
    for (auto const& n : a.names()) {
      out << ' ' << n;
    }
    out << "\nrelators:\n";
    for (auto const& r : p.relators) {
      out << print_word(r, a) << '\n';
    }
    return out.str();
  }

}  // namespace autstruct
