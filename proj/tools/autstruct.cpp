// autstruct: short-lex automatic structures from the command line.

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "autstruct/analysis.hpp"
#include "autstruct/fsa2.hpp"
#include "autstruct/fsa_io.hpp"
#include "autstruct/pipeline.hpp"

namespace fs = std::filesystem;
using namespace autstruct;

namespace {

  constexpr int kVerified    = 0;
  constexpr int kNotVerified = 2;
  constexpr int kBudget      = 3;
  constexpr int kUsage       = 64;

  std::string timestamp() {
    auto const        now = std::chrono::system_clock::now();
    std::time_t const t   = std::chrono::system_clock::to_time_t(now);
    std::tm           tm{};
    gmtime_r(&t, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
  }

  ////////////////////////////////////////////////////////////////////////
  // Structure directories
  ////////////////////////////////////////////////////////////////////////

  class Manifest {
   public:
    explicit Manifest(fs::path path) : _path(std::move(path)) {}

    void append(std::string const& line) const {
      std::ofstream out(_path, std::ios::app);
      out << line << '\n';
      if (!out) {
        throw Error("cannot write " + _path.string());
      }
    }

    void stage(std::string const& name, std::vector<std::string> const& files) const {
      std::string line = "stage " + name + " " + timestamp();
      for (auto const& f : files) {
        line += " " + f;
      }
      append(line);
    }

   private:
    fs::path _path;
  };

  std::string mult_file(OrderedAlphabet const& a, Letter x) {
    return "mult_" + a.name(x) + ".fsa";
  }

  void write_machine(fs::path const& path, WordDiffMachine const& m) {
    write_text_file(path.string(), m.serialize());
  }

  WordDiffMachine read_machine(fs::path const& path) {
    return WordDiffMachine::deserialize(read_text_file(path.string()));
  }

  void write_multipliers(fs::path const& dir, Multipliers const& m,
                         OrderedAlphabet const& a) {
    write_fsa((dir / "mult_eq.fsa").string(), m.equality);
    for (Letter x = 0; x < a.size(); ++x) {
      write_fsa((dir / mult_file(a, x)).string(), m.by_letter[x]);
    }
  }

  std::vector<std::string> multiplier_files(OrderedAlphabet const& a) {
    std::vector<std::string> out{"mult_eq.fsa"};
    for (Letter x = 0; x < a.size(); ++x) {
      out.push_back(mult_file(a, x));
    }
    return out;
  }

  // The last verdict line of the manifest, if any.
  std::string verdict(fs::path const& dir) {
    std::ifstream in(dir / "manifest.txt");
    std::string   line, last;
    while (std::getline(in, line)) {
      if (line.rfind("verdict: ", 0) == 0) {
        last = line.substr(9);
      }
    }
    return last;
  }

  Presentation read_dir_presentation(fs::path const& dir) {
    return read_presentation((dir / "presentation.grp").string());
  }

  struct Loaded {
    Presentation       p;
    AutomaticStructure s;
  };

  Multipliers read_multipliers(fs::path const& dir, OrderedAlphabet const& a) {
    Multipliers m{read_fsa((dir / "mult_eq.fsa").string()), {}, 0, {}};
    for (Letter x = 0; x < a.size(); ++x) {
      m.by_letter.push_back(read_fsa((dir / mult_file(a, x)).string()));
    }
    return m;
  }

  // With `recompute_differences` the multipliers are rebuilt from W and D2,
  // which also yields the difference labels they use.
  Loaded load_structure(fs::path const& dir, bool recompute_differences) {
    Presentation p = read_dir_presentation(dir);
    Fsa          w = read_fsa((dir / "wa.fsa").string());
    auto         d2 = read_machine(dir / "d2.wd");
    auto mult = [&] {
      if (!recompute_differences) {
        return read_multipliers(dir, *p.alphabet);
      }
      auto built = make_multipliers(w, d2);
      if (!std::holds_alternative<Multipliers>(built)) {
        throw Error("saved word-acceptor accepts two equal words");
      }
      return std::get<Multipliers>(std::move(built));
    }();
    AutomaticStructure s{p.alphabet, std::move(w), std::move(mult),
                         read_machine(dir / "d1.wd"), std::move(d2),
                         verdict(dir) == "verified", {}};
    return Loaded{std::move(p), std::move(s)};
  }

  ////////////////////////////////////////////////////////////////////////
  // Commands
  ////////////////////////////////////////////////////////////////////////

  struct RunOptions {
    std::string input;
    std::string out;
    std::string resume;
    std::string report;
    std::size_t max_loop1     = 5;
    std::size_t max_loop2     = 100;
    std::size_t budget_states = Budget{}.max_states;
    std::size_t max_rule_length = KbLimits{}.max_rule_length;
    std::size_t stability       = KbLimits{}.stability_threshold;
    std::size_t max_rules       = KbLimits{}.max_rule_count;
    std::size_t checkpoint      = KbLimits{}.checkpoint_interval;
    std::string dump_rules;
    bool        interactive     = false;
    bool        use_d2_for_d1   = false;
    bool        quiet           = false;
  };

  fs::path output_dir(RunOptions const& o) {
    return o.out.empty() ? fs::path(o.input + ".out") : fs::path(o.out);
  }

  int cmd_run(RunOptions const& o) {
    Presentation const p   = read_presentation(o.input);
    auto const&        a   = *p.alphabet;
    fs::path const     dir = output_dir(o);
    fs::create_directories(dir);
    write_text_file((dir / "presentation.grp").string(), print_presentation(p));

    Manifest const manifest(dir / "manifest.txt");
    manifest.append("run " + timestamp());
    manifest.append("input: " + o.input);

    PipelineConfig config;
    config.max_loop1           = o.max_loop1;
    config.max_loop2           = o.max_loop2;
    config.budget.max_states   = o.budget_states;
    config.use_d2_for_d1       = o.use_d2_for_d1;
    config.kb.max_rule_length  = o.max_rule_length;
    config.kb.stability_threshold = o.stability;
    std::ostringstream snapshot;
    snapshot << "config: max_loop1=" << config.max_loop1
             << " max_loop2=" << config.max_loop2
             << " budget_states=" << config.budget.max_states
             << " use_d2_for_d1=" << config.use_d2_for_d1
             << " max_rule_length=" << config.kb.max_rule_length
             << " stability_threshold=" << config.kb.stability_threshold
             << " witnesses_per_letter=" << config.witnesses_per_letter;
    manifest.append(snapshot.str());
    if (!o.quiet) {
      config.log = [](std::string const& line) { std::cerr << line << '\n'; };
    }
    config.checkpoint = [&](std::string const& stage, PipelineState const& st) {
      if (stage == "d1") {
        write_machine(dir / "d1.wd", *st.d1);
        manifest.stage(stage, {"d1.wd"});
      } else if (stage == "wa") {
        write_fsa((dir / "wa.fsa").string(), *st.word_acceptor);
        manifest.stage(stage, {"wa.fsa"});
      } else if (stage == "d2") {
        write_machine(dir / "d2.wd", *st.d2);
        manifest.stage(stage, {"d2.wd"});
      } else if (stage == "mult") {
        write_multipliers(dir, *st.multipliers, a);
        manifest.stage(stage, multiplier_files(a));
      }
    };

    ResumePoint resume;
    if (!o.resume.empty()) {
      fs::path const from(o.resume);
      resume.d1 = read_machine(from / "d1.wd");
      if (fs::exists(from / "d2.wd")) {
        resume.d2_labels = read_machine(from / "d2.wd").labels();
      }
      manifest.append("resume: " + o.resume);
    }

    auto const     result = run_pipeline(p, config, resume);
    PipelineReport report;
    int            code = kVerified;
    if (auto const* s = std::get_if<AutomaticStructure>(&result)) {
      report = s->report;
      write_machine(dir / "d1.wd", s->d1);
      write_machine(dir / "d2.wd", s->d2);
      write_fsa((dir / "wa.fsa").string(), s->word_acceptor);
      write_multipliers(dir, s->multipliers, a);
      manifest.stage("final", [&] {
        auto files = multiplier_files(a);
        files.insert(files.begin(), {"d1.wd", "d2.wd", "wa.fsa"});
        return files;
      }());
    } else {
      auto const& d = std::get<Diagnosis>(result);
      report        = d.report;
      code          = d.budget_exceeded ? kBudget : kNotVerified;
    }
    std::string const text = format_report(report, a);
    write_text_file((dir / "report.txt").string(), text);
    if (!o.report.empty()) {
      write_text_file(o.report, text);
    }
    manifest.stage("report", {"report.txt"});
    manifest.append("verdict: "
                    + std::string(code == kVerified    ? "verified"
                                  : code == kBudget    ? "budget exceeded"
                                                       : "not verified"));
    std::cout << text;
    return code;
  }

  int cmd_kb(RunOptions const& o) {
    Presentation const p   = read_presentation(o.input);
    fs::path const     dir = output_dir(o);
    fs::create_directories(dir);
    write_text_file((dir / "presentation.grp").string(), print_presentation(p));
    KbLimits limits;
    limits.max_rule_length     = o.max_rule_length;
    limits.max_rule_count      = o.max_rules;
    limits.checkpoint_interval = o.checkpoint;
    limits.stability_threshold = o.stability;
    RuleSystem rs = seed_rules(p);
    KbStatus   st = KbStatus::stopped;
    if (o.interactive) {
      st = rs.run(limits, [](RuleSystem const& sys) {
        std::cout << "rules: " << sys.num_rules()
                  << ", D1 states: " << harvest_d1(sys).num_states()
                  << ".  Continue? [Y/n] " << std::flush;
        std::string answer;
        if (!std::getline(std::cin, answer)) {
          return false;
        }
        return answer.empty() || (answer[0] != 'n' && answer[0] != 'N');
      });
    }
    WordDiffMachine const d1 = o.interactive ? harvest_d1(rs)
                                             : complete_until_stable(rs, limits, o.stability, &st);
    write_machine(dir / "d1.wd", d1);
    write_text_file((dir / "rules.txt").string(), rs.dump());
    if (!o.dump_rules.empty()) {
      write_text_file(o.dump_rules, rs.dump());
    }
    Manifest const manifest(dir / "manifest.txt");
    manifest.append("kb " + timestamp());
    manifest.append("input: " + o.input);
    manifest.stage("d1", {"d1.wd", "rules.txt"});
    std::cout << "status: " << to_string(st) << '\n'
              << "rules: " << rs.num_rules() << '\n'
              << "D1 states: " << d1.num_states() << '\n';
    return kVerified;
  }

  int cmd_wa(std::string const& dir_name, std::size_t budget_states) {
    fs::path const        dir = dir_name;
    WordDiffMachine const d1  = read_machine(dir / "d1.wd");
    Fsa const w = make_word_acceptor(d1.to_fsa(), Budget{budget_states});
    write_fsa((dir / "wa.fsa").string(), w);
    Manifest(dir / "manifest.txt").stage("wa", {"wa.fsa"});
    std::cout << "word-acceptor states: " << w.num_states() << '\n';
    return kVerified;
  }

  int cmd_mult(std::string const& dir_name, std::size_t budget_states) {
    fs::path const     dir = dir_name;
    Presentation const p   = read_dir_presentation(dir);
    Fsa const          w   = read_fsa((dir / "wa.fsa").string());
    WordDiffMachine const d2 = [&] {
      if (fs::exists(dir / "d2.wd")) {
        return read_machine(dir / "d2.wd");
      }
      WordDiffMachine const d1 = read_machine(dir / "d1.wd");
      auto m = build_d2(d1.labels(), p.alphabet, make_reducer(d1.to_fsa()));
      write_machine(dir / "d2.wd", m);
      return m;
    }();
    auto built = make_multipliers(w, d2, Budget{budget_states});
    if (auto const* wf = std::get_if<WitnessFailure>(&built)) {
      std::cout << "not a word-acceptor: " << print_word(wf->u, *p.alphabet)
                << " = " << print_word(wf->v, *p.alphabet) << '\n';
      return kNotVerified;
    }
    auto const& m = std::get<Multipliers>(built);
    write_multipliers(dir, m, *p.alphabet);
    Manifest(dir / "manifest.txt").stage("mult", multiplier_files(*p.alphabet));
    std::cout << "product states: " << m.product_states << '\n'
              << "equality multiplier states: " << m.equality.num_states() << '\n';
    for (Letter x = 0; x < p.alphabet->size(); ++x) {
      std::cout << "mult_" << p.alphabet->name(x) << ": "
                << m.by_letter[x].num_states() << '\n';
    }
    return kVerified;
  }

  int cmd_check(std::string const& dir_name, std::size_t budget_states) {
    fs::path const dir    = dir_name;
    Loaded const   l      = load_structure(dir, false);
    auto const&    a      = *l.p.alphabet;
    Reducer const  reduce = make_reducer(l.s.d1.to_fsa());
    Manifest const manifest(dir / "manifest.txt");
    if (auto missing = check_multipliers(l.s.word_acceptor, l.s.multipliers,
                                         l.s.d2, reduce)) {
      std::cout << "step 5 failed: " << missing->labels.size()
                << " missing word differences\n";
      manifest.append("verdict: not verified");
      return kNotVerified;
    }
    if (auto bad = axiom_check(l.s.multipliers, l.p.monoid_relators(),
                               Budget{budget_states})) {
      std::cout << "step 6 failed: relator " << print_word(*bad, a) << '\n';
      manifest.append("verdict: not verified");
      return kNotVerified;
    }
    std::cout << "verified\n";
    manifest.append("verdict: verified");
    return kVerified;
  }

  int cmd_reduce(std::string const& dir_name, std::string const& text) {
    fs::path const dir = dir_name;
    if (verdict(dir) != "verified") {
      std::cerr << "autstruct: " << dir_name << " holds no verified structure\n";
      return kNotVerified;
    }
    Presentation const    p  = read_dir_presentation(dir);
    WordDiffMachine const d1 = read_machine(dir / "d1.wd");
    Fsa const             w  = read_fsa((dir / "wa.fsa").string());
    Word const            u  = parse_word(text, *p.alphabet);
    Word const            v  = reduce_via_d1(d1.to_fsa(), u);
    if (!accepts(w, v)) {
      throw Error("reduced word " + print_word(v, *p.alphabet)
                  + " is not accepted by the word-acceptor");
    }
    std::cout << print_word(v, *p.alphabet) << '\n';
    return kVerified;
  }

  int cmd_geodesic(std::string const& dir_name, GeodesicConfig const& cfg,
                   std::string const& out, bool quiet) {
    fs::path const dir = dir_name;
    Loaded const   l   = load_structure(dir, true);
    if (!l.s.verified) {
      std::cerr << "autstruct: " << dir_name << " holds no verified structure\n";
      return kNotVerified;
    }
    std::function<void(std::string const&)> log;
    if (!quiet) {
      log = [](std::string const& line) { std::cerr << line << '\n'; };
    }
    auto const result = geodesic_word_acceptor(l.s, cfg, log);
    std::cout << "seed: " << cfg.rng_seed << '\n'
              << "word differences: " << l.s.multipliers.differences.size() << '\n';
    if (auto const* nc = std::get_if<NotConverged>(&result)) {
      std::cout << "not converged with " << nc->wdg_size << " differences;"
                << " trajectory:";
      for (auto t : nc->trajectory) {
        std::cout << ' ' << t;
      }
      std::cout << '\n';
      return kNotVerified;
    }
    auto const&    r    = std::get<GeodesicResult>(result);
    fs::path const path = out.empty() ? dir / "geodesic.fsa" : fs::path(out);
    write_fsa(path.string(), r.acceptor);
    std::cout << "geodesic word-acceptor states: " << r.acceptor.num_states() << '\n'
              << "differences used: " << r.wdg_size << '\n'
              << "iterations: " << r.iterations << '\n';
    return kVerified;
  }

  int cmd_enum(std::string const& file, std::size_t max_len) {
    Fsa const   x = read_fsa(file);
    auto const& a = x.alphabet().base();
    if (x.alphabet().is_two_var()) {
      throw UsageError("enum: expected a one-variable automaton");
    }
    for_each_word(x, max_len, [&](Word const& w) {
      std::cout << print_word(w, a) << '\n';
      return true;
    });
    return kVerified;
  }

  int cmd_order(std::string const& file) {
    auto const n = language_size(read_fsa(file));
    if (n) {
      std::cout << *n << '\n';
    } else {
      std::cout << "infinite\n";
    }
    return kVerified;
  }

  int cmd_growth(std::string const& file) {
    std::cout << growth_series(read_fsa(file)).to_string() << '\n';
    return kVerified;
  }

  int cmd_fsa(std::string const& op, std::vector<std::string> const& files,
              std::string const& out, std::size_t budget_states) {
    std::map<std::string, std::size_t> const arity{
        {"and", 2}, {"or", 2},     {"not", 1}, {"concat", 2},
        {"exists", 1}, {"compose", 2}, {"min", 1}, {"eq", 2}};
    auto const it = arity.find(op);
    if (it == arity.end()) {
      throw UsageError("fsa: unknown operation '" + op + "'");
    }
    if (files.size() != it->second) {
      throw UsageError("fsa " + op + ": expected " + std::to_string(it->second)
                       + " automata");
    }
    std::vector<Fsa> x;
    for (auto const& f : files) {
      x.push_back(read_fsa(f));
    }
    Budget const budget{budget_states};
    if (op == "eq") {
      bool const same = equal_languages(x[0], x[1]);
      std::cout << (same ? "equal" : "different") << '\n';
      return same ? kVerified : kNotVerified;
    }
    Fsa r = op == "and"      ? intersect(x[0], x[1])
            : op == "or"     ? unite(x[0], x[1])
            : op == "not"    ? complement(x[0])
            : op == "concat" ? concat(x[0], x[1], budget)
            : op == "exists" ? exists(x[0], budget)
            : op == "compose" ? compose(x[0], x[1], budget)
                              : x[0];
    std::string const text = print_fsa(minimize(r));
    if (out.empty()) {
      std::cout << text;
    } else {
      write_text_file(out, text);
    }
    return kVerified;
  }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Short-lex automatic structures of finitely presented groups"};
  app.require_subcommand(1);

  RunOptions  ro;
  std::size_t budget_states = Budget{}.max_states;
  auto add_run_options = [&](CLI::App* c) {
    c->add_option("presentation", ro.input, "Group presentation file")->required();
    c->add_option("-o,--out", ro.out, "Output directory (default <presentation>.out)");
    c->add_option("--max-rule-length", ro.max_rule_length, "Longest rule kept");
    c->add_option("--stability", ro.stability,
                  "Checkpoints with unchanged D1 that stop completion");
    c->add_flag("-q,--quiet", ro.quiet, "No progress lines");
  };

  auto* run = app.add_subcommand("run", "Compute and verify the automatic structure");
  add_run_options(run);
  run->add_option("--max-loop1", ro.max_loop1, "Returns to Step 1");
  run->add_option("--max-loop2", ro.max_loop2, "Returns to Step 3 per Step-1 pass");
  run->add_option("--budget-states", ro.budget_states, "State budget per construction");
  run->add_flag("--use-d2-for-d1", ro.use_d2_for_d1,
                "Build the word-acceptor from D2 after a restart");
  run->add_option("--resume", ro.resume, "Directory holding d1.wd (and d2.wd)");
  run->add_option("--report", ro.report, "Extra copy of the report");

  auto* kb = app.add_subcommand("kb", "Knuth-Bendix completion and D1 only");
  add_run_options(kb);
  kb->add_option("--max-rules", ro.max_rules, "Rule count limit");
  kb->add_option("--max-rule-len", ro.max_rule_length, "Same as --max-rule-length");
  kb->add_option("--checkpoint", ro.checkpoint, "Overlaps between D1 checkpoints");
  kb->add_option("--dump-rules", ro.dump_rules, "Also write the rules to this file");
  kb->add_flag("--interactive", ro.interactive,
               "Ask whether to continue at each checkpoint");

  std::string dir;
  auto*       wa = app.add_subcommand("wa", "Word-acceptor from a saved D1");
  wa->add_option("dir", dir, "Structure directory")->required();
  wa->add_option("--budget-states", budget_states);
  auto* mult = app.add_subcommand("mult", "Multipliers from a saved word-acceptor");
  mult->add_option("dir", dir, "Structure directory")->required();
  mult->add_option("--budget-states", budget_states);
  auto* check = app.add_subcommand("check", "Steps 5 and 6 on saved artifacts");
  check->add_option("dir", dir, "Structure directory")->required();
  check->add_option("--budget-states", budget_states);

  std::string file;
  std::size_t max_len = 6;
  auto*       en      = app.add_subcommand("enum", "Accepted words in short-lex order");
  en->add_option("fsa", file)->required();
  en->add_option("--maxlen", max_len, "Longest word");
  auto* order = app.add_subcommand("order", "Size of the accepted language");
  order->add_option("fsa", file)->required();
  auto* growth = app.add_subcommand("growth", "Growth series of the accepted language");
  growth->add_option("fsa", file)->required();

  GeodesicConfig gc;
  std::string    out;
  bool           quiet = false;
  auto* geo = app.add_subcommand("geodesic", "Geodesic word-acceptor of a verified structure");
  geo->add_option("dir", dir, "Structure directory")->required();
  geo->add_option("--samples", gc.sample_count, "Geodesics sampled per round");
  geo->add_option("--maxlen", gc.max_sample_length, "Longest sampled geodesic");
  geo->add_option("--seed", gc.rng_seed, "Sampling seed");
  geo->add_option("--max-iterations", gc.max_iterations, "Iterations per round");
  geo->add_option("-o,--out", out, "Output file (default <dir>/geodesic.fsa)");
  geo->add_flag("-q,--quiet", quiet);

  std::string word;
  auto*       red = app.add_subcommand("reduce", "Short-lex normal form of a word");
  red->add_option("dir", dir, "Structure directory")->required();
  red->add_option("word", word, "Word, e.g. a*b^2 or IdWord")->required();

  std::string              op;
  std::vector<std::string> operands;
  auto* fsa = app.add_subcommand("fsa", "Automaton operations: and or not concat exists compose min eq");
  fsa->add_option("op", op)->required();
  fsa->add_option("files", operands)->required();
  fsa->add_option("-o,--out", out, "Output file (default stdout)");
  fsa->add_option("--budget-states", budget_states);

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run) {
      return cmd_run(ro);
    }
    if (*kb) {
      return cmd_kb(ro);
    }
    if (*wa) {
      return cmd_wa(dir, budget_states);
    }
    if (*mult) {
      return cmd_mult(dir, budget_states);
    }
    if (*check) {
      return cmd_check(dir, budget_states);
    }
    if (*en) {
      return cmd_enum(file, max_len);
    }
    if (*order) {
      return cmd_order(file);
    }
    if (*growth) {
      return cmd_growth(file);
    }
    if (*geo) {
      return cmd_geodesic(dir, gc, out, quiet);
    }
    if (*red) {
      return cmd_reduce(dir, word);
    }
    if (*fsa) {
      return cmd_fsa(op, operands, out, budget_states);
    }
  } catch (ParseError const& e) {
    std::cerr << "autstruct: parse error: " << e.what() << '\n';
    return kUsage;
  } catch (UsageError const& e) {
    std::cerr << "autstruct: " << e.what() << '\n';
    return kUsage;
  } catch (BudgetExceeded const& e) {
    std::cerr << "autstruct: " << e.what() << '\n';
    return kBudget;
  } catch (std::exception const& e) {
    std::cerr << "autstruct: " << e.what() << '\n';
    return 1;
  }
  return kUsage;
}
