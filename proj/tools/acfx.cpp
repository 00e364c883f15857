// acfx command-line tool: gen, judge, search, verify, scramble, apply, invariants.
//
// Exit codes: 0 ok/trivial/valid, 1 invariant failure, 2 bad flags or parse
// error, 3 nontrivial, 4 unknown, 5 search budget exceeded, 6 invalid
// certificate, 7 file I/O, 8 search exhausted.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "acfx/acfx.hpp"

namespace {

enum Exit : int {
  ok = 0,
  invariant_failure = 1,
  usage = 2,
  nontrivial = 3,
  unknown = 4,
  budget = 5,
  invalid_certificate = 6,
  io = 7,
  exhausted = 8,
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) throw IoError("cannot write " + path);
}

std::string trim(std::string s) {
  const char* ws = " \t\r\n";
  s.erase(s.find_last_not_of(ws) + 1);
  s.erase(0, s.find_first_not_of(ws) == std::string::npos ? s.size() : s.find_first_not_of(ws));
  return s;
}

// Inline text, or the contents of a file when written as @path.
acfx::Presentation load_presentation(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') return acfx::parse_presentation(trim(read_file(arg.substr(1))));
  return acfx::parse_presentation(arg);
}

// "concat i=1 j=2", "invert i=1", "conjugate i=1 g=xY", "stabilize g=1",
// "destabilize i=2"; words use the alphabet of the presentation they act on.
acfx::Move parse_move(const std::string& text, const acfx::Presentation& p) {
  std::istringstream in(text);
  std::vector<std::string> toks;
  for (std::string t; in >> t;) toks.push_back(t);
  if (toks.empty()) throw acfx::SyntaxError(0, "empty move");
  auto param = [&](std::size_t k, const std::string& key) {
    if (k >= toks.size() || toks[k].rfind(key + "=", 0) != 0) {
      throw acfx::SyntaxError(0, "move '" + text + "': expected " + key + "=");
    }
    return toks[k].substr(key.size() + 1);
  };
  auto index = [&](std::size_t k, const std::string& key) {
    std::string v = param(k, key);
    try {
      std::size_t used = 0;
      int i = std::stoi(v, &used);
      if (used == v.size()) return i;
    } catch (const std::exception&) {
    }
    throw acfx::SyntaxError(0, "move '" + text + "': bad index '" + v + "'");
  };
  auto word = [&](std::size_t k) {
    const int n = p.generator_count();
    return acfx::parse_word(param(k, "g"), acfx::alphabet_for(n), n);
  };
  auto arity = [&](std::size_t n) {
    if (toks.size() != n + 1) throw acfx::SyntaxError(0, "move '" + text + "': wrong parameter count");
  };
  const std::string& kw = toks[0];
  if (kw == "concat") {
    arity(2);
    return acfx::Move::concat(index(1, "i"), index(2, "j"));
  }
  if (kw == "invert") {
    arity(1);
    return acfx::Move::invert(index(1, "i"));
  }
  if (kw == "conjugate") {
    arity(2);
    int i = index(1, "i");
    return acfx::Move::conjugate(i, word(2));
  }
  if (kw == "stabilize") {
    arity(1);
    return acfx::Move::stabilize(word(1));
  }
  if (kw == "destabilize") {
    arity(1);
    return acfx::Move::destabilize(index(1, "i"));
  }
  throw acfx::SyntaxError(0, "unknown move '" + kw + "'");
}

// key=value lines from --config become "--key value" arguments placed right
// after the subcommand name, so flags given later on the command line win.
std::vector<std::string> config_arguments(const std::string& path) {
  std::vector<std::string> out;
  std::istringstream in(read_file(path));
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw acfx::SyntaxError(lineno, path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw acfx::SyntaxError(lineno, path + ":" + std::to_string(lineno) + ": empty key");
    out.push_back("--" + key);
    out.push_back(trim(line.substr(eq + 1)));
  }
  return out;
}

struct Options {
  // shared
  std::string presentation;
  std::string out;
  std::uint64_t seed = 1;
  // gen
  std::string family;
  int n = -1;
  // judge
  std::size_t coset_limit = acfx::default_coset_limit;
  // search / scramble
  std::size_t max_len = 24;
  int max_gens = 3;
  std::string strategy = "bfs";
  std::size_t budget = 1'000'000;
  std::size_t beam_width = 1000;
  double time_limit = 0;
  unsigned workers = 1;
  std::size_t steps = 3;
  // verify
  std::string cert_file;
  // apply
  std::vector<std::string> moves;
  // invariants
  std::size_t cases = 10'000;
};

int cmd_gen(const Options& o) {
  acfx::Presentation p;
  if (o.family == "trivial" || o.family == "gpn") {
    if (o.n < 0) {
      std::cerr << "error: gen " << o.family << " needs n >= 0\n";
      return usage;
    }
    p = o.family == "trivial" ? acfx::gen_trivial(o.n) : acfx::gen_gpn(o.n);
  } else {
    p = acfx::fig5_presentation();
  }
  std::cout << acfx::format_presentation(p) << "\n";
  return ok;
}

int cmd_judge(const Options& o) {
  acfx::Presentation p = load_presentation(o.presentation);
  acfx::OracleBudget b;
  b.coset_limit = o.coset_limit;
  auto t0 = std::chrono::steady_clock::now();
  acfx::OracleVerdict v = acfx::triviality_verdict(p, b);
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  std::cout << v.to_line() << "\n";
  std::cerr << "time_ms=" << static_cast<long long>(ms) << " defined=" << v.work.defined
            << " max_live=" << v.work.max_live << " coincidences=" << v.work.coincidences << "\n";
  switch (v.kind) {
    case acfx::VerdictKind::trivial:
      return ok;
    case acfx::VerdictKind::nontrivial:
      return nontrivial;
    case acfx::VerdictKind::unknown:
      break;
  }
  return unknown;
}

int cmd_search(const Options& o) {
  acfx::Presentation p = load_presentation(o.presentation);
  acfx::SearchConfig cfg;
  cfg.max_len = o.max_len;
  cfg.max_gens = o.max_gens;
  cfg.strategy = o.strategy == "beam"  ? acfx::Strategy::beam
                 : o.strategy == "id" ? acfx::Strategy::iterative_deepening
                                      : acfx::Strategy::bfs;
  cfg.beam_width = o.beam_width;
  cfg.node_budget = o.budget;
  if (o.time_limit > 0) {
    cfg.time_budget = std::chrono::milliseconds(static_cast<long long>(o.time_limit * 1000));
  }
  cfg.workers = o.workers;
  acfx::SearchOutcome r = acfx::search_trivialization(p, cfg);
  std::cout << r.summary_line(false) << "\n";
  std::cerr << r.timing_line() << "\n";
  if (r.status == acfx::SearchStatus::found) {
    if (!o.out.empty()) write_file(o.out, acfx::serialize(*r.certificate));
    return ok;
  }
  return r.status == acfx::SearchStatus::budget_exceeded ? budget : exhausted;
}

int cmd_verify(const Options& o) {
  std::string text = read_file(o.cert_file);
  acfx::AnyCertificate any;
  try {
    any = acfx::parse_certificate(text);
  } catch (const acfx::VersionMismatch& e) {
    std::cout << "INVALID reason=version: " << e.what() << "\n";
    return invalid_certificate;
  } catch (const acfx::SyntaxError& e) {
    std::cout << "INVALID line=" << e.position() << " reason=" << e.what() << "\n";
    return invalid_certificate;
  }
  if (auto* c = std::get_if<acfx::Certificate>(&any)) {
    acfx::CertificateVerdict v = acfx::verify_certificate(*c);
    if (v.valid) {
      std::cout << "VALID kind=sac moves=" << c->moves.size() << "\n";
      return ok;
    }
    std::cout << "INVALID step=" << v.step << " reason=" << v.reason << "\n";
    return invalid_certificate;
  }
  const auto& cc = std::get<acfx::ConsequenceCertificate>(any);
  acfx::ConsequenceVerdict v;
  try {
    v = acfx::verify_consequence(cc);
  } catch (const acfx::Error& e) {
    std::cout << "INVALID reason=" << e.what() << "\n";
    return invalid_certificate;
  }
  if (v.valid) {
    std::cout << "VALID kind=consequence terms=" << cc.terms.size() << "\n";
    return ok;
  }
  std::cout << "INVALID residue=" << acfx::format_word(v.residue, acfx::alphabet_for(v.residue.max_generator()))
            << "\n";
  return invalid_certificate;
}

int cmd_scramble(const Options& o) {
  acfx::Presentation p = load_presentation(o.presentation);
  acfx::ScrambleResult r = acfx::scramble(p, o.steps, o.seed, acfx::Caps{o.max_len, o.max_gens});
  std::cout << acfx::format_presentation(r.presentation) << "\n";
  for (const acfx::Move& m : r.moves) std::cerr << "move: " << acfx::format_move(m) << "\n";
  if (!o.out.empty()) write_file(o.out, acfx::serialize(acfx::Certificate{p, r.moves, r.presentation}));
  return ok;
}

int cmd_apply(const Options& o) {
  acfx::Presentation start = load_presentation(o.presentation);
  acfx::Presentation p = start;
  std::vector<acfx::Move> applied;
  for (const std::string& text : o.moves) {
    acfx::Move m = parse_move(text, p);
    p = acfx::apply_move(p, m);
    applied.push_back(std::move(m));
  }
  std::cout << acfx::format_presentation(p) << "\n";
  if (!o.out.empty()) write_file(o.out, acfx::serialize(acfx::Certificate{start, applied, p}));
  return ok;
}

int cmd_invariants(const Options& o) {
  acfx::InvariantConfig cfg;
  cfg.cases = o.cases;
  cfg.seed = o.seed;
  bool pass = true;
  for (const auto& r : acfx::run_invariant_battery(cfg)) {
    std::cout << r.to_line() << "\n";
    pass = pass && r.passed();
  }
  std::cout << (pass ? "invariants PASS" : "invariants FAIL") << "\n";
  return pass ? ok : invariant_failure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Balanced presentations under stable Andrews-Curtis moves"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "key=value file; command-line flags override it");

  Options o;
  const auto last = CLI::MultiOptionPolicy::TakeLast;
  auto positive = CLI::PositiveNumber;

  auto* gen = app.add_subcommand("gen", "Print a standard presentation");
  gen->add_option("family", o.family)->required()->check(CLI::IsMember({"trivial", "gpn", "fig5"}));
  gen->add_option("n", o.n)->check(CLI::NonNegativeNumber);

  auto* judge = app.add_subcommand("judge", "Decide triviality where possible");
  judge->add_option("presentation", o.presentation)->required();
  judge->add_option("--coset-limit", o.coset_limit)->check(positive)->multi_option_policy(last);

  auto add_caps = [&](CLI::App* sub) {
    sub->add_option("--max-len", o.max_len)->check(positive)->multi_option_policy(last);
    sub->add_option("--max-gens", o.max_gens)->check(positive)->multi_option_policy(last);
  };

  auto* search = app.add_subcommand("search", "Search for a trivialization");
  search->add_option("presentation", o.presentation)->required();
  add_caps(search);
  search->add_option("--strategy", o.strategy)
      ->check(CLI::IsMember({"bfs", "beam", "id"}))
      ->multi_option_policy(last);
  search->add_option("--budget", o.budget, "node budget")->check(positive)->multi_option_policy(last);
  search->add_option("--beam-width", o.beam_width)->check(positive)->multi_option_policy(last);
  search->add_option("--time-limit", o.time_limit, "seconds")->check(positive)->multi_option_policy(last);
  search->add_option("--workers", o.workers)->check(positive)->multi_option_policy(last);
  search->add_option("--out", o.out, "certificate file, written on FOUND")->multi_option_policy(last);

  auto* verify = app.add_subcommand("verify", "Check a certificate file");
  verify->add_option("certificate", o.cert_file)->required();

  auto* scramble = app.add_subcommand("scramble", "Apply seeded random moves");
  scramble->add_option("presentation", o.presentation)->required();
  scramble->add_option("--steps", o.steps)->check(CLI::NonNegativeNumber)->multi_option_policy(last);
  scramble->add_option("--seed", o.seed)->multi_option_policy(last);
  add_caps(scramble);
  scramble->add_option("--out", o.out, "certificate from input to result")->multi_option_policy(last);

  auto* apply = app.add_subcommand("apply", "Apply moves in order");
  apply->add_option("presentation", o.presentation)->required();
  apply->add_option("--move", o.moves, "e.g. \"concat i=1 j=2\"")->take_all();
  apply->add_option("--out", o.out, "certificate from input to result")->multi_option_policy(last);

  auto* inv = app.add_subcommand("invariants", "Run the move-invariance battery");
  inv->add_option("--cases", o.cases, "sequences per start")->check(positive)->multi_option_policy(last);
  inv->add_option("--seed", o.seed)->multi_option_policy(last);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    // --config has to be read before parsing so its values can be injected.
    for (std::size_t k = 0; k < args.size(); ++k) {
      if (args[k] == "--config" && k + 1 < args.size()) {
        config_path = args[k + 1];
      } else if (args[k].rfind("--config=", 0) == 0) {
        config_path = args[k].substr(9);
      }
    }
    if (!config_path.empty()) {
      std::vector<std::string> extra = config_arguments(config_path);
      std::size_t sub = 0;
      while (sub < args.size() && app.get_subcommand_no_throw(args[sub]) == nullptr) {
        ++sub;
      }
      if (sub < args.size()) {
        CLI::App* target = app.get_subcommand_no_throw(args[sub]);
        for (std::size_t k = 0; k < extra.size(); k += 2) {
          if (target->get_option_no_throw(extra[k]) == nullptr) {
            std::cerr << "error: unknown config key '" << extra[k].substr(2) << "' for " << args[sub] << "\n";
            return usage;
          }
        }
        args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub) + 1, extra.begin(), extra.end());
      }
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return io;
  } catch (const acfx::SyntaxError& e) {
    std::cerr << "error: config " << e.what() << "\n";
    return usage;
  }

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage;
  }

  try {
    if (*gen) return cmd_gen(o);
    if (*judge) return cmd_judge(o);
    if (*search) return cmd_search(o);
    if (*verify) return cmd_verify(o);
    if (*scramble) return cmd_scramble(o);
    if (*apply) return cmd_apply(o);
    if (*inv) return cmd_invariants(o);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return io;
  } catch (const acfx::MoveError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const acfx::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  }
  return usage;
}
