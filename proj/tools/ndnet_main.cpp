#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ndnet/correctness.hpp"
#include "ndnet/iso.hpp"
#include "ndnet/ndtm.hpp"
#include "ndnet/reduction.hpp"
#include "ndnet/sequent.hpp"
#include "ndnet/structure.hpp"

using nlohmann::json;

namespace {

// exit codes shared by all subcommands
constexpr int kOk = 0;
constexpr int kNegative = 1;   // not a net / no proof / verification mismatch
constexpr int kLimit = 2;      // switching limit or budget exhausted
constexpr int kInvalid = 3;    // input parses or validates badly
constexpr int kUsage = 4;      // bad invocation or unreadable file

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

struct CheckArgs {
  std::string file;
  std::uint64_t limit = ndnet::kDefaultSwitchingLimit;
  bool json_out = false;
};

int cmd_check(const CheckArgs& a) {
  ndnet::ProofStructure s = ndnet::parse_structure(read_file(a.file));
  ndnet::ValidationReport rep = ndnet::validate(s);
  if (!rep.ok()) {
    if (a.json_out) {
      json j{{"verdict", "invalid"}, {"violations", json::array()}};
      for (auto& v : rep.violations)
        j["violations"].push_back({{"condition", v.condition}, {"message", v.message}});
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "invalid structure\n" << rep.str();
    }
    return kInvalid;
  }
  ndnet::NetVerdict v = ndnet::is_proof_net(s, a.limit);
  switch (v.outcome) {
    case ndnet::NetVerdict::Outcome::Net:
      if (a.json_out) {
        std::cout << json{{"verdict", "net"}, {"switchings", v.switchings}}.dump(2) << "\n";
      } else {
        std::cout << "net\nswitchings checked: " << v.switchings << "\n";
      }
      return kOk;
    case ndnet::NetVerdict::Outcome::NotNet:
      if (a.json_out) {
        std::cout << json{{"verdict", "not_net"},
                          {"defect", ndnet::graph_verdict_name(v.defect)},
                          {"witness", v.witness->str()},
                          {"switchings_before", v.switchings}}
                         .dump(2)
                  << "\n";
      } else {
        std::cout << "not a net\ndefect: " << ndnet::graph_verdict_name(v.defect)
                  << "\nwitness: " << v.witness->str() << "\n";
      }
      return kNegative;
    case ndnet::NetVerdict::Outcome::LimitExceeded:
      if (a.json_out) {
        std::cout << json{{"verdict", "limit_exceeded"}, {"lower_bound", v.switchings}}.dump(2)
                  << "\n";
      } else {
        std::cout << "switching limit exceeded\nat least: " << v.switchings << "\n";
      }
      return kLimit;
  }
  return kUsage;
}

struct DeseqArgs {
  std::string file;
  std::string out;
  bool json_out = false;
};

int cmd_deseq(const DeseqArgs& a) {
  ndnet::ProofPtr p = ndnet::parse_proof(read_file(a.file));
  if (auto err = ndnet::check_proof(*p))
    throw std::invalid_argument("proof does not check: " + *err);
  ndnet::DeseqResult r = ndnet::desequentialize(*p);
  std::string text = ndnet::serialize_structure(r.structure);
  if (!a.out.empty()) write_file(a.out, text);
  if (a.json_out) {
    json concl = json::array();
    for (auto& f : p->conclusion) concl.push_back(f.str());
    std::cout << json{{"conclusions", concl},
                      {"occurrences", r.structure.occs.size()},
                      {"links", r.structure.links.size()},
                      {"text", text}}
                     .dump(2)
              << "\n";
  } else if (a.out.empty()) {
    std::cout << text;
  }
  return kOk;
}

struct SeqArgs {
  std::string file;
  std::uint64_t budget = ndnet::kDefaultSeqBudget;
  bool trace = false;
  bool json_out = false;
};

int cmd_seq(const SeqArgs& a) {
  ndnet::ProofStructure s = ndnet::parse_structure(read_file(a.file));
  ndnet::SeqResult r = ndnet::sequentialize(s, a.budget);
  if (a.trace) {
    for (auto& line : r.trace) std::cerr << line << "\n";
  }
  if (a.json_out) {
    json j{{"visited", r.visited}};
    switch (r.outcome) {
      case ndnet::SeqOutcome::Proved:
        j["outcome"] = "proved";
        j["proof"] = ndnet::print_proof_term(*r.proof);
        break;
      case ndnet::SeqOutcome::Failed: j["outcome"] = "failed"; break;
      case ndnet::SeqOutcome::BudgetExhausted: j["outcome"] = "budget_exhausted"; break;
    }
    std::cout << j.dump(2) << "\n";
  } else {
    switch (r.outcome) {
      case ndnet::SeqOutcome::Proved:
        std::cout << ndnet::print_proof_term(*r.proof) << "\n";
        break;
      case ndnet::SeqOutcome::Failed: std::cout << "no sequentialization\n"; break;
      case ndnet::SeqOutcome::BudgetExhausted: std::cout << "budget exhausted\n"; break;
    }
  }
  if (r.outcome == ndnet::SeqOutcome::Failed) return kNegative;
  if (r.outcome == ndnet::SeqOutcome::BudgetExhausted) return kLimit;
  return kOk;
}

struct NormalizeArgs {
  std::string file;
  std::string strategy = "first";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::uint64_t budget = 1'000'000;
  std::uint64_t limit = ndnet::kDefaultSwitchingLimit;
  bool no_net_check = false;
  bool trace = false;
  std::string out_dir;
  bool json_out = false;
};

int cmd_normalize(const NormalizeArgs& a) {
  ndnet::ProofStructure s = ndnet::parse_structure(read_file(a.file));
  ndnet::NormalizeOptions opt;
  opt.strategy = a.strategy == "random" ? ndnet::Strategy::Random : ndnet::Strategy::First;
  opt.seed = a.seed;
  opt.budget = a.budget;
  opt.check_net = !a.no_net_check;
  opt.switching_limit = a.limit;
  ndnet::BranchTree tree = ndnet::normalize_all(s, opt);
  std::vector<const ndnet::BranchNode*> leaves = tree.leaves();

  if (!a.out_dir.empty()) {
    std::filesystem::create_directories(a.out_dir);
    for (std::size_t k = 0; k < leaves.size(); ++k) {
      write_file(a.out_dir + "/leaf" + std::to_string(k) + ".net",
                 ndnet::serialize_structure(leaves[k]->structure));
    }
  }
  if (a.json_out) {
    json j{{"steps", tree.steps}, {"budget_exhausted", tree.budget_exhausted}};
    j["leaves"] = json::array();
    for (auto* leaf : leaves) {
      j["leaves"].push_back({{"path", leaf->path.empty() ? "-" : leaf->path},
                             {"links", leaf->structure.links.size()},
                             {"normal", leaf->normal_form},
                             {"text", ndnet::serialize_structure(leaf->structure)}});
    }
    if (a.trace) j["trace"] = tree.trace;
    std::cout << j.dump(2) << "\n";
  } else {
    if (a.trace) {
      for (auto& line : tree.trace) std::cout << line << "\n";
    }
    std::cout << "steps: " << tree.steps << "\nleaves: " << leaves.size() << "\n";
    for (std::size_t k = 0; k < leaves.size(); ++k) {
      std::cout << "leaf " << k << " path " << (leaves[k]->path.empty() ? "-" : leaves[k]->path)
                << " links " << leaves[k]->structure.links.size()
                << (leaves[k]->normal_form ? "" : " (not normal)") << "\n";
    }
  }
  return tree.budget_exhausted ? kLimit : kOk;
}

struct FmtArgs {
  std::string file;
};

int cmd_fmt(const FmtArgs& a) {
  std::string text = read_file(a.file);
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    } else {
      break;
    }
  }
  if (i >= text.size()) throw std::invalid_argument("empty input");
  if (text[i] == '(') {
    std::cout << ndnet::format_proof(*ndnet::parse_proof(text));
    return kOk;
  }
  std::size_t end = i;
  while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
  std::string head = text.substr(i, end - i);
  if (head == "occ" || head == "link") {
    std::cout << ndnet::serialize_structure(ndnet::parse_structure(text));
    return kOk;
  }
  if (head == "symbols") {
    std::cout << ndnet::serialize_machine(ndnet::parse_machine(text));
    return kOk;
  }
  throw std::invalid_argument("cannot tell what kind of file this is (saw '" + head + "')");
}

struct EncodeArgs {
  std::string file;
  std::string out;
  bool json_out = false;
};

int cmd_encode(const EncodeArgs& a) {
  ndnet::Machine m = ndnet::parse_machine(read_file(a.file));
  ndnet::PaddedMachine pm = ndnet::pad_with_halt(m);
  ndnet::DeseqResult r = ndnet::desequentialize(*ndnet::encode_move_relation(pm));
  std::string text = ndnet::serialize_structure(r.structure);
  if (!a.out.empty()) write_file(a.out, text);
  if (a.json_out) {
    std::cout << json{{"p", pm.p},
                      {"q", pm.q},
                      {"m", pm.m},
                      {"in_space", pm.in_space()},
                      {"out_space", pm.out_space()},
                      {"occurrences", r.structure.occs.size()},
                      {"links", r.structure.links.size()},
                      {"text", text}}
                     .dump(2)
              << "\n";
  } else if (a.out.empty()) {
    std::cout << text;
  }
  return kOk;
}

struct StepArgs {
  std::string file;
  std::string symbol;
  std::string state;
  std::string via = "net";
  bool json_out = false;
};

int cmd_step(const StepArgs& a) {
  ndnet::Machine m = ndnet::parse_machine(read_file(a.file));
  ndnet::PaddedMachine pm = ndnet::pad_with_halt(m);
  auto sym_it = std::find(m.symbols.begin(), m.symbols.end(), a.symbol);
  if (sym_it == m.symbols.end()) throw std::invalid_argument("unknown symbol '" + a.symbol + "'");
  auto st_it = std::find(m.states.begin(), m.states.end(), a.state);
  if (st_it == m.states.end()) throw std::invalid_argument("unknown state '" + a.state + "'");
  int sym = static_cast<int>(sym_it - m.symbols.begin());
  int state = static_cast<int>(st_it - m.states.begin());

  auto moves_json = [&](const std::vector<ndnet::Move>& mv) {
    json arr = json::array();
    for (auto& one : mv) {
      arr.push_back({{"symbol", m.symbols[one.sym]},
                     {"state", one.state == m.q() ? std::string("halt") : m.states[one.state]},
                     {"dir", one.dir == ndnet::Dir::Left ? "L" : "R"}});
    }
    return arr;
  };
  auto print_moves = [&](const std::vector<ndnet::Move>& mv) {
    for (auto& one : mv) std::cout << ndnet::move_str(m, one) << "\n";
  };

  if (a.via == "oracle") {
    std::vector<ndnet::Move> mv = ndnet::oracle_step(pm, sym, state);
    if (a.json_out)
      std::cout << json{{"via", "oracle"}, {"moves", moves_json(mv)}}.dump(2) << "\n";
    else
      print_moves(mv);
    return kOk;
  }
  if (a.via == "net") {
    std::vector<ndnet::Move> mv = ndnet::run_step(pm, sym, state);
    if (a.json_out)
      std::cout << json{{"via", "net"}, {"moves", moves_json(mv)}}.dump(2) << "\n";
    else
      print_moves(mv);
    return kOk;
  }
  // verify: the net result must be the oracle result as a multiset
  std::vector<ndnet::Move> net = ndnet::run_step(pm, sym, state);
  std::vector<ndnet::Move> oracle = ndnet::oracle_step(pm, sym, state);
  std::vector<ndnet::Move> ns = net, os = oracle;
  std::sort(ns.begin(), ns.end());
  std::sort(os.begin(), os.end());
  bool agree = ns == os;
  if (a.json_out) {
    std::cout << json{{"via", "verify"},
                      {"net", moves_json(net)},
                      {"oracle", moves_json(oracle)},
                      {"agree", agree}}
                     .dump(2)
              << "\n";
  } else {
    print_moves(net);
    std::cout << (agree ? "agree with table\n" : "MISMATCH with table\n");
  }
  return agree ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proof nets for multiplicative-additive linear logic with a nondeterministic additive"};
  app.require_subcommand(1);

  CheckArgs check_args;
  auto* check = app.add_subcommand("check", "test whether a structure file is a proof net");
  check->add_option("file", check_args.file, "structure file")->required();
  check->add_option("--max-switchings", check_args.limit, "switching enumeration limit");
  check->add_flag("--json", check_args.json_out, "machine-readable output");

  DeseqArgs deseq_args;
  auto* deseq = app.add_subcommand("deseq", "build the proof structure of a proof file");
  deseq->add_option("file", deseq_args.file, "proof file")->required();
  deseq->add_option("-o,--out", deseq_args.out, "write the structure here");
  deseq->add_flag("--json", deseq_args.json_out, "machine-readable output");

  SeqArgs seq_args;
  auto* seq = app.add_subcommand("seq", "search a sequent proof for a structure file");
  seq->add_option("file", seq_args.file, "structure file")->required();
  seq->add_option("--budget", seq_args.budget, "search node budget");
  seq->add_flag("--trace", seq_args.trace, "print the search trace to stderr");
  seq->add_flag("--json", seq_args.json_out, "machine-readable output");

  NormalizeArgs norm_args;
  auto* norm = app.add_subcommand("normalize", "reduce all branches to lazy normal form");
  norm->add_option("file", norm_args.file, "structure file")->required();
  norm->add_option("--strategy", norm_args.strategy, "first or random")
      ->check(CLI::IsMember({"first", "random"}));
  auto* seed_opt = norm->add_option("--seed", norm_args.seed, "random strategy seed");
  norm->add_option("--budget", norm_args.budget, "total reduction step budget");
  norm->add_option("--max-switchings", norm_args.limit, "limit for the correctness pre-check");
  norm->add_flag("--no-net-check", norm_args.no_net_check, "skip the correctness pre-check");
  norm->add_flag("--trace", norm_args.trace, "print one line per reduction step");
  norm->add_option("--out-dir", norm_args.out_dir, "write each leaf structure into this directory");
  norm->add_flag("--json", norm_args.json_out, "machine-readable output");

  FmtArgs fmt_args;
  auto* fmt = app.add_subcommand("fmt", "reprint a structure, proof or machine file canonically");
  fmt->add_option("file", fmt_args.file, "input file")->required();

  auto* ndtm = app.add_subcommand("ndtm", "nondeterministic machine tools");
  ndtm->require_subcommand(1);

  EncodeArgs enc_args;
  auto* enc = ndtm->add_subcommand("encode", "compile the move relation into a proof net");
  enc->add_option("file", enc_args.file, "machine file")->required();
  enc->add_option("-o,--out", enc_args.out, "write the net here");
  enc->add_flag("--json", enc_args.json_out, "machine-readable output");

  StepArgs step_args;
  auto* step = ndtm->add_subcommand("step", "run one machine step");
  step->add_option("file", step_args.file, "machine file")->required();
  step->add_option("--symbol", step_args.symbol, "scanned symbol name")->required();
  step->add_option("--state", step_args.state, "current state name")->required();
  step->add_option("--via", step_args.via, "net, oracle or verify")
      ->check(CLI::IsMember({"net", "oracle", "verify"}));
  step->add_flag("--json", step_args.json_out, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  norm_args.seed_set = seed_opt->count() > 0;
  if (*norm) {
    if (norm_args.strategy == "random" && !norm_args.seed_set) {
      std::cerr << "error: --strategy random requires --seed\n";
      return kUsage;
    }
    if (norm_args.strategy == "first" && norm_args.seed_set) {
      std::cerr << "error: --seed only applies to --strategy random\n";
      return kUsage;
    }
  }

  try {
    if (*check) return cmd_check(check_args);
    if (*deseq) return cmd_deseq(deseq_args);
    if (*seq) return cmd_seq(seq_args);
    if (*norm) return cmd_normalize(norm_args);
    if (*fmt) return cmd_fmt(fmt_args);
    if (*enc) return cmd_encode(enc_args);
    if (*step) return cmd_step(step_args);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ndnet::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kUsage;
}
