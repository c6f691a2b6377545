#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ndnet/formula.hpp"
#include "ndnet/reduction.hpp"
#include "ndnet/sequent.hpp"
#include "ndnet/structure.hpp"

namespace ndnet {

enum class Dir { Left = 0, Right = 1 };

// One possible outcome of a machine step; state == q (the number of declared
// states) denotes the halt state.
struct Move {
  int sym = 0;
  int state = 0;
  Dir dir = Dir::Right;
  bool operator==(const Move&) const = default;
  bool operator<(const Move& o) const;
};

struct Transition {
  int in_sym = 0;
  int in_state = 0;
  Move out;
};

struct Machine {
  std::vector<std::string> symbols;
  std::vector<std::string> states;
  std::vector<Transition> trans;

  int p() const { return static_cast<int>(symbols.size()); }
  int q() const { return static_cast<int>(states.size()); }
};

// Text format ('#' comments allowed):
//   symbols <name> ...
//   states <name> ...
//   trans <sym> <state> -> <sym> <state|halt> <L|R>
// Names match [a-z0-9_]+; "halt" is reserved for the implicit halt state.
Machine parse_machine(const std::string& text);
std::string serialize_machine(const Machine& m);
std::string move_str(const Machine& m, const Move& mv);

// Largest number of moves available from any configuration; throws
// std::invalid_argument when the machine has no transitions at all.
int branching_factor(const Machine& m);

// Every (symbol, state) pair padded to exactly m moves with halting stay-put
// writes (same symbol, halt, R).
struct PaddedMachine {
  Machine machine;
  int p = 0;
  int q = 0;
  int m = 0;
  std::vector<std::vector<Move>> moves;  // indexed by in_index, each of size m

  int in_space() const { return p * q; }
  int out_space() const { return p * (q + 1) * 2; }
  int in_index(int sym, int state) const { return sym + p * state; }
  int out_index(const Move& mv) const {
    return mv.sym + p * (mv.state + (q + 1) * static_cast<int>(mv.dir));
  }
  Move move_of(int out_idx) const {
    return {out_idx % p, (out_idx / p) % (q + 1), static_cast<Dir>(out_idx / (p * (q + 1)))};
  }
};

PaddedMachine pad_with_halt(const Machine& m);

// The padded move list for a configuration, straight from the table.
std::vector<Move> oracle_step(const PaddedMachine& pm, int sym, int state);

// k-fold selector type over y: a right-nested sum of duals, par y.
Formula bool_formula(int k, const Formula& y);
// Proof of the selector type picking index (0-based).
ProofPtr encode_bool_value(int k, int index, const Formula& y);

struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reads the index back out of a net that must be exactly a selector value
// net for bool_formula(k, y); anything left over (cuts included) is an error.
int decode_bool_value(const ProofStructure& s, int k, const Formula& y);

// Proof whose net maps an input-configuration selector to the superposition
// of the machine's moves; conclusion: selector output par'd with the shared
// atom, and the dual input interface (a tensor).
ProofPtr encode_move_relation(const PaddedMachine& pm);

// One machine step executed on the net: cut an input value against the
// encoded relation, normalize all branches, decode every leaf.
std::vector<Move> run_step(const PaddedMachine& pm, int sym, int state);

}  // namespace ndnet
