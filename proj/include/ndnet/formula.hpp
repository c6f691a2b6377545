#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ndnet {

struct ParseError : std::runtime_error {
  std::size_t pos;  // byte offset into the parsed text
  ParseError(const std::string& msg, std::size_t pos_)
      : std::runtime_error(msg + " (at offset " + std::to_string(pos_) + ")"), pos(pos_) {}
};

// Formula of nondeterministic MALL in negation normal form.  Negation is
// restricted to atoms; the binary connectives are tensor (*), par (@),
// with (&), plus (+) and the self-dual nondeterministic with (^).
class Formula {
 public:
  enum class Kind { PosAtom, NegAtom, Tensor, Par, With, Plus, NWith };

  Formula() = default;  // null handle; only valid() formulas may be used

  static Formula pos_atom(std::string name);
  static Formula neg_atom(std::string name);
  static Formula tensor(Formula l, Formula r) { return binary(Kind::Tensor, std::move(l), std::move(r)); }
  static Formula par(Formula l, Formula r) { return binary(Kind::Par, std::move(l), std::move(r)); }
  static Formula with(Formula l, Formula r) { return binary(Kind::With, std::move(l), std::move(r)); }
  static Formula plus(Formula l, Formula r) { return binary(Kind::Plus, std::move(l), std::move(r)); }
  static Formula nwith(Formula l, Formula r) { return binary(Kind::NWith, std::move(l), std::move(r)); }
  static Formula binary(Kind k, Formula l, Formula r);

  bool valid() const { return node_ != nullptr; }
  Kind kind() const;
  bool is_atom() const;
  bool is_binary() const { return valid() && !is_atom(); }
  const std::string& atom_name() const;
  Formula left() const;
  Formula right() const;

  Formula dual() const;
  std::string str() const;

  bool operator==(const Formula& o) const { return compare(*this, o) == 0; }
  bool operator!=(const Formula& o) const { return !(*this == o); }
  bool operator<(const Formula& o) const { return compare(*this, o) < 0; }

  static int compare(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// One-sided sequent; the order of formulas matters for rule indexing.
using Sequent = std::vector<Formula>;

std::string sequent_str(const Sequent& s);  // "|- f1, f2, ..."

// Strict grammar:  formula := atom | "~" atom | "(" formula op formula ")"
// with op one of * @ & + ^ and atom matching [a-z][a-z0-9_]*.
Formula parse_formula(std::string_view text);
// Cursor-based entry point shared with the proof-term parser.
Formula parse_formula_at(std::string_view text, std::size_t& pos);

std::string print_formula(const Formula& f);

}  // namespace ndnet
