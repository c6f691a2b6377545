#include "ndnet/formula.hpp"

#include <cassert>
#include <cctype>

namespace ndnet {

struct Formula::Node {
  Kind kind;
  std::string name;              // atoms
  std::shared_ptr<const Node> l, r;  // binary
};

Formula Formula::pos_atom(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::PosAtom;
  n->name = std::move(name);
  return Formula(std::move(n));
}

Formula Formula::neg_atom(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::NegAtom;
  n->name = std::move(name);
  return Formula(std::move(n));
}

Formula Formula::binary(Kind k, Formula l, Formula r) {
  assert(k != Kind::PosAtom && k != Kind::NegAtom);
  assert(l.valid() && r.valid());
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->l = l.node_;
  n->r = r.node_;
  return Formula(std::move(n));
}

Formula::Kind Formula::kind() const {
  assert(valid());
  return node_->kind;
}

bool Formula::is_atom() const {
  assert(valid());
  return node_->kind == Kind::PosAtom || node_->kind == Kind::NegAtom;
}

const std::string& Formula::atom_name() const {
  assert(is_atom());
  return node_->name;
}

Formula Formula::left() const {
  assert(is_binary());
  return Formula(node_->l);
}

Formula Formula::right() const {
  assert(is_binary());
  return Formula(node_->r);
}

Formula Formula::dual() const {
  assert(valid());
  switch (node_->kind) {
    case Kind::PosAtom: return neg_atom(node_->name);
    case Kind::NegAtom: return pos_atom(node_->name);
    case Kind::Tensor: return par(left().dual(), right().dual());
    case Kind::Par: return tensor(left().dual(), right().dual());
    case Kind::With: return plus(left().dual(), right().dual());
    case Kind::Plus: return with(left().dual(), right().dual());
    case Kind::NWith: return nwith(left().dual(), right().dual());
  }
  throw std::logic_error("bad formula kind");
}

namespace {
char op_char(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Tensor: return '*';
    case Formula::Kind::Par: return '@';
    case Formula::Kind::With: return '&';
    case Formula::Kind::Plus: return '+';
    case Formula::Kind::NWith: return '^';
    default: throw std::logic_error("not a connective");
  }
}
}  // namespace

std::string Formula::str() const {
  assert(valid());
  switch (node_->kind) {
    case Kind::PosAtom: return node_->name;
    case Kind::NegAtom: return "~" + node_->name;
    default:
      return "(" + left().str() + " " + op_char(node_->kind) + " " + right().str() + ")";
  }
}

int Formula::compare(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return 0;
  if (!a.valid()) return b.valid() ? -1 : 0;
  if (!b.valid()) return 1;
  if (a.node_->kind != b.node_->kind)
    return static_cast<int>(a.node_->kind) < static_cast<int>(b.node_->kind) ? -1 : 1;
  if (a.is_atom()) return a.node_->name.compare(b.node_->name);
  if (int c = compare(a.left(), b.left()); c != 0) return c;
  return compare(a.right(), b.right());
}

std::string sequent_str(const Sequent& s) {
  std::string out = "|-";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += (i == 0 ? " " : ", ");
    out += s[i].str();
  }
  return out;
}

namespace {

void skip_ws(std::string_view t, std::size_t& p) {
  while (p < t.size() && std::isspace(static_cast<unsigned char>(t[p]))) ++p;
}

bool atom_start(char c) { return c >= 'a' && c <= 'z'; }
bool atom_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

std::string read_atom(std::string_view t, std::size_t& p) {
  if (p >= t.size() || !atom_start(t[p]))
    throw ParseError("expected atom", p);
  std::size_t start = p;
  while (p < t.size() && atom_char(t[p])) ++p;
  return std::string(t.substr(start, p - start));
}

Formula::Kind op_kind(char c, std::size_t pos) {
  switch (c) {
    case '*': return Formula::Kind::Tensor;
    case '@': return Formula::Kind::Par;
    case '&': return Formula::Kind::With;
    case '+': return Formula::Kind::Plus;
    case '^': return Formula::Kind::NWith;
    default: throw ParseError("expected connective (* @ & + ^)", pos);
  }
}

}  // namespace

Formula parse_formula_at(std::string_view t, std::size_t& p) {
  skip_ws(t, p);
  if (p >= t.size()) throw ParseError("unexpected end of input", p);
  char c = t[p];
  if (c == '~') {
    ++p;
    skip_ws(t, p);
    if (p < t.size() && t[p] == '(')
      throw ParseError("negation only on atoms", p);
    return Formula::neg_atom(read_atom(t, p));
  }
  if (c == '(') {
    ++p;
    Formula l = parse_formula_at(t, p);
    skip_ws(t, p);
    if (p >= t.size()) throw ParseError("unexpected end of input", p);
    Formula::Kind k = op_kind(t[p], p);
    ++p;
    Formula r = parse_formula_at(t, p);
    skip_ws(t, p);
    if (p >= t.size() || t[p] != ')')
      throw ParseError("expected ')'", p);
    ++p;
    return Formula::binary(k, std::move(l), std::move(r));
  }
  if (atom_start(c)) return Formula::pos_atom(read_atom(t, p));
  throw ParseError("unexpected character", p);
}

Formula parse_formula(std::string_view text) {
  std::size_t p = 0;
  Formula f = parse_formula_at(text, p);
  skip_ws(text, p);
  if (p != text.size()) throw ParseError("trailing input after formula", p);
  return f;
}

std::string print_formula(const Formula& f) { return f.str(); }

}  // namespace ndnet
