#include "ndnet/ndtm.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace ndnet {

bool Move::operator<(const Move& o) const {
  return std::tie(sym, state, dir) < std::tie(o.sym, o.state, o.dir);
}

namespace {

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::islower(static_cast<unsigned char>(c)) &&
        !std::isdigit(static_cast<unsigned char>(c)) && c != '_')
      return false;
  }
  return true;
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') break;
    out.push_back(tok);
  }
  return out;
}

int lookup(const std::vector<std::string>& names, const std::string& name, const char* what,
           int lineno) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end())
    throw std::invalid_argument("unknown " + std::string(what) + " '" + name + "' on line " +
                                std::to_string(lineno));
  return static_cast<int>(it - names.begin());
}

}  // namespace

Machine parse_machine(const std::string& text) {
  Machine m;
  bool have_symbols = false, have_states = false;
  std::set<std::tuple<int, int, int, int, int>> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::vector<std::string> tok = tokenize(line);
    if (tok.empty()) continue;
    auto fail = [&](const std::string& why) {
      throw std::invalid_argument(why + " on line " + std::to_string(lineno));
    };
    if (tok[0] == "symbols") {
      if (have_symbols) fail("duplicate symbols line");
      if (have_states || !m.trans.empty()) fail("symbols must come first");
      if (tok.size() < 2) fail("no symbols listed");
      for (std::size_t k = 1; k < tok.size(); ++k) {
        if (!valid_name(tok[k])) fail("bad symbol name '" + tok[k] + "'");
        if (std::find(m.symbols.begin(), m.symbols.end(), tok[k]) != m.symbols.end())
          fail("duplicate symbol '" + tok[k] + "'");
        m.symbols.push_back(tok[k]);
      }
      have_symbols = true;
    } else if (tok[0] == "states") {
      if (have_states) fail("duplicate states line");
      if (!have_symbols || !m.trans.empty()) fail("states must follow symbols");
      if (tok.size() < 2) fail("no states listed");
      for (std::size_t k = 1; k < tok.size(); ++k) {
        if (!valid_name(tok[k])) fail("bad state name '" + tok[k] + "'");
        if (tok[k] == "halt") fail("state name 'halt' is reserved");
        if (std::find(m.states.begin(), m.states.end(), tok[k]) != m.states.end())
          fail("duplicate state '" + tok[k] + "'");
        m.states.push_back(tok[k]);
      }
      have_states = true;
    } else if (tok[0] == "trans") {
      if (!have_symbols || !have_states) fail("trans before symbols/states");
      if (tok.size() != 7 || tok[3] != "->") fail("expected: trans <sym> <state> -> <sym> <state> <L|R>");
      Transition t;
      t.in_sym = lookup(m.symbols, tok[1], "symbol", lineno);
      t.in_state = lookup(m.states, tok[2], "state", lineno);
      t.out.sym = lookup(m.symbols, tok[4], "symbol", lineno);
      t.out.state = tok[5] == "halt" ? m.q() : lookup(m.states, tok[5], "state", lineno);
      if (tok[6] == "L")
        t.out.dir = Dir::Left;
      else if (tok[6] == "R")
        t.out.dir = Dir::Right;
      else
        fail("direction must be L or R");
      auto key = std::make_tuple(t.in_sym, t.in_state, t.out.sym, t.out.state,
                                 static_cast<int>(t.out.dir));
      if (!seen.insert(key).second) fail("duplicate transition");
      m.trans.push_back(t);
    } else {
      fail("unknown directive '" + tok[0] + "'");
    }
  }
  if (!have_symbols) throw std::invalid_argument("missing symbols line");
  if (!have_states) throw std::invalid_argument("missing states line");
  return m;
}

std::string serialize_machine(const Machine& m) {
  std::ostringstream out;
  out << "symbols";
  for (auto& s : m.symbols) out << " " << s;
  out << "\nstates";
  for (auto& s : m.states) out << " " << s;
  out << "\n";
  for (auto& t : m.trans) {
    out << "trans " << m.symbols[t.in_sym] << " " << m.states[t.in_state] << " -> "
        << m.symbols[t.out.sym] << " "
        << (t.out.state == m.q() ? std::string("halt") : m.states[t.out.state]) << " "
        << (t.out.dir == Dir::Left ? "L" : "R") << "\n";
  }
  return out.str();
}

std::string move_str(const Machine& m, const Move& mv) {
  std::string state = mv.state == m.q() ? std::string("halt") : m.states[mv.state];
  return m.symbols[mv.sym] + " " + state + " " + (mv.dir == Dir::Left ? "L" : "R");
}

int branching_factor(const Machine& m) {
  if (m.trans.empty()) throw std::invalid_argument("machine has no transitions");
  std::map<std::pair<int, int>, int> count;
  for (auto& t : m.trans) count[{t.in_sym, t.in_state}]++;
  int best = 0;
  for (auto& [k, n] : count) best = std::max(best, n);
  return best;
}

PaddedMachine pad_with_halt(const Machine& m) {
  PaddedMachine pm;
  pm.machine = m;
  pm.p = m.p();
  pm.q = m.q();
  pm.m = branching_factor(m);
  pm.moves.assign(pm.in_space(), {});
  for (auto& t : m.trans) pm.moves[pm.in_index(t.in_sym, t.in_state)].push_back(t.out);
  for (int state = 0; state < pm.q; ++state) {
    for (int sym = 0; sym < pm.p; ++sym) {
      auto& lst = pm.moves[pm.in_index(sym, state)];
      while (static_cast<int>(lst.size()) < pm.m) lst.push_back({sym, pm.q, Dir::Right});
    }
  }
  return pm;
}

std::vector<Move> oracle_step(const PaddedMachine& pm, int sym, int state) {
  if (sym < 0 || sym >= pm.p || state < 0 || state >= pm.q)
    throw std::invalid_argument("configuration out of range");
  return pm.moves[pm.in_index(sym, state)];
}

// ---------------------------------------------------------------------------
// selector values

namespace {

// chain[j] is the j-th right-nested selector sum over dual(y), k entries
std::vector<Formula> selector_chain(int k, const Formula& y) {
  Formula nd = y.dual();
  std::vector<Formula> chain(k);
  chain[k - 1] = nd;
  for (int j = k - 2; j >= 0; --j) chain[j] = Formula::plus(nd, chain[j + 1]);
  return chain;
}

}  // namespace

Formula bool_formula(int k, const Formula& y) {
  if (k < 1) throw std::invalid_argument("selector needs a positive arity");
  return Formula::par(selector_chain(k, y)[0], y);
}

ProofPtr encode_bool_value(int k, int index, const Formula& y) {
  if (k < 1 || index < 0 || index >= k) throw std::invalid_argument("selector index out of range");
  std::vector<Formula> chain = selector_chain(k, y);
  ProofPtr p = make_ax(y.dual());  // |- dual(y), y
  if (index < k - 1) p = make_plus1(0, chain[index + 1], p);
  for (int j = index - 1; j >= 0; --j) p = make_plus2(0, y.dual(), p);
  return make_par(0, p);
}

int decode_bool_value(const ProofStructure& s, int k, const Formula& y) {
  auto need = [&](bool cond, const std::string& why) {
    if (!cond) throw DecodeError("selector decode failed: " + why);
  };
  std::vector<Formula> chain = selector_chain(k, y);

  std::map<OccId, std::vector<LinkId>> concluders;
  for (auto& [lid, l] : s.links)
    for (OccId o : l.conclusions) concluders[o].push_back(lid);
  auto sole = [&](OccId o) -> const Link& {
    auto it = concluders.find(o);
    need(it != concluders.end() && it->second.size() == 1,
         "occurrence " + std::to_string(o) + " is not concluded exactly once");
    return s.links.at(it->second[0]);
  };

  std::vector<OccId> top = conclusion_ids(s);
  need(top.size() == 1, "expected a single conclusion");
  need(s.occs.at(top[0]) == bool_formula(k, y), "conclusion is not the selector type");

  std::set<LinkId> visited;
  const Link& par = sole(top[0]);
  need(par.kind == LinkKind::Par, "conclusion is not built by a par link");
  visited.insert(par.id);
  OccId sel = par.premises[0];
  OccId yocc = par.premises[1];
  need(s.occs.at(yocc) == y, "par right premise is not the payload");

  const Link& id = sole(yocc);
  need(id.kind == LinkKind::Id, "payload is not concluded by an axiom link");
  visited.insert(id.id);
  OccId ydual = id.conclusions[0] == yocc ? id.conclusions[1] : id.conclusions[0];

  int index = -1;
  OccId cur = sel;
  for (int t = 0; t < k; ++t) {
    need(s.occs.at(cur) == chain[t], "selector chain type mismatch at depth " + std::to_string(t));
    if (cur == ydual) {
      need(t == k - 1, "payload dual sits above the last chain entry");
      index = t;
      break;
    }
    const Link& l = sole(cur);
    need(l.kind == LinkKind::Plus1 || l.kind == LinkKind::Plus2,
         "selector chain interrupted by " + std::string(kind_name(l.kind)));
    visited.insert(l.id);
    if (l.kind == LinkKind::Plus1) {
      need(l.premises[0] == ydual, "first-summand selection does not reach the payload dual");
      index = t;
      break;
    }
    cur = l.premises[0];
  }
  need(index >= 0, "selector chain never selects");

  for (auto& [lid, l] : s.links) {
    need(visited.count(lid) > 0,
         "leftover material: " + std::string(kind_name(l.kind)) + " link " + std::to_string(lid));
    need(l.weight.is_one(), "unresolved weight on link " + std::to_string(lid));
  }
  need(s.occs.size() == visited.size() + 1, "leftover occurrences");
  return index;
}

// ---------------------------------------------------------------------------
// the move-relation net

namespace {

// |- x, <output selector sum>  selecting out_idx, payload kept at position 0
ProofPtr output_block(const PaddedMachine& pm, const Formula& x, int out_idx) {
  int k = pm.out_space();
  std::vector<Formula> sums = selector_chain(k, x);  // right-nested sums over ~x
  ProofPtr p = make_ax(x);                           // |- x, ~x
  if (out_idx < k - 1) p = make_plus1(1, sums[out_idx + 1], p);
  for (int j = out_idx - 1; j >= 0; --j) p = make_plus2(1, x.dual(), p);
  return p;  // |- x, sums[0]
}

}  // namespace

ProofPtr encode_move_relation(const PaddedMachine& pm) {
  Formula x = Formula::pos_atom("x");

  // one block per configuration: the nondeterministic superposition of its moves
  std::vector<ProofPtr> pairs(pm.in_space());
  for (int idx = 0; idx < pm.in_space(); ++idx) {
    const std::vector<Move>& mv = pm.moves[idx];
    ProofPtr acc = output_block(pm, x, pm.out_index(mv[pm.m - 1]));
    for (int t = pm.m - 2; t >= 0; --t)
      acc = make_nwith(0, output_block(pm, x, pm.out_index(mv[t])), acc);
    pairs[idx] = acc;  // |- T, <output sum>   (T: m-fold nwith over x)
  }

  // the configuration table: a with-comb over the blocks, first index outermost
  ProofPtr stack = pairs[pm.in_space() - 1];
  for (int idx = pm.in_space() - 2; idx >= 0; --idx) stack = make_with(0, pairs[idx], stack);

  // dual pad for T: m-fold nwith over ~x, sharing the x payload
  ProofPtr nd = make_ax(x.dual());  // |- ~x, x
  for (int t = 1; t < pm.m; ++t) nd = make_nwith(0, make_ax(x.dual()), nd);

  ProofPtr main = make_tensor(0, 0, stack, nd);
  return make_par(0, main);  // |- <output sum> par x, <table> tensor <dual pad>
}

std::vector<Move> run_step(const PaddedMachine& pm, int sym, int state) {
  if (sym < 0 || sym >= pm.p || state < 0 || state >= pm.q)
    throw std::invalid_argument("configuration out of range");
  Formula x = Formula::pos_atom("x");

  DeseqResult relation = desequentialize(*encode_move_relation(pm));

  Formula t_pad = x;
  for (int t = 1; t < pm.m; ++t) t_pad = Formula::nwith(x, t_pad);
  DeseqResult value =
      desequentialize(*encode_bool_value(pm.in_space(), pm.in_index(sym, state), t_pad));

  std::map<OccId, OccId> occ_map;
  ProofStructure merged = merge_disjoint(relation.structure, value.structure, &occ_map);
  OccId value_concl = occ_map.at(value.conclusion_ids[0]);
  OccId input_concl = -1;
  for (OccId o : conclusion_ids(merged)) {
    if (merged.occs.at(o).kind() == Formula::Kind::Tensor) input_concl = o;
  }
  if (input_concl == -1) throw std::logic_error("relation net lost its input interface");

  Link cut;
  cut.id = merged.fresh_link();
  cut.kind = LinkKind::Cut;
  cut.premises = {value_concl, input_concl};
  LinkId cut_id = cut.id;
  merged.links.emplace(cut_id, std::move(cut));

  NormalizeOptions opt;
  opt.check_net = false;  // the switching count of the relation net is astronomical
  BranchTree tree = normalize_all(merged, opt);
  if (tree.budget_exhausted) throw std::runtime_error("normalization budget exhausted");

  std::vector<Move> out;
  for (const BranchNode* leaf : tree.leaves())
    out.push_back(pm.move_of(decode_bool_value(leaf->structure, pm.out_space(), x)));
  return out;
}

}  // namespace ndnet
