#include "ndnet/sequent.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace ndnet {

const char* rule_name(RuleKind k) {
  switch (k) {
    case RuleKind::Ax: return "ax";
    case RuleKind::ParR: return "par";
    case RuleKind::TensorR: return "tensor";
    case RuleKind::WithR: return "with";
    case RuleKind::NWithR: return "nwith";
    case RuleKind::Plus1R: return "plus1";
    case RuleKind::Plus2R: return "plus2";
    case RuleKind::CutR: return "cut";
  }
  return "?";
}

namespace {

Sequent erase_at(Sequent s, int i) {
  s.erase(s.begin() + i);
  return s;
}

Sequent replace_at(Sequent s, int i, const Formula& f) {
  s[i] = f;
  return s;
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw ProofError(msg);
}

void check_pos(const ProofPtr& p, int i, const char* what) {
  require(p != nullptr, std::string(what) + ": missing premise");
  require(i >= 0 && i < static_cast<int>(p->conclusion.size()),
          std::string(what) + ": position " + std::to_string(i) + " out of range");
}

ProofPtr node(RuleKind r, Sequent concl, Formula f, int i, int j, std::vector<ProofPtr> prem) {
  auto n = std::make_shared<SequentProof>();
  n->rule = r;
  n->conclusion = std::move(concl);
  n->formula = std::move(f);
  n->i = i;
  n->j = j;
  n->premises = std::move(prem);
  return n;
}

}  // namespace

ProofPtr make_ax(const Formula& f) {
  require(f.valid(), "ax: invalid formula");
  return node(RuleKind::Ax, {f, f.dual()}, f, -1, -1, {});
}

ProofPtr make_par(int i, ProofPtr p) {
  check_pos(p, i, "par");
  require(i + 1 < static_cast<int>(p->conclusion.size()), "par: needs two adjacent formulas");
  Sequent c = p->conclusion;
  Formula joined = Formula::par(c[i], c[i + 1]);
  c.erase(c.begin() + i + 1);
  c[i] = joined;
  return node(RuleKind::ParR, std::move(c), {}, i, -1, {std::move(p)});
}

ProofPtr make_tensor(int i, int j, ProofPtr p, ProofPtr q) {
  check_pos(p, i, "tensor");
  check_pos(q, j, "tensor");
  Formula prin = Formula::tensor(p->conclusion[i], q->conclusion[j]);
  Sequent c = erase_at(p->conclusion, i);
  Sequent qc = erase_at(q->conclusion, j);
  c.insert(c.end(), qc.begin(), qc.end());
  c.push_back(prin);
  return node(RuleKind::TensorR, std::move(c), {}, i, j, {std::move(p), std::move(q)});
}

namespace {
ProofPtr make_additive(RuleKind r, int i, ProofPtr p, ProofPtr q) {
  const char* what = rule_name(r);
  check_pos(p, i, what);
  check_pos(q, i, what);
  require(erase_at(p->conclusion, i) == erase_at(q->conclusion, i),
          std::string(what) + ": premise contexts differ");
  Formula prin = r == RuleKind::WithR ? Formula::with(p->conclusion[i], q->conclusion[i])
                                      : Formula::nwith(p->conclusion[i], q->conclusion[i]);
  Sequent c = replace_at(p->conclusion, i, prin);
  return node(r, std::move(c), {}, i, -1, {std::move(p), std::move(q)});
}
}  // namespace

ProofPtr make_with(int i, ProofPtr p, ProofPtr q) {
  return make_additive(RuleKind::WithR, i, std::move(p), std::move(q));
}

ProofPtr make_nwith(int i, ProofPtr p, ProofPtr q) {
  return make_additive(RuleKind::NWithR, i, std::move(p), std::move(q));
}

ProofPtr make_plus1(int i, const Formula& right, ProofPtr p) {
  check_pos(p, i, "plus1");
  require(right.valid(), "plus1: invalid summand");
  Sequent c = replace_at(p->conclusion, i, Formula::plus(p->conclusion[i], right));
  return node(RuleKind::Plus1R, std::move(c), right, i, -1, {std::move(p)});
}

ProofPtr make_plus2(int i, const Formula& left, ProofPtr p) {
  check_pos(p, i, "plus2");
  require(left.valid(), "plus2: invalid summand");
  Sequent c = replace_at(p->conclusion, i, Formula::plus(left, p->conclusion[i]));
  return node(RuleKind::Plus2R, std::move(c), left, i, -1, {std::move(p)});
}

ProofPtr make_cut(const Formula& f, int i, int j, ProofPtr p, ProofPtr q) {
  check_pos(p, i, "cut");
  check_pos(q, j, "cut");
  require(p->conclusion[i] == f, "cut: premise 1 does not carry the cut formula");
  require(q->conclusion[j] == f.dual(), "cut: premise 2 does not carry the dual cut formula");
  Sequent c = erase_at(p->conclusion, i);
  Sequent qc = erase_at(q->conclusion, j);
  c.insert(c.end(), qc.begin(), qc.end());
  return node(RuleKind::CutR, std::move(c), f, i, j, {std::move(p), std::move(q)});
}

namespace {

bool same_multiset(Sequent a, Sequent b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

std::optional<std::string> check_node(const SequentProof& p, const std::string& path) {
  auto fail = [&](const std::string& why) {
    return std::optional<std::string>(std::string(rule_name(p.rule)) + " at " + path + ": " + why);
  };
  std::size_t want = p.rule == RuleKind::Ax ? 0
                     : (p.rule == RuleKind::ParR || p.rule == RuleKind::Plus1R ||
                        p.rule == RuleKind::Plus2R)
                         ? 1
                         : 2;
  if (p.premises.size() != want) return fail("wrong number of premises");
  for (auto& q : p.premises)
    if (!q) return fail("null premise");
  const Sequent& c = p.conclusion;
  auto in_c = [&](int i) { return i >= 0 && i < static_cast<int>(c.size()); };

  switch (p.rule) {
    case RuleKind::Ax:
      if (c.size() != 2 || !p.formula.valid() || c[0] != p.formula || c[1] != p.formula.dual())
        return fail("conclusion is not a dual pair for the recorded formula");
      break;
    case RuleKind::ParR: {
      if (!in_c(p.i)) return fail("position out of range");
      if (c[p.i].kind() != Formula::Kind::Par) return fail("principal formula is not a par");
      Sequent want_prem = c;
      want_prem[p.i] = c[p.i].left();
      want_prem.insert(want_prem.begin() + p.i + 1, c[p.i].right());
      if (p.premises[0]->conclusion != want_prem) return fail("premise sequent mismatch");
      break;
    }
    case RuleKind::WithR:
    case RuleKind::NWithR: {
      if (!in_c(p.i)) return fail("position out of range");
      auto k = p.rule == RuleKind::WithR ? Formula::Kind::With : Formula::Kind::NWith;
      if (c[p.i].kind() != k) return fail("principal formula has the wrong connective");
      if (p.premises[0]->conclusion != replace_at(c, p.i, c[p.i].left()))
        return fail("premise 1 sequent mismatch");
      if (p.premises[1]->conclusion != replace_at(c, p.i, c[p.i].right()))
        return fail("premise 2 sequent mismatch");
      break;
    }
    case RuleKind::Plus1R:
    case RuleKind::Plus2R: {
      if (!in_c(p.i)) return fail("position out of range");
      if (c[p.i].kind() != Formula::Kind::Plus) return fail("principal formula is not a plus");
      bool first = p.rule == RuleKind::Plus1R;
      if (p.formula != (first ? c[p.i].right() : c[p.i].left()))
        return fail("recorded summand disagrees with the conclusion");
      Formula kept = first ? c[p.i].left() : c[p.i].right();
      if (p.premises[0]->conclusion != replace_at(c, p.i, kept))
        return fail("premise sequent mismatch");
      break;
    }
    case RuleKind::TensorR: {
      const Sequent& a = p.premises[0]->conclusion;
      const Sequent& b = p.premises[1]->conclusion;
      if (p.i < 0 || p.i >= static_cast<int>(a.size()) || p.j < 0 ||
          p.j >= static_cast<int>(b.size()))
        return fail("position out of range");
      Sequent join = erase_at(a, p.i);
      Sequent rest = erase_at(b, p.j);
      join.insert(join.end(), rest.begin(), rest.end());
      join.push_back(Formula::tensor(a[p.i], b[p.j]));
      if (!same_multiset(c, join)) return fail("conclusion is not the premise contexts plus the tensor");
      break;
    }
    case RuleKind::CutR: {
      const Sequent& a = p.premises[0]->conclusion;
      const Sequent& b = p.premises[1]->conclusion;
      if (p.i < 0 || p.i >= static_cast<int>(a.size()) || p.j < 0 ||
          p.j >= static_cast<int>(b.size()))
        return fail("position out of range");
      if (!p.formula.valid() || a[p.i] != p.formula) return fail("premise 1 does not carry the cut formula");
      if (b[p.j] != p.formula.dual()) return fail("premise 2 does not carry the dual cut formula");
      Sequent join = erase_at(a, p.i);
      Sequent rest = erase_at(b, p.j);
      join.insert(join.end(), rest.begin(), rest.end());
      if (!same_multiset(c, join)) return fail("conclusion is not the union of the premise contexts");
      break;
    }
  }
  for (std::size_t k = 0; k < p.premises.size(); ++k) {
    if (auto err = check_node(*p.premises[k], path + "." + std::to_string(k))) return err;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> check_proof(const SequentProof& p) { return check_node(p, "root"); }

std::map<RuleKind, int> rule_histogram(const SequentProof& p) {
  std::map<RuleKind, int> h;
  h[p.rule]++;
  for (auto& q : p.premises)
    for (auto& [k, n] : rule_histogram(*q)) h[k] += n;
  return h;
}

int proof_size(const SequentProof& p) {
  int n = 1;
  for (auto& q : p.premises) n += proof_size(*q);
  return n;
}

// ---------------------------------------------------------------------------
// text format

namespace {

struct PCursor {
  std::string_view text;
  std::size_t pos = 0;

  void skip() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '#') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
  }
  bool eof() {
    skip();
    return pos >= text.size();
  }
  void expect(char c) {
    skip();
    if (pos >= text.size() || text[pos] != c)
      throw ParseError(std::string("expected '") + c + "'", pos);
    ++pos;
  }
  std::string word() {
    skip();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::islower(static_cast<unsigned char>(text[pos])) ||
            std::isdigit(static_cast<unsigned char>(text[pos]))))
      ++pos;
    if (pos == start) throw ParseError("expected a rule name", pos);
    return std::string(text.substr(start, pos - start));
  }
  int integer() {
    skip();
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) throw ParseError("expected a position", pos);
    return std::stoi(std::string(text.substr(start, pos - start)));
  }
  Formula formula() {
    skip();
    return parse_formula_at(text, pos);
  }
};

ProofPtr parse_node(PCursor& c) {
  c.skip();
  std::size_t start = c.pos;
  c.expect('(');
  std::string head = c.word();
  try {
    if (head == "ax") {
      Formula f = c.formula();
      c.expect(')');
      return make_ax(f);
    }
    if (head == "par") {
      int i = c.integer();
      ProofPtr p = parse_node(c);
      c.expect(')');
      return make_par(i, std::move(p));
    }
    if (head == "tensor") {
      int i = c.integer();
      int j = c.integer();
      ProofPtr p = parse_node(c);
      ProofPtr q = parse_node(c);
      c.expect(')');
      return make_tensor(i, j, std::move(p), std::move(q));
    }
    if (head == "with" || head == "nwith") {
      int i = c.integer();
      ProofPtr p = parse_node(c);
      ProofPtr q = parse_node(c);
      c.expect(')');
      return head == "with" ? make_with(i, std::move(p), std::move(q))
                            : make_nwith(i, std::move(p), std::move(q));
    }
    if (head == "plus1" || head == "plus2") {
      int i = c.integer();
      Formula f = c.formula();
      ProofPtr p = parse_node(c);
      c.expect(')');
      return head == "plus1" ? make_plus1(i, f, std::move(p)) : make_plus2(i, f, std::move(p));
    }
    if (head == "cut") {
      Formula f = c.formula();
      int i = c.integer();
      int j = c.integer();
      ProofPtr p = parse_node(c);
      ProofPtr q = parse_node(c);
      c.expect(')');
      return make_cut(f, i, j, std::move(p), std::move(q));
    }
  } catch (const ProofError& e) {
    throw ParseError(e.what(), start);
  }
  throw ParseError("unknown rule '" + head + "'", start);
}

}  // namespace

ProofPtr parse_proof(const std::string& text) {
  PCursor c{text};
  ProofPtr p = parse_node(c);
  if (!c.eof()) throw ParseError("trailing input after proof", c.pos);
  return p;
}

std::string print_proof_term(const SequentProof& p) {
  std::ostringstream out;
  out << "(" << rule_name(p.rule);
  switch (p.rule) {
    case RuleKind::Ax: out << " " << p.formula.str(); break;
    case RuleKind::ParR:
    case RuleKind::WithR:
    case RuleKind::NWithR: out << " " << p.i; break;
    case RuleKind::Plus1R:
    case RuleKind::Plus2R: out << " " << p.i << " " << p.formula.str(); break;
    case RuleKind::TensorR: out << " " << p.i << " " << p.j; break;
    case RuleKind::CutR: out << " " << p.formula.str() << " " << p.i << " " << p.j; break;
  }
  for (auto& q : p.premises) out << " " << print_proof_term(*q);
  out << ")";
  return out.str();
}

namespace {
void format_node(const SequentProof& p, int indent, std::string trailing, std::string& out) {
  std::string pad(indent, ' ');
  out += pad + "# " + sequent_str(p.conclusion) + "\n";
  if (p.premises.empty()) {
    out += pad + print_proof_term(p) + trailing + "\n";
    return;
  }
  std::ostringstream head;
  head << "(" << rule_name(p.rule);
  switch (p.rule) {
    case RuleKind::ParR:
    case RuleKind::WithR:
    case RuleKind::NWithR: head << " " << p.i; break;
    case RuleKind::Plus1R:
    case RuleKind::Plus2R: head << " " << p.i << " " << p.formula.str(); break;
    case RuleKind::TensorR: head << " " << p.i << " " << p.j; break;
    case RuleKind::CutR: head << " " << p.formula.str() << " " << p.i << " " << p.j; break;
    case RuleKind::Ax: break;
  }
  out += pad + head.str() + "\n";
  for (std::size_t k = 0; k < p.premises.size(); ++k) {
    bool last = k + 1 == p.premises.size();
    format_node(*p.premises[k], indent + 2, last ? ")" + trailing : "", out);
  }
}
}  // namespace

std::string format_proof(const SequentProof& p) {
  std::string out;
  format_node(p, 0, "", out);
  return out;
}

// ---------------------------------------------------------------------------
// desequentialization

namespace {

struct Builder {
  ProofStructure s;
  OccId next_occ = 1;
  LinkId next_link = 1;

  OccId occ(const Formula& f) {
    s.occs.emplace(next_occ, f);
    return next_occ++;
  }

  LinkId link(LinkKind k, std::vector<OccId> prem, std::vector<OccId> concl) {
    Link l;
    l.id = next_link;
    l.kind = k;
    l.premises = std::move(prem);
    l.conclusions = std::move(concl);
    s.links.emplace(l.id, std::move(l));
    return next_link++;
  }

  void multiply_range(LinkId lo_excl, LinkId hi_incl, LinkId eigen, bool sign) {
    Monomial factor;
    factor.lits[eigen] = sign;
    for (auto& [id, l] : s.links) {
      if (id <= lo_excl || id > hi_incl) continue;
      auto prod = Monomial::product(l.weight, factor);
      l.weight = *prod;  // eigen is fresh, the product cannot vanish
    }
  }

  void redirect(OccId from, OccId to) {
    for (auto& [id, l] : s.links) {
      std::replace(l.premises.begin(), l.premises.end(), from, to);
      std::replace(l.conclusions.begin(), l.conclusions.end(), from, to);
    }
    s.occs.erase(from);
  }

  // first unused pool entry carrying the wanted formula
  std::vector<OccId> match_pool(const Sequent& concl, const std::vector<OccId>& pool) {
    std::vector<bool> used(pool.size(), false);
    std::vector<OccId> out;
    for (const Formula& f : concl) {
      bool found = false;
      for (std::size_t k = 0; k < pool.size(); ++k) {
        if (!used[k] && s.occs.at(pool[k]) == f) {
          used[k] = true;
          out.push_back(pool[k]);
          found = true;
          break;
        }
      }
      if (!found) throw std::logic_error("conclusion formula not covered by premises");
    }
    return out;
  }

  std::vector<OccId> build(const SequentProof& p) {
    const Sequent& c = p.conclusion;
    switch (p.rule) {
      case RuleKind::Ax: {
        OccId o1 = occ(c[0]);
        OccId o2 = occ(c[1]);
        link(LinkKind::Id, {}, {o1, o2});
        return {o1, o2};
      }
      case RuleKind::ParR: {
        std::vector<OccId> cs = build(*p.premises[0]);
        OccId o = occ(c[p.i]);
        link(LinkKind::Par, {cs[p.i], cs[p.i + 1]}, {o});
        cs.erase(cs.begin() + p.i + 1);
        cs[p.i] = o;
        return cs;
      }
      case RuleKind::Plus1R:
      case RuleKind::Plus2R: {
        std::vector<OccId> cs = build(*p.premises[0]);
        OccId o = occ(c[p.i]);
        link(p.rule == RuleKind::Plus1R ? LinkKind::Plus1 : LinkKind::Plus2, {cs[p.i]}, {o});
        cs[p.i] = o;
        return cs;
      }
      case RuleKind::WithR:
      case RuleKind::NWithR: {
        LinkId before1 = next_link - 1;
        std::vector<OccId> as = build(*p.premises[0]);
        LinkId after1 = next_link - 1;
        std::vector<OccId> bs = build(*p.premises[1]);
        LinkId after2 = next_link - 1;
        OccId o = occ(c[p.i]);
        LinkId L = link(p.rule == RuleKind::WithR ? LinkKind::With : LinkKind::NWith,
                        {as[p.i], bs[p.i]}, {o});
        multiply_range(before1, after1, L, true);
        multiply_range(after1, after2, L, false);
        for (int t = 0; t < static_cast<int>(as.size()); ++t) {
          if (t != p.i) redirect(bs[t], as[t]);
        }
        as[p.i] = o;
        return as;
      }
      case RuleKind::TensorR: {
        std::vector<OccId> as = build(*p.premises[0]);
        std::vector<OccId> bs = build(*p.premises[1]);
        Formula prin = Formula::tensor(p.premises[0]->conclusion[p.i],
                                       p.premises[1]->conclusion[p.j]);
        OccId o = occ(prin);
        link(LinkKind::Tensor, {as[p.i], bs[p.j]}, {o});
        std::vector<OccId> pool = as;
        pool.erase(pool.begin() + p.i);
        std::vector<OccId> brest = bs;
        brest.erase(brest.begin() + p.j);
        pool.insert(pool.end(), brest.begin(), brest.end());
        pool.push_back(o);
        return match_pool(c, pool);
      }
      case RuleKind::CutR: {
        std::vector<OccId> as = build(*p.premises[0]);
        std::vector<OccId> bs = build(*p.premises[1]);
        link(LinkKind::Cut, {as[p.i], bs[p.j]}, {});
        std::vector<OccId> pool = as;
        pool.erase(pool.begin() + p.i);
        std::vector<OccId> brest = bs;
        brest.erase(brest.begin() + p.j);
        pool.insert(pool.end(), brest.begin(), brest.end());
        return match_pool(c, pool);
      }
    }
    throw std::logic_error("unreachable rule");
  }
};

}  // namespace

DeseqResult desequentialize(const SequentProof& p) {
  if (auto err = check_proof(p))
    throw std::invalid_argument("proof does not check: " + *err);
  Builder b;
  std::vector<OccId> roots = b.build(p);
  DeseqResult r;
  r.structure = relabel_canonical(b.s, roots, &r.conclusion_ids);
  return r;
}

// ---------------------------------------------------------------------------
// removal

namespace {

ProofStructure subset(const ProofStructure& s, const std::set<OccId>& occs,
                      const std::set<LinkId>& links) {
  ProofStructure out;
  for (OccId o : occs) out.occs.emplace(o, s.occs.at(o));
  for (LinkId l : links) out.links.emplace(l, s.links.at(l));
  return out;
}

void require_valid_part(const ProofStructure& part, const char* what) {
  ValidationReport rep = validate(part);
  if (!rep.ok())
    throw RemovalError(std::string(what) + " part is not a valid structure: " + rep.str());
}

}  // namespace

std::vector<ProofStructure> removal(const ProofStructure& s, LinkId lid) {
  auto it = s.links.find(lid);
  if (it == s.links.end()) throw std::invalid_argument("no such link");
  const Link l = it->second;

  if (l.kind == LinkKind::Id || l.kind == LinkKind::Gax)
    throw RemovalError(std::string(kind_name(l.kind)) + " links are not removable");
  if (!l.weight.is_one()) throw RemovalError("link weight is not 1");
  std::vector<OccId> top = conclusion_ids(s);
  if (l.kind != LinkKind::Cut) {
    if (std::find(top.begin(), top.end(), l.conclusions[0]) == top.end())
      throw RemovalError("link conclusion is a premise of another link");
  }

  switch (l.kind) {
    case LinkKind::Par:
    case LinkKind::Plus1:
    case LinkKind::Plus2: {
      ProofStructure part = s;
      part.links.erase(lid);
      part.occs.erase(l.conclusions[0]);
      require_valid_part(part, "remaining");
      return {part};
    }
    case LinkKind::With:
    case LinkKind::NWith: {
      ProofStructure base = s;
      base.links.erase(lid);
      base.occs.erase(l.conclusions[0]);
      ProofStructure p1 = substitute_eigen(base, {{lid, true}});
      ProofStructure p2 = substitute_eigen(base, {{lid, false}});
      if (!p1.occs.count(l.premises[0]) || p1.occs.count(l.premises[1]))
        throw RemovalError("eigenweight does not separate the branches");
      if (!p2.occs.count(l.premises[1]) || p2.occs.count(l.premises[0]))
        throw RemovalError("eigenweight does not separate the branches");
      for (OccId o : top) {
        if (o == l.conclusions[0]) continue;
        if (!p1.occs.count(o) || !p2.occs.count(o))
          throw RemovalError("a conclusion vanished in a branch restriction");
      }
      require_valid_part(p1, "left");
      require_valid_part(p2, "right");
      return {p1, p2};
    }
    case LinkKind::Tensor:
    case LinkKind::Cut: {
      std::set<OccId> occs;
      for (auto& [o, f] : s.occs) occs.insert(o);
      std::set<LinkId> links;
      for (auto& [k, v] : s.links) links.insert(k);
      links.erase(lid);
      if (l.kind == LinkKind::Tensor) occs.erase(l.conclusions[0]);

      std::map<OccId, OccId> parent;
      for (OccId o : occs) parent[o] = o;
      std::function<OccId(OccId)> find = [&](OccId x) {
        while (parent[x] != x) {
          parent[x] = parent[parent[x]];
          x = parent[x];
        }
        return x;
      };
      for (LinkId k : links) {
        const Link& e = s.links.at(k);
        std::vector<OccId> touched = e.premises;
        touched.insert(touched.end(), e.conclusions.begin(), e.conclusions.end());
        for (std::size_t t = 1; t < touched.size(); ++t)
          parent[find(touched[0])] = find(touched[t]);
      }
      std::set<OccId> roots;
      for (OccId o : occs) roots.insert(find(o));
      if (roots.size() != 2)
        throw RemovalError("removal leaves " + std::to_string(roots.size()) +
                           " components instead of 2");
      OccId r1 = find(l.premises[0]);
      OccId r2 = find(l.premises[1]);
      if (r1 == r2) throw RemovalError("removal leaves 2 components but premises stay joined");
      std::set<OccId> o1, o2;
      std::set<LinkId> l1, l2;
      for (OccId o : occs) (find(o) == r1 ? o1 : o2).insert(o);
      for (LinkId k : links) {
        const Link& e = s.links.at(k);
        OccId probe = e.premises.empty() ? e.conclusions[0] : e.premises[0];
        (find(probe) == r1 ? l1 : l2).insert(k);
      }
      ProofStructure p1 = subset(s, o1, l1);
      ProofStructure p2 = subset(s, o2, l2);
      require_valid_part(p1, "first");
      require_valid_part(p2, "second");
      return {p1, p2};
    }
    default:
      throw RemovalError("unsupported link kind");
  }
}

// ---------------------------------------------------------------------------
// sequentialization

namespace {

constexpr std::size_t kTraceCap = 20000;

struct BudgetHit {};

struct Solver {
  std::uint64_t budget;
  std::uint64_t visited = 0;
  std::set<std::string> dead_ends;
  std::vector<std::string> trace;

  void note(int depth, const std::string& line) {
    if (trace.size() < kTraceCap)
      trace.push_back(std::string(2 * depth, ' ') + line);
    else if (trace.size() == kTraceCap)
      trace.push_back("(trace truncated)");
  }

  Sequent formulas_of(const ProofStructure& s, const std::vector<OccId>& ids) {
    Sequent out;
    for (OccId o : ids) out.push_back(s.occs.at(o));
    return out;
  }

  std::optional<ProofPtr> solve(const ProofStructure& s, const std::vector<OccId>& target,
                                int depth) {
    if (++visited > budget) throw BudgetHit{};
    note(depth, "solve " + sequent_str(formulas_of(s, target)) + " [" +
                    std::to_string(s.links.size()) + " links]");

    if (s.links.size() == 1 && s.links.begin()->second.kind == LinkKind::Id) {
      note(depth, "axiom");
      return node(RuleKind::Ax, formulas_of(s, target), s.occs.at(target[0]), -1, -1, {});
    }

    std::string key = serialize_structure(s);
    if (dead_ends.count(key)) {
      note(depth, "known dead end");
      return std::nullopt;
    }

    std::vector<OccId> top = conclusion_ids(s);
    std::set<OccId> top_set(top.begin(), top.end());

    for (auto& [lid, l] : s.links) {
      bool candidate = false;
      switch (l.kind) {
        case LinkKind::Cut: candidate = l.weight.is_one(); break;
        case LinkKind::Par:
        case LinkKind::Tensor:
        case LinkKind::With:
        case LinkKind::NWith:
        case LinkKind::Plus1:
        case LinkKind::Plus2:
          candidate = l.weight.is_one() && top_set.count(l.conclusions[0]) > 0;
          break;
        default: break;
      }
      if (!candidate) continue;

      std::vector<ProofStructure> parts;
      try {
        parts = removal(s, lid);
      } catch (const RemovalError& e) {
        note(depth, std::string("skip ") + kind_name(l.kind) + " " + std::to_string(lid) + ": " +
                        e.what());
        continue;
      }
      note(depth, std::string("remove ") + kind_name(l.kind) + " " + std::to_string(lid));

      auto pos_of = [&](OccId o) {
        return static_cast<int>(std::find(target.begin(), target.end(), o) - target.begin());
      };

      switch (l.kind) {
        case LinkKind::Par: {
          int pos = pos_of(l.conclusions[0]);
          std::vector<OccId> ct = target;
          ct[pos] = l.premises[0];
          ct.insert(ct.begin() + pos + 1, l.premises[1]);
          if (auto c = solve(parts[0], ct, depth + 1)) return make_par(pos, *c);
          break;
        }
        case LinkKind::Plus1:
        case LinkKind::Plus2: {
          int pos = pos_of(l.conclusions[0]);
          const Formula& f = s.occs.at(l.conclusions[0]);
          std::vector<OccId> ct = target;
          ct[pos] = l.premises[0];
          if (auto c = solve(parts[0], ct, depth + 1)) {
            return l.kind == LinkKind::Plus1 ? make_plus1(pos, f.right(), *c)
                                             : make_plus2(pos, f.left(), *c);
          }
          break;
        }
        case LinkKind::With:
        case LinkKind::NWith: {
          int pos = pos_of(l.conclusions[0]);
          std::vector<OccId> ct1 = target;
          ct1[pos] = l.premises[0];
          std::vector<OccId> ct2 = target;
          ct2[pos] = l.premises[1];
          auto c1 = solve(parts[0], ct1, depth + 1);
          if (!c1) break;
          auto c2 = solve(parts[1], ct2, depth + 1);
          if (!c2) break;
          return l.kind == LinkKind::With ? make_with(pos, *c1, *c2) : make_nwith(pos, *c1, *c2);
        }
        case LinkKind::Tensor:
        case LinkKind::Cut: {
          bool tensor = l.kind == LinkKind::Tensor;
          std::vector<OccId> ct1, ct2;
          for (OccId o : target) {
            if (tensor && o == l.conclusions[0]) continue;
            (parts[0].occs.count(o) ? ct1 : ct2).push_back(o);
          }
          ct1.push_back(l.premises[0]);
          ct2.push_back(l.premises[1]);
          auto c1 = solve(parts[0], ct1, depth + 1);
          if (!c1) break;
          auto c2 = solve(parts[1], ct2, depth + 1);
          if (!c2) break;
          SequentProof n;
          n.rule = tensor ? RuleKind::TensorR : RuleKind::CutR;
          n.conclusion = formulas_of(s, target);
          if (!tensor) n.formula = s.occs.at(l.premises[0]);
          n.i = static_cast<int>(ct1.size()) - 1;
          n.j = static_cast<int>(ct2.size()) - 1;
          n.premises = {*c1, *c2};
          return std::make_shared<SequentProof>(std::move(n));
        }
        default: break;
      }
      note(depth, std::string("backtrack from ") + kind_name(l.kind) + " " + std::to_string(lid));
    }

    dead_ends.insert(std::move(key));
    return std::nullopt;
  }
};

}  // namespace

SeqResult sequentialize(const ProofStructure& s, std::uint64_t budget) {
  ValidationReport rep = validate(s);
  if (!rep.ok()) throw std::invalid_argument("structure is invalid: " + rep.str());
  Solver sv{budget, 0, {}, {}};
  SeqResult r;
  try {
    auto p = sv.solve(s, conclusion_ids(s), 0);
    r.outcome = p ? SeqOutcome::Proved : SeqOutcome::Failed;
    if (p) r.proof = *p;
  } catch (const BudgetHit&) {
    r.outcome = SeqOutcome::BudgetExhausted;
  }
  r.visited = sv.visited;
  r.trace = std::move(sv.trace);
  return r;
}

}  // namespace ndnet
