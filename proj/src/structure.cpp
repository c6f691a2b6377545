#include "ndnet/structure.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace ndnet {

const char* kind_name(LinkKind k) {
  switch (k) {
    case LinkKind::Id: return "ID";
    case LinkKind::Cut: return "CUT";
    case LinkKind::Gax: return "GAX";
    case LinkKind::Tensor: return "TENSOR";
    case LinkKind::Par: return "PAR";
    case LinkKind::With: return "WITH";
    case LinkKind::Plus1: return "PLUS1";
    case LinkKind::Plus2: return "PLUS2";
    case LinkKind::NWith: return "NWITH";
  }
  return "?";
}

std::optional<LinkKind> kind_from_name(std::string_view name) {
  static const std::pair<std::string_view, LinkKind> table[] = {
      {"ID", LinkKind::Id},         {"CUT", LinkKind::Cut},   {"GAX", LinkKind::Gax},
      {"TENSOR", LinkKind::Tensor}, {"PAR", LinkKind::Par},   {"WITH", LinkKind::With},
      {"PLUS1", LinkKind::Plus1},   {"PLUS2", LinkKind::Plus2}, {"NWITH", LinkKind::NWith},
  };
  for (auto& [n, k] : table)
    if (n == name) return k;
  return std::nullopt;
}

bool Monomial::eval(const Valuation& v) const {
  for (auto& [id, sign] : lits) {
    auto it = v.find(id);
    if (it == v.end())
      throw std::out_of_range("valuation does not assign eigenweight p" + std::to_string(id));
    if (it->second != sign) return false;
  }
  return true;
}

std::optional<Monomial> Monomial::product(const Monomial& a, const Monomial& b) {
  Monomial out = a;
  for (auto& [id, sign] : b.lits) {
    auto [it, inserted] = out.lits.emplace(id, sign);
    if (!inserted && it->second != sign) return std::nullopt;  // p.!p = 0
  }
  return out;
}

std::optional<Monomial> Monomial::substitute(const std::map<LinkId, bool>& assign) const {
  Monomial out;
  for (auto& [id, sign] : lits) {
    auto it = assign.find(id);
    if (it == assign.end())
      out.lits.emplace(id, sign);
    else if (it->second != sign)
      return std::nullopt;
  }
  return out;
}

std::string Monomial::str() const {
  if (lits.empty()) return "1";
  std::string out;
  for (auto& [id, sign] : lits) {
    if (!out.empty()) out += ".";
    if (!sign) out += "!";
    out += "p" + std::to_string(id);
  }
  return out;
}

bool eval_monomial(const Monomial& m, const Valuation& v) { return m.eval(v); }
std::optional<Monomial> monomial_product(const Monomial& a, const Monomial& b) {
  return Monomial::product(a, b);
}

bool WeightSum::eval(const Valuation& v) const {
  for (auto& t : terms)
    if (t.eval(v)) return true;
  return false;
}

std::string WeightSum::str() const {
  if (terms.empty()) return "0";
  std::string out;
  for (auto& t : terms) {
    if (!out.empty()) out += " + ";
    out += t.str();
  }
  return out;
}

bool weight_sum_equals_monomial(const std::vector<Monomial>& terms, const Monomial& target) {
  if (terms.empty()) return false;
  std::size_t max_len = target.lits.size();
  for (auto& m : terms) {
    // target's literals must be contained in m with matching signs
    for (auto& [id, sign] : target.lits) {
      auto it = m.lits.find(id);
      if (it == m.lits.end() || it->second != sign) return false;
    }
    max_len = std::max(max_len, m.lits.size());
  }
  // sum of 2^(max_len - |m|) over terms must equal 2^(max_len - |target|);
  // binary counter keeps this exact for any literal count
  std::vector<unsigned char> bits(max_len + 2, 0);
  for (auto& m : terms) {
    std::size_t e = max_len - m.lits.size();
    while (true) {
      if (e >= bits.size()) bits.resize(e + 1, 0);
      if (bits[e] == 0) {
        bits[e] = 1;
        break;
      }
      bits[e] = 0;
      ++e;  // carry
    }
  }
  std::size_t want = max_len - target.lits.size();
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i] != (i == want ? 1 : 0)) return false;
  return true;
}

StructureIndex StructureIndex::build(const ProofStructure& s) {
  StructureIndex ix;
  for (auto& [lid, l] : s.links) {
    for (OccId o : l.premises) ix.premise_of[o] = lid;
    for (OccId o : l.conclusions) ix.concluders[o].push_back(lid);
    if (is_additive_owner(l.kind)) ix.eigen_links.push_back(lid);
  }
  return ix;
}

WeightSum formula_weight(const ProofStructure& s, OccId o) {
  WeightSum w;
  for (auto& [lid, l] : s.links)
    for (OccId c : l.conclusions)
      if (c == o) w.terms.push_back(l.weight);
  std::sort(w.terms.begin(), w.terms.end());
  return w;
}

bool ValidationReport::has(std::string_view cond) const {
  for (auto& v : violations)
    if (v.condition == cond) return true;
  return false;
}

std::string ValidationReport::str() const {
  if (ok()) return "ok";
  std::string out;
  for (auto& v : violations) out += "(" + v.condition + ") " + v.message + "\n";
  return out;
}

namespace {

std::string occ_list(const std::vector<OccId>& v) {
  std::string out;
  for (OccId o : v) {
    if (!out.empty()) out += ",";
    out += std::to_string(o);
  }
  return out.empty() ? "-" : out;
}

}  // namespace

ValidationReport validate(const ProofStructure& s) {
  ValidationReport rep;
  auto bad = [&](std::string cond, std::string msg) {
    rep.violations.push_back({std::move(cond), std::move(msg)});
  };

  // dangling ids are fatal for the remaining checks
  bool dangling = false;
  for (auto& [lid, l] : s.links) {
    for (OccId o : l.premises)
      if (!s.occs.count(o)) {
        bad("struct", "link " + std::to_string(lid) + " premise refers to missing occurrence " +
                          std::to_string(o));
        dangling = true;
      }
    for (OccId o : l.conclusions)
      if (!s.occs.count(o)) {
        bad("struct", "link " + std::to_string(lid) + " conclusion refers to missing occurrence " +
                          std::to_string(o));
        dangling = true;
      }
    if (l.id != lid) {
      bad("struct", "link id field disagrees with key " + std::to_string(lid));
      dangling = true;
    }
  }
  if (dangling) return rep;

  auto F = [&](OccId o) { return s.occs.at(o); };

  // (a) multiplicities and link shapes
  std::map<OccId, int> premise_count;
  std::map<OccId, std::vector<LinkId>> concluders;
  for (auto& [lid, l] : s.links) {
    for (OccId o : l.premises) premise_count[o]++;
    for (OccId o : l.conclusions) concluders[o].push_back(lid);
  }
  for (auto& [oid, f] : s.occs) {
    (void)f;
    if (premise_count[oid] > 1)
      bad("a", "occurrence " + std::to_string(oid) + " is a premise of " +
                   std::to_string(premise_count[oid]) + " links");
    if (concluders[oid].empty())
      bad("a", "occurrence " + std::to_string(oid) + " is a conclusion of no link");
  }

  for (auto& [lid, l] : s.links) {
    std::string where = "link " + std::to_string(lid) + " (" + kind_name(l.kind) + ")";
    auto shape = [&](std::size_t np, std::size_t nc) {
      if (l.premises.size() != np || l.conclusions.size() != nc) {
        bad("a", where + " must have " + std::to_string(np) + " premises and " +
                     std::to_string(nc) + " conclusions, got " + occ_list(l.premises) + " / " +
                     occ_list(l.conclusions));
        return false;
      }
      return true;
    };
    switch (l.kind) {
      case LinkKind::Id:
        if (shape(0, 2) && F(l.conclusions[1]) != F(l.conclusions[0]).dual())
          bad("a", where + " conclusions are not dual");
        break;
      case LinkKind::Cut:
        if (shape(2, 0) && F(l.premises[1]) != F(l.premises[0]).dual())
          bad("a", where + " premises are not dual");
        break;
      case LinkKind::Gax:
        if (l.premises.size() != 0 || l.conclusions.empty())
          bad("a", where + " must have no premises and at least one conclusion");
        break;
      case LinkKind::Tensor:
      case LinkKind::Par:
      case LinkKind::With:
      case LinkKind::NWith: {
        Formula::Kind want = l.kind == LinkKind::Tensor ? Formula::Kind::Tensor
                             : l.kind == LinkKind::Par  ? Formula::Kind::Par
                             : l.kind == LinkKind::With ? Formula::Kind::With
                                                        : Formula::Kind::NWith;
        if (shape(2, 1)) {
          Formula c = F(l.conclusions[0]);
          if (!c.is_binary() || c.kind() != want || c.left() != F(l.premises[0]) ||
              c.right() != F(l.premises[1]))
            bad("a", where + " conclusion " + c.str() + " does not combine its premises");
        }
        break;
      }
      case LinkKind::Plus1:
      case LinkKind::Plus2: {
        if (shape(1, 1)) {
          Formula c = F(l.conclusions[0]);
          bool ok = c.is_binary() && c.kind() == Formula::Kind::Plus &&
                    (l.kind == LinkKind::Plus1 ? c.left() : c.right()) == F(l.premises[0]);
          if (!ok)
            bad("a", where + " conclusion " + c.str() + " does not inject its premise");
        }
        break;
      }
    }
  }

  // (d) weights mention only eigenweights of with/nwith links
  for (auto& [lid, l] : s.links)
    for (auto& [eid, sign] : l.weight.lits) {
      (void)sign;
      auto it = s.links.find(eid);
      if (it == s.links.end() || !is_additive_owner(it->second.kind))
        bad("d", "link " + std::to_string(lid) + " weight mentions p" + std::to_string(eid) +
                     " which is not a with/nwith link");
    }
  if (rep.has("d")) return rep;  // remaining algebra needs a sane eigenweight domain

  auto wsum = [&](OccId o) {
    std::vector<Monomial> terms;
    for (LinkId lid : concluders[o]) terms.push_back(s.links.at(lid).weight);
    return terms;
  };

  // (b)/(c) conclusions carry the full weight 1
  for (auto& [oid, f] : s.occs) {
    (void)f;
    if (premise_count[oid] == 0 && !concluders[oid].empty()) {
      if (!weight_sum_equals_monomial(wsum(oid), Monomial{}))
        bad("c", "conclusion occurrence " + std::to_string(oid) + " has weight " +
                     formula_weight(s, oid).str() + ", expected 1");
    }
  }

  // (e) a weight containing a literal of p_L sits below w(L)
  for (auto& [lid, l] : s.links)
    for (auto& [eid, sign] : l.weight.lits) {
      (void)sign;
      const Monomial& owner = s.links.at(eid).weight;
      bool below = true;
      for (auto& [oid2, sign2] : owner.lits) {
        auto it = l.weight.lits.find(oid2);
        if (it == l.weight.lits.end() || it->second != sign2) {
          below = false;
          break;
        }
      }
      if (!below)
        bad("e", "link " + std::to_string(lid) + " weight " + l.weight.str() +
                     " mentions p" + std::to_string(eid) + " but is not below w(link " +
                     std::to_string(eid) + ") = " + owner.str());
    }

  // (f) premise weights determined by the link weight
  for (auto& [lid, l] : s.links) {
    std::string where = "link " + std::to_string(lid) + " (" + kind_name(l.kind) + ")";
    auto expect = [&](OccId prem, const std::optional<Monomial>& target, const char* role) {
      if (!target) {
        bad("f", where + ": required weight for " + role + " premise is zero");
        return;
      }
      if (!weight_sum_equals_monomial(wsum(prem), *target))
        bad("f", where + ": " + role + " premise " + std::to_string(prem) + " has weight " +
                     formula_weight(s, prem).str() + ", expected " + target->str());
    };
    switch (l.kind) {
      case LinkKind::Tensor:
      case LinkKind::Par:
      case LinkKind::Cut:
        if (l.premises.size() == 2) {
          expect(l.premises[0], l.weight, "left");
          expect(l.premises[1], l.weight, "right");
        }
        break;
      case LinkKind::Plus1:
      case LinkKind::Plus2:
        if (l.premises.size() == 1) expect(l.premises[0], l.weight, "only");
        break;
      case LinkKind::With:
      case LinkKind::NWith:
        if (l.premises.size() == 2) {
          expect(l.premises[0], Monomial::product(l.weight, Monomial{{{lid, true}}}), "left");
          expect(l.premises[1], Monomial::product(l.weight, Monomial{{{lid, false}}}), "right");
        }
        break;
      default:
        break;
    }
  }

  // (g) links sharing a conclusion have pairwise disjoint weights
  for (auto& [oid, ls] : concluders) {
    for (std::size_t i = 0; i < ls.size(); ++i)
      for (std::size_t j = i + 1; j < ls.size(); ++j)
        if (Monomial::product(s.links.at(ls[i]).weight, s.links.at(ls[j]).weight))
          bad("g", "links " + std::to_string(ls[i]) + " and " + std::to_string(ls[j]) +
                       " conclude occurrence " + std::to_string(oid) +
                       " with overlapping weights");
  }

  return rep;
}

OccId slice_premise(const Link& l, const Valuation& v) {
  if (!is_additive_owner(l.kind))
    throw std::invalid_argument("slice_premise: link is not with/nwith");
  return v.at(l.id) ? l.premises[0] : l.premises[1];
}

Slice slice(const ProofStructure& s, const Valuation& v) {
  Slice sl;
  for (auto& [lid, l] : s.links)
    if (l.weight.eval(v)) sl.links.insert(lid);
  for (auto& [oid, f] : s.occs) {
    (void)f;
    if (formula_weight(s, oid).eval(v)) sl.occs.insert(oid);
  }
  return sl;
}

std::vector<OccId> conclusion_ids(const ProofStructure& s) {
  std::set<OccId> consumed;
  for (auto& [lid, l] : s.links) {
    (void)lid;
    for (OccId o : l.premises) consumed.insert(o);
  }
  std::vector<OccId> out;
  for (auto& [oid, f] : s.occs) {
    (void)f;
    if (!consumed.count(oid)) out.push_back(oid);
  }
  return out;
}

Sequent conclusions(const ProofStructure& s) {
  Sequent out;
  for (OccId o : conclusion_ids(s)) out.push_back(s.occs.at(o));
  return out;
}

namespace {

struct LineError : ParseError {
  LineError(const std::string& msg, std::size_t line)
      : ParseError(msg + " on line " + std::to_string(line), 0) {}
};

std::vector<std::string> tokens_of(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

std::vector<OccId> parse_id_list(const std::string& text, std::size_t line) {
  std::vector<OccId> out;
  if (text.empty() || text == "-") return out;
  std::size_t p = 0;
  while (p < text.size()) {
    std::size_t q = text.find(',', p);
    std::string part = text.substr(p, q == std::string::npos ? q : q - p);
    try {
      out.push_back(std::stoi(part));
    } catch (...) {
      throw LineError("bad id '" + part + "'", line);
    }
    if (q == std::string::npos) break;
    p = q + 1;
  }
  return out;
}

Monomial parse_monomial(const std::string& text, std::size_t line) {
  Monomial m;
  if (text == "1") return m;
  std::size_t p = 0;
  while (p < text.size()) {
    std::size_t q = text.find('.', p);
    std::string lit = text.substr(p, q == std::string::npos ? q : q - p);
    bool sign = true;
    std::size_t k = 0;
    if (k < lit.size() && lit[k] == '!') {
      sign = false;
      ++k;
    }
    if (k >= lit.size() || lit[k] != 'p')
      throw LineError("bad weight literal '" + lit + "'", line);
    ++k;
    LinkId id;
    try {
      id = std::stoi(lit.substr(k));
    } catch (...) {
      throw LineError("bad weight literal '" + lit + "'", line);
    }
    auto [it, inserted] = m.lits.emplace(id, sign);
    if (!inserted && it->second != sign)
      throw LineError("contradictory weight literal '" + lit + "'", line);
    if (q == std::string::npos) break;
    p = q + 1;
  }
  return m;
}

}  // namespace

ProofStructure parse_structure(const std::string& text) {
  ProofStructure s;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    auto toks = tokens_of(raw);
    if (toks.empty()) continue;
    if (toks[0] == "occ") {
      if (toks.size() < 3) throw LineError("occ needs an id and a formula", lineno);
      OccId id;
      try {
        id = std::stoi(toks[1]);
      } catch (...) {
        throw LineError("bad occurrence id '" + toks[1] + "'", lineno);
      }
      if (s.occs.count(id)) throw LineError("duplicate occurrence id " + toks[1], lineno);
      std::string ftext;
      for (std::size_t i = 2; i < toks.size(); ++i) {
        if (i > 2) ftext += " ";
        ftext += toks[i];
      }
      try {
        s.occs.emplace(id, parse_formula(ftext));
      } catch (const ParseError& e) {
        throw LineError(std::string("bad formula: ") + e.what(), lineno);
      }
    } else if (toks[0] == "link") {
      if (toks.size() != 6) throw LineError("link needs: id KIND prem= conc= w=", lineno);
      Link l;
      try {
        l.id = std::stoi(toks[1]);
      } catch (...) {
        throw LineError("bad link id '" + toks[1] + "'", lineno);
      }
      if (s.links.count(l.id)) throw LineError("duplicate link id " + toks[1], lineno);
      auto k = kind_from_name(toks[2]);
      if (!k) throw LineError("unknown link kind '" + toks[2] + "'", lineno);
      l.kind = *k;
      auto field = [&](const std::string& t, const char* key) {
        std::string prefix = std::string(key) + "=";
        if (t.rfind(prefix, 0) != 0)
          throw LineError("expected '" + prefix + "...', got '" + t + "'", lineno);
        return t.substr(prefix.size());
      };
      l.premises = parse_id_list(field(toks[3], "prem"), lineno);
      l.conclusions = parse_id_list(field(toks[4], "conc"), lineno);
      l.weight = parse_monomial(field(toks[5], "w"), lineno);
      s.links.emplace(l.id, std::move(l));
    } else {
      throw LineError("unknown directive '" + toks[0] + "'", lineno);
    }
  }
  return s;
}

std::string serialize_structure(const ProofStructure& s) {
  std::string out;
  for (auto& [oid, f] : s.occs)
    out += "occ " + std::to_string(oid) + " " + f.str() + "\n";
  for (auto& [lid, l] : s.links) {
    (void)lid;
    out += "link " + std::to_string(l.id) + " " + kind_name(l.kind) + " prem=" +
           occ_list(l.premises) + " conc=" + occ_list(l.conclusions) + " w=" + l.weight.str() +
           "\n";
  }
  return out;
}

ProofStructure merge_disjoint(const ProofStructure& a, const ProofStructure& b,
                              std::map<OccId, OccId>* occ_map,
                              std::map<LinkId, LinkId>* link_map) {
  ProofStructure out = a;
  OccId occ_base = out.fresh_occ();
  LinkId link_base = out.fresh_link();
  std::map<OccId, OccId> om;
  std::map<LinkId, LinkId> lm;
  OccId no = occ_base;
  for (auto& [oid, f] : b.occs) {
    om[oid] = no;
    out.occs.emplace(no++, f);
  }
  LinkId nl = link_base;
  for (auto& [lid, l] : b.links) lm[lid] = nl++;
  for (auto& [lid, l] : b.links) {
    Link c = l;
    c.id = lm[lid];
    for (auto& o : c.premises) o = om.at(o);
    for (auto& o : c.conclusions) o = om.at(o);
    Monomial w;
    for (auto& [eid, sign] : l.weight.lits) w.lits.emplace(lm.at(eid), sign);
    c.weight = std::move(w);
    out.links.emplace(c.id, std::move(c));
  }
  if (occ_map) *occ_map = std::move(om);
  if (link_map) *link_map = std::move(lm);
  return out;
}

ProofStructure relabel_canonical(const ProofStructure& s, const std::vector<OccId>& lead_occs,
                                 std::vector<OccId>* lead_out) {
  std::map<OccId, OccId> om;
  OccId no = 1;
  for (OccId o : lead_occs)
    if (!om.count(o)) om[o] = no++;
  for (auto& [oid, f] : s.occs) {
    (void)f;
    if (!om.count(oid)) om[oid] = no++;
  }
  std::map<LinkId, LinkId> lm;
  LinkId nl = 1;
  for (auto& [lid, l] : s.links) {
    (void)l;
    lm[lid] = nl++;
  }
  ProofStructure out;
  for (auto& [oid, f] : s.occs) out.occs.emplace(om.at(oid), f);
  for (auto& [lid, l] : s.links) {
    Link c = l;
    c.id = lm.at(lid);
    for (auto& o : c.premises) o = om.at(o);
    for (auto& o : c.conclusions) o = om.at(o);
    Monomial w;
    for (auto& [eid, sign] : l.weight.lits) w.lits.emplace(lm.at(eid), sign);
    c.weight = std::move(w);
    out.links.emplace(c.id, std::move(c));
  }
  if (lead_out) {
    lead_out->clear();
    for (OccId o : lead_occs) lead_out->push_back(om.at(o));
  }
  return out;
}

ProofStructure substitute_eigen(const ProofStructure& s, const std::map<LinkId, bool>& assign) {
  ProofStructure out;
  for (auto& [lid, l] : s.links) {
    auto w = l.weight.substitute(assign);
    if (!w) continue;
    Link c = l;
    c.weight = std::move(*w);
    out.links.emplace(lid, std::move(c));
  }
  std::set<OccId> keep;
  for (auto& [lid, l] : out.links) {
    (void)lid;
    for (OccId o : l.conclusions) keep.insert(o);
  }
  for (OccId o : keep) out.occs.emplace(o, s.occs.at(o));
  return out;
}

}  // namespace ndnet
