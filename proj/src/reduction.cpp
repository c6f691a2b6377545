#include "ndnet/reduction.hpp"

#include <algorithm>
#include <functional>
#include <random>

namespace ndnet {

const char* step_kind_name(StepKind k) {
  switch (k) {
    case StepKind::AxCut: return "AXCUT";
    case StepKind::TensorPar: return "TENSOR_PAR";
    case StepKind::WithPlus: return "WITH_PLUS";
    case StepKind::NWithLeft: return "NWITH_LEFT";
    case StepKind::NWithRight: return "NWITH_RIGHT";
  }
  return "?";
}

namespace {

// the unique concluder, or -1 if the occurrence is superposed or dangling
LinkId sole_concluder(const ProofStructure& s, OccId o) {
  LinkId found = -1;
  for (auto& [lid, l] : s.links) {
    if (std::find(l.conclusions.begin(), l.conclusions.end(), o) == l.conclusions.end()) continue;
    if (found != -1) return -1;
    found = lid;
  }
  return found;
}

struct Sources {
  LinkId left;
  LinkId right;
};

std::optional<Sources> cut_sources(const ProofStructure& s, const Link& cut) {
  if (cut.kind != LinkKind::Cut || !cut.weight.is_one()) return std::nullopt;
  LinkId a = sole_concluder(s, cut.premises[0]);
  LinkId b = sole_concluder(s, cut.premises[1]);
  if (a == -1 || b == -1) return std::nullopt;
  return Sources{a, b};
}

bool pair_reducible(const ProofStructure& s, const Sources& src) {
  LinkKind a = s.links.at(src.left).kind;
  LinkKind b = s.links.at(src.right).kind;
  if (a == LinkKind::Id || b == LinkKind::Id) return true;
  auto both = [&](LinkKind x, LinkKind y) {
    return (a == x && b == y) || (a == y && b == x);
  };
  if (both(LinkKind::Tensor, LinkKind::Par)) return true;
  if (both(LinkKind::With, LinkKind::Plus1) || both(LinkKind::With, LinkKind::Plus2)) return true;
  if (a == LinkKind::NWith && b == LinkKind::NWith) return true;
  return false;
}

LinkId add_cut(ProofStructure& s, OccId a, OccId b) {
  Link c;
  c.id = s.fresh_link();
  c.kind = LinkKind::Cut;
  c.premises = {a, b};
  LinkId id = c.id;
  s.links.emplace(id, std::move(c));
  return id;
}

}  // namespace

bool cut_is_ready(const ProofStructure& s, LinkId cut) {
  auto it = s.links.find(cut);
  if (it == s.links.end()) return false;
  return cut_sources(s, it->second).has_value();
}

std::vector<LinkId> ready_cuts(const ProofStructure& s) {
  std::vector<LinkId> out;
  for (auto& [lid, l] : s.links) {
    if (l.kind == LinkKind::Cut && cut_sources(s, l)) out.push_back(lid);
  }
  return out;
}

bool cut_is_reducible(const ProofStructure& s, LinkId cut) {
  auto it = s.links.find(cut);
  if (it == s.links.end()) return false;
  auto src = cut_sources(s, it->second);
  return src && pair_reducible(s, *src);
}

std::vector<LinkId> reducible_cuts(const ProofStructure& s) {
  std::vector<LinkId> out;
  for (LinkId lid : ready_cuts(s)) {
    if (pair_reducible(s, *cut_sources(s, s.links.at(lid)))) out.push_back(lid);
  }
  return out;
}

bool is_lazy_normal(const ProofStructure& s) { return reducible_cuts(s).empty(); }

namespace {

ProofStructure axcut(const ProofStructure& s, const Link& cut, LinkId id_link) {
  const Link& id = s.links.at(id_link);
  ProofStructure r = s;
  OccId x, z;
  if (std::find(id.conclusions.begin(), id.conclusions.end(), cut.premises[0]) !=
      id.conclusions.end()) {
    x = cut.premises[0];
    z = cut.premises[1];
  } else {
    x = cut.premises[1];
    z = cut.premises[0];
  }
  r.links.erase(cut.id);
  r.links.erase(id_link);
  bool degenerate = std::find(id.conclusions.begin(), id.conclusions.end(), z) !=
                    id.conclusions.end();  // the axiom is cut against itself
  r.occs.erase(x);
  r.occs.erase(z);
  if (degenerate) return r;
  OccId y = id.conclusions[0] == x ? id.conclusions[1] : id.conclusions[0];
  for (auto& [lid, l] : r.links) {
    std::replace(l.premises.begin(), l.premises.end(), z, y);
    std::replace(l.conclusions.begin(), l.conclusions.end(), z, y);
  }
  return r;
}

ProofStructure tensor_par(const ProofStructure& s, const Link& cut, const Link& tensor,
                          const Link& par) {
  ProofStructure r = s;
  r.links.erase(cut.id);
  r.links.erase(tensor.id);
  r.links.erase(par.id);
  r.occs.erase(tensor.conclusions[0]);
  r.occs.erase(par.conclusions[0]);
  add_cut(r, tensor.premises[0], par.premises[0]);
  add_cut(r, tensor.premises[1], par.premises[1]);
  return r;
}

ProofStructure with_plus(const ProofStructure& s, const Link& cut, const Link& with,
                         const Link& plus) {
  bool first = plus.kind == LinkKind::Plus1;
  ProofStructure base = s;
  base.links.erase(cut.id);
  base.links.erase(with.id);
  base.links.erase(plus.id);
  base.occs.erase(with.conclusions[0]);
  base.occs.erase(plus.conclusions[0]);
  ProofStructure r = substitute_eigen(base, {{with.id, first}});
  OccId kept = first ? with.premises[0] : with.premises[1];
  if (!r.occs.count(kept) || !r.occs.count(plus.premises[0]))
    throw std::runtime_error("with/plus reduction lost a cut operand");
  add_cut(r, kept, plus.premises[0]);
  return r;
}

ProofStructure nwith_branch(const ProofStructure& s, const Link& cut, const Link& n1,
                            const Link& n2, bool left) {
  ProofStructure base = s;
  base.links.erase(cut.id);
  base.links.erase(n1.id);
  base.links.erase(n2.id);
  base.occs.erase(n1.conclusions[0]);
  base.occs.erase(n2.conclusions[0]);
  ProofStructure r = substitute_eigen(base, {{n1.id, left}, {n2.id, left}});
  OccId a = left ? n1.premises[0] : n1.premises[1];
  OccId b = left ? n2.premises[0] : n2.premises[1];
  if (!r.occs.count(a) || !r.occs.count(b))
    throw std::runtime_error("fork reduction lost a cut operand");
  add_cut(r, a, b);
  return r;
}

}  // namespace

std::vector<ReducedBranch> reduce_step(const ProofStructure& s, LinkId cut_id) {
  auto it = s.links.find(cut_id);
  if (it == s.links.end() || it->second.kind != LinkKind::Cut)
    throw std::invalid_argument("link " + std::to_string(cut_id) + " is not a cut");
  const Link cut = it->second;
  auto src = cut_sources(s, cut);
  if (!src) throw std::invalid_argument("cut " + std::to_string(cut_id) + " is not ready");
  const Link& a = s.links.at(src->left);
  const Link& b = s.links.at(src->right);

  if (a.kind == LinkKind::Id || b.kind == LinkKind::Id) {
    LinkId id_link = a.kind == LinkKind::Id ? a.id : b.id;
    return {{StepKind::AxCut, axcut(s, cut, id_link)}};
  }
  auto pick = [&](LinkKind k) -> const Link& { return a.kind == k ? a : b; };
  if ((a.kind == LinkKind::Tensor && b.kind == LinkKind::Par) ||
      (a.kind == LinkKind::Par && b.kind == LinkKind::Tensor)) {
    return {{StepKind::TensorPar, tensor_par(s, cut, pick(LinkKind::Tensor), pick(LinkKind::Par))}};
  }
  auto is_plus = [](LinkKind k) { return k == LinkKind::Plus1 || k == LinkKind::Plus2; };
  if ((a.kind == LinkKind::With && is_plus(b.kind)) ||
      (b.kind == LinkKind::With && is_plus(a.kind))) {
    const Link& with = pick(LinkKind::With);
    const Link& plus = a.kind == LinkKind::With ? b : a;
    return {{StepKind::WithPlus, with_plus(s, cut, with, plus)}};
  }
  if (a.kind == LinkKind::NWith && b.kind == LinkKind::NWith) {
    return {{StepKind::NWithLeft, nwith_branch(s, cut, a, b, true)},
            {StepKind::NWithRight, nwith_branch(s, cut, a, b, false)}};
  }
  throw StuckCut("cut " + std::to_string(cut_id) + " is stuck: " + kind_name(a.kind) + " against " +
                 kind_name(b.kind));
}

std::vector<const BranchNode*> BranchTree::leaves() const {
  std::vector<const BranchNode*> out;
  std::function<void(const BranchNode&)> walk = [&](const BranchNode& n) {
    if (n.is_leaf()) {
      out.push_back(&n);
      return;
    }
    for (const BranchNode& c : n.children) walk(c);
  };
  walk(root);
  return out;
}

BranchTree normalize_all(const ProofStructure& s, const NormalizeOptions& opt) {
  ValidationReport rep = validate(s);
  if (!rep.ok()) throw std::invalid_argument("structure is invalid: " + rep.str());
  if (opt.check_net) {
    NetVerdict v = is_proof_net(s, opt.switching_limit);
    if (v.outcome == NetVerdict::Outcome::NotNet)
      throw std::invalid_argument("structure is not a proof net (" +
                                  std::string(graph_verdict_name(v.defect)) + " switching " +
                                  v.witness->str() + ")");
    if (v.outcome == NetVerdict::Outcome::LimitExceeded)
      throw std::invalid_argument(
          "switching count exceeds the limit; disable the correctness pre-check to proceed");
  }

  BranchTree tree;
  tree.root.structure = s;
  std::mt19937 rng(static_cast<std::mt19937::result_type>(opt.seed));

  std::vector<BranchNode*> work{&tree.root};
  while (!work.empty()) {
    BranchNode* n = work.back();
    work.pop_back();
    std::vector<LinkId> cand = reducible_cuts(n->structure);
    if (cand.empty()) {
      n->normal_form = true;
      continue;
    }
    if (tree.steps >= opt.budget) {
      tree.budget_exhausted = true;
      continue;  // unexpanded leaf, not a normal form
    }
    LinkId chosen = cand[0];
    if (opt.strategy == Strategy::Random && cand.size() > 1)
      chosen = cand[rng() % cand.size()];  // plain modulo keeps the stream portable
    ++tree.steps;
    std::vector<ReducedBranch> branches = reduce_step(n->structure, chosen);
    bool fork = branches.size() > 1;
    n->children.reserve(branches.size());
    for (std::size_t k = 0; k < branches.size(); ++k) {
      BranchNode child;
      child.incoming = ReductionStep{branches[k].kind, chosen};
      child.step_no = static_cast<int>(tree.steps);
      child.path = fork ? n->path + static_cast<char>('0' + k) : n->path;
      child.structure = std::move(branches[k].structure);
      n->children.push_back(std::move(child));
    }
    for (BranchNode& c : n->children) {
      tree.trace.push_back("step " + std::to_string(c.step_no) + " branch " +
                           (c.path.empty() ? "-" : c.path) + " " +
                           step_kind_name(c.incoming->kind) + " cut=" +
                           std::to_string(c.incoming->cut));
    }
    for (auto rit = n->children.rbegin(); rit != n->children.rend(); ++rit)
      work.push_back(&*rit);  // left child on top: leaves come out left to right
  }
  return tree;
}

}  // namespace ndnet
