#include "ndnet/correctness.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ndnet {

std::string Switching::str() const {
  std::ostringstream out;
  out << "val{";
  bool first = true;
  for (const auto& [l, b] : valuation) {
    if (!first) out << ",";
    first = false;
    out << "p" << l << "=" << (b ? 1 : 0);
  }
  out << "} par{";
  first = true;
  for (const auto& [l, left] : par_left) {
    if (!first) out << ",";
    first = false;
    out << l << ":" << (left ? "L" : "R");
  }
  out << "} jump{";
  first = true;
  for (const auto& [l, o] : jumps) {
    if (!first) out << ",";
    first = false;
    out << l << "->" << o;
  }
  out << "}";
  return out.str();
}

const char* graph_verdict_name(GraphVerdict v) {
  switch (v) {
    case GraphVerdict::Tree: return "tree";
    case GraphVerdict::Cyclic: return "cyclic";
    case GraphVerdict::Disconnected: return "disconnected";
  }
  return "?";
}

bool depends_on(const ProofStructure& s, const Valuation& v, OccId o, LinkId eigen) {
  Valuation flipped = v;
  auto it = flipped.find(eigen);
  if (it == flipped.end()) throw std::invalid_argument("eigenweight not in valuation");
  it->second = !it->second;
  for (const auto& [lid, link] : s.links) {
    if (std::find(link.conclusions.begin(), link.conclusions.end(), o) == link.conclusions.end())
      continue;
    if (link.weight.eval(v) && !link.weight.eval(flipped)) return true;
  }
  return false;
}

std::vector<OccId> jump_candidates(const ProofStructure& s, const Valuation& v, LinkId link) {
  std::vector<OccId> out;
  for (const auto& [oid, f] : s.occs) {
    if (depends_on(s, v, oid, link)) out.push_back(oid);
  }
  return out;  // map iteration is already ascending
}

SwitchGraph switch_graph(const ProofStructure& s, const Switching& sw) {
  Slice sl = slice(s, sw.valuation);
  SwitchGraph g;
  g.vertices.assign(sl.occs.begin(), sl.occs.end());
  for (LinkId lid : sl.links) {
    const Link& l = s.links.at(lid);
    switch (l.kind) {
      case LinkKind::Id:
        g.edges.emplace_back(l.conclusions[0], l.conclusions[1]);
        break;
      case LinkKind::Cut:
        g.edges.emplace_back(l.premises[0], l.premises[1]);
        break;
      case LinkKind::Tensor:
        g.edges.emplace_back(l.premises[0], l.conclusions[0]);
        g.edges.emplace_back(l.premises[1], l.conclusions[0]);
        break;
      case LinkKind::Par: {
        bool left = sw.par_left.at(lid);
        g.edges.emplace_back(l.premises[left ? 0 : 1], l.conclusions[0]);
        break;
      }
      case LinkKind::Plus1:
      case LinkKind::Plus2:
        g.edges.emplace_back(l.premises[0], l.conclusions[0]);
        break;
      case LinkKind::With:
      case LinkKind::NWith:
        g.edges.emplace_back(sw.jumps.at(lid), l.conclusions[0]);
        break;
      case LinkKind::Gax:
        for (std::size_t i = 1; i < l.conclusions.size(); ++i)
          g.edges.emplace_back(l.conclusions[0], l.conclusions[i]);
        break;
    }
  }
  return g;
}

GraphVerdict is_connected_acyclic(const SwitchGraph& g) {
  std::map<OccId, std::size_t> index;
  for (std::size_t i = 0; i < g.vertices.size(); ++i) index[g.vertices[i]] = i;
  std::vector<std::size_t> parent(g.vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  bool cyclic = false;
  std::size_t components = g.vertices.size();
  for (const auto& [a, b] : g.edges) {
    std::size_t ra = find(index.at(a));
    std::size_t rb = find(index.at(b));
    if (ra == rb) {
      cyclic = true;  // a chord inside one component closes a cycle
    } else {
      parent[ra] = rb;
      --components;
    }
  }
  if (cyclic) return GraphVerdict::Cyclic;
  if (components > 1) return GraphVerdict::Disconnected;
  return GraphVerdict::Tree;
}

SwitchingEnumerator::SwitchingEnumerator(const ProofStructure& s, std::uint64_t limit)
    : s_(s), limit_(limit) {
  StructureIndex ix = StructureIndex::build(s);
  eigen_.assign(ix.eigen_links.begin(), ix.eigen_links.end());
  std::sort(eigen_.begin(), eigen_.end());
  if (eigen_.size() >= 63) throw std::invalid_argument("too many eigenweights to enumerate");
  n_valuations_ = std::uint64_t{1} << eigen_.size();
  if (n_valuations_ > limit_) {
    // each valuation contributes at least one switching
    exceeded_ = true;
    total_ = n_valuations_;
    return;
  }

  // counting pass: per valuation the count is a product of slice choice
  // counts, always >= 1, so this loop runs at most limit+1 times overall
  for (std::uint64_t vi = 0; vi < n_valuations_; ++vi) {
    Valuation v = valuation_at(vi);
    Slice sl = slice(s_, v);
    std::uint64_t here = 1;
    bool overflow = false;
    for (LinkId lid : sl.links) {
      const Link& l = s_.links.at(lid);
      std::uint64_t c = 1;
      if (l.kind == LinkKind::Par) {
        c = 2;
      } else if (l.kind == LinkKind::With || l.kind == LinkKind::NWith) {
        c = jump_candidates(s_, v, lid).size();
      }
      if (c == 0) throw std::logic_error("with/nwith link has no jump candidates");
      if (here > (limit_ + 1) / c + 1) {
        overflow = true;
        break;
      }
      here *= c;
    }
    if (overflow || here > limit_ - std::min(limit_, total_)) {
      exceeded_ = true;
      total_ = limit_ + 1;
      return;
    }
    total_ += here;
    if (total_ > limit_) {
      exceeded_ = true;
      return;
    }
  }
}

Valuation SwitchingEnumerator::valuation_at(std::uint64_t index) const {
  Valuation v;
  for (std::size_t i = 0; i < eigen_.size(); ++i)
    v[eigen_[i]] = ((index >> i) & 1) != 0;  // lowest id is the least significant bit
  return v;
}

bool SwitchingEnumerator::load_valuation(std::uint64_t index) {
  current_val_ = valuation_at(index);
  Slice sl = slice(s_, current_val_);
  pars_.clear();
  jumps_.clear();
  for (LinkId lid : sl.links) {
    const Link& l = s_.links.at(lid);
    if (l.kind == LinkKind::Par) {
      pars_.push_back({lid, true});
    } else if (l.kind == LinkKind::With || l.kind == LinkKind::NWith) {
      jumps_.push_back({lid, jump_candidates(s_, current_val_, lid), 0});
    }
  }
  return true;
}

std::optional<Switching> SwitchingEnumerator::next() {
  if (exceeded_ || done_) return std::nullopt;
  if (!val_loaded_) {
    if (val_index_ >= n_valuations_) {
      done_ = true;
      return std::nullopt;
    }
    load_valuation(val_index_);
    val_loaded_ = true;
  }
  Switching sw;
  sw.valuation = current_val_;
  for (const ParSlot& p : pars_) sw.par_left[p.link] = p.left;
  for (const JumpSlot& j : jumps_) sw.jumps[j.link] = j.candidates[j.at];

  // advance: jumps spin fastest (rightmost digit first), then par choices
  bool carried = true;
  for (auto it = jumps_.rbegin(); carried && it != jumps_.rend(); ++it) {
    if (++it->at < it->candidates.size()) {
      carried = false;
    } else {
      it->at = 0;
    }
  }
  for (auto it = pars_.rbegin(); carried && it != pars_.rend(); ++it) {
    if (it->left) {
      it->left = false;
      carried = false;
    } else {
      it->left = true;
    }
  }
  if (carried) {
    ++val_index_;
    val_loaded_ = false;
  }
  return sw;
}

NetVerdict is_proof_net(const ProofStructure& s, std::uint64_t limit) {
  ValidationReport rep = validate(s);
  if (!rep.ok()) throw std::invalid_argument("structure is invalid: " + rep.str());
  SwitchingEnumerator en(s, limit);
  if (en.limit_exceeded())
    return {NetVerdict::Outcome::LimitExceeded, std::nullopt, GraphVerdict::Tree, en.total_count()};
  std::uint64_t checked = 0;
  while (auto sw = en.next()) {
    GraphVerdict gv = is_connected_acyclic(switch_graph(s, *sw));
    if (gv != GraphVerdict::Tree)
      return {NetVerdict::Outcome::NotNet, sw, gv, checked};
    ++checked;
  }
  return {NetVerdict::Outcome::Net, std::nullopt, GraphVerdict::Tree, checked};
}

}  // namespace ndnet
