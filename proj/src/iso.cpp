#include "ndnet/iso.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace ndnet {

namespace {

std::string link_sig(const ProofStructure& s, const Link& l) {
  std::string sig = kind_name(l.kind);
  sig += "|";
  for (OccId o : l.premises) sig += s.occs.at(o).str() + ";";
  sig += "|";
  for (OccId o : l.conclusions) sig += s.occs.at(o).str() + ";";
  sig += "|" + std::to_string(l.weight.lits.size());
  return sig;
}

struct Matcher {
  const ProofStructure& a;
  const ProofStructure& b;
  std::vector<const Link*> order;  // a's links, rare signatures first
  std::map<std::string, std::vector<const Link*>> b_by_sig;
  std::map<LinkId, LinkId> link_map;
  std::set<LinkId> b_used;
  std::map<OccId, OccId> occ_map;
  std::map<OccId, OccId> occ_rev;

  bool bind_occ(OccId ao, OccId bo, std::vector<std::pair<OccId, OccId>>& added) {
    auto it = occ_map.find(ao);
    if (it != occ_map.end()) return it->second == bo;
    if (occ_rev.count(bo)) return false;
    if (a.occs.at(ao) != b.occs.at(bo)) return false;
    occ_map.emplace(ao, bo);
    occ_rev.emplace(bo, ao);
    added.emplace_back(ao, bo);
    return true;
  }

  bool bind_all(const std::vector<OccId>& ao, const std::vector<OccId>& bo,
                std::vector<std::pair<OccId, OccId>>& added) {
    if (ao.size() != bo.size()) return false;
    for (std::size_t k = 0; k < ao.size(); ++k)
      if (!bind_occ(ao[k], bo[k], added)) return false;
    return true;
  }

  bool match(std::size_t k) {
    if (k == order.size()) return weights_ok();
    const Link* al = order[k];
    for (const Link* bl : b_by_sig[link_sig(a, *al)]) {
      if (b_used.count(bl->id)) continue;
      std::vector<std::pair<OccId, OccId>> added;
      if (bind_all(al->premises, bl->premises, added) &&
          bind_all(al->conclusions, bl->conclusions, added)) {
        link_map.emplace(al->id, bl->id);
        b_used.insert(bl->id);
        if (match(k + 1)) return true;
        link_map.erase(al->id);
        b_used.erase(bl->id);
      }
      for (auto& [ao, bo] : added) {
        occ_map.erase(ao);
        occ_rev.erase(bo);
      }
    }
    return false;
  }

  bool weights_ok() {
    for (auto& [aid, l] : a.links) {
      Monomial renamed;
      for (auto& [eid, sign] : l.weight.lits) {
        auto it = link_map.find(eid);
        if (it == link_map.end()) return false;
        renamed.lits.emplace(it->second, sign);
      }
      if (!(renamed == b.links.at(link_map.at(aid)).weight)) return false;
    }
    return true;
  }
};

}  // namespace

bool isomorphic(const ProofStructure& a, const ProofStructure& b) {
  if (a.occs.size() != b.occs.size() || a.links.size() != b.links.size()) return false;

  std::map<std::string, std::vector<const Link*>> a_by_sig, b_by_sig;
  for (auto& [id, l] : a.links) a_by_sig[link_sig(a, l)].push_back(&l);
  for (auto& [id, l] : b.links) b_by_sig[link_sig(b, l)].push_back(&l);
  if (a_by_sig.size() != b_by_sig.size()) return false;
  for (auto& [sig, links] : a_by_sig) {
    auto it = b_by_sig.find(sig);
    if (it == b_by_sig.end() || it->second.size() != links.size()) return false;
  }

  Matcher m{a, b, {}, std::move(b_by_sig), {}, {}, {}, {}};
  for (auto& [sig, links] : a_by_sig)
    for (const Link* l : links) m.order.push_back(l);
  std::stable_sort(m.order.begin(), m.order.end(), [&](const Link* x, const Link* y) {
    return a_by_sig.at(link_sig(a, *x)).size() < a_by_sig.at(link_sig(a, *y)).size();
  });
  return m.match(0);
}

}  // namespace ndnet
