#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ndnet/formula.hpp"

namespace ndnet {

using OccId = int;
using LinkId = int;

enum class LinkKind { Id, Cut, Gax, Tensor, Par, With, Plus1, Plus2, NWith };

const char* kind_name(LinkKind k);
std::optional<LinkKind> kind_from_name(std::string_view name);
// links owning an eigenweight
inline bool is_additive_owner(LinkKind k) { return k == LinkKind::With || k == LinkKind::NWith; }

// eigenweight assignment; keys are the ids of the owning with/nwith links
using Valuation = std::map<LinkId, bool>;

// Product of eigenweight literals.  The empty product is the weight 1.
// A monomial is never the zero of the boolean algebra: contradictory
// products are represented by the absence of a value (std::nullopt).
struct Monomial {
  std::map<LinkId, bool> lits;  // eigenweight -> sign (true: p, false: !p)

  bool is_one() const { return lits.empty(); }
  bool eval(const Valuation& v) const;  // throws std::out_of_range on unknown eigenweight
  static std::optional<Monomial> product(const Monomial& a, const Monomial& b);
  // Fix some eigenweights to constants; satisfied literals disappear,
  // contradicted ones make the whole monomial zero (nullopt).
  std::optional<Monomial> substitute(const std::map<LinkId, bool>& assign) const;
  std::string str() const;  // "1" or dotted literals like "p3.!p5"

  bool operator==(const Monomial&) const = default;
  bool operator<(const Monomial& o) const { return lits < o.lits; }
};

bool eval_monomial(const Monomial& m, const Valuation& v);
std::optional<Monomial> monomial_product(const Monomial& a, const Monomial& b);

// Formal sum of monomials (a derived formula weight).
struct WeightSum {
  std::vector<Monomial> terms;  // sorted
  bool eval(const Valuation& v) const;
  std::string str() const;
  bool operator==(const WeightSum&) const = default;
};

// Decides  sum(terms) == target  in the boolean algebra, assuming the terms
// are pairwise disjoint.  Every term must contain the target's literals; the
// remainders then have to tile the target exactly, which is checked by
// measure counting with exact power-of-two arithmetic.
bool weight_sum_equals_monomial(const std::vector<Monomial>& terms, const Monomial& target);

struct Link {
  LinkId id{};
  LinkKind kind{};
  std::vector<OccId> premises;     // ordered, left premise first
  std::vector<OccId> conclusions;  // ordered
  Monomial weight;
};

struct ProofStructure {
  std::map<OccId, Formula> occs;
  std::map<LinkId, Link> links;

  OccId fresh_occ() const { return occs.empty() ? 1 : occs.rbegin()->first + 1; }
  LinkId fresh_link() const { return links.empty() ? 1 : links.rbegin()->first + 1; }
};

// Incidence index for a structure that passed validation.
struct StructureIndex {
  std::map<OccId, LinkId> premise_of;               // absent key: occurrence is a conclusion
  std::map<OccId, std::vector<LinkId>> concluders;  // ascending link ids
  std::vector<LinkId> eigen_links;                  // with/nwith ids, ascending

  static StructureIndex build(const ProofStructure& s);
};

WeightSum formula_weight(const ProofStructure& s, OccId o);

struct Violation {
  std::string condition;  // "struct", "a", "c", "d", "e", "f", "g"
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(std::string_view cond) const;
  std::string str() const;
};

ValidationReport validate(const ProofStructure& s);

struct Slice {
  std::set<OccId> occs;
  std::set<LinkId> links;
};

Slice slice(const ProofStructure& s, const Valuation& v);
// the surviving premise of a with/nwith link under v (left iff v(p)=1)
OccId slice_premise(const Link& l, const Valuation& v);

std::vector<OccId> conclusion_ids(const ProofStructure& s);  // premises of no link, ascending id
Sequent conclusions(const ProofStructure& s);

// Text format, one item per line ('#' starts a comment):
//   occ <id> <formula>
//   link <id> <KIND> prem=<id,...|-> conc=<id,...|-> w=<monomial>
ProofStructure parse_structure(const std::string& text);
std::string serialize_structure(const ProofStructure& s);

// Disjoint union; b's ids are shifted past a's.  The maps report where b's
// occurrences and links ended up.
ProofStructure merge_disjoint(const ProofStructure& a, const ProofStructure& b,
                              std::map<OccId, OccId>* occ_map = nullptr,
                              std::map<LinkId, LinkId>* link_map = nullptr);

// Renumber occurrences and links from 1, listing lead_occs first (in the
// given order); eigenweight names follow the link renumbering.
ProofStructure relabel_canonical(const ProofStructure& s, const std::vector<OccId>& lead_occs,
                                 std::vector<OccId>* lead_out = nullptr);

// Substitute eigenweights and drop the material whose weight became zero.
ProofStructure substitute_eigen(const ProofStructure& s, const std::map<LinkId, bool>& assign);

}  // namespace ndnet
