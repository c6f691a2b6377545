#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "ndnet/structure.hpp"

namespace ndnet {

inline constexpr std::uint64_t kDefaultSwitchingLimit = std::uint64_t{1} << 22;

// A switching: a valuation, a premise choice for every par link present in
// the valuation's slice, and a jump target for every with/nwith link present.
struct Switching {
  Valuation valuation;
  std::map<LinkId, bool> par_left;  // true: left premise selected
  std::map<LinkId, OccId> jumps;
  std::string str() const;
};

// o depends on the eigenweight under v: some link concluding o has weight 1
// under v and weight 0 once that eigenweight is toggled.
bool depends_on(const ProofStructure& s, const Valuation& v, OccId o, LinkId eigen);

// All occurrences depending on the link's eigenweight, ascending ids.  The
// link must be a with/nwith link present in the slice of v.
std::vector<OccId> jump_candidates(const ProofStructure& s, const Valuation& v, LinkId link);

struct SwitchGraph {
  std::vector<OccId> vertices;
  std::vector<std::pair<OccId, OccId>> edges;
};

enum class GraphVerdict { Tree, Cyclic, Disconnected };
const char* graph_verdict_name(GraphVerdict v);

SwitchGraph switch_graph(const ProofStructure& s, const Switching& sw);
GraphVerdict is_connected_acyclic(const SwitchGraph& g);

// Streams every switching of the structure: valuations in binary order of
// eigenweight ids, then par choices, then jumps, both lexicographic.  The
// constructor counts first and trips the limit without enumerating.
class SwitchingEnumerator {
 public:
  SwitchingEnumerator(const ProofStructure& s, std::uint64_t limit = kDefaultSwitchingLimit);

  bool limit_exceeded() const { return exceeded_; }
  // exact when the limit was not exceeded, otherwise a lower bound
  std::uint64_t total_count() const { return total_; }
  std::optional<Switching> next();

 private:
  struct ParSlot {
    LinkId link;
    bool left;
  };
  struct JumpSlot {
    LinkId link;
    std::vector<OccId> candidates;
    std::size_t at;
  };

  bool load_valuation(std::uint64_t index);
  Valuation valuation_at(std::uint64_t index) const;

  const ProofStructure& s_;
  std::vector<LinkId> eigen_;
  std::uint64_t limit_;
  bool exceeded_ = false;
  std::uint64_t total_ = 0;
  std::uint64_t n_valuations_;
  std::uint64_t val_index_ = 0;
  bool val_loaded_ = false;
  bool done_ = false;
  Valuation current_val_;
  std::vector<ParSlot> pars_;
  std::vector<JumpSlot> jumps_;
};

struct NetVerdict {
  enum class Outcome { Net, NotNet, LimitExceeded };
  Outcome outcome;
  std::optional<Switching> witness;       // NotNet only
  GraphVerdict defect = GraphVerdict::Tree;  // NotNet only
  std::uint64_t switchings = 0;  // checked (Net), index of witness (NotNet), lower bound (limit)
};

// Exhaustive switching test; throws std::invalid_argument if the structure
// does not validate.
NetVerdict is_proof_net(const ProofStructure& s, std::uint64_t limit = kDefaultSwitchingLimit);

}  // namespace ndnet
