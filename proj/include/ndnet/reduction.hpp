#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndnet/correctness.hpp"
#include "ndnet/structure.hpp"

namespace ndnet {

// a ready cut whose sources admit no rule (a generalized axiom is involved)
struct StuckCut : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class StepKind { AxCut, TensorPar, WithPlus, NWithLeft, NWithRight };
const char* step_kind_name(StepKind k);  // "AXCUT", "TENSOR_PAR", ...

// Ready: weight 1 and each premise concluded by exactly one link.
bool cut_is_ready(const ProofStructure& s, LinkId cut);
std::vector<LinkId> ready_cuts(const ProofStructure& s);
// Reducible: ready and the two source links match a reduction rule.
bool cut_is_reducible(const ProofStructure& s, LinkId cut);
std::vector<LinkId> reducible_cuts(const ProofStructure& s);
// Lazy normal form: nothing reducible is left.  Stuck or superposed cuts may
// remain; they are simply not touched.
bool is_lazy_normal(const ProofStructure& s);

struct ReducedBranch {
  StepKind kind;
  ProofStructure structure;
};

// One reduction of the given ready cut.  A cut between two nondeterministic
// with links forks into two branches (left components, right components);
// every other rule yields one branch.  Throws StuckCut when no rule applies
// and std::invalid_argument when the cut is not ready.
std::vector<ReducedBranch> reduce_step(const ProofStructure& s, LinkId cut);

enum class Strategy { First, Random };

struct NormalizeOptions {
  Strategy strategy = Strategy::First;
  std::uint64_t seed = 0;       // used by the random strategy
  std::uint64_t budget = 1'000'000;  // total reduce_step invocations
  bool check_net = true;        // verify correctness before reducing
  std::uint64_t switching_limit = kDefaultSwitchingLimit;
};

struct ReductionStep {
  StepKind kind;
  LinkId cut;
};

struct BranchNode {
  std::optional<ReductionStep> incoming;  // empty at the root
  int step_no = 0;                        // step that produced this node
  std::string path;                       // fork digits; empty on the trunk
  ProofStructure structure;
  bool normal_form = false;
  std::vector<BranchNode> children;  // 1 after a plain step, 2 after a fork
  bool is_leaf() const { return children.empty(); }
};

struct BranchTree {
  BranchNode root;
  bool budget_exhausted = false;
  std::uint64_t steps = 0;
  std::vector<std::string> trace;  // "step <n> branch <path> <KIND> cut=<id>"
  std::vector<const BranchNode*> leaves() const;  // left to right
};

// Reduces every branch to lazy normal form (or until the budget runs out).
// Throws std::invalid_argument when the input is invalid or, with check_net
// set, fails or overflows the correctness check.
BranchTree normalize_all(const ProofStructure& s, const NormalizeOptions& opt = {});

}  // namespace ndnet
