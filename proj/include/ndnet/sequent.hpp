#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndnet/formula.hpp"
#include "ndnet/structure.hpp"

namespace ndnet {

struct ProofError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RemovalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class RuleKind { Ax, ParR, TensorR, WithR, NWithR, Plus1R, Plus2R, CutR };
const char* rule_name(RuleKind k);

struct SequentProof;
using ProofPtr = std::shared_ptr<const SequentProof>;

// Every node records its full conclusion sequent; check_proof re-verifies
// each rule application against the recorded sequents, so trees built by
// hand (in any conclusion order the rules admit) can be checked too.
struct SequentProof {
  RuleKind rule{};
  Sequent conclusion;
  // ax: first conclusion; plus1: right summand; plus2: left summand; cut: cut formula
  Formula formula;
  int i = -1;  // par/with/nwith/plus: principal position; tensor/cut: position in premise 1
  int j = -1;  // tensor/cut: position in premise 2
  std::vector<ProofPtr> premises;
};

// Constructors computing the canonical conclusion; they throw ProofError on
// out-of-range positions or mismatched premises.
ProofPtr make_ax(const Formula& f);
ProofPtr make_par(int i, ProofPtr p);
ProofPtr make_tensor(int i, int j, ProofPtr p, ProofPtr q);
ProofPtr make_with(int i, ProofPtr p, ProofPtr q);
ProofPtr make_nwith(int i, ProofPtr p, ProofPtr q);
ProofPtr make_plus1(int i, const Formula& right, ProofPtr p);
ProofPtr make_plus2(int i, const Formula& left, ProofPtr p);
ProofPtr make_cut(const Formula& f, int i, int j, ProofPtr p, ProofPtr q);

// nullopt when the proof is correct, otherwise a description of the first
// broken rule application.
std::optional<std::string> check_proof(const SequentProof& p);

std::map<RuleKind, int> rule_histogram(const SequentProof& p);
int proof_size(const SequentProof& p);

ProofPtr parse_proof(const std::string& text);
std::string print_proof_term(const SequentProof& p);
std::string format_proof(const SequentProof& p);

struct DeseqResult {
  ProofStructure structure;
  std::vector<OccId> conclusion_ids;  // aligned with the proof's conclusion
};

// Builds the proof structure of a checked proof.  Conclusion occurrences get
// ids 1..k in sequent order.
DeseqResult desequentialize(const SequentProof& p);

// Removes a terminal link.  Par/plus yield one part; tensor/cut split the
// rest into two connected parts (premise-0 side first); with/nwith yield the
// two eigenweight restrictions.  Ids are preserved.  Throws RemovalError if
// the link is not removable here or a part is not a valid structure.
std::vector<ProofStructure> removal(const ProofStructure& s, LinkId l);

inline constexpr std::uint64_t kDefaultSeqBudget = std::uint64_t{1} << 20;

enum class SeqOutcome { Proved, Failed, BudgetExhausted };

struct SeqResult {
  SeqOutcome outcome{};
  ProofPtr proof;  // Proved only; conclusion follows ascending conclusion occ ids
  std::uint64_t visited = 0;
  std::vector<std::string> trace;
};

SeqResult sequentialize(const ProofStructure& s, std::uint64_t budget = kDefaultSeqBudget);

}  // namespace ndnet
