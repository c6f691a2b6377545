#pragma once

#include "ndnet/structure.hpp"

namespace ndnet {

// Structural isomorphism: a kind- and formula-preserving bijection of links
// and occurrences (positions preserved) under which the weights agree after
// renaming eigenweights along the link bijection.
bool isomorphic(const ProofStructure& a, const ProofStructure& b);

}  // namespace ndnet
