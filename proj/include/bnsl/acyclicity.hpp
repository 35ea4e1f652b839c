#pragma once

#include <cstdint>
#include <vector>

#include "bnsl/instance.hpp"

namespace bnsl {

// Result of the greedy acyclicity check: a vertex order and, per ordered
// vertex, the domain index of the parent set witnessing its placement.
// When the order covers the whole scope it certifies that the domains
// admit an acyclic assignment; otherwise scope minus the ordered set is a
// violated-cluster-containing set.
struct OrderWitness {
    std::vector<VariableId> order;
    std::vector<uint32_t> witness;  // parallel to order
    VarSet placed;

    bool completeFor(const VarSet& scope) const { return placed == scope; }
};

// Greedy checker. Scope may be a subset of the variables; parent sets are
// matched against the scope only, so members outside the scope are treated
// as freely placeable (witness test: S ∩ scope ⊆ placed).
//
// Deterministic placement policy (two tiers):
//   1. repeated ascending-id passes placing any variable whose *cheapest*
//      live value is consistent with the current order;
//   2. when such passes stall, one descending-id scan placing the first
//      variable with any consistent live value (cheapest such value is the
//      witness), then back to tier 1.
// The final placed SET is policy-independent (greedy closure); the policy
// only pins the reported sequence and witnesses.
OrderWitness acycChecker(const Instance& instance, const DomainState& domains, VarSet scope);

// Outcome of a GAC propagation attempt. On failure `violated` holds
// scope \ order from the initial checker call so the bounding code can
// reuse it as a cluster seed. On success `domains` holds the pruned state.
struct PropagationResult {
    bool failed = false;
    VarSet violated;
    DomainState domains;
    uint64_t prunedValues = 0;
};

// Enforces generalized arc consistency on the acyclicity constraint in
// O(n^3 d): checks satisfiability once, then for every variable pushes it
// as late as possible by closing its order prefix, and prunes the values
// not contained in that closure.
PropagationResult gacPropagate(const Instance& instance, const DomainState& domains);

// Reference GAC propagator by probing: re-checks satisfiability after
// assigning each individual value. O(n^3 d^2); must agree exactly with
// gacPropagate. Kept as the correctness oracle for the fast path.
PropagationResult gacProbe(const Instance& instance, const DomainState& domains);

namespace detail {
// The per-variable prefix closure behind gacPropagate, exposed so tests
// can assert it is scan-order independent.
VarSet prefixClosure(const Instance& instance, const DomainState& domains, VarSet all,
                     VariableId v, VarSet seed, bool descendingScan);
}  // namespace detail

}  // namespace bnsl
