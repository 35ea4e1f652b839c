#pragma once

#include <optional>
#include <vector>

#include "bnsl/instance.hpp"

namespace bnsl {

struct Incumbent {
    std::vector<VarSet> parents;  // chosen parent set per variable
    double cost = 0.0;
};

// Exhaustive reference: enumerates all n! vertex orders, each variable
// taking its cheapest live value contained in its prefix. Exact for
// decomposable scores. Deliberately has no pruning so it stays an
// independent oracle. Throws std::invalid_argument when n > 10.
// Returns nullopt when no order admits a full assignment (infeasible).
std::optional<Incumbent> bruteForceOptimum(const Instance& instance,
                                           const DomainState& domains);
std::optional<Incumbent> bruteForceOptimum(const Instance& instance);

// Same enumeration over a subset of the variables: orders range over
// `scope` only and values may use variables outside the scope freely.
// Returns the minimal total cost over scope, nullopt if none exists.
std::optional<double> bruteForceCompletion(const Instance& instance,
                                           const DomainState& domains, VarSet scope);

// All violated clusters: subsets C (|C| >= 2) where every member's every
// live value intersects C. 2^n enumeration, guarded at n > 20.
std::vector<VarSet> enumerateViolatedClusters(const Instance& instance,
                                              const DomainState& domains);

}  // namespace bnsl
