#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "bnsl/acyclicity.hpp"
#include "bnsl/dual.hpp"
#include "bnsl/instance.hpp"

namespace bnsl {

// Live values whose reduced cost is within epsilon of zero. The checker
// runs on these domains to decide whether another RC-cluster exists.
DomainState rcRestrictedDomains(const Instance& instance, const DomainState& domains,
                                const DualState& dual);

// Deletion-based minimisation: shrinks a violated-cluster-containing set
// to an inclusion-minimal one. Precondition: the checker fails on
// (scopeHint, restricted). Deterministic pick: highest variable id first.
Cluster minimiseCluster(const Instance& instance, const DomainState& restricted,
                        VarSet scopeHint);

// One (cluster, dual increment) pair per loop iteration plus the witness
// of the final successful checker call.
struct LbTrace {
    std::vector<std::pair<Cluster, double>> steps;
    OrderWitness finalWitness;
};

struct LbResult {
    // False when a cluster inequality is integrally violated under the
    // domains; the node is infeasible and the bound is meaningless.
    bool feasible = false;
    double bound = 0.0;
    DomainState restricted;
    DualState dual;  // final dual solution backing `bound`
};

struct LbOptions {
    bool minimise = true;
    // When the caller already holds a violated set for these domains (from
    // a failed GAC run), the first iteration starts from it instead of
    // re-running the checker.
    std::optional<VarSet> seedViolated;
};

// Iterated RC-cluster lower bound: DualSolve over the pool, then
// alternately extract a violated cluster from the reduced-cost-restricted
// domains, minimise it, pool it and apply DualImprove, until the checker
// succeeds. The returned bound is a valid lower bound on the optimal
// completion cost under `domains`. Terminates (finitely many clusters, and
// every applied cluster gains a zero-reduced-cost value) but is not
// confluent: different generation orders may reach different bounds, which
// is why the placement policy and the max-id minimisation pick are fixed.
LbResult lowerBoundRc(const Instance& instance, const DomainState& domains, ClusterPool& pool,
                      const LbOptions& options = {}, DualStats* stats = nullptr,
                      LbTrace* trace = nullptr);

}  // namespace bnsl
