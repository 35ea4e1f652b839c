#include "bnsl/cluster_lb.hpp"

#include <cassert>

namespace bnsl {

DomainState rcRestrictedDomains(const Instance& instance, const DomainState& domains,
                                const DualState& dual) {
    const double eps = instance.epsilon();
    DomainState out = domains;
    for (VariableId v = 0; v < instance.numVars(); ++v) {
        std::vector<uint32_t> kept;
        kept.reserve(domains.live[v].size());
        for (uint32_t idx : domains.live[v]) {
            if (dual.reducedCost(instance, v, idx) <= eps) kept.push_back(idx);
        }
        out.live[v] = std::move(kept);
    }
    return out;
}

Cluster minimiseCluster(const Instance& instance, const DomainState& restricted,
                        VarSet scopeHint) {
    assert(!acycChecker(instance, restricted, scopeHint).completeFor(scopeHint));
    Cluster necessary;
    VarSet candidates = scopeHint;
    while (!candidates.empty()) {
        VariableId c = candidates.highest();
        candidates.erase(c);
        VarSet scope = necessary | candidates;
        OrderWitness w = acycChecker(instance, restricted, scope);
        VarSet stuck = scope - w.placed;
        if (stuck.empty()) {
            // Omitting c made the rest satisfiable: c is in every minimal
            // violated subset.
            necessary.insert(c);
        } else {
            // Still unsatisfiable without c; restart from the smaller
            // failure certificate.
            candidates = stuck - necessary;
        }
    }
    assert(necessary.count() >= 2);
    return necessary;
}

LbResult lowerBoundRc(const Instance& instance, const DomainState& domains, ClusterPool& pool,
                      const LbOptions& options, DualStats* stats, LbTrace* trace) {
    LbResult result;
    if (!dualSolve(instance, domains, pool, result.dual, stats)) return result;  // infeasible

    const VarSet all = instance.allVars();
    bool haveSeed = options.seedViolated.has_value();
    VarSet seed = haveSeed ? *options.seedViolated : VarSet();
    while (true) {
        result.restricted = rcRestrictedDomains(instance, domains, result.dual);
        VarSet stuck;
        if (haveSeed) {
            stuck = seed;
            haveSeed = false;
        } else {
            OrderWitness w = acycChecker(instance, result.restricted, all);
            if (w.completeFor(all)) {
                result.feasible = true;
                result.bound = result.dual.bound;
                if (trace) trace->finalWitness = std::move(w);
                return result;
            }
            stuck = all - w.placed;
        }

        Cluster cluster =
            options.minimise ? minimiseCluster(instance, result.restricted, stuck) : stuck;
        int pos = pool.insert(instance, cluster);
        // Freshly applied clusters always gain a zero-reduced-cost value,
        // so the checker cannot rediscover a pooled cluster within this
        // call; a duplicate would mean the invariant broke.
        assert(pos >= 0);
        if (pos < 0) {
            result.feasible = true;
            result.bound = result.dual.bound;
            return result;
        }
        PooledCluster& entry = pool.entries()[pos];
        std::optional<double> increment =
            dualImprove(instance, domains, result.dual, entry, stats);
        if (!increment) return result;  // ineq(cluster) integrally violated
        if (trace) trace->steps.emplace_back(cluster, *increment);
    }
}

}  // namespace bnsl
