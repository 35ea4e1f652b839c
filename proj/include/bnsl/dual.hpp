#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_set>
#include <vector>

#include "bnsl/instance.hpp"

namespace bnsl {

// A cluster is just a variable subset with |C| >= 2; its inequality says
// some member must take a parent set disjoint from C. vars(C) are the
// (v, S) pairs with v in C and S ∩ C = ∅.
using Cluster = VarSet;

// Feasible dual solution of the cluster LP, maintained as transferred
// costs rather than dual variables: delta[v][idx] is the amount moved from
// value (v, idx) into the bound, so rc = score - delta stays >= 0.
struct DualState {
    std::vector<std::vector<double>> delta;
    std::vector<double> deltaMax;  // max over live values of delta[v]
    double bound = 0.0;
    double initBound = 0.0;               // sum of live minima at init
    std::vector<double> incrementLog;     // productive increments, in order

    double reducedCost(const Instance& inst, VariableId v, uint32_t idx) const {
        return inst.domain(v)[idx].score - delta[v][idx];
    }
};

struct PooledCluster {
    Cluster members;
    // Static ordering key: smallest original cost among vars(C) over the
    // full domains, fixed at creation.
    double minOriginalCost = 0.0;
    uint64_t seq = 0;
    // Support pair: last argmin of the reduced-cost scan. rc == 0 there
    // proves the cluster currently unproductive without a scan.
    int32_t supportVar = -1;
    uint32_t supportIdx = 0;
    uint64_t productive = 0;
    uint64_t unproductive = 0;

    uint64_t trials() const { return productive + unproductive; }
};

enum class PoolOrder { Heuristic, Chronological };

// Owned by the search driver; scanned by DualSolve in its stored order.
// Heuristic order: ascending |C|, ties by descending minOriginalCost,
// then insertion sequence. Chronological: insertion order.
class ClusterPool {
public:
    explicit ClusterPool(PoolOrder order = PoolOrder::Heuristic) : order_(order) {}

    // Returns the entry index, or -1 if the cluster was already pooled.
    int insert(const Instance& instance, Cluster cluster);
    bool contains(const Cluster& c) const { return seen_.count(c) != 0; }

    std::vector<PooledCluster>& entries() { return entries_; }
    const std::vector<PooledCluster>& entries() const { return entries_; }
    size_t size() const { return entries_.size(); }

    // Drops large clusters that have proven unproductive: |C| > 10,
    // at least minTrials scans, productive ratio below 1/1000. Returns the
    // number of entries removed.
    size_t evict(uint64_t minTrials = 100);
    // Hard cap: evict first, then drop the largest/cheapest tail entries
    // until at most maxSize remain (bound quality only, never correctness).
    size_t enforceCap(size_t maxSize);

    uint64_t generated() const { return nextSeq_; }

private:
    PoolOrder order_;
    std::vector<PooledCluster> entries_;
    std::unordered_set<Cluster, VarSetHash> seen_;
    uint64_t nextSeq_ = 0;
};

// Counters mirroring the scan shortcuts: how often support pairs skipped a
// cluster, and what fraction of the live domains a full scan visited.
struct DualStats {
    uint64_t supportHits = 0;
    uint64_t fullScans = 0;
    uint64_t valuesVisited = 0;
    uint64_t valuesLiveTotal = 0;
    uint64_t productive = 0;
    uint64_t unproductive = 0;

    double domainVisitFraction() const {
        return valuesLiveTotal ? double(valuesVisited) / double(valuesLiveTotal) : 0.0;
    }
    double supportHitRate() const {
        uint64_t u = supportHits + unproductive;
        return u ? double(supportHits) / double(u) : 0.0;
    }
};

struct MinRcResult {
    double value = std::numeric_limits<double>::infinity();
    int32_t var = -1;
    uint32_t idx = 0;
    // False when vars(C) has no live value: the domains violate ineq(C)
    // integrally and the search must backtrack.
    bool feasible = false;
};

// Minimum reduced cost over the live values of vars(C). Uses the support
// pair to skip scans, iterates each member's live values in ascending
// score order skipping sets that intersect C, and stops a variable's scan
// once score - deltaMax can no longer beat the current minimum. Updates the
// support pair to the new argmin.
MinRcResult minReducedCost(const Instance& instance, const DomainState& domains,
                           const DualState& dual, PooledCluster& entry, DualStats* stats);

// Optimal dual of the clusterless LP: bound = sum of live minima, all
// delta set to the per-variable live minimum (so every variable has a
// zero-reduced-cost value).
DualState dualInit(const Instance& instance, const DomainState& domains);

// DualSolve: dualInit, then one pass over the pool in its stored order,
// transferring minrc(C) when positive. Returns false if some pooled
// inequality is integrally violated by the domains (infeasible node).
bool dualSolve(const Instance& instance, const DomainState& domains, ClusterPool& pool,
               DualState& out, DualStats* stats);

// Applies one new cluster on top of an existing dual solution without
// revisiting previous clusters. Returns the bound increment, or nullopt
// when vars(C) has no live value (the node is infeasible). Precondition
// (asserted): when vars(C) is live, the cluster is an RC-cluster under
// `dual`, i.e. minrc > epsilon.
std::optional<double> dualImprove(const Instance& instance, const DomainState& domains,
                                  DualState& dual, PooledCluster& entry, DualStats* stats);

}  // namespace bnsl
