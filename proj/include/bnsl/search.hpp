#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bnsl/cluster_lb.hpp"
#include "bnsl/dual.hpp"
#include "bnsl/instance.hpp"
#include "bnsl/oracle.hpp"

namespace bnsl {

struct SearchStats {
    uint64_t nodes = 0;
    double rootBound = 0.0;
    uint64_t clustersGenerated = 0;
    uint64_t clustersEvicted = 0;
    uint64_t clustersKept = 0;
    uint64_t gacPrunedValues = 0;
    uint64_t gacFails = 0;
    uint64_t cacheHits = 0;
    uint64_t cacheEntries = 0;
    uint64_t boundPrunes = 0;
    DualStats dual;
    uint64_t auditViolations = 0;
    double wallSeconds = 0.0;
};

// Test/diagnostic hook: fired after the bound of a node is known.
struct NodeBoundInfo {
    const std::vector<VariableId>& prefix;
    VarSet unplaced;
    double committedCost;
    double fullBound;  // committed cost included
    const DomainState& domains;
};

struct SolveConfig {
    bool useGac = true;
    bool minimiseClusters = true;
    PoolOrder clusterOrder = PoolOrder::Heuristic;
    // Run the cluster bound only at depths divisible by k (k = 1: every
    // node); other depths use the trivial sum-of-minima bound.
    unsigned lbEveryK = 1;
    size_t poolMax = 1u << 20;
    size_t cacheMax = 1u << 22;
    double timeLimitSec = 0.0;  // 0 = unlimited
    // Re-verifies dual feasibility and the bound-accounting identity after
    // every bound computation; violations are counted in stats.
    bool audit = false;
    std::function<void(const NodeBoundInfo&)> onNodeBound;
};

enum class SolveStatus { Optimal, TimedOut, Infeasible };

struct SolveResult {
    SolveStatus status = SolveStatus::Infeasible;
    Incumbent incumbent;  // valid unless Infeasible
    SearchStats stats;
};

// Depth-first branch-and-bound over vertex orderings. Branches place the
// next vertex; its value is forced to the cheapest live prefix-consistent
// one (per-variable choices are independent given a total order).
// Candidates are tried in ascending regret order (cheapest consistent
// value minus cheapest live value), ties by ascending id, so the first
// descent is the greedy dive that seeds the incumbent.
SolveResult solve(const Instance& instance, const SolveConfig& config = {});

// The root lower bound alone: iterated rounds of lowerBoundRc until the
// bound stops improving. Exposed for bound-quality experiments.
double computeRootBound(const Instance& instance, const SolveConfig& config = {});

}  // namespace bnsl
