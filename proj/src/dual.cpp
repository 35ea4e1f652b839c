#include "bnsl/dual.hpp"

#include <algorithm>
#include <cassert>

namespace bnsl {

namespace {

// Smallest cost among vars(C) over the *full* domains; static tie-break
// key for the heuristic pool order.
double minOriginalCost(const Instance& instance, const Cluster& cluster) {
    double best = std::numeric_limits<double>::infinity();
    for (VariableId v : cluster) {
        for (const auto& val : instance.domain(v)) {
            if (val.parents.intersects(cluster)) continue;
            best = std::min(best, val.score);
            break;  // domain sorted ascending: first disjoint value is the cheapest
        }
    }
    return best;
}

bool heuristicBefore(const PooledCluster& a, const PooledCluster& b) {
    unsigned sa = a.members.count(), sb = b.members.count();
    if (sa != sb) return sa < sb;
    if (a.minOriginalCost != b.minOriginalCost) return a.minOriginalCost > b.minOriginalCost;
    return a.seq < b.seq;
}

}  // namespace

int ClusterPool::insert(const Instance& instance, Cluster cluster) {
    if (!seen_.insert(cluster).second) return -1;
    PooledCluster entry;
    entry.members = cluster;
    entry.minOriginalCost = minOriginalCost(instance, cluster);
    entry.seq = nextSeq_++;
    if (order_ == PoolOrder::Chronological) {
        entries_.push_back(entry);
        return static_cast<int>(entries_.size() - 1);
    }
    auto pos = std::upper_bound(entries_.begin(), entries_.end(), entry, heuristicBefore);
    pos = entries_.insert(pos, entry);
    return static_cast<int>(pos - entries_.begin());
}

size_t ClusterPool::evict(uint64_t minTrials) {
    size_t before = entries_.size();
    auto keep = [&](const PooledCluster& e) {
        if (e.members.count() <= 10) return true;
        if (e.trials() < minTrials) return true;
        return double(e.productive) / double(e.trials()) >= 1.0 / 1000.0;
    };
    auto it = std::stable_partition(entries_.begin(), entries_.end(), keep);
    for (auto drop = it; drop != entries_.end(); ++drop) seen_.erase(drop->members);
    entries_.erase(it, entries_.end());
    return before - entries_.size();
}

size_t ClusterPool::enforceCap(size_t maxSize) {
    if (entries_.size() <= maxSize) return 0;
    size_t removed = evict();
    while (entries_.size() > maxSize) {
        // Heuristic order puts the largest, cheapest clusters last;
        // chronological pools drop the newest. Pool content only affects
        // bound quality, never soundness.
        seen_.erase(entries_.back().members);
        entries_.pop_back();
        ++removed;
    }
    return removed;
}

MinRcResult minReducedCost(const Instance& instance, const DomainState& domains,
                           const DualState& dual, PooledCluster& entry, DualStats* stats) {
    const double eps = instance.epsilon();
    MinRcResult result;

    // Support pair: if its value is still live with zero reduced cost, the
    // cluster cannot be an RC-cluster and the scan is skipped.
    if (entry.supportVar >= 0) {
        VariableId v = static_cast<VariableId>(entry.supportVar);
        const auto& liveIdx = domains.live[v];
        if (std::binary_search(liveIdx.begin(), liveIdx.end(), entry.supportIdx) &&
            dual.reducedCost(instance, v, entry.supportIdx) <= eps) {
            if (stats) ++stats->supportHits;
            result.value = 0.0;
            result.var = entry.supportVar;
            result.idx = entry.supportIdx;
            result.feasible = true;
            return result;
        }
    }

    if (stats) ++stats->fullScans;
    for (VariableId v : entry.members) {
        if (stats) stats->valuesLiveTotal += domains.live[v].size();
        const auto& dom = instance.domain(v);
        for (uint32_t idx : domains.live[v]) {
            // Values are score-sorted, so once score - deltaMax cannot beat
            // the current minimum, none of the rest can.
            if (dom[idx].score - dual.deltaMax[v] >= result.value) break;
            if (stats) ++stats->valuesVisited;
            if (dom[idx].parents.intersects(entry.members)) continue;
            double rc = dom[idx].score - dual.delta[v][idx];
            if (rc < result.value) {
                result.value = rc;
                result.var = static_cast<int32_t>(v);
                result.idx = idx;
            }
        }
    }

    if (result.var < 0) return result;  // vars(C) has no live value: infeasible
    result.feasible = true;
    result.value = std::max(0.0, result.value);
    entry.supportVar = result.var;
    entry.supportIdx = result.idx;
    return result;
}

DualState dualInit(const Instance& instance, const DomainState& domains) {
    DualState dual;
    const unsigned n = instance.numVars();
    dual.delta.resize(n);
    dual.deltaMax.assign(n, 0.0);
    double bound = 0.0;
    for (VariableId v = 0; v < n; ++v) {
        const auto& dom = instance.domain(v);
        assert(!domains.live[v].empty());
        double minLive = dom[domains.live[v].front()].score;
        bound += minLive;
        dual.delta[v].assign(dom.size(), minLive);
        dual.deltaMax[v] = minLive;
    }
    dual.bound = bound;
    dual.initBound = bound;
    return dual;
}

namespace {

void applyTransfer(const Instance& instance, const DomainState& domains, DualState& dual,
                   const Cluster& cluster, double amount) {
    for (VariableId v : cluster) {
        const auto& dom = instance.domain(v);
        for (uint32_t idx : domains.live[v]) {
            if (dom[idx].parents.intersects(cluster)) continue;
            dual.delta[v][idx] += amount;
            dual.deltaMax[v] = std::max(dual.deltaMax[v], dual.delta[v][idx]);
        }
    }
    dual.bound += amount;
    dual.incrementLog.push_back(amount);
}

}  // namespace

bool dualSolve(const Instance& instance, const DomainState& domains, ClusterPool& pool,
               DualState& out, DualStats* stats) {
    const double eps = instance.epsilon();
    out = dualInit(instance, domains);
    for (auto& entry : pool.entries()) {
        MinRcResult mrc = minReducedCost(instance, domains, out, entry, stats);
        if (!mrc.feasible) return false;
        if (mrc.value > eps) {
            applyTransfer(instance, domains, out, entry.members, mrc.value);
            ++entry.productive;
            if (stats) ++stats->productive;
        } else {
            ++entry.unproductive;
            if (stats) ++stats->unproductive;
        }
    }
    return true;
}

std::optional<double> dualImprove(const Instance& instance, const DomainState& domains,
                                  DualState& dual, PooledCluster& entry, DualStats* stats) {
    MinRcResult mrc = minReducedCost(instance, domains, dual, entry, stats);
    if (!mrc.feasible) return std::nullopt;
    assert(mrc.value > instance.epsilon());
    applyTransfer(instance, domains, dual, entry.members, mrc.value);
    ++entry.productive;
    if (stats) ++stats->productive;
    return mrc.value;
}

}  // namespace bnsl
