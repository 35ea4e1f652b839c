#include "bnsl/search.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "bnsl/acyclicity.hpp"

namespace bnsl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct CacheEntry {
    double bound = 0.0;  // lower bound on the completion cost of the key set
    bool exact = false;  // set when the subtree closed on an achieved completion
};

class Searcher {
public:
    Searcher(const Instance& instance, const SolveConfig& config)
        : inst_(instance),
          cfg_(config),
          eps_(instance.epsilon()),
          pool_(config.clusterOrder),
          deadline_(),
          hasDeadline_(config.timeLimitSec > 0.0) {
        if (hasDeadline_) {
            deadline_ = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(config.timeLimitSec));
        }
    }

    SolveResult run() {
        auto start = std::chrono::steady_clock::now();
        SolveResult result;

        DomainState root = DomainState::full(inst_);
        OrderWitness rootWitness = acycChecker(inst_, root, inst_.allVars());
        if (!rootWitness.completeFor(inst_.allVars())) {
            result.status = SolveStatus::Infeasible;
            result.stats = stats_;
            return result;
        }

        incumbentCost_ = kInf;
        choices_.assign(inst_.numVars(), 0);
        bestChoices_.assign(inst_.numVars(), 0);
        prefix_.clear();
        prefixSet_ = VarSet();

        dfs(root, 0.0, 0);

        stats_.clustersGenerated = pool_.generated();
        stats_.clustersKept = pool_.size();
        stats_.cacheEntries = cache_.size();
        stats_.wallSeconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        result.stats = stats_;

        if (incumbentCost_ == kInf) {
            // Can only happen when the clock ran out before the first dive
            // finished; the root was already proven satisfiable.
            result.status = SolveStatus::TimedOut;
            return result;
        }
        result.incumbent.parents.resize(inst_.numVars());
        result.incumbent.cost = 0.0;
        for (VariableId v = 0; v < inst_.numVars(); ++v) {
            result.incumbent.parents[v] = inst_.domain(v)[bestChoices_[v]].parents;
            result.incumbent.cost += inst_.domain(v)[bestChoices_[v]].score;
        }
        result.status = aborted_ ? SolveStatus::TimedOut : SolveStatus::Optimal;
        return result;
    }

    double rootBoundOnly() {
        DomainState root = DomainState::full(inst_);
        OrderWitness rootWitness = acycChecker(inst_, root, inst_.allVars());
        if (!rootWitness.completeFor(inst_.allVars())) return kInf;
        if (cfg_.useGac) {
            PropagationResult gac = gacPropagate(inst_, root);
            if (gac.failed) return kInf;
            root = std::move(gac.domains);
        }
        double bound = 0.0;
        if (!rootRounds(root, bound)) return kInf;
        return bound;
    }

private:
    bool timeUp() {
        if (!hasDeadline_ || aborted_) return aborted_;
        if (std::chrono::steady_clock::now() >= deadline_) aborted_ = true;
        return aborted_;
    }

    double trivialBound(const DomainState& domains) const {
        double bound = 0.0;
        for (VariableId v = 0; v < inst_.numVars(); ++v)
            bound += inst_.domain(v)[domains.live[v].front()].score;
        return bound;
    }

    // Iterated root bound: re-solving the dual over the grown, ordered pool
    // can raise the bound further, so loop until it stops improving.
    bool rootRounds(const DomainState& domains, double& bound) {
        double prev = -kInf;
        for (int round = 0; round < 16; ++round) {
            LbResult lb = lowerBoundRc(inst_, domains, pool_, lbOptions(std::nullopt),
                                       &stats_.dual, nullptr);
            if (!lb.feasible) return false;
            bound = lb.bound;
            if (cfg_.audit) auditDual(domains, lb.dual);
            if (bound - prev <= eps_) break;
            prev = bound;
        }
        pool_.evict();
        return true;
    }

    LbOptions lbOptions(std::optional<VarSet> seed) const {
        LbOptions opts;
        opts.minimise = cfg_.minimiseClusters;
        opts.seedViolated = seed;
        return opts;
    }

    // Re-verifies dual feasibility (live reduced costs >= -eps) and the
    // bound-accounting identity (bound = sum of live minima + logged
    // increments). Counted, not fatal, so acceptance can report totals.
    void auditDual(const DomainState& domains, const DualState& dual) {
        for (VariableId v = 0; v < inst_.numVars(); ++v) {
            for (uint32_t idx : domains.live[v]) {
                if (dual.reducedCost(inst_, v, idx) < -eps_) ++stats_.auditViolations;
            }
        }
        double rebuilt = dual.initBound;
        for (double inc : dual.incrementLog) rebuilt += inc;
        if (std::abs(rebuilt - dual.bound) > eps_) ++stats_.auditViolations;
        double minSum = trivialBound(domains);
        if (std::abs(dual.initBound - minSum) > eps_) ++stats_.auditViolations;
    }

    void noteBound(const DomainState& domains, double committed, double bound) {
        if (cfg_.onNodeBound) {
            NodeBoundInfo info{prefix_, inst_.allVars() - prefixSet_, committed, bound, domains};
            cfg_.onNodeBound(info);
        }
    }

    void learnFromFailure(const DomainState& domains, const VarSet& violated) {
        // The violated set certifies this node dead, but its minimised
        // cluster is a valid inequality everywhere: pool it for siblings.
        LbResult lb =
            lowerBoundRc(inst_, domains, pool_, lbOptions(violated), &stats_.dual, nullptr);
        // Domains that fail the checker can never satisfy every pooled
        // inequality, so the bound loop must end in infeasibility.
        assert(!lb.feasible);
        (void)lb;
    }

    void dfs(const DomainState& domains, double committed, unsigned depth) {
        if (timeUp()) return;
        ++stats_.nodes;

        const VarSet unplaced = inst_.allVars() - prefixSet_;
        if (unplaced.empty()) {
            if (committed < incumbentCost_) {
                incumbentCost_ = committed;
                bestChoices_ = choices_;
            }
            subtreeBest_ = std::min(subtreeBest_, committed);
            return;
        }

        // Memoized suffix bound.
        auto cached = cache_.find(unplaced);
        if (cached != cache_.end() &&
            committed + cached->second.bound >= incumbentCost_ - eps_) {
            ++stats_.cacheHits;
            return;
        }

        DomainState local = domains;
        if (cfg_.useGac) {
            PropagationResult gac = gacPropagate(inst_, local);
            if (gac.failed) {
                ++stats_.gacFails;
                learnFromFailure(local, gac.violated);
                return;
            }
            stats_.gacPrunedValues += gac.prunedValues;
            local = std::move(gac.domains);
        } else {
            OrderWitness w = acycChecker(inst_, local, inst_.allVars());
            if (!w.completeFor(inst_.allVars())) {
                learnFromFailure(local, inst_.allVars() - w.placed);
                return;
            }
        }

        // Bound computation. The cluster bound covers the whole LP under
        // the current domains, committed cost included (placed variables
        // are singletons at their chosen values).
        double bound;
        bool usedClusterBound = (depth % std::max(1u, cfg_.lbEveryK)) == 0;
        if (usedClusterBound) {
            if (depth == 0) {
                if (!rootRounds(local, bound)) return;
                stats_.rootBound = bound;
            } else {
                LbResult lb = lowerBoundRc(inst_, local, pool_, lbOptions(std::nullopt),
                                           &stats_.dual, nullptr);
                if (!lb.feasible) return;
                bound = lb.bound;
                if (cfg_.audit) auditDual(local, lb.dual);
                if (++lbCalls_ % 1000 == 0)
                    stats_.clustersEvicted += pool_.evict();
                if (pool_.size() > cfg_.poolMax)
                    stats_.clustersEvicted += pool_.enforceCap(cfg_.poolMax);
            }
        } else {
            bound = trivialBound(local);
        }
        noteBound(local, committed, bound);

        storeCacheBound(unplaced, bound - committed, false);

        if (bound >= incumbentCost_ - eps_) {
            ++stats_.boundPrunes;
            return;
        }

        // Candidates: unplaced variables with a live prefix-consistent
        // value; branch in ascending regret order.
        struct Candidate {
            VariableId var;
            uint32_t valueIdx;
            double regret;
        };
        std::vector<Candidate> candidates;
        for (VariableId v : unplaced) {
            const auto& dom = inst_.domain(v);
            const auto& liveIdx = local.live[v];
            for (uint32_t idx : liveIdx) {
                if (dom[idx].parents.subsetOf(prefixSet_)) {
                    candidates.push_back(
                        {v, idx, dom[idx].score - dom[liveIdx.front()].score});
                    break;
                }
            }
        }
        if (candidates.empty()) return;  // dead end
        std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
            if (a.regret != b.regret) return a.regret < b.regret;
            return a.var < b.var;
        });

        double savedSubtreeBest = subtreeBest_;
        subtreeBest_ = kInf;

        for (const Candidate& cand : candidates) {
            if (timeUp()) break;
            // The incumbent may have improved below this node's bound.
            if (bound >= incumbentCost_ - eps_) break;

            DomainState child = local;
            child.live[cand.var].assign(1, cand.valueIdx);
            child.assignedFlag[cand.var] = 1;
            prefix_.push_back(cand.var);
            prefixSet_.insert(cand.var);
            choices_[cand.var] = cand.valueIdx;

            dfs(child, committed + inst_.domain(cand.var)[cand.valueIdx].score, depth + 1);

            prefix_.pop_back();
            prefixSet_.erase(cand.var);
        }

        if (!aborted_ && incumbentCost_ < kInf) {
            // Closed subtree: every completion of `unplaced` costs at least
            // incumbent - committed - eps (found ones by incumbent
            // minimality, pruned ones by their eps-slack pruning bound).
            bool exact = subtreeBest_ <= incumbentCost_ + eps_;
            storeCacheBound(unplaced, incumbentCost_ - committed - eps_, exact);
        }
        subtreeBest_ = std::min(savedSubtreeBest, subtreeBest_);
    }

    void storeCacheBound(const VarSet& key, double bound, bool exact) {
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            if (cache_.size() >= cfg_.cacheMax) return;
            cache_.emplace(key, CacheEntry{bound, exact});
        } else {
            if (bound > it->second.bound) {
                it->second.bound = bound;
                it->second.exact = exact;
            }
        }
    }

    const Instance& inst_;
    const SolveConfig& cfg_;
    const double eps_;
    ClusterPool pool_;
    std::chrono::steady_clock::time_point deadline_;
    bool hasDeadline_;
    bool aborted_ = false;

    SearchStats stats_;
    std::unordered_map<VarSet, CacheEntry, VarSetHash> cache_;

    std::vector<VariableId> prefix_;
    VarSet prefixSet_;
    std::vector<uint32_t> choices_;
    std::vector<uint32_t> bestChoices_;
    double incumbentCost_ = kInf;
    double subtreeBest_ = kInf;  // best leaf total inside the current subtree
    uint64_t lbCalls_ = 0;
};

}  // namespace

SolveResult solve(const Instance& instance, const SolveConfig& config) {
    Searcher searcher(instance, config);
    return searcher.run();
}

double computeRootBound(const Instance& instance, const SolveConfig& config) {
    Searcher searcher(instance, config);
    return searcher.rootBoundOnly();
}

}  // namespace bnsl
