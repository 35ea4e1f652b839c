#include "bnsl/oracle.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace bnsl {

namespace {

// One order's cost: each scope variable takes its cheapest live value
// whose scope part lies in the prefix. Parents outside the scope are free.
// Returns false if some variable has no admissible value.
bool orderCost(const Instance& instance, const DomainState& domains, VarSet scope,
               const std::vector<VariableId>& order, double& cost,
               std::vector<uint32_t>* picks) {
    VarSet prefix;
    cost = 0.0;
    for (size_t i = 0; i < order.size(); ++i) {
        VariableId v = order[i];
        bool found = false;
        for (uint32_t idx : domains.live[v]) {  // ascending score
            const VarSet inScope = instance.domain(v)[idx].parents & scope;
            if (inScope.subsetOf(prefix)) {
                cost += instance.domain(v)[idx].score;
                if (picks) (*picks)[v] = idx;
                found = true;
                break;
            }
        }
        if (!found) return false;
        prefix.insert(v);
    }
    return true;
}

}  // namespace

std::optional<Incumbent> bruteForceOptimum(const Instance& instance,
                                           const DomainState& domains) {
    const unsigned n = instance.numVars();
    if (n > 10) throw std::invalid_argument("brute force limited to 10 variables");

    std::vector<VariableId> order(n);
    for (VariableId v = 0; v < n; ++v) order[v] = v;

    const VarSet scope = instance.allVars();
    std::vector<uint32_t> picks(n, 0);
    std::vector<uint32_t> bestPicks;
    double bestCost = 0.0;
    bool any = false;
    do {
        double cost = 0.0;
        if (!orderCost(instance, domains, scope, order, cost, &picks)) continue;
        if (!any || cost < bestCost) {
            any = true;
            bestCost = cost;
            bestPicks = picks;
        }
    } while (std::next_permutation(order.begin(), order.end()));

    if (!any) return std::nullopt;
    Incumbent inc;
    inc.parents.resize(n);
    inc.cost = 0.0;
    for (VariableId v = 0; v < n; ++v) {
        inc.parents[v] = instance.domain(v)[bestPicks[v]].parents;
        inc.cost += instance.domain(v)[bestPicks[v]].score;
    }
    return inc;
}

std::optional<Incumbent> bruteForceOptimum(const Instance& instance) {
    return bruteForceOptimum(instance, DomainState::full(instance));
}

std::optional<double> bruteForceCompletion(const Instance& instance,
                                           const DomainState& domains, VarSet scope) {
    if (scope.count() > 10) throw std::invalid_argument("brute force limited to 10 variables");
    std::vector<VariableId> order;
    for (VariableId v : scope) order.push_back(v);
    std::sort(order.begin(), order.end());

    std::optional<double> best;
    do {
        double cost = 0.0;
        if (!orderCost(instance, domains, scope, order, cost, nullptr)) continue;
        if (!best || cost < *best) best = cost;
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

std::vector<VarSet> enumerateViolatedClusters(const Instance& instance,
                                              const DomainState& domains) {
    const unsigned n = instance.numVars();
    if (n > 20) throw std::invalid_argument("cluster enumeration limited to 20 variables");

    std::vector<VarSet> violated;
    for (uint64_t mask = 1; mask < (uint64_t{1} << n); ++mask) {
        if (std::popcount(mask) < 2) continue;
        VarSet c;
        for (unsigned v = 0; v < n; ++v)
            if ((mask >> v) & 1) c.insert(v);
        bool allIntersect = true;
        for (VariableId v : c) {
            for (uint32_t idx : domains.live[v]) {
                if (!instance.domain(v)[idx].parents.intersects(c)) {
                    allIntersect = false;
                    break;
                }
            }
            if (!allIntersect) break;
        }
        if (allIntersect) violated.push_back(c);
    }
    return violated;
}

}  // namespace bnsl
