#include "bnsl/acyclicity.hpp"

#include <cassert>

namespace bnsl {

namespace {

// A value is consistent with the current order if its parents within the
// scope are all already placed, i.e. it avoids the still-blocked part of
// the scope.
inline bool consistent(const ScoredValue& val, const VarSet& blocked) {
    return !val.parents.intersects(blocked);
}

}  // namespace

OrderWitness acycChecker(const Instance& instance, const DomainState& domains, VarSet scope) {
    OrderWitness result;
    result.order.reserve(scope.count());
    result.witness.reserve(scope.count());
    VarSet blocked = scope;  // scope \ placed

    auto place = [&](VariableId v, uint32_t idx) {
        result.order.push_back(v);
        result.witness.push_back(idx);
        result.placed.insert(v);
        blocked.erase(v);
    };

    while (true) {
        // Tier 1: ascending passes placing variables whose cheapest live
        // value is already consistent.
        bool tier1 = true;
        while (tier1) {
            tier1 = false;
            for (VariableId v : blocked) {
                const auto& liveIdx = domains.live[v];
                if (liveIdx.empty()) continue;
                if (consistent(instance.domain(v)[liveIdx.front()], blocked)) {
                    place(v, liveIdx.front());
                    tier1 = true;
                }
            }
        }
        // Tier 2: stalled; scan descending for any variable with some
        // consistent value, cheapest such value as witness. A single
        // placement sends control back to tier 1.
        bool placedAny = false;
        VarSet remaining = blocked;
        while (!remaining.empty() && !placedAny) {
            VariableId v = remaining.highest();
            remaining.erase(v);
            for (uint32_t idx : domains.live[v]) {
                if (consistent(instance.domain(v)[idx], blocked)) {
                    place(v, idx);
                    placedAny = true;
                    break;
                }
            }
        }
        // If tier 2 finds nothing, tier 1 cannot either: complete stall.
        if (!placedAny) break;
    }
    return result;
}

namespace detail {

// Closure of "can be ordered before v": starting from a seed prefix,
// repeatedly adds any other variable with a live value inside the prefix.
// This is a least fixpoint, so the scan direction of w does not change the
// result; the seed from the witness order only accelerates it.
VarSet prefixClosure(const Instance& instance, const DomainState& domains, VarSet all,
                     VariableId v, VarSet seed, bool descendingScan) {
    VarSet prefix = seed;
    VarSet outside = (all - prefix) - VarSet::singleton(v);
    auto hasValueInside = [&](VariableId w) {
        for (uint32_t idx : domains.live[w]) {
            if (instance.domain(w)[idx].parents.subsetOf(prefix)) return true;
        }
        return false;
    };
    bool changes = true;
    while (changes) {
        changes = false;
        if (!descendingScan) {
            for (VariableId w : outside) {
                if (hasValueInside(w)) {
                    prefix.insert(w);
                    outside.erase(w);
                    changes = true;
                }
            }
        } else {
            VarSet scan = outside;
            while (!scan.empty()) {
                VariableId w = scan.highest();
                scan.erase(w);
                if (hasValueInside(w)) {
                    prefix.insert(w);
                    outside.erase(w);
                    changes = true;
                }
            }
        }
    }
    return prefix;
}

}  // namespace detail

PropagationResult gacPropagate(const Instance& instance, const DomainState& domains) {
    const VarSet all = instance.allVars();
    PropagationResult result;

    OrderWitness base = acycChecker(instance, domains, all);
    if (!base.completeFor(all)) {
        result.failed = true;
        result.violated = all - base.placed;
        return result;
    }

    result.domains = domains;
    std::vector<uint32_t> position(instance.numVars());
    for (uint32_t i = 0; i < base.order.size(); ++i) position[base.order[i]] = i;

    VarSet seed;  // variables before v in the base order
    for (uint32_t i = 0; i < base.order.size(); ++i) {
        VariableId v = base.order[i];
        // Rebuild the seed for v's rank rather than reusing another
        // variable's closure; keeps each prefix independent.
        seed = VarSet();
        for (uint32_t j = 0; j < i; ++j) seed.insert(base.order[j]);

        VarSet prefix = detail::prefixClosure(instance, domains, all, v, seed, false);
        if ((all - prefix) == VarSet::singleton(v)) continue;  // nothing prunable

        std::vector<uint32_t> kept;
        kept.reserve(result.domains.live[v].size());
        for (uint32_t idx : result.domains.live[v]) {
            if (instance.domain(v)[idx].parents.subsetOf(prefix)) {
                kept.push_back(idx);
            } else {
                ++result.prunedValues;
            }
        }
        // The witness value of v is inside the prefix, so v keeps a value.
        assert(!kept.empty());
        result.domains.live[v] = std::move(kept);
    }
    return result;
}

PropagationResult gacProbe(const Instance& instance, const DomainState& domains) {
    const VarSet all = instance.allVars();
    PropagationResult result;

    OrderWitness base = acycChecker(instance, domains, all);
    if (!base.completeFor(all)) {
        result.failed = true;
        result.violated = all - base.placed;
        return result;
    }

    result.domains = domains;
    DomainState probe = domains;
    for (VariableId v = 0; v < instance.numVars(); ++v) {
        std::vector<uint32_t> kept;
        kept.reserve(domains.live[v].size());
        for (uint32_t idx : domains.live[v]) {
            probe.live[v].assign(1, idx);
            OrderWitness w = acycChecker(instance, probe, all);
            if (w.completeFor(all)) {
                kept.push_back(idx);
            } else {
                ++result.prunedValues;
            }
        }
        probe.live[v] = domains.live[v];
        assert(!kept.empty());
        result.domains.live[v] = std::move(kept);
    }
    return result;
}

}  // namespace bnsl
