#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bnsl/bitset.hpp"

namespace bnsl {

using VariableId = uint32_t;

// A candidate parent set together with its cost. Costs are minimization
// costs: non-negative, with every variable having at least one value of
// cost 0 after normalization.
struct ScoredValue {
    VarSet parents;
    double score = 0.0;
};

enum class ScoreConvention {
    Cost,           // file scores are non-negative costs, taken as-is
    LogLikelihood,  // larger is better; normalized to best(v) - score
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Immutable problem instance: per-variable candidate parent sets sorted by
// ascending cost (ties broken by numeric bitset order). Safe to share
// across threads once built.
class Instance {
public:
    // Takes raw (possibly unsorted, maximization- or cost-convention)
    // domains, normalizes and sorts them. Throws ParseError on invariant
    // violations (empty domain, duplicate set, self-parent, out-of-range
    // parent, non-finite or negative cost).
    static Instance build(std::vector<std::string> names,
                          std::vector<std::vector<ScoredValue>> domains,
                          ScoreConvention convention);

    unsigned numVars() const { return static_cast<unsigned>(domains_.size()); }
    const std::string& name(VariableId v) const { return names_[v]; }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<ScoredValue>& domain(VariableId v) const { return domains_[v]; }
    VarSet allVars() const { return VarSet::firstN(numVars()); }

    double maxScore() const { return maxScore_; }
    // Zero tolerance for reduced costs and bound comparisons, scaled to
    // the instance's magnitude.
    double epsilon() const { return epsilon_; }
    // True if every variable has the empty parent set available; instances
    // without it may still be satisfiable and are decided by the checker.
    bool everyVarHasEmptyValue() const { return everyVarHasEmptyValue_; }

    bool operator==(const Instance& o) const;

private:
    std::vector<std::string> names_;
    std::vector<std::vector<ScoredValue>> domains_;
    double maxScore_ = 0.0;
    double epsilon_ = 1e-9;
    bool everyVarHasEmptyValue_ = true;
};

// Parses the whitespace-separated score file format:
//   n
//   <name> <k>          (n blocks)
//   <score> <p> <parent_1> ... <parent_p>   (k lines per block)
Instance parseScores(std::string_view text, ScoreConvention convention);

// Serializes in the same format, cost convention, full double precision.
// parseScores(writeScores(i), Cost) == i.
std::string writeScores(const Instance& instance);

// Per-variable live subsets of domain indices. Indices are kept sorted
// ascending, which is also ascending score order. Value-semantics
// snapshot: search copies it per node.
struct DomainState {
    std::vector<std::vector<uint32_t>> live;
    std::vector<uint8_t> assignedFlag;

    static DomainState full(const Instance& instance);

    bool assigned(VariableId v) const { return assignedFlag[v] != 0; }
    bool wipedOut(VariableId v) const { return live[v].empty(); }
    size_t liveCount(VariableId v) const { return live[v].size(); }
    bool operator==(const DomainState& o) const {
        return live == o.live && assignedFlag == o.assignedFlag;
    }
};

// Keeps only live values of v matching the predicate. Returns nullopt on
// domain wipeout (caller must treat it as a dead end).
template <class Pred>
std::optional<DomainState> restrictDomain(const Instance& instance, const DomainState& state,
                                          VariableId v, Pred&& keep) {
    DomainState out = state;
    std::vector<uint32_t> kept;
    kept.reserve(state.live[v].size());
    for (uint32_t idx : state.live[v]) {
        if (keep(instance.domain(v)[idx])) kept.push_back(idx);
    }
    if (kept.empty()) return std::nullopt;
    out.live[v] = std::move(kept);
    return out;
}

}  // namespace bnsl
