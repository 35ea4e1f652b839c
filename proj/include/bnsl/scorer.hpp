#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bnsl/instance.hpp"

namespace bnsl {

// Discrete dataset in column-major form. Category values are dense indices
// below the column's arity. Read-only once built; safe to score from
// multiple threads.
struct Dataset {
    struct Column {
        std::string name;
        uint32_t arity = 0;
        std::vector<uint32_t> values;  // one per sample
    };
    uint32_t sampleCount = 0;
    std::vector<Column> columns;

    unsigned numVars() const { return static_cast<unsigned>(columns.size()); }
};

// CSV ingestion: first row variable names, values indexed by first
// appearance (arity = number of distinct values seen). No quoting.
Dataset readCsv(std::string_view text);

// BIC local score in maximization convention and natural logarithms:
// log-likelihood of v given the parent configuration counts, minus
// (log N / 2) * (arity(v) - 1) * prod of parent arities. Zero-count cells
// contribute nothing. Returns nullopt when the configuration table would
// overflow the guard.
std::optional<double> bicLocalScore(const Dataset& data, VariableId v, const VarSet& parents);

// Scores every parent set up to maxParents and prunes dominated ones
// (S dropped when some proper subset scores at least as well), then
// normalizes into a cost-convention Instance.
Instance enumerateDomains(const Dataset& data, unsigned maxParents);

}  // namespace bnsl
