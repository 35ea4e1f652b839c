#include "bnsl/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>

namespace bnsl {

Dataset readCsv(std::string_view text) {
    Dataset data;
    std::vector<std::unordered_map<std::string, uint32_t>> indices;

    size_t pos = 0;
    int lineNo = 0;
    auto nextLine = [&](std::string& line) {
        if (pos >= text.size()) return false;
        size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        line.assign(text.substr(pos, end - pos));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        pos = end + 1;
        ++lineNo;
        return true;
    };
    auto splitFields = [](const std::string& line, std::vector<std::string>& out) {
        out.clear();
        size_t start = 0;
        while (true) {
            size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                out.push_back(line.substr(start));
                break;
            }
            out.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
    };

    std::string line;
    std::vector<std::string> fields;
    if (!nextLine(line)) throw ParseError(1, "empty CSV");
    splitFields(line, fields);
    if (fields.empty() || (fields.size() == 1 && fields[0].empty()))
        throw ParseError(1, "CSV header has no columns");
    std::unordered_map<std::string, int> headerSeen;
    for (const auto& name : fields) {
        if (name.empty()) throw ParseError(1, "empty column name");
        if (!headerSeen.emplace(name, 1).second)
            throw ParseError(1, "duplicate column name: " + name);
        data.columns.push_back({name, 0, {}});
        indices.emplace_back();
    }

    while (nextLine(line)) {
        if (line.empty()) continue;
        splitFields(line, fields);
        if (fields.size() != data.columns.size())
            throw ParseError(lineNo, "row has " + std::to_string(fields.size()) +
                                         " fields, expected " +
                                         std::to_string(data.columns.size()));
        for (size_t c = 0; c < fields.size(); ++c) {
            auto [it, inserted] =
                indices[c].emplace(fields[c], static_cast<uint32_t>(indices[c].size()));
            data.columns[c].values.push_back(it->second);
        }
        ++data.sampleCount;
    }
    if (data.sampleCount == 0) throw ParseError(lineNo, "CSV has no data rows");
    for (size_t c = 0; c < data.columns.size(); ++c)
        data.columns[c].arity = static_cast<uint32_t>(indices[c].size());
    return data;
}

std::optional<double> bicLocalScore(const Dataset& data, VariableId v, const VarSet& parents) {
    // Guard the configuration table; parent sets past this are rejected.
    constexpr uint64_t kMaxCells = uint64_t{1} << 26;

    const auto& col = data.columns[v];
    uint64_t q = 1;
    for (unsigned p : parents) {
        q *= data.columns[p].arity;
        if (q > kMaxCells) return std::nullopt;
    }
    const uint64_t r = col.arity;
    if (q * r > kMaxCells) return std::nullopt;

    std::vector<uint32_t> cells(static_cast<size_t>(q * r), 0);
    std::vector<uint32_t> rows(static_cast<size_t>(q), 0);
    for (uint32_t s = 0; s < data.sampleCount; ++s) {
        uint64_t cfg = 0;
        for (unsigned p : parents) cfg = cfg * data.columns[p].arity + data.columns[p].values[s];
        ++cells[cfg * r + col.values[s]];
        ++rows[cfg];
    }

    double loglik = 0.0;
    for (uint64_t cfg = 0; cfg < q; ++cfg) {
        if (rows[cfg] == 0) continue;
        const double rowTotal = rows[cfg];
        for (uint64_t k = 0; k < r; ++k) {
            uint32_t c = cells[cfg * r + k];
            if (c > 0) loglik += c * std::log(c / rowTotal);
        }
    }
    const double penalty =
        0.5 * std::log(static_cast<double>(data.sampleCount)) * (double(r) - 1.0) * double(q);
    return loglik - penalty;
}

namespace {

void combinations(unsigned n, unsigned skip, unsigned k, VarSet current, unsigned next,
                  const std::function<void(const VarSet&)>& emit) {
    emit(current);
    if (current.count() == k) return;
    for (unsigned v = next; v < n; ++v) {
        if (v == skip) continue;
        VarSet extended = current;
        extended.insert(v);
        combinations(n, skip, k, extended, v + 1, emit);
    }
}

}  // namespace

Instance enumerateDomains(const Dataset& data, unsigned maxParents) {
    const unsigned n = data.numVars();
    std::vector<std::string> names;
    for (const auto& col : data.columns) names.push_back(col.name);

    std::vector<std::vector<ScoredValue>> domains(n);
    for (VariableId v = 0; v < n; ++v) {
        std::unordered_map<VarSet, double, VarSetHash> scores;
        combinations(n, v, maxParents, VarSet(), 0, [&](const VarSet& parents) {
            if (scores.count(parents)) return;
            if (auto s = bicLocalScore(data, v, parents)) scores.emplace(parents, *s);
        });

        // Dominance over all proper subsets, built up by cardinality:
        // bestBelow(S) = best score among proper subsets of S.
        std::vector<std::pair<VarSet, double>> byCard;
        for (const auto& [set, score] : scores) byCard.emplace_back(set, score);
        std::sort(byCard.begin(), byCard.end(), [](const auto& a, const auto& b) {
            return a.first.count() < b.first.count();
        });
        std::unordered_map<VarSet, double, VarSetHash> bestWithin;  // max over subsets incl. S
        for (const auto& [set, score] : byCard) {
            double best = score;
            bool dominated = false;
            for (unsigned p : set) {
                VarSet sub = set;
                sub.erase(p);
                auto it = bestWithin.find(sub);
                if (it != bestWithin.end()) {
                    if (it->second >= score) dominated = true;
                    best = std::max(best, it->second);
                }
            }
            bestWithin.emplace(set, best);
            if (!dominated) domains[v].push_back({set, score});
        }
    }
    return Instance::build(std::move(names), std::move(domains),
                           ScoreConvention::LogLikelihood);
}

}  // namespace bnsl
