#include "bnsl/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace bnsl {

namespace {

bool scoredValueLess(const ScoredValue& a, const ScoredValue& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.parents.numericLess(b.parents);
}

}  // namespace

Instance Instance::build(std::vector<std::string> names,
                         std::vector<std::vector<ScoredValue>> domains,
                         ScoreConvention convention) {
    if (names.size() != domains.size())
        throw ParseError(0, "name/domain count mismatch");
    const unsigned n = static_cast<unsigned>(domains.size());
    if (n == 0) throw ParseError(0, "instance has no variables");
    if (n > VarSet::kCapacity)
        throw ParseError(0, "instance has " + std::to_string(n) +
                                " variables; this build supports up to " +
                                std::to_string(VarSet::kCapacity) +
                                " (rebuild with a larger BNSL_SET_WORDS)");

    Instance inst;
    const VarSet all = VarSet::firstN(n);
    for (unsigned v = 0; v < n; ++v) {
        auto& dom = domains[v];
        if (dom.empty())
            throw ParseError(0, "variable " + names[v] + " has an empty domain");
        std::unordered_set<VarSet, VarSetHash> seen;
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& val : dom) {
            if (!std::isfinite(val.score))
                throw ParseError(0, "non-finite score for variable " + names[v]);
            if (val.parents.contains(v))
                throw ParseError(0, "variable " + names[v] + " listed as its own parent");
            if (!val.parents.subsetOf(all))
                throw ParseError(0, "parent out of range for variable " + names[v]);
            if (!seen.insert(val.parents).second)
                throw ParseError(0, "duplicate parent set for variable " + names[v]);
            best = std::max(best, val.score);
        }
        if (convention == ScoreConvention::LogLikelihood) {
            for (auto& val : dom) val.score = best - val.score;
        } else {
            for (const auto& val : dom)
                if (val.score < 0.0)
                    throw ParseError(0, "negative cost for variable " + names[v] +
                                            " (use the log-likelihood convention?)");
        }
        std::sort(dom.begin(), dom.end(), scoredValueLess);
    }

    bool allEmptyValue = true;
    double maxScore = 0.0;
    for (unsigned v = 0; v < n; ++v) {
        bool hasEmpty = false;
        for (const auto& val : domains[v]) {
            maxScore = std::max(maxScore, val.score);
            hasEmpty = hasEmpty || val.parents.empty();
        }
        allEmptyValue = allEmptyValue && hasEmpty;
    }

    inst.names_ = std::move(names);
    inst.domains_ = std::move(domains);
    inst.maxScore_ = maxScore;
    inst.epsilon_ = 1e-9 * std::max(1.0, maxScore);
    inst.everyVarHasEmptyValue_ = allEmptyValue;
    return inst;
}

bool Instance::operator==(const Instance& o) const {
    if (names_ != o.names_ || domains_.size() != o.domains_.size()) return false;
    for (size_t v = 0; v < domains_.size(); ++v) {
        if (domains_[v].size() != o.domains_[v].size()) return false;
        for (size_t i = 0; i < domains_[v].size(); ++i) {
            if (domains_[v][i].parents != o.domains_[v][i].parents) return false;
            if (domains_[v][i].score != o.domains_[v][i].score) return false;
        }
    }
    return true;
}

namespace {

// Line-oriented tokenizer that remembers line numbers for error messages.
class TokenReader {
public:
    explicit TokenReader(std::string_view text) :
        text_(text) {}

    bool next(std::string& out) {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
        if (pos_ >= text_.size()) return false;
        size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        out.assign(text_.substr(start, pos_ - start));
        return true;
    }

    int line() const { return line_; }

private:
    std::string_view text_;
    size_t pos_ = 0;
    int line_ = 1;
};

long parseCount(TokenReader& reader, const char* what) {
    std::string tok;
    if (!reader.next(tok)) throw ParseError(reader.line(), std::string("expected ") + what);
    try {
        size_t used = 0;
        long value = std::stol(tok, &used);
        if (used != tok.size() || value < 0) throw std::invalid_argument(tok);
        return value;
    } catch (const std::exception&) {
        throw ParseError(reader.line(), std::string("invalid ") + what + ": '" + tok + "'");
    }
}

double parseScore(TokenReader& reader) {
    std::string tok;
    if (!reader.next(tok)) throw ParseError(reader.line(), "expected score");
    try {
        size_t used = 0;
        double value = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return value;
    } catch (const std::exception&) {
        throw ParseError(reader.line(), "invalid score: '" + tok + "'");
    }
}

}  // namespace

Instance parseScores(std::string_view text, ScoreConvention convention) {
    TokenReader reader(text);
    long n = parseCount(reader, "variable count");
    if (n == 0) throw ParseError(reader.line(), "variable count must be positive");

    std::vector<std::string> names;
    // Parent references may be forward, so names are resolved after all
    // blocks are read.
    std::vector<std::vector<std::pair<double, std::vector<std::string>>>> rawDomains;
    std::vector<std::vector<int>> valueLines;
    names.reserve(n);

    for (long v = 0; v < n; ++v) {
        std::string name;
        if (!reader.next(name))
            throw ParseError(reader.line(), "expected variable name");
        long k = parseCount(reader, "value count");
        if (k == 0)
            throw ParseError(reader.line(), "variable " + name + " has no values");
        names.push_back(name);
        rawDomains.emplace_back();
        valueLines.emplace_back();
        for (long i = 0; i < k; ++i) {
            double score = parseScore(reader);
            int line = reader.line();
            long p = parseCount(reader, "parent count");
            std::vector<std::string> parents;
            parents.reserve(p);
            for (long j = 0; j < p; ++j) {
                std::string parent;
                if (!reader.next(parent))
                    throw ParseError(reader.line(), "expected parent name");
                parents.push_back(std::move(parent));
            }
            rawDomains.back().emplace_back(score, std::move(parents));
            valueLines.back().push_back(line);
        }
    }
    std::string extra;
    if (reader.next(extra))
        throw ParseError(reader.line(), "trailing content: '" + extra + "'");

    std::unordered_map<std::string, VariableId> idOf;
    for (size_t v = 0; v < names.size(); ++v) {
        if (!idOf.emplace(names[v], static_cast<VariableId>(v)).second)
            throw ParseError(0, "duplicate variable name: " + names[v]);
    }

    std::vector<std::vector<ScoredValue>> domains(names.size());
    for (size_t v = 0; v < names.size(); ++v) {
        for (size_t i = 0; i < rawDomains[v].size(); ++i) {
            const auto& [score, parentNames] = rawDomains[v][i];
            ScoredValue val;
            val.score = score;
            for (const auto& pname : parentNames) {
                auto it = idOf.find(pname);
                if (it == idOf.end())
                    throw ParseError(valueLines[v][i], "unknown parent '" + pname +
                                                           "' of variable " + names[v]);
                if (it->second == v)
                    throw ParseError(valueLines[v][i],
                                     "variable " + names[v] + " listed as its own parent");
                if (val.parents.contains(it->second))
                    throw ParseError(valueLines[v][i], "repeated parent '" + pname +
                                                           "' of variable " + names[v]);
                val.parents.insert(it->second);
            }
            domains[v].push_back(val);
        }
        // Report duplicates with a line number here; Instance::build would
        // only see the variable name.
        std::unordered_set<VarSet, VarSetHash> seen;
        for (size_t i = 0; i < domains[v].size(); ++i) {
            if (!seen.insert(domains[v][i].parents).second)
                throw ParseError(valueLines[v][i],
                                 "duplicate parent set for variable " + names[v]);
        }
    }

    return Instance::build(std::move(names), std::move(domains), convention);
}

std::string writeScores(const Instance& instance) {
    std::ostringstream out;
    out << instance.numVars() << "\n";
    char buf[64];
    for (VariableId v = 0; v < instance.numVars(); ++v) {
        const auto& dom = instance.domain(v);
        out << instance.name(v) << " " << dom.size() << "\n";
        for (const auto& val : dom) {
            std::snprintf(buf, sizeof buf, "%.17g", val.score);
            out << buf << " " << val.parents.count();
            for (unsigned p : val.parents) out << " " << instance.name(p);
            out << "\n";
        }
    }
    return out.str();
}

DomainState DomainState::full(const Instance& instance) {
    DomainState state;
    state.live.resize(instance.numVars());
    state.assignedFlag.assign(instance.numVars(), 0);
    for (VariableId v = 0; v < instance.numVars(); ++v) {
        state.live[v].resize(instance.domain(v).size());
        for (uint32_t i = 0; i < state.live[v].size(); ++i) state.live[v][i] = i;
    }
    return state;
}

}  // namespace bnsl
