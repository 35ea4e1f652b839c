#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bnsl/instance.hpp"
#include "bnsl/oracle.hpp"
#include "bnsl/scorer.hpp"
#include "bnsl/search.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitUsage = 2;
constexpr int kExitTimeout = 3;

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void writeFile(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

std::string formatCost(double cost) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", cost);
    return buf;
}

std::string parentsLine(const bnsl::Instance& inst, const bnsl::VarSet& parents) {
    std::string s;
    for (unsigned p : parents) {
        if (!s.empty()) s += " ";
        s += inst.name(p);
    }
    return s.empty() ? "-" : s;
}

double recomputeCost(const bnsl::Instance& inst, const bnsl::Incumbent& inc) {
    double total = 0.0;
    for (bnsl::VariableId v = 0; v < inst.numVars(); ++v) {
        bool found = false;
        for (const auto& val : inst.domain(v)) {
            if (val.parents == inc.parents[v]) {
                total += val.score;
                found = true;
                break;
            }
        }
        if (!found) throw std::runtime_error("internal: incumbent value not in domain");
    }
    return total;
}

void printNetworkText(std::ostream& out, const bnsl::Instance& inst,
                      const bnsl::Incumbent& inc) {
    out << "cost: " << formatCost(inc.cost) << "\n";
    out << "network:\n";
    for (bnsl::VariableId v = 0; v < inst.numVars(); ++v)
        out << "  " << inst.name(v) << " <- " << parentsLine(inst, inc.parents[v]) << "\n";
}

void printNetworkDot(std::ostream& out, const bnsl::Instance& inst,
                     const bnsl::Incumbent& inc) {
    out << "digraph bn {\n";
    for (bnsl::VariableId v = 0; v < inst.numVars(); ++v)
        out << "  \"" << inst.name(v) << "\";\n";
    for (bnsl::VariableId v = 0; v < inst.numVars(); ++v)
        for (unsigned p : inc.parents[v])
            out << "  \"" << inst.name(p) << "\" -> \"" << inst.name(v) << "\";\n";
    out << "}\n";
}

void printNetworkCsv(std::ostream& out, const bnsl::Instance& inst,
                     const bnsl::Incumbent& inc) {
    out << "variable,parents,score\n";
    for (bnsl::VariableId v = 0; v < inst.numVars(); ++v) {
        double score = 0.0;
        for (const auto& val : inst.domain(v))
            if (val.parents == inc.parents[v]) score = val.score;
        std::string parents;
        for (unsigned p : inc.parents[v]) {
            if (!parents.empty()) parents += " ";
            parents += inst.name(p);
        }
        out << inst.name(v) << "," << parents << "," << formatCost(score) << "\n";
    }
}

void printStats(std::ostream& out, const bnsl::SearchStats& stats) {
    out << "stats:\n";
    out << "  nodes: " << stats.nodes << "\n";
    out << "  root_bound: " << formatCost(stats.rootBound) << "\n";
    out << "  clusters_generated: " << stats.clustersGenerated << "\n";
    out << "  clusters_kept: " << stats.clustersKept << "\n";
    out << "  clusters_evicted: " << stats.clustersEvicted << "\n";
    out << "  gac_pruned_values: " << stats.gacPrunedValues << "\n";
    out << "  gac_fails: " << stats.gacFails << "\n";
    out << "  cache_hits: " << stats.cacheHits << "\n";
    out << "  bound_prunes: " << stats.boundPrunes << "\n";
    out << "  support_pair_hits: " << stats.dual.supportHits << "\n";
    out << "  support_hit_rate: " << formatCost(stats.dual.supportHitRate()) << "\n";
    out << "  productive_scans: " << stats.dual.productive << "\n";
    out << "  unproductive_scans: " << stats.dual.unproductive << "\n";
    out << "  domain_visit_fraction: " << formatCost(stats.dual.domainVisitFraction()) << "\n";
    out << "timing:\n";
    out << "  wall_seconds: " << stats.wallSeconds << "\n";
}

void writeStatsJson(const std::string& path, const bnsl::SearchStats& stats,
                    const bnsl::SolveResult& result) {
    nlohmann::json j;
    j["status"] = result.status == bnsl::SolveStatus::Optimal      ? "optimal"
                  : result.status == bnsl::SolveStatus::TimedOut   ? "timeout"
                                                                   : "infeasible";
    if (result.status != bnsl::SolveStatus::Infeasible) j["cost"] = result.incumbent.cost;
    j["nodes"] = stats.nodes;
    j["root_bound"] = stats.rootBound;
    j["clusters_generated"] = stats.clustersGenerated;
    j["clusters_kept"] = stats.clustersKept;
    j["clusters_evicted"] = stats.clustersEvicted;
    j["gac_pruned_values"] = stats.gacPrunedValues;
    j["gac_fails"] = stats.gacFails;
    j["cache_hits"] = stats.cacheHits;
    j["bound_prunes"] = stats.boundPrunes;
    j["support_pair_hits"] = stats.dual.supportHits;
    j["support_hit_rate"] = stats.dual.supportHitRate();
    j["productive_scans"] = stats.dual.productive;
    j["unproductive_scans"] = stats.dual.unproductive;
    j["domain_visit_fraction"] = stats.dual.domainVisitFraction();
    j["wall_seconds"] = stats.wallSeconds;
    writeFile(path, j.dump(2) + "\n");
}

struct SolveArgs {
    std::string scoreFile;
    double timeLimit = 0.0;
    bool noGac = false;
    bool noMinimise = false;
    std::string clusterOrder = "heuristic";
    std::string convention = "cost";
    std::string outFormat = "text";
    std::string statsJsonPath;
    unsigned lbEveryK = 1;
    size_t poolMax = 1u << 20;
    uint64_t seed = 0;
};

int runSolve(const SolveArgs& args) {
    bnsl::Instance inst =
        bnsl::parseScores(readFile(args.scoreFile), args.convention == "loglik"
                                                        ? bnsl::ScoreConvention::LogLikelihood
                                                        : bnsl::ScoreConvention::Cost);
    bnsl::SolveConfig config;
    config.useGac = !args.noGac;
    config.minimiseClusters = !args.noMinimise;
    config.clusterOrder = args.clusterOrder == "chrono" ? bnsl::PoolOrder::Chronological
                                                        : bnsl::PoolOrder::Heuristic;
    config.lbEveryK = args.lbEveryK;
    config.poolMax = args.poolMax;
    config.timeLimitSec = args.timeLimit;

    bnsl::SolveResult result = bnsl::solve(inst, config);
    if (!args.statsJsonPath.empty()) writeStatsJson(args.statsJsonPath, result.stats, result);

    if (result.status == bnsl::SolveStatus::Infeasible) {
        std::cout << "status: infeasible\n";
        return kExitInfeasible;
    }
    std::cout << "status: "
              << (result.status == bnsl::SolveStatus::Optimal ? "optimal" : "timeout") << "\n";

    // Never report a cost that disagrees with the emitted network.
    double recomputed = recomputeCost(inst, result.incumbent);
    if (std::abs(recomputed - result.incumbent.cost) > inst.epsilon())
        throw std::runtime_error("internal: cost does not match emitted network");

    if (args.outFormat == "dot") {
        printNetworkDot(std::cout, inst, result.incumbent);
    } else if (args.outFormat == "csv") {
        printNetworkCsv(std::cout, inst, result.incumbent);
    } else {
        printNetworkText(std::cout, inst, result.incumbent);
    }
    if (args.outFormat == "text") printStats(std::cout, result.stats);
    return result.status == bnsl::SolveStatus::Optimal ? kExitOk : kExitTimeout;
}

int runScore(const std::string& csvPath, unsigned maxParents, const std::string& outPath) {
    bnsl::Dataset data = bnsl::readCsv(readFile(csvPath));
    bnsl::Instance inst = bnsl::enumerateDomains(data, maxParents);
    writeFile(outPath, bnsl::writeScores(inst));
    std::cout << "variables: " << inst.numVars() << "\n";
    size_t values = 0;
    for (bnsl::VariableId v = 0; v < inst.numVars(); ++v) values += inst.domain(v).size();
    std::cout << "parent_set_values: " << values << "\n";
    std::cout << "wrote: " << outPath << "\n";
    return kExitOk;
}

int runVerify(const std::string& scoreFile, const std::string& convention) {
    bnsl::Instance inst =
        bnsl::parseScores(readFile(scoreFile), convention == "loglik"
                                                   ? bnsl::ScoreConvention::LogLikelihood
                                                   : bnsl::ScoreConvention::Cost);
    if (inst.numVars() > 6) {
        std::cerr << "verify: instance has " << inst.numVars()
                  << " variables; brute-force cross-check is limited to 6\n";
        return kExitUsage;
    }
    bnsl::SolveResult result = bnsl::solve(inst);
    auto oracle = bnsl::bruteForceOptimum(inst);

    if (result.status == bnsl::SolveStatus::Infeasible || !oracle) {
        if (result.status == bnsl::SolveStatus::Infeasible && !oracle) {
            std::cout << "MATCH (both infeasible)\n";
            return kExitOk;
        }
        std::cout << "MISMATCH (solver "
                  << (result.status == bnsl::SolveStatus::Infeasible ? "infeasible"
                                                                     : "feasible")
                  << ", oracle " << (oracle ? "feasible" : "infeasible") << ")\n";
        return kExitInfeasible;
    }
    double diff = std::abs(result.incumbent.cost - oracle->cost);
    if (diff <= inst.epsilon()) {
        std::cout << "MATCH solver=" << formatCost(result.incumbent.cost)
                  << " oracle=" << formatCost(oracle->cost) << "\n";
        return kExitOk;
    }
    std::cout << "MISMATCH solver=" << formatCost(result.incumbent.cost)
              << " oracle=" << formatCost(oracle->cost) << "\n";
    return kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Bayesian network structure learning from local scores"};
    app.require_subcommand(1);

    SolveArgs solveArgs;
    auto* solveCmd = app.add_subcommand("solve", "Find a minimum-cost DAG for a score file");
    solveCmd->add_option("scorefile", solveArgs.scoreFile, "local score file")->required();
    solveCmd->add_option("--time-limit", solveArgs.timeLimit, "time limit in seconds");
    solveCmd->add_flag("--no-gac", solveArgs.noGac, "disable the GAC propagator");
    solveCmd->add_flag("--no-minimise", solveArgs.noMinimise, "disable cluster minimisation");
    solveCmd->add_option("--cluster-order", solveArgs.clusterOrder, "pool scan order")
        ->check(CLI::IsMember({"heuristic", "chrono"}));
    solveCmd->add_option("--score-convention", solveArgs.convention, "input score convention")
        ->check(CLI::IsMember({"cost", "loglik"}));
    solveCmd->add_option("--out", solveArgs.outFormat, "output format")
        ->check(CLI::IsMember({"text", "dot", "csv"}));
    solveCmd->add_option("--stats-json", solveArgs.statsJsonPath, "write statistics as JSON");
    solveCmd->add_option("--lb-every-k", solveArgs.lbEveryK,
                         "run the cluster bound every k-th depth")
        ->check(CLI::PositiveNumber);
    solveCmd->add_option("--pool-max", solveArgs.poolMax, "cluster pool size cap");
    solveCmd->add_option("--seed", solveArgs.seed,
                         "reserved; solving is deterministic, randomness only exists in "
                         "test generators");

    std::string csvPath, scoreOut;
    unsigned maxParents = 3;
    auto* scoreCmd = app.add_subcommand("score", "Compute BIC local scores from a CSV dataset");
    scoreCmd->add_option("csv", csvPath, "CSV dataset, header row = variable names")->required();
    scoreCmd->add_option("--max-parents", maxParents, "parent set cardinality cap")->required();
    scoreCmd->add_option("--out", scoreOut, "output score file")->required();

    std::string verifyFile, verifyConvention = "cost";
    auto* verifyCmd =
        app.add_subcommand("verify", "Cross-check solve against brute force (n <= 6)");
    verifyCmd->add_option("scorefile", verifyFile, "local score file")->required();
    verifyCmd->add_option("--score-convention", verifyConvention, "input score convention")
        ->check(CLI::IsMember({"cost", "loglik"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (solveCmd->parsed()) return runSolve(solveArgs);
        if (scoreCmd->parsed()) return runScore(csvPath, maxParents, scoreOut);
        if (verifyCmd->parsed()) return runVerify(verifyFile, verifyConvention);
    } catch (const bnsl::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
