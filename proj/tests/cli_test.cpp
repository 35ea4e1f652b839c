#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "testutil.hpp"

namespace {

std::string cli() { return BNSL_CLI_PATH; }

// All artifacts go into a scratch directory so the tests can run from any
// working directory without littering it.
std::string scratch(const std::string& name) {
    static const std::string dir = [] {
        std::filesystem::create_directories("cli_scratch");
        return std::string("cli_scratch/");
    }();
    return dir + name;
}

int run(const std::string& args, const std::string& outFile) {
    std::string cmd = cli() + " " + args + " > " + scratch(outFile) + " 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(scratch(path), std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write(const std::string& path, const std::string& content) {
    std::ofstream out(scratch(path), std::ios::binary);
    out << content;
}

std::string stripTiming(const std::string& report) {
    std::istringstream in(report);
    std::ostringstream out;
    std::string line;
    bool timing = false;
    while (std::getline(in, line)) {
        if (line == "timing:") timing = true;
        if (!timing) out << line << "\n";
    }
    return out.str();
}

}  // namespace

TEST_CASE("cli solve on the running example") {
    write("table1.scores", testutil::table1Text());
    int rc = run("solve " + scratch("table1.scores"), "out1.txt");
    CHECK(rc == 0);
    std::string out = slurp("out1.txt");
    CHECK(out.find("status: optimal") != std::string::npos);
    CHECK(out.find("cost: 10") != std::string::npos);
    CHECK(out.find("2 <- -") != std::string::npos);
    CHECK(out.find("4 <- 2 3") != std::string::npos);
}

TEST_CASE("cli ablation flags keep the cost, reports stay deterministic") {
    write("table1.scores", testutil::table1Text());
    CHECK(run("solve " + scratch("table1.scores") +
                  " --no-gac --cluster-order=chrono --no-minimise",
              "out2.txt") == 0);
    CHECK(slurp("out2.txt").find("cost: 10") != std::string::npos);

    CHECK(run("solve " + scratch("table1.scores"), "det1.txt") == 0);
    CHECK(run("solve " + scratch("table1.scores"), "det2.txt") == 0);
    CHECK(stripTiming(slurp("det1.txt")) == stripTiming(slurp("det2.txt")));
}

TEST_CASE("cli output formats") {
    write("table1.scores", testutil::table1Text());
    CHECK(run("solve " + scratch("table1.scores") + " --out dot", "dot.txt") == 0);
    std::string dot = slurp("dot.txt");
    CHECK(dot.find("digraph bn {") != std::string::npos);
    CHECK(dot.find("\"2\" -> \"0\";") != std::string::npos);

    CHECK(run("solve " + scratch("table1.scores") + " --out csv", "csv.txt") == 0);
    std::string csv = slurp("csv.txt");
    CHECK(csv.find("variable,parents,score") != std::string::npos);
    CHECK(csv.find("2,,10") != std::string::npos);

    CHECK(run("solve " + scratch("table1.scores") + " --stats-json " +
                  scratch("stats.json"),
              "j.txt") == 0);
    std::string json = slurp("stats.json");
    CHECK(json.find("\"root_bound\": 10.0") != std::string::npos);
    CHECK(json.find("\"nodes\"") != std::string::npos);
}

TEST_CASE("cli exit codes") {
    write("cycle.scores", "2\na 1\n0.0 1 b\nb 1\n0.0 1 a\n");
    CHECK(run("solve " + scratch("cycle.scores"), "inf.txt") == 1);
    CHECK(slurp("inf.txt").find("status: infeasible") != std::string::npos);

    CHECK(run("solve " + scratch("missing.scores"), "m.txt") == 2);
    write("table1.scores", testutil::table1Text());
    CHECK(run("solve " + scratch("table1.scores") + " --bogus-flag", "b.txt") == 2);
    write("bad.scores", "1\nx 1\n0.0 1 nowhere\n");
    CHECK(run("solve " + scratch("bad.scores"), "e.txt") == 2);
    CHECK(slurp("e.txt").find("line 3") != std::string::npos);
}

TEST_CASE("cli verify matches on a small instance") {
    write("table1.scores", testutil::table1Text());
    CHECK(run("verify " + scratch("table1.scores"), "v.txt") == 0);
    std::string out = slurp("v.txt");
    CHECK(out.find("MATCH") != std::string::npos);
    CHECK(out.find("solver=10") != std::string::npos);
}

TEST_CASE("cli score then solve round trip") {
    write("data.csv",
          "a,b,c\n"
          "0,0,0\n0,0,1\n0,1,1\n0,1,1\n1,1,0\n1,1,1\n1,0,0\n1,1,0\n"
          "0,0,0\n0,0,1\n1,1,1\n1,1,0\n0,1,1\n1,0,0\n0,0,0\n1,1,1\n");
    CHECK(run("score " + scratch("data.csv") + " --max-parents 2 --out " +
                  scratch("scored.scores"),
              "s.txt") == 0);
    CHECK(run("solve " + scratch("scored.scores"), "s2.txt") == 0);
    CHECK(slurp("s2.txt").find("status: optimal") != std::string::npos);
}
