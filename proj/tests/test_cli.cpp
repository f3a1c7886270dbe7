#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "otg/types.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(OTG_CLI_PATH) + " " + args + " 2>&1";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    while (fgets(buf.data(), buf.size(), pipe)) {
        r.output += buf.data();
    }
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string problem(const char* name) {
    return std::string(OTG_PROBLEM_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("generate: rest-to-rest summary and exit code") {
    const RunResult r = run("generate " + problem("rest_to_rest.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("duration: 2.000000000") != std::string::npos);
    CHECK(r.output.find("limiting dof: 0") != std::string::npos);
}

TEST_CASE("generate: stationary input has zero duration") {
    const RunResult r = run("generate " + problem("stationary.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("duration: 0.000000000") != std::string::npos);
}

TEST_CASE("generate: unreachable target acceleration exits 2 naming the dof") {
    const RunResult r = run("generate " + problem("invalid_target.json"));
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("unreachable") != std::string::npos);
    CHECK(r.output.find("dof 1") != std::string::npos);
}

TEST_CASE("generate: malformed json exits 2 with diagnostics") {
    const std::string path = "cli_bad_tmp.json";
    {
        std::ofstream f(path);
        f << "{ \"degrees_of_freedom\": 1, ";
    }
    const RunResult r = run("generate " + path);
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("error") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("sample: csv structure and re-integration round trip") {
    const std::string csv = "cli_samples_tmp.csv";
    const RunResult r = run("sample " + problem("rest_to_rest.json") + " --dt 0.001 -o " + csv);
    REQUIRE(r.exit_code == 0);

    std::ifstream f(csv);
    REQUIRE(f.good());
    std::string header;
    std::getline(f, header);
    CHECK(header == "t,p0,v0,a0,j0");

    std::vector<std::array<double, 5>> rows;
    std::string line;
    while (std::getline(f, line)) {
        std::array<double, 5> row{};
        std::stringstream ss(line);
        std::string cell;
        for (int i = 0; i < 5 && std::getline(ss, cell, ','); ++i) {
            row[static_cast<std::size_t>(i)] = std::stod(cell);
        }
        rows.push_back(row);
    }
    REQUIRE(rows.size() > 100);
    CHECK(rows.front()[0] == doctest::Approx(0.0));
    CHECK(rows.back()[0] == doctest::Approx(2.0).epsilon(1e-9));  // final row exactly at T
    CHECK(rows.back()[1] == doctest::Approx(0.25).epsilon(1e-6));

    // Re-integrating the jerk column reproduces the sampled p/v/a columns.
    otg::KinematicState s{rows.front()[1], rows.front()[2], rows.front()[3]};
    double worst = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double dt = rows[i][0] - rows[i - 1][0];
        s = otg::integrate_step(s, rows[i - 1][4], dt);
        worst = std::max({worst, std::abs(s.p - rows[i][1]), std::abs(s.v - rows[i][2]),
                          std::abs(s.a - rows[i][3])});
    }
    CHECK(worst < 1e-6);
    std::remove(csv.c_str());
}

TEST_CASE("sample: waypoint chaining") {
    const std::string csv = "cli_waypoints_tmp.csv";
    const RunResult r =
        run("sample " + problem("launch_waypoints.json") + " --dt 0.001 --waypoints -o " + csv);
    REQUIRE(r.exit_code == 0);
    std::ifstream f(csv);
    std::string line;
    std::getline(f, line);
    double last_t = -1.0;
    bool monotone = true;
    std::vector<std::array<double, 5>> rows;
    while (std::getline(f, line)) {
        std::stringstream ss(line);
        std::string cell;
        std::array<double, 5> row{};
        for (int i = 0; i < 5 && std::getline(ss, cell, ','); ++i) {
            row[static_cast<std::size_t>(i)] = std::stod(cell);
        }
        if (row[0] < last_t) {
            monotone = false;
        }
        last_t = row[0];
        rows.push_back(row);
    }
    CHECK(monotone);
    // The chain ends back at the origin at rest.
    CHECK(rows.back()[1] == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(rows.back()[2] == doctest::Approx(0.0).epsilon(1e-6));
    std::remove(csv.c_str());
}

TEST_CASE("sample: unwritable output exits 4") {
    const RunResult r =
        run("sample " + problem("rest_to_rest.json") + " -o /nonexistent_dir_xyz/out.csv");
    CHECK(r.exit_code == 4);
}

TEST_CASE("fuzz: small deterministic batch") {
    const RunResult a = run("fuzz --count 2000 --seed 7 --threads 4 --corpus cli_corpus_tmp");
    CHECK(a.exit_code == 0);
    CHECK(a.output.find("failures: 0") != std::string::npos);
    const RunResult b = run("fuzz --count 2000 --seed 7 --threads 2 --corpus cli_corpus_tmp");
    CHECK(b.output == a.output);  // byte-identical report
}

TEST_CASE("bench: runs and reports a linear fit") {
    const RunResult r = run("bench --dofs 1 2 3 --count 50 --warmup 5");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("linear fit") != std::string::npos);
}
