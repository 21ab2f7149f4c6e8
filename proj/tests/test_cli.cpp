// Drives the installed CLI binary end-to-end. The binary path and the config
// directory come from the environment (set by CTest).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

std::string cli_path() {
    const char *p = std::getenv("HRRIS_CLI");
    REQUIRE(p != nullptr);
    return p;
}

std::string config_dir() {
    const char *p = std::getenv("HRRIS_CONFIG_DIR");
    REQUIRE(p != nullptr);
    return p;
}

int run(const std::string &args) {
    std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("validate: exit 0 on a good config, 1 on bad ones") {
    CHECK(run("validate --config " + config_dir() + "/smoke.conf") == 0);
    CHECK(run("validate --config " + config_dir() + "/fig2.conf") == 0);
    CHECK(run("validate --config /nonexistent.conf") == 1);

    std::ofstream bad("bad.conf");
    bad << "epsilon = -1\n";
    bad.close();
    CHECK(run("validate --config bad.conf") == 1);
    std::remove("bad.conf");
}

TEST_CASE("run: writes the CSV, exit 0, byte-identical across repeats") {
    std::string cfg = config_dir() + "/smoke.conf";
    CHECK(run("run --config " + cfg + " --out run_a.csv") == 0);
    CHECK(run("run --config " + cfg + " --out run_b.csv") == 0);

    std::string a = slurp("run_a.csv");
    std::string b = slurp("run_b.csv");
    CHECK(a == b);
    CHECK(a.rfind("n,k,trial,seed,rate_bits,pa_star_dbm,d01_nats,iterations,converged\n", 0) == 0);
    CHECK(std::count(a.begin(), a.end(), '\n') == 9); // header + 2*2*2 rows

    // serial reference path produces the same bytes
    CHECK(run("run --config " + cfg + " --out run_c.csv --threads 1") == 0);
    CHECK(slurp("run_c.csv") == a);

    // overriding trials and seed changes the grid accordingly
    CHECK(run("run --config " + cfg + " --out run_d.csv --trials 1 --seed 99") == 0);
    std::string d = slurp("run_d.csv");
    CHECK(std::count(d.begin(), d.end(), '\n') == 5);
    CHECK(d != a);

    for (const char *f : {"run_a.csv", "run_b.csv", "run_c.csv", "run_d.csv"})
        std::remove(f);
}

TEST_CASE("run: config errors exit 1, missing subcommand is rejected") {
    CHECK(run("run --config /nonexistent.conf") == 1);
    CHECK(run("") != 0);
    CHECK(run("frobnicate") != 0);
}
