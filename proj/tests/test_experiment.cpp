#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "hrris/errors.hpp"
#include "hrris/experiment.hpp"
#include "hrris/units.hpp"

using namespace hrris;

namespace {

const char *const kBaselineConfig = R"(# paper-scene baseline
epsilon     = 0.01
l           = 100
pa_max_dbm  = -10
pr_max_dbm  = -30
noise_dbm   = -80

alice_pos   = 0 0
ris_pos     = 51 0
bob_pos     = 50 2
willie_pos  = 30 5

alpha_ar    = 2.2
alpha_rb    = 2.8
alpha_ab    = 4.2
alpha_aw    = 4.2
alpha_rw    = 2.8

n_values    = 16
k_values    = 0 2
trials      = 2
base_seed   = 42
)";

std::string with_line(const std::string &base, const std::string &extra) { return base + extra + "\n"; }

} // namespace

TEST_CASE("parse_config accepts the baseline document") {
    ParsedConfig cfg = parse_config(kBaselineConfig);
    CHECK(cfg.params.epsilon == 0.01);
    CHECK(cfg.params.l == 100);
    CHECK(cfg.params.pa_max_w == doctest::Approx(dbm_to_watt(-10.0)).epsilon(1e-15));
    CHECK(cfg.params.pr_max_w == doctest::Approx(1e-6).epsilon(1e-12));
    CHECK(cfg.params.noise_dbm == -80.0);
    CHECK(cfg.params.geometry.ris_pos.x() == 51.0);
    CHECK(cfg.params.geometry.willie_pos.y() == 5.0);
    CHECK(cfg.params.geometry.exponent(Link::ab) == 4.2);
    CHECK(cfg.params.geometry.chi0_db == -30.0);          // default
    CHECK(cfg.params.arrays.n_alice == 4);                // default
    CHECK(cfg.params.arrays.element_spacing == 0.5);      // default
    CHECK(cfg.params.fading.k_db(Link::rw) == 3.0);       // default
    CHECK(cfg.params.active_placement == ActivePlacement::first);
    CHECK(cfg.sweep.n_values == std::vector<int>{16});
    CHECK(cfg.sweep.k_values == std::vector<int>{0, 2});
    CHECK(cfg.sweep.trials == 2);
    CHECK(cfg.sweep.base_seed == 42);
    CHECK(cfg.sweep.output == "sweep.csv"); // default
    CHECK(cfg.ao.max_outer_iters == 50);    // default
    CHECK(cfg.ao.rel_tol == 1e-6);          // default
}

TEST_CASE("parse_config rejects invalid documents with named fields") {
    // an active_count exceeding every swept N
    std::string too_many = kBaselineConfig;
    too_many += "active_count = 20\n";
    CHECK_THROWS_WITH_AS(parse_config(too_many),
                         doctest::Contains("active_count"), config_error);

    // empty document lists the required keys
    try {
        parse_config("");
        FAIL("expected config_error");
    } catch (const config_error &e) {
        std::string msg = e.what();
        CHECK(msg.find("missing required keys") != std::string::npos);
        CHECK(msg.find("epsilon") != std::string::npos);
        CHECK(msg.find("base_seed") != std::string::npos);
        CHECK(msg.find("alpha_rw") != std::string::npos);
    }

    // unknown keys are rejected by name
    CHECK_THROWS_WITH_AS(parse_config(with_line(kBaselineConfig, "warden_speed = 3")),
                         doctest::Contains("warden_speed"), config_error);

    // malformed numbers carry the line number
    try {
        parse_config(with_line(kBaselineConfig, "rel_tol = fast"));
        FAIL("expected config_error");
    } catch (const config_error &e) {
        std::string msg = e.what();
        CHECK(msg.find("rel_tol") != std::string::npos);
        CHECK(msg.find("line") != std::string::npos);
    }

    CHECK_THROWS_WITH_AS(parse_config(with_line(kBaselineConfig, "epsilon = 0.02")),
                         doctest::Contains("duplicate"), config_error);
    CHECK_THROWS_WITH_AS(parse_config(with_line(kBaselineConfig, "k_values = 0 17")),
                         doctest::Contains("k_values"), config_error);
    CHECK_THROWS_WITH_AS(parse_config(with_line(kBaselineConfig, "noise_w_dbm = -70")),
                         doctest::Contains("allow_unequal_noise"), config_error);
}

TEST_CASE("upa factorization picks the squarest shape") {
    CHECK(upa_dims(1) == std::pair<int, int>{1, 1});
    CHECK(upa_dims(7) == std::pair<int, int>{1, 7});
    CHECK(upa_dims(16) == std::pair<int, int>{4, 4});
    CHECK(upa_dims(50) == std::pair<int, int>{5, 10});
    CHECK(upa_dims(100) == std::pair<int, int>{10, 10});
    CHECK(upa_dims(150) == std::pair<int, int>{10, 15});
}

TEST_CASE("run_sweep produces one row per grid point and is deterministic") {
    ParsedConfig cfg = parse_config(kBaselineConfig);
    cfg.sweep.n_values = {4};
    cfg.sweep.k_values = {0};
    cfg.sweep.trials = 1;

    SweepResult one = run_sweep(cfg.params, cfg.sweep, cfg.ao);
    REQUIRE(one.rows.size() == 1);
    CHECK(one.failures.empty());
    CHECK(one.rows[0].n == 4);
    CHECK(one.rows[0].k == 0);
    CHECK(one.rows[0].trial == 0);
    CHECK(one.rows[0].rate_bits > 0.0);

    cfg.sweep.n_values = {4, 6};
    cfg.sweep.k_values = {0, 1};
    cfg.sweep.trials = 2;
    SweepResult a = run_sweep(cfg.params, cfg.sweep, cfg.ao);
    SweepResult b = run_sweep(cfg.params, cfg.sweep, cfg.ao);
    CHECK(a.rows.size() == 8);
    CHECK(csv_string(a) == csv_string(b));

    SweepResult serial = run_sweep_serial(cfg.params, cfg.sweep, cfg.ao);
    CHECK(csv_string(a) == csv_string(serial));
}

TEST_CASE("rows do not depend on which other grid points exist") {
    ParsedConfig cfg = parse_config(kBaselineConfig);
    cfg.sweep.n_values = {4, 6};
    cfg.sweep.k_values = {0, 1};
    cfg.sweep.trials = 2;
    SweepResult full = run_sweep_serial(cfg.params, cfg.sweep, cfg.ao);

    cfg.sweep.n_values = {6};
    cfg.sweep.k_values = {1};
    SweepResult solo = run_sweep_serial(cfg.params, cfg.sweep, cfg.ao);
    REQUIRE(solo.rows.size() == 2);

    for (const SweepRow &r : solo.rows) {
        bool found = false;
        for (const SweepRow &f : full.rows)
            if (f.n == r.n && f.k == r.k && f.trial == r.trial) {
                found = true;
                CHECK(f.seed == r.seed);
                CHECK(f.rate_bits == r.rate_bits);
                CHECK(f.pa_star_dbm == r.pa_star_dbm);
                CHECK(f.d01_nats == r.d01_nats);
            }
        CHECK(found);
    }
}

TEST_CASE("per-row failures are recorded while the sweep continues") {
    ParsedConfig cfg = parse_config(kBaselineConfig);
    cfg.sweep.n_values = {4};
    cfg.sweep.k_values = {0, 9}; // K = 9 > N = 4 must fail row-wise
    cfg.sweep.trials = 1;
    SweepResult res = run_sweep_serial(cfg.params, cfg.sweep, cfg.ao);
    CHECK(res.rows.size() == 1);
    REQUIRE(res.failures.size() == 1);
    CHECK(res.failures[0].k == 9);
    CHECK(!res.failures[0].message.empty());
}

TEST_CASE("emitted rows satisfy the covertness bound when converged") {
    ParsedConfig cfg = parse_config(kBaselineConfig);
    cfg.sweep.n_values = {6};
    cfg.sweep.k_values = {0, 2};
    cfg.sweep.trials = 3;
    SweepResult res = run_sweep(cfg.params, cfg.sweep, cfg.ao);
    double cap = 2.0 * cfg.params.epsilon * cfg.params.epsilon * (1.0 + 1e-6);
    for (const SweepRow &r : res.rows)
        if (r.converged)
            CHECK(r.d01_nats <= cap);
}

TEST_CASE("csv output format and round-trip") {
    SweepResult empty;
    CHECK(csv_string(empty) == "n,k,trial,seed,rate_bits,pa_star_dbm,d01_nats,iterations,converged\n");

    SweepResult one;
    one.rows.push_back({8, 2, 0, 1234567890123456789ULL, 1.23456789012345, -12.3456789012345,
                        1.9999999e-4, 7, true});
    std::string csv = csv_string(one);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);

    // parse back and re-format: values survive at printed precision
    std::istringstream in(csv);
    std::string header, line;
    std::getline(in, header);
    std::getline(in, line);
    std::vector<std::string> fields;
    std::string tok;
    std::istringstream ls(line);
    while (std::getline(ls, tok, ','))
        fields.push_back(tok);
    REQUIRE(fields.size() == 9);
    CHECK(std::stoi(fields[0]) == 8);
    CHECK(std::stoull(fields[3]) == 1234567890123456789ULL);
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", std::strtod(fields[4].c_str(), nullptr));
    CHECK(fields[4] == buf);
    std::snprintf(buf, sizeof buf, "%.12g", std::strtod(fields[6].c_str(), nullptr));
    CHECK(fields[6] == buf);

    // rows come out sorted by (n, k, trial) regardless of insertion order
    SweepResult shuffled;
    shuffled.rows.push_back({8, 0, 1, 2, 0.5, -20.0, 1e-5, 3, true});
    shuffled.rows.push_back({4, 1, 0, 1, 0.25, -20.0, 1e-5, 3, true});
    shuffled.rows.push_back({4, 0, 0, 0, 0.125, -20.0, 1e-5, 3, true});
    std::string sorted = csv_string(shuffled);
    CHECK(sorted.find("4,0,0") < sorted.find("4,1,0"));
    CHECK(sorted.find("4,1,0") < sorted.find("8,0,1"));
}

TEST_CASE("emit_csv writes the file and surfaces IO errors") {
    SweepResult one;
    one.rows.push_back({4, 0, 0, 99, 0.75, -15.0, 2e-4, 5, true});
    std::string path = "test_emit.csv";
    emit_csv(one, path);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "n,k,trial,seed,rate_bits,pa_star_dbm,d01_nats,iterations,converged");
    in.close();
    std::remove(path.c_str());

    CHECK_THROWS_AS(emit_csv(one, "no_such_dir/out.csv"), std::runtime_error);
}
