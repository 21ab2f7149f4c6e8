#ifndef HRRIS_EXPERIMENT_HPP
#define HRRIS_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hrris/optimizer.hpp"
#include "hrris/params.hpp"

namespace hrris {

/// Monte-Carlo grid over surface size N, active-element count K and trials.
struct SweepSpec {
    std::vector<int> n_values;
    std::vector<int> k_values{0};
    int trials = 1;
    std::uint64_t base_seed = 0;
    std::string output = "sweep.csv";
    int threads = 0; // 0 = all available
};

struct SweepRow {
    int n = 0;
    int k = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    double rate_bits = 0.0;
    double pa_star_dbm = 0.0;
    double d01_nats = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct SweepFailure {
    int n = 0;
    int k = 0;
    int trial = 0;
    std::string message;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<SweepFailure> failures;
};

struct ParsedConfig {
    SystemParams params;
    SweepSpec sweep;
    AoSettings ao;
};

/// UPA factorization used for a sweep value N: rows is the largest divisor
/// of N not exceeding sqrt(N).
std::pair<int, int> upa_dims(int n);

/// Parses a key = value document (one pair per line, '#' comments). Unknown
/// keys are rejected by name, parse errors carry the line number, invariant
/// violations name the offending field.
ParsedConfig parse_config(const std::string &text);

ParsedConfig load_config(const std::string &path);

/// Runs the full grid. Rows are seeded independently from
/// (base_seed, N, K, trial), so results do not depend on execution order or
/// on which other grid points exist. Per-row failures are recorded and the
/// sweep continues. Executes rows in parallel when OpenMP is available.
SweepResult run_sweep(const SystemParams &params, const SweepSpec &spec, const AoSettings &settings);

/// Single-threaded reference implementation of the same sweep; must produce
/// results identical to run_sweep.
SweepResult run_sweep_serial(const SystemParams &params, const SweepSpec &spec,
                             const AoSettings &settings);

std::string csv_string(const SweepResult &result);

/// Writes the CSV (sorted by n, k, trial; 12 significant digits).
void emit_csv(const SweepResult &result, const std::string &path);

} // namespace hrris

#endif
