#include "hrris/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hrris/errors.hpp"
#include "hrris/rng.hpp"
#include "hrris/units.hpp"

namespace hrris {

namespace {

struct ConfigEntry {
    std::string value;
    int line = 0;
    bool used = false;
};

std::string trim(const std::string &s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    return s.substr(b, e - b + 1);
}

class ConfigReader {
  public:
    explicit ConfigReader(const std::string &text) {
        std::istringstream in(text);
        std::string raw;
        int lineno = 0;
        while (std::getline(in, raw)) {
            ++lineno;
            auto hash = raw.find('#');
            if (hash != std::string::npos)
                raw.erase(hash);
            std::string line = trim(raw);
            if (line.empty())
                continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw config_error("line " + std::to_string(lineno) + ": expected 'key = value'");
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (key.empty())
                throw config_error("line " + std::to_string(lineno) + ": empty key");
            if (entries_.count(key))
                throw config_error("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
            entries_[key] = ConfigEntry{value, lineno, false};
        }
    }

    bool has(const std::string &key) const { return entries_.count(key) != 0; }

    double number(const std::string &key) {
        const ConfigEntry &e = take(key);
        return parse_number(e.value, key, e.line);
    }

    double number_or(const std::string &key, double fallback) {
        return has(key) ? number(key) : fallback;
    }

    long long integer(const std::string &key) {
        const ConfigEntry &e = take(key);
        double v = parse_number(e.value, key, e.line);
        long long i = static_cast<long long>(std::llround(v));
        if (static_cast<double>(i) != v)
            throw config_error("line " + std::to_string(e.line) + ": '" + key +
                               "' must be an integer");
        return i;
    }

    long long integer_or(const std::string &key, long long fallback) {
        return has(key) ? integer(key) : fallback;
    }

    std::uint64_t unsigned64(const std::string &key) {
        const ConfigEntry &e = take(key);
        try {
            size_t pos = 0;
            std::uint64_t v = std::stoull(e.value, &pos);
            if (pos != e.value.size())
                throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception &) {
            throw config_error("line " + std::to_string(e.line) + ": '" + key +
                               "' must be an unsigned integer");
        }
    }

    bool boolean_or(const std::string &key, bool fallback) {
        if (!has(key))
            return fallback;
        const ConfigEntry &e = take(key);
        if (e.value == "true" || e.value == "1")
            return true;
        if (e.value == "false" || e.value == "0")
            return false;
        throw config_error("line " + std::to_string(e.line) + ": '" + key + "' must be true or false");
    }

    std::string text_or(const std::string &key, const std::string &fallback) {
        if (!has(key))
            return fallback;
        return take(key).value;
    }

    Eigen::Vector2d position(const std::string &key) {
        const ConfigEntry &e = take(key);
        std::vector<double> xs = parse_list(e.value, key, e.line);
        if (xs.size() != 2)
            throw config_error("line " + std::to_string(e.line) + ": '" + key +
                               "' must be two numbers (x y)");
        return {xs[0], xs[1]};
    }

    std::vector<int> int_list(const std::string &key) {
        const ConfigEntry &e = take(key);
        std::vector<double> xs = parse_list(e.value, key, e.line);
        std::vector<int> out;
        for (double v : xs) {
            int i = static_cast<int>(std::llround(v));
            if (static_cast<double>(i) != v)
                throw config_error("line " + std::to_string(e.line) + ": '" + key +
                                   "' must contain integers");
            out.push_back(i);
        }
        if (out.empty())
            throw config_error("line " + std::to_string(e.line) + ": '" + key + "' must be non-empty");
        return out;
    }

    int line_of(const std::string &key) const { return entries_.at(key).line; }

    void reject_unknown() const {
        for (const auto &[key, e] : entries_)
            if (!e.used)
                throw config_error("line " + std::to_string(e.line) + ": unknown key '" + key + "'");
    }

  private:
    const ConfigEntry &take(const std::string &key) {
        auto it = entries_.find(key);
        if (it == entries_.end())
            throw config_error("missing key '" + key + "'");
        it->second.used = true;
        return it->second;
    }

    static double parse_number(const std::string &v, const std::string &key, int line) {
        try {
            size_t pos = 0;
            double x = std::stod(v, &pos);
            if (pos != v.size())
                throw std::invalid_argument("trailing characters");
            return x;
        } catch (const std::exception &) {
            throw config_error("line " + std::to_string(line) + ": expected number for '" + key + "'");
        }
    }

    static std::vector<double> parse_list(const std::string &v, const std::string &key, int line) {
        std::istringstream in(v);
        std::vector<double> out;
        std::string tok;
        while (in >> tok)
            out.push_back(parse_number(tok, key, line));
        return out;
    }

    std::map<std::string, ConfigEntry> entries_;
};

const char *const kRequiredKeys[] = {"epsilon",    "l",        "pa_max_dbm", "pr_max_dbm",
                                     "noise_dbm",  "alice_pos", "ris_pos",    "bob_pos",
                                     "willie_pos", "alpha_ar",  "alpha_rb",   "alpha_ab",
                                     "alpha_aw",   "alpha_rw",  "n_values",   "trials",
                                     "base_seed"};

void require_positive(double v, const std::string &key) {
    if (!(v > 0.0))
        throw config_error("'" + key + "' must be > 0");
}

struct GridPoint {
    int n = 0;
    int k = 0;
    int trial = 0;
};

SweepRow execute_point(const GridPoint &pt, const SystemParams &base, const SweepSpec &spec,
                       const AoSettings &base_settings) {
    SystemParams p = base;
    auto [rows, cols] = upa_dims(pt.n);
    p.arrays.ris_rows = rows;
    p.arrays.ris_cols = cols;
    p.active_count = pt.k;
    p.fading.seed = derive_seed(spec.base_seed, {static_cast<std::uint64_t>(pt.n),
                                                 static_cast<std::uint64_t>(pt.k),
                                                 static_cast<std::uint64_t>(pt.trial), 0});
    validate_system_params(p);

    ChannelSet channels = build_channel_set(p.geometry, p.arrays, p.fading, p.noise_dbm);
    if (!std::isnan(p.noise_r_dbm))
        channels.sigma_r_sq = dbm_to_watt(p.noise_r_dbm);
    if (!std::isnan(p.noise_w_dbm))
        channels.sigma_w_sq = dbm_to_watt(p.noise_w_dbm);
    validate_channel_set(channels, p.allow_unequal_noise);

    AoSettings settings = base_settings;
    settings.init_seed = derive_seed(spec.base_seed, {static_cast<std::uint64_t>(pt.n),
                                                      static_cast<std::uint64_t>(pt.k),
                                                      static_cast<std::uint64_t>(pt.trial), 1});
    OptimizationResult res = optimize(channels, p, settings);

    SweepRow row;
    row.n = pt.n;
    row.k = pt.k;
    row.trial = pt.trial;
    row.seed = p.fading.seed;
    row.rate_bits = res.rate_bits;
    row.pa_star_dbm = watt_to_dbm(res.pa_star);
    row.d01_nats = res.d01_nats;
    row.iterations = res.iterations;
    row.converged = res.converged;
    return row;
}

SweepResult run_sweep_impl(const SystemParams &params, const SweepSpec &spec,
                           const AoSettings &settings, bool parallel) {
    if (spec.n_values.empty() || spec.k_values.empty())
        throw std::invalid_argument("run_sweep: n_values and k_values must be non-empty");
    if (spec.trials < 1)
        throw std::invalid_argument("run_sweep: trials must be >= 1");

    std::vector<GridPoint> grid;
    grid.reserve(spec.n_values.size() * spec.k_values.size() * spec.trials);
    for (int n : spec.n_values)
        for (int k : spec.k_values)
            for (int t = 0; t < spec.trials; ++t)
                grid.push_back({n, k, t});

    std::vector<SweepRow> rows(grid.size());
    std::vector<std::string> errors(grid.size());
    std::vector<char> failed(grid.size(), 0);

    int total = static_cast<int>(grid.size());
#ifdef _OPENMP
    int nthreads = spec.threads > 0 ? spec.threads : omp_get_max_threads();
#else
    int nthreads = 1;
    (void)parallel;
#endif

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(nthreads) if (parallel && nthreads > 1)
#endif
    for (int i = 0; i < total; ++i) {
        try {
            rows[i] = execute_point(grid[i], params, spec, settings);
        } catch (const std::exception &e) {
            failed[i] = 1;
            errors[i] = e.what();
        }
    }

    SweepResult result;
    for (int i = 0; i < total; ++i) {
        if (failed[i])
            result.failures.push_back({grid[i].n, grid[i].k, grid[i].trial, errors[i]});
        else
            result.rows.push_back(rows[i]);
    }
    return result;
}

std::string fmt12(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

std::pair<int, int> upa_dims(int n) {
    if (n < 1)
        throw std::invalid_argument("upa_dims: n must be >= 1");
    int rows = 1;
    for (int r = static_cast<int>(std::sqrt(static_cast<double>(n))); r >= 1; --r)
        if (n % r == 0) {
            rows = r;
            break;
        }
    return {rows, n / rows};
}

ParsedConfig parse_config(const std::string &text) {
    ConfigReader reader(text);

    std::string missing;
    for (const char *key : kRequiredKeys)
        if (!reader.has(key)) {
            if (!missing.empty())
                missing += ", ";
            missing += key;
        }
    if (!missing.empty())
        throw config_error("missing required keys: " + missing);

    ParsedConfig cfg;
    SystemParams &p = cfg.params;

    p.epsilon = reader.number("epsilon");
    require_positive(p.epsilon, "epsilon");
    p.l = static_cast<int>(reader.integer("l"));
    if (p.l < 1)
        throw config_error("'l' must be >= 1");
    p.pa_max_w = dbm_to_watt(reader.number("pa_max_dbm"));
    p.pr_max_w = dbm_to_watt(reader.number("pr_max_dbm"));
    p.noise_dbm = reader.number("noise_dbm");
    p.noise_r_dbm = reader.number_or("noise_r_dbm", std::nan(""));
    p.noise_w_dbm = reader.number_or("noise_w_dbm", std::nan(""));
    p.allow_unequal_noise = reader.boolean_or("allow_unequal_noise", false);

    p.geometry.alice_pos = reader.position("alice_pos");
    p.geometry.ris_pos = reader.position("ris_pos");
    p.geometry.bob_pos = reader.position("bob_pos");
    p.geometry.willie_pos = reader.position("willie_pos");
    const std::pair<const char *, Link> alpha_keys[] = {{"alpha_ar", Link::ar},
                                                        {"alpha_rb", Link::rb},
                                                        {"alpha_ab", Link::ab},
                                                        {"alpha_aw", Link::aw},
                                                        {"alpha_rw", Link::rw}};
    for (auto [key, link] : alpha_keys) {
        double alpha = reader.number(key);
        require_positive(alpha, key);
        p.geometry.pathloss_exponents[link] = alpha;
    }
    p.geometry.chi0_db = reader.number_or("chi0_db", -30.0);

    p.arrays.n_alice = static_cast<int>(reader.integer_or("n_alice", 4));
    p.arrays.n_bob = static_cast<int>(reader.integer_or("n_bob", 4));
    p.arrays.n_willie = static_cast<int>(reader.integer_or("n_willie", 4));
    if (p.arrays.n_alice < 1 || p.arrays.n_bob < 1 || p.arrays.n_willie < 1)
        throw config_error("antenna counts must be >= 1");
    p.arrays.element_spacing = reader.number_or("element_spacing", 0.5);
    require_positive(p.arrays.element_spacing, "element_spacing");

    double k_all = reader.number_or("rician_k_db", 3.0);
    for (Link l : {Link::ar, Link::ab, Link::rb, Link::aw, Link::rw})
        p.fading.rician_k_db[l] = k_all;
    const std::pair<const char *, Link> k_keys[] = {{"rician_k_db_ar", Link::ar},
                                                    {"rician_k_db_ab", Link::ab},
                                                    {"rician_k_db_rb", Link::rb},
                                                    {"rician_k_db_aw", Link::aw},
                                                    {"rician_k_db_rw", Link::rw}};
    for (auto [key, link] : k_keys)
        if (reader.has(key))
            p.fading.rician_k_db[link] = reader.number(key);

    SweepSpec &sw = cfg.sweep;
    sw.n_values = reader.int_list("n_values");
    for (int n : sw.n_values)
        if (n < 1)
            throw config_error("'n_values' entries must be >= 1");
    int n_min = *std::min_element(sw.n_values.begin(), sw.n_values.end());

    if (reader.has("active_count")) {
        int k = static_cast<int>(reader.integer("active_count"));
        if (k < 0 || k > n_min)
            throw config_error("'active_count' must lie in [0, N] for every swept N");
        p.active_count = k;
        sw.k_values = {k};
    }
    if (reader.has("k_values")) {
        sw.k_values = reader.int_list("k_values");
        for (int k : sw.k_values)
            if (k < 0 || k > n_min)
                throw config_error("'k_values' entries must lie in [0, N] for every swept N");
    }

    std::string placement = reader.text_or("active_placement", "first");
    if (placement == "first")
        p.active_placement = ActivePlacement::first;
    else if (placement == "random")
        p.active_placement = ActivePlacement::random;
    else
        throw config_error("'active_placement' must be 'first' or 'random'");

    sw.trials = static_cast<int>(reader.integer("trials"));
    if (sw.trials < 1)
        throw config_error("'trials' must be >= 1");
    sw.base_seed = reader.unsigned64("base_seed");
    p.fading.seed = sw.base_seed;
    sw.output = reader.text_or("output", "sweep.csv");
    sw.threads = static_cast<int>(reader.integer_or("threads", 0));
    if (sw.threads < 0)
        throw config_error("'threads' must be >= 0");

    AoSettings &ao = cfg.ao;
    ao.max_outer_iters = static_cast<int>(reader.integer_or("max_outer_iters", 50));
    ao.max_sweeps = static_cast<int>(reader.integer_or("max_sweeps", 1));
    if (ao.max_outer_iters < 1 || ao.max_sweeps < 1)
        throw config_error("iteration counts must be >= 1");
    ao.rel_tol = reader.number_or("rel_tol", 1e-6);
    ao.bisection_tol = reader.number_or("bisection_tol", 1e-8);
    if (!(ao.rel_tol > 0.0 && ao.rel_tol < 1.0) || !(ao.bisection_tol > 0.0 && ao.bisection_tol < 1.0))
        throw config_error("tolerances must lie in (0, 1)");
    ao.amplitude_guard = reader.boolean_or("amplitude_guard", false);

    reader.reject_unknown();

    try {
        validate_geometry(p.geometry);
        validate_arrays(p.arrays);
    } catch (const std::exception &e) {
        throw config_error(e.what());
    }
    bool unequal = (!std::isnan(p.noise_r_dbm) && p.noise_r_dbm != p.noise_dbm) ||
                   (!std::isnan(p.noise_w_dbm) && p.noise_w_dbm != p.noise_dbm);
    if (unequal && !p.allow_unequal_noise)
        throw config_error("unequal noise powers require 'allow_unequal_noise = true'");
    return cfg;
}

ParsedConfig load_config(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw config_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

SweepResult run_sweep(const SystemParams &params, const SweepSpec &spec, const AoSettings &settings) {
    return run_sweep_impl(params, spec, settings, true);
}

SweepResult run_sweep_serial(const SystemParams &params, const SweepSpec &spec,
                             const AoSettings &settings) {
    return run_sweep_impl(params, spec, settings, false);
}

std::string csv_string(const SweepResult &result) {
    std::vector<SweepRow> rows = result.rows;
    std::sort(rows.begin(), rows.end(), [](const SweepRow &a, const SweepRow &b) {
        return std::tie(a.n, a.k, a.trial) < std::tie(b.n, b.k, b.trial);
    });
    std::string out = "n,k,trial,seed,rate_bits,pa_star_dbm,d01_nats,iterations,converged\n";
    for (const SweepRow &r : rows) {
        out += std::to_string(r.n) + ',' + std::to_string(r.k) + ',' + std::to_string(r.trial) + ',' +
               std::to_string(r.seed) + ',' + fmt12(r.rate_bits) + ',' + fmt12(r.pa_star_dbm) + ',' +
               fmt12(r.d01_nats) + ',' + std::to_string(r.iterations) + ',' +
               (r.converged ? "1" : "0") + '\n';
    }
    return out;
}

void emit_csv(const SweepResult &result, const std::string &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("emit_csv: cannot open '" + path + "' for writing");
    out << csv_string(result);
    out.flush();
    if (!out)
        throw std::runtime_error("emit_csv: write to '" + path + "' failed");
}

} // namespace hrris
