#pragma once

// Command-line front end: analyze / simulate / compare for the geo and mm
// models. Reports are JSON, plot data is CSV, every run writes a manifest.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qmax/qmax.hpp"

namespace qmax::cli {

inline constexpr const char* kToolName = "qmax";
inline constexpr const char* kToolVersion = "1.0.0";

using json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kValidation = 2, kNumeric = 3, kIo = 4 };

class io_error : public error {
public:
    using error::error;
};

// ---------------------------------------------------------------------------
// number parsing and formatting

/// Decimal or "a/b" fraction. The fraction is divided once, so "1/3" is the
/// correctly rounded double nearest one third.
inline double parse_number(std::string_view text) {
    const auto parse_plain = [](std::string_view t) {
        double v = 0.0;
        const auto* first = t.data();
        const auto* last = t.data() + t.size();
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last || t.empty()) {
            throw validation_error("not a number: '" + std::string(t) + "'");
        }
        return v;
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return parse_plain(text);
    const double num = parse_plain(text.substr(0, slash));
    const double den = parse_plain(text.substr(slash + 1));
    if (den == 0.0) throw validation_error("zero denominator in '" + std::string(text) + "'");
    return num / den;
}

inline std::int64_t parse_count(std::string_view text, std::string_view what) {
    const double v = parse_number(text);
    if (!std::isfinite(v) || v != std::floor(v) || std::abs(v) > 9.0e15) {
        throw validation_error(std::string(what) + " must be an integer, got '" + std::string(text) + "'");
    }
    return static_cast<std::int64_t>(v);
}

/// Shortest representation that reads back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline json nullable_se(const SampleSummary& s) { return s.se_available() ? json(s.se) : json(nullptr); }

// ---------------------------------------------------------------------------
// options

struct Options {
    std::string command;  ///< analyze | simulate | compare
    std::string target;   ///< geo | mm
    std::string p, r, lambda, mu, c, n, reps = "1000", seed, threads, out, format = "both";
    std::vector<std::string> argv;
};

struct GeoRun {
    GeoParams params;
    std::int64_t n = 100000;
};

struct MMRun {
    MMParams params;
    double n = 20000.0;
};

struct SimSettings {
    std::size_t reps = 1000;
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 1;
};

inline GeoRun geo_run(const Options& o) {
    if (o.p.empty() || o.r.empty()) throw validation_error("geo needs --p and --r");
    const auto c = o.c.empty() ? std::int64_t{3} : parse_count(o.c, "--c");
    if (c < 1 || c > kMaxGeoServers) throw unsupported_error("geo supports --c 1, 2 or 3");
    GeoRun run;
    run.params = validate_geo_params(parse_number(o.p), parse_number(o.r), static_cast<int>(c));
    if (!o.n.empty()) run.n = parse_count(o.n, "--n");
    if (run.n < 2) throw range_error("--n must be at least 2");
    return run;
}

inline MMRun mm_run(const Options& o) {
    if (o.lambda.empty() || o.mu.empty()) throw validation_error("mm needs --lambda and --mu");
    const auto c = o.c.empty() ? std::int64_t{1} : parse_count(o.c, "--c");
    if (c < 1 || c > 1000) throw range_error("--c must lie in [1, 1000]");
    MMRun run;
    run.params = validate_mm_params(parse_number(o.lambda), parse_number(o.mu), static_cast<int>(c));
    if (!o.n.empty()) run.n = parse_number(o.n);
    if (!(run.n > 1.0) || !std::isfinite(run.n)) throw range_error("--n must be a finite value above 1");
    return run;
}

inline SimSettings sim_settings(const Options& o) {
    SimSettings s;
    const auto reps = parse_count(o.reps, "--reps");
    if (reps < 1) throw range_error("--reps must be at least 1");
    s.reps = static_cast<std::size_t>(reps);
    if (o.seed == "random") {
        std::random_device rd;
        s.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    } else if (!o.seed.empty()) {
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(o.seed.data(), o.seed.data() + o.seed.size(), v);
        if (ec != std::errc{} || ptr != o.seed.data() + o.seed.size()) {
            throw validation_error("--seed must be an unsigned integer or 'random'");
        }
        s.seed = v;
    }
    if (o.threads.empty()) {
        s.threads = std::max(1u, std::thread::hardware_concurrency());
    } else {
        const auto t = parse_count(o.threads, "--threads");
        if (t < 1 || t > 1024) throw range_error("--threads must lie in [1, 1024]");
        s.threads = static_cast<unsigned>(t);
    }
    return s;
}

// ---------------------------------------------------------------------------
// report blocks

inline json geo_params_json(const GeoRun& run) {
    return {{"p", run.params.p}, {"r", run.params.r}, {"c", run.params.c},
            {"q", run.params.q}, {"s", run.params.s}, {"n", run.n}};
}

inline json mm_params_json(const MMRun& run) {
    return {{"lambda", run.params.lambda},
            {"mu", run.params.mu},
            {"c", run.params.c},
            {"rho_lambda_over_mu", run.params.rho_single()},
            {"utilisation_lambda_over_c_mu", run.params.utilisation()},
            {"n", run.n}};
}

inline json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

/// Heuristic CDF rows from k = 0 until the prediction is within 1e-9 of one.
inline std::vector<std::pair<long, double>> geo_cdf_rows(const GeoAnalysis& a, double n) {
    std::vector<std::pair<long, double>> rows;
    for (long k = 0; k < 100000; ++k) {
        const double v = max_length_cdf(a, n, k);
        rows.emplace_back(k, v);
        if (v > 1.0 - 1e-9) break;
    }
    return rows;
}

inline json analyze_geo_json(const GeoRun& run) {
    const GeoAnalysis a = analyze_geo(run.params);
    const MaxLengthLaw law = a.law();
    json pi = json::array();
    for (double v : a.pi_boundary) pi.push_back(v);
    pi.push_back(a.pi_c);
    json below = json::array();
    for (double v : a.nu.from_below) below.push_back(v);
    json inner = json::array();
    for (cplx z : a.nu.f_inner_roots) inner.push_back(complex_json(z));
    json cdf = json::array();
    for (const auto& [k, v] : geo_cdf_rows(a, static_cast<double>(run.n))) {
        cdf.push_back({{"k", k}, {"p", v}, {"heuristic_valid", heuristic_in_range(a, k)}});
    }
    const auto closed = omega_closed_form(run.params);
    return {
        {"target", "geo"},
        {"params", geo_params_json(run)},
        {"omega", a.omega},
        {"omega_closed_form", closed ? json(*closed) : json(nullptr)},
        {"stationary", {{"pi_0_to_c", pi}, {"tail_ratio", a.omega}, {"total_mass", a.stationary().total_mass()}}},
        {"hitting",
         {{"nu0", a.nu.return_prob},
          {"nu_minus1", a.nu.from_above},
          {"nu_1_to_c_minus_1", below},
          {"f_inner_roots", inner},
          {"g_smallest_root", complex_json(a.nu.g_smallest_root)}}},
        {"clump_rate", a.beta},
        {"slope", law.slope},
        {"intercept", law.intercept},
        {"expected_max", expected_max_length(a, static_cast<double>(run.n))},
        {"mean_queue_length", mean_queue_length(a.stationary())},
        {"cdf", cdf},
    };
}

/// Grid of y values spanning the bulk of the M/M/1 maximum-wait law.
inline std::vector<double> mm_y_grid(const MMRun& run) {
    const auto sys = mm1_asymptotics(run.params, WaitKind::system);
    const double lo = std::max(0.0, sys.location(run.n) - 4.0 * sys.scale);
    const double hi = sys.location(run.n) + 10.0 * sys.scale;
    std::vector<double> ys;
    for (int i = 0; i <= 100; ++i) ys.push_back(lo + (hi - lo) * i / 100.0);
    return ys;
}

inline json mm1_block(const MMRun& run, WaitKind kind) {
    const auto asym = mm1_asymptotics(run.params, kind);
    return {{"expected_max", asym.expected(run.n)},
            {"gumbel_location", asym.location(run.n)},
            {"gumbel_scale", asym.scale},
            {"rate_constant", asym.rate_constant}};
}

inline json analyze_mm_json(const MMRun& run) {
    json out = {{"target", "mm"}, {"params", mm_params_json(run)}};
    if (run.params.c <= 3) {
        out["mean_wait"] = {{"queue", mean_wait(run.params, WaitKind::queue)},
                            {"system", mean_wait(run.params, WaitKind::system)}};
    } else {
        out["mean_wait"] = nullptr;
    }
    if (run.params.c == 1) {
        out["max_wait"] = {{"system", mm1_block(run, WaitKind::system)}, {"queue", mm1_block(run, WaitKind::queue)}};
        json cdf = json::array();
        for (double y : mm_y_grid(run)) {
            cdf.push_back({{"y", y},
                           {"system", max_wait_cdf_mm1(run.params, WaitKind::system, run.n, y)},
                           {"queue", max_wait_cdf_mm1(run.params, WaitKind::queue, run.n, y)}});
        }
        out["cdf"] = cdf;
    } else {
        out["max_wait"] = nullptr;
        out["max_wait_note"] = "no closed form for c >= 2; use simulate or compare";
        out["cdf"] = json::array();
    }
    return out;
}

inline json summary_json(const SampleSummary& s) {
    return {{"count", s.count}, {"mean", s.mean}, {"stdev", s.stdev}, {"se", nullable_se(s)}};
}

inline json gumbel_json(std::span<const double> samples) {
    try {
        const GumbelParams g = gumbel_fit_two_moment(samples);
        return {{"location", g.location}, {"scale", g.scale}};
    } catch (const degenerate_sample_error& e) {
        return {{"location", nullptr}, {"scale", nullptr}, {"note", e.what()}};
    }
}

// ---------------------------------------------------------------------------
// CSV

inline std::string geo_samples_csv(const GeoSimResult& r) {
    std::ostringstream os;
    os << "replication,seed,max_length\n";
    for (std::size_t i = 0; i < r.samples.size(); ++i) os << i << ',' << r.seeds[i] << ',' << r.samples[i] << '\n';
    return os.str();
}

inline std::string mm_samples_csv(const MMSimResult& r) {
    std::ostringstream os;
    os << "replication,seed,customers,max_sys,max_que,mean_sys,mean_que\n";
    for (std::size_t i = 0; i < r.runs.size(); ++i) {
        const auto& w = r.runs[i];
        os << i << ',' << r.seeds[i] << ',' << w.customers << ',' << format_double(w.max_sys) << ','
           << format_double(w.max_que) << ',' << format_double(w.mean_sys) << ',' << format_double(w.mean_que)
           << '\n';
    }
    return os.str();
}

/// Splits one CSV line without quoting; the files written here never quote.
inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

/// Reads one named numeric column back from a samples file.
inline std::vector<double> read_csv_column(const std::filesystem::path& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw io_error("empty CSV " + path.string());
    const auto header = split_csv_line(line);
    const auto it = std::find(header.begin(), header.end(), column);
    if (it == header.end()) throw io_error("column '" + column + "' missing in " + path.string());
    const auto idx = static_cast<std::size_t>(it - header.begin());
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (idx >= cells.size()) throw io_error("short row in " + path.string());
        values.push_back(parse_number(cells[idx]));
    }
    return values;
}

// ---------------------------------------------------------------------------
// output

struct OutputFile {
    std::string name;
    std::string body;
};

/// Writes every file to a temporary sibling first and renames only once all
/// writes succeeded, so a failed run leaves no partial outputs.
inline void write_outputs(const std::filesystem::path& dir, const std::vector<OutputFile>& files) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("cannot create output directory " + dir.string() + ": " + ec.message());
    std::vector<fs::path> temps;
    const auto cleanup = [&] {
        for (const auto& t : temps) fs::remove(t, ec);
    };
    for (const auto& f : files) {
        const fs::path tmp = dir / (f.name + ".tmp");
        temps.push_back(tmp);
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        os << f.body;
        os.close();
        if (!os) {
            cleanup();
            throw io_error("failed writing " + tmp.string());
        }
    }
    for (std::size_t i = 0; i < files.size(); ++i) {
        fs::rename(temps[i], dir / files[i].name, ec);
        if (ec) {
            cleanup();
            throw io_error("failed renaming into " + (dir / files[i].name).string() + ": " + ec.message());
        }
    }
}

inline json manifest_json(const Options& o, const json& params, const std::optional<SimSettings>& sim,
                          double seconds) {
    json m = {{"tool", kToolName},
              {"version", kToolVersion},
              {"command_line", o.argv},
              {"command", o.command},
              {"target", o.target},
              {"params", params},
              {"prng", kPrngName},
              {"seed_mixing", kSeedMixName}};
    if (sim) {
        m["master_seed"] = sim->seed;
        m["reps"] = sim->reps;
        m["threads"] = sim->threads;
    } else {
        m["master_seed"] = nullptr;
        m["reps"] = nullptr;
    }
    m["wall_clock_seconds"] = seconds;
    return m;
}

inline bool wants_json(const Options& o) { return o.format == "json" || o.format == "both"; }
inline bool wants_csv(const Options& o) { return o.format == "csv" || o.format == "both"; }

// ---------------------------------------------------------------------------
// commands

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

inline int run_analyze(const Options& o, std::ostream& out) {
    const auto t0 = Clock::now();
    json report;
    json params;
    std::ostringstream cdf;
    if (o.target == "geo") {
        const GeoRun run = geo_run(o);
        report = analyze_geo_json(run);
        params = report["params"];
        cdf << "k,predicted\n";
        for (const auto& row : report["cdf"]) {
            cdf << row["k"].get<long>() << ',' << format_double(row["p"].get<double>()) << '\n';
        }
    } else {
        const MMRun run = mm_run(o);
        report = analyze_mm_json(run);
        params = report["params"];
        cdf << "y,predicted_sys,predicted_que\n";
        for (const auto& row : report["cdf"]) {
            cdf << format_double(row["y"].get<double>()) << ',' << format_double(row["system"].get<double>()) << ','
                << format_double(row["queue"].get<double>()) << '\n';
        }
    }
    json tagged = {{"command", "analyze"}};
    tagged.update(report);
    report = std::move(tagged);
    out << report.dump(2) << '\n';
    if (!o.out.empty()) {
        std::vector<OutputFile> files;
        if (wants_json(o)) files.push_back({"summary.json", report.dump(2) + "\n"});
        if (wants_csv(o)) files.push_back({"cdf.csv", cdf.str()});
        files.push_back({"manifest.json", manifest_json(o, params, std::nullopt, seconds_since(t0)).dump(2) + "\n"});
        write_outputs(o.out, files);
    }
    return kOk;
}

struct SimOutputs {
    json summary;
    json params;
    std::string samples_csv;
    std::string cdf_csv;
};

inline SimOutputs simulate_geo_outputs(const GeoRun& run, const SimSettings& s, bool compare) {
    GeoSimConfig cfg{run.params, run.n, s.reps, s.seed, s.threads};
    const GeoSimResult sim = replicate_max_length(cfg);
    const std::vector<double> xs = sim.samples_as_double();

    SimOutputs o;
    o.params = geo_params_json(run);
    o.samples_csv = geo_samples_csv(sim);
    json sim_block = summary_json(sim.summary);
    json ecdf = json::array();
    for (std::size_t i = 0; i < sim.summary.ecdf.support().size(); ++i) {
        ecdf.push_back({{"k", sim.summary.ecdf.support()[i]}, {"p", sim.summary.ecdf.probabilities()[i]}});
    }
    sim_block["ecdf"] = ecdf;
    o.summary = {{"target", "geo"}, {"params", o.params}, {"reps", s.reps}, {"master_seed", s.seed},
                 {"simulation", sim_block}};

    const auto lo = static_cast<long>(sim.summary.ecdf.support().front()) - 1;
    const auto hi = static_cast<long>(sim.summary.ecdf.support().back()) + 1;
    std::ostringstream cdf;
    if (!compare) {
        cdf << "k,empirical\n";
        for (long k = lo; k <= hi; ++k) cdf << k << ',' << format_double(sim.summary.ecdf(static_cast<double>(k))) << '\n';
        o.cdf_csv = cdf.str();
        return o;
    }

    const GeoAnalysis a = analyze_geo(run.params);
    const MaxLengthLaw law = a.law();
    const double nd = static_cast<double>(run.n);
    const double predicted_mean = expected_max_length(a, nd);
    const json fit = gumbel_json(xs);
    double central = 0.0;
    for (long k = 0; k <= hi + 64; ++k) {
        const double f = law.cdf(nd, static_cast<double>(k));
        if (f >= 0.05 && f <= 0.95) central = std::max(central, std::abs(sim.summary.ecdf(static_cast<double>(k)) - f));
    }
    const double ks = ks_distance(
        sim.summary.ecdf, [&](double k) { return law.cdf(nd, k); }, Support::lattice);
    json cmp = {{"expected_max_analytic", predicted_mean},
                {"expected_max_empirical", sim.summary.mean},
                {"difference", sim.summary.mean - predicted_mean},
                {"difference_in_se", sim.summary.se_available() && sim.summary.se > 0
                                         ? json((sim.summary.mean - predicted_mean) / sim.summary.se)
                                         : json(nullptr)},
                {"ks_lattice", ks},
                {"max_central_deviation", central},
                {"gumbel_fit", fit},
                {"clump_rate", a.beta},
                {"omega", a.omega}};
    o.summary["command"] = "compare";
    o.summary["comparison"] = cmp;

    cdf << "k,predicted,empirical,gumbel_fit\n";
    for (long k = std::max(0L, lo); k <= hi; ++k) {
        const auto x = static_cast<double>(k);
        cdf << k << ',' << format_double(law.cdf(nd, x)) << ',' << format_double(sim.summary.ecdf(x)) << ',';
        if (!fit["location"].is_null()) {
            const GumbelParams g{fit["location"].get<double>(), fit["scale"].get<double>()};
            cdf << format_double(g.cdf(x));
        }
        cdf << '\n';
    }
    o.cdf_csv = cdf.str();
    return o;
}

inline SimOutputs simulate_mm_outputs(const MMRun& run, const SimSettings& s, bool compare) {
    MMSimConfig cfg{run.params, run.n, s.reps, s.seed, s.threads};
    const MMSimResult sim = replicate_wait_maxima(cfg);
    const auto sys = sim.max_sys_samples();
    const auto que = sim.max_que_samples();

    SimOutputs o;
    o.params = mm_params_json(run);
    o.samples_csv = mm_samples_csv(sim);
    json sim_block = {{"max_sys", summary_json(sim.max_sys)},
                      {"max_que", summary_json(sim.max_que)},
                      {"pooled_mean_sys", sim.pooled_mean_sys},
                      {"pooled_mean_que", sim.pooled_mean_que},
                      {"total_customers", sim.total_customers}};
    o.summary = {{"target", "mm"}, {"params", o.params}, {"reps", s.reps}, {"master_seed", s.seed},
                 {"simulation", sim_block}};

    std::ostringstream cdf;
    if (!compare) {
        cdf << "kind,y,empirical\n";
        const auto emit = [&](const char* kind, const SampleSummary& sm) {
            for (std::size_t i = 0; i < sm.ecdf.support().size(); ++i) {
                cdf << kind << ',' << format_double(sm.ecdf.support()[i]) << ','
                    << format_double(sm.ecdf.probabilities()[i]) << '\n';
            }
        };
        emit("system", sim.max_sys);
        emit("queue", sim.max_que);
        o.cdf_csv = cdf.str();
        return o;
    }

    const bool single = run.params.c == 1;
    json cmp = json::object();
    cdf << "kind,y,predicted,empirical,gumbel_fit\n";
    for (const WaitKind kind : {WaitKind::system, WaitKind::queue}) {
        const SampleSummary& sm = kind == WaitKind::system ? sim.max_sys : sim.max_que;
        const std::vector<double>& xs = kind == WaitKind::system ? sys : que;
        const json fit = gumbel_json(xs);
        json block = {{"expected_max_empirical", sm.mean}, {"se", nullable_se(sm)}, {"gumbel_fit", fit}};
        std::optional<MM1Asymptotics> asym;
        if (single) {
            asym = mm1_asymptotics(run.params, kind);
            const double predicted = asym->expected(run.n);
            block["expected_max_analytic"] = predicted;
            block["difference"] = sm.mean - predicted;
            block["difference_in_se"] =
                sm.se_available() && sm.se > 0 ? json((sm.mean - predicted) / sm.se) : json(nullptr);
            block["ks_analytic"] = ks_distance(sm.ecdf, [&](double y) { return asym->cdf(run.n, y); });
        } else {
            block["expected_max_analytic"] = nullptr;
        }
        std::optional<GumbelParams> g;
        if (!fit["location"].is_null()) {
            g = GumbelParams{fit["location"].get<double>(), fit["scale"].get<double>()};
            block["ks_gumbel_fit"] = ks_distance(sm.ecdf, [&](double y) { return g->cdf(y); });
        }
        cmp[to_string(kind)] = block;
        for (std::size_t i = 0; i < sm.ecdf.support().size(); ++i) {
            const double y = sm.ecdf.support()[i];
            cdf << to_string(kind) << ',' << format_double(y) << ',';
            if (asym) cdf << format_double(asym->cdf(run.n, y));
            cdf << ',' << format_double(sm.ecdf.probabilities()[i]) << ',';
            if (g) cdf << format_double(g->cdf(y));
            cdf << '\n';
        }
    }
    if (run.params.c <= 3) {
        cmp["mean_wait"] = {{"queue_analytic", mean_wait(run.params, WaitKind::queue)},
                            {"queue_empirical", sim.pooled_mean_que},
                            {"system_analytic", mean_wait(run.params, WaitKind::system)},
                            {"system_empirical", sim.pooled_mean_sys}};
    }
    o.summary["command"] = "compare";
    o.summary["comparison"] = cmp;
    o.cdf_csv = cdf.str();
    return o;
}

inline int run_simulation(const Options& o, std::ostream& out) {
    const auto t0 = Clock::now();
    const bool compare = o.command == "compare";
    SimOutputs res;
    SimSettings s;
    if (o.target == "geo") {
        const GeoRun run = geo_run(o);
        s = sim_settings(o);
        res = simulate_geo_outputs(run, s, compare);
    } else {
        const MMRun run = mm_run(o);
        s = sim_settings(o);
        res = simulate_mm_outputs(run, s, compare);
    }
    json tagged = {{"command", o.command}};
    tagged.update(res.summary);
    res.summary = std::move(tagged);
    res.summary["prng"] = kPrngName;
    out << res.summary.dump(2) << '\n';

    std::vector<OutputFile> files;
    if (wants_json(o)) files.push_back({"summary.json", res.summary.dump(2) + "\n"});
    if (wants_csv(o)) {
        files.push_back({"samples.csv", res.samples_csv});
        files.push_back({"cdf.csv", res.cdf_csv});
    }
    files.push_back({"manifest.json", manifest_json(o, res.params, s, seconds_since(t0)).dump(2) + "\n"});
    write_outputs(o.out.empty() ? std::string("qmax-out") : o.out, files);
    return kOk;
}

/// Parses argv and dispatches. Returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    Options o;
    for (int i = 0; i < argc; ++i) o.argv.emplace_back(argv[i]);

    CLI::App app{"Extreme-value asymptotics and simulation for queue-length and wait-time maxima", kToolName};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    const auto add_common = [&](CLI::App* sub, bool sim) {
        sub->add_option("target", o.target, "Model: geo (discrete Geo/Geo/c) or mm (continuous M/M/c)")
            ->required()
            ->check(CLI::IsMember({"geo", "mm"}));
        sub->add_option("--p", o.p, "geo: arrival probability per slot (decimal or a/b)");
        sub->add_option("--r", o.r, "geo: per-server departure probability per slot");
        sub->add_option("--lambda", o.lambda, "mm: arrival rate");
        sub->add_option("--mu", o.mu, "mm: per-server service rate");
        sub->add_option("--c", o.c, "number of servers (geo default 3, mm default 1)");
        sub->add_option("--n", o.n, "horizon: slots (geo, default 100000) or time units (mm, default 20000)");
        sub->add_option("--out", o.out, sim ? "output directory (default qmax-out)" : "also write files to DIR");
        sub->add_option("--format", o.format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
        if (sim) {
            sub->add_option("--reps", o.reps, "replications (default 1000)");
            sub->add_option("--seed", o.seed, "master seed, or 'random'");
            sub->add_option("--threads", o.threads, "worker threads (results do not depend on it)");
        }
    };
    CLI::App* analyze = app.add_subcommand("analyze", "Analytic asymptotics");
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo replications");
    CLI::App* compare = app.add_subcommand("compare", "Analytic prediction against simulation");
    add_common(analyze, false);
    add_common(simulate, true);
    add_common(compare, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kValidation;
    }
    o.command = analyze->parsed() ? "analyze" : simulate->parsed() ? "simulate" : "compare";

    try {
        if (o.command == "analyze") return run_analyze(o, out);
        return run_simulation(o, out);
    } catch (const validation_error& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const io_error& e) {
        err << "io error: " << e.what() << '\n';
        return kIo;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "io error: " << e.what() << '\n';
        return kIo;
    } catch (const numeric_error& e) {
        err << "numeric error: " << e.what() << '\n';
        return kNumeric;
    }
}

}  // namespace qmax::cli
