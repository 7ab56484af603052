#include "fringe/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>

#include "fringe/unwrap2d.hpp"

namespace fringe::bench {

PhaseResult retrieve_phase(const ComplexField& field, const music::EstimatorConfig& cfg, unsigned threads) {
    auto est = music::estimate_field(field, cfg, threads);
    PhaseResult out;
    out.unwrapped = unwrap::unwrap(est.phase);
    out.wrapped = std::move(est.phase);
    out.diagnostics = est.diagnostics;
    return out;
}

double median(std::vector<double> v) {
    if (v.empty()) throw Error(Errc::EmptyInput, "median of empty set");
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

double aligned_rmse(const Grid<double>& estimate, const Grid<double>& truth, std::size_t border) {
    if (estimate.width != truth.width || estimate.height != truth.height)
        throw Error(Errc::DimensionMismatch, "estimate and truth sizes differ");
    if (2 * border >= estimate.width || 2 * border >= estimate.height)
        throw Error(Errc::FieldTooSmall, "border leaves no interior pixels");
    std::vector<double> diff;
    diff.reserve((estimate.width - 2 * border) * (estimate.height - 2 * border));
    for (std::size_t y = border; y + border < estimate.height; ++y)
        for (std::size_t x = border; x + border < estimate.width; ++x) diff.push_back(estimate.at(x, y) - truth.at(x, y));
    const double offset = median(diff);
    double s = 0.0;
    for (double d : diff) s += (d - offset) * (d - offset);
    return std::sqrt(s / static_cast<double>(diff.size()));
}

double mean_rmse(const SweepOptions& opt, int half_size, std::optional<double> snr_db) {
    music::EstimatorConfig cfg;
    cfg.half_size = half_size;
    cfg.unit_circle_tol = opt.unit_circle_tol;
    double total = 0.0;
    for (std::size_t trial = 0; trial < opt.trials; ++trial) {
        synth::PhantomSpec spec = opt.phantom;
        spec.seed = opt.phantom.seed + trial;
        spec.snr_db = snr_db;
        const auto ph = synth::make_phantom(spec);
        const auto res = retrieve_phase(ph.field, cfg, opt.threads);
        total += aligned_rmse(res.unwrapped, ph.truth, static_cast<std::size_t>(half_size));
    }
    return total / static_cast<double>(opt.trials);
}

std::vector<BenchRecord> rmse_vs_snr(const SweepOptions& opt, const std::vector<double>& snr_list, int half_size) {
    std::vector<BenchRecord> out;
    for (double snr : snr_list)
        out.push_back({"snr_db", snr, mean_rmse(opt, half_size, snr), std::nullopt, opt.phantom.seed, opt.trials});
    return out;
}

std::vector<BenchRecord> window_sweep(const SweepOptions& opt, const std::vector<int>& half_sizes, double snr_db) {
    std::vector<BenchRecord> out;
    for (int L : half_sizes)
        out.push_back({"L", static_cast<double>(L), mean_rmse(opt, L, snr_db), std::nullopt, opt.phantom.seed, opt.trials});
    return out;
}

std::vector<ScalingRecord> scaling(const std::vector<std::size_t>& sizes, const std::vector<unsigned>& threads_list,
                                   int half_size, std::size_t repeats, std::uint64_t seed) {
    music::EstimatorConfig cfg;
    cfg.half_size = half_size;
    std::vector<ScalingRecord> out;
    for (std::size_t n : sizes) {
        synth::PhantomSpec spec;
        spec.size = n;
        spec.seed = seed;
        spec.snr_db = 0.0;
        const auto ph = synth::make_phantom(spec);
        for (unsigned t : threads_list) {
            std::vector<double> times;
            for (std::size_t r = 0; r < std::max<std::size_t>(repeats, 1); ++r) {
                const auto start = std::chrono::steady_clock::now();
                const auto est = music::estimate_field(ph.field, cfg, t);
                const auto stop = std::chrono::steady_clock::now();
                times.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
            }
            const double med = median(times);
            const auto [lo, hi] = std::minmax_element(times.begin(), times.end());
            out.push_back({n, t, med, med > 0.0 ? (*hi - *lo) / med : 0.0, times.size()});
        }
    }
    return out;
}

std::vector<std::string> snr_csv_header() { return {"snr_db", "rmse_rad", "trials", "seed"}; }

std::vector<io::CsvRow> snr_csv_rows(const std::vector<BenchRecord>& records) {
    std::vector<io::CsvRow> rows;
    for (const auto& r : records)
        rows.push_back({r.param_value, r.rmse.value_or(NAN), static_cast<std::int64_t>(r.trials),
                        static_cast<std::int64_t>(r.seed)});
    return rows;
}

std::vector<std::string> window_csv_header() { return {"L", "rmse_rad", "trials", "seed"}; }

std::vector<io::CsvRow> window_csv_rows(const std::vector<BenchRecord>& records) {
    std::vector<io::CsvRow> rows;
    for (const auto& r : records)
        rows.push_back({static_cast<std::int64_t>(r.param_value), r.rmse.value_or(NAN),
                        static_cast<std::int64_t>(r.trials), static_cast<std::int64_t>(r.seed)});
    return rows;
}

std::vector<std::string> scaling_csv_header() { return {"size", "threads", "wall_ms", "spread", "repeats"}; }

std::vector<io::CsvRow> scaling_csv_rows(const std::vector<ScalingRecord>& records) {
    std::vector<io::CsvRow> rows;
    for (const auto& r : records)
        rows.push_back({static_cast<std::int64_t>(r.size), static_cast<std::int64_t>(r.threads), r.wall_ms, r.spread,
                        static_cast<std::int64_t>(r.repeats)});
    return rows;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string RunManifest::config_hash() const { return fnv1a_hex(command + "\n" + config.dump()); }

nlohmann::json RunManifest::to_json() const {
    return {
        {"tool", "fringe"},
        {"version", kVersion},
        {"command", command},
        {"argv", argv},
        {"config", config},
        {"config_hash", config_hash()},
        {"timestamp", timestamp},
        {"snr_definition", kSnrDefinition},
    };
}

}  // namespace fringe::bench
