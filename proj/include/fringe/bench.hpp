#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fringe/raster_io.hpp"
#include "fringe/rootmusic.hpp"
#include "fringe/synth.hpp"
#include "fringe/types.hpp"

namespace fringe::bench {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kSnrDefinition =
    "SNR_dB = 10 log10(A^2 / sigma^2), A = 1, sigma^2 = total variance of circular complex Gaussian noise per sample";

struct BenchRecord {
    std::string param_name;
    double param_value = 0.0;
    std::optional<double> rmse;
    std::optional<double> wall_ms;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
};

/// Wrapped estimate, its unwrapped version and estimator diagnostics.
struct PhaseResult {
    PhaseMap wrapped;
    PhaseMap unwrapped;
    music::EstimateDiagnostics diagnostics;
};

PhaseResult retrieve_phase(const ComplexField& field, const music::EstimatorConfig& cfg, unsigned threads);

/// RMSE over pixels at least `border` away from every edge, after removing the median
/// of (estimate - truth); this absorbs the unwrapper's global 2*pi*k and any constant offset.
double aligned_rmse(const Grid<double>& estimate, const Grid<double>& truth, std::size_t border);

double median(std::vector<double> values);

struct SweepOptions {
    synth::PhantomSpec phantom;       // size, kind, amplitude; seed is the base seed
    std::size_t trials = 3;
    unsigned threads = 1;
    double unit_circle_tol = 1e-6;
};

/// Mean aligned RMSE over trials with seeds base, base+1, ...
double mean_rmse(const SweepOptions& opt, int half_size, std::optional<double> snr_db);

std::vector<BenchRecord> rmse_vs_snr(const SweepOptions& opt, const std::vector<double>& snr_list, int half_size);
std::vector<BenchRecord> window_sweep(const SweepOptions& opt, const std::vector<int>& half_sizes, double snr_db);

struct ScalingRecord {
    std::size_t size = 0;
    unsigned threads = 1;
    double wall_ms = 0.0;       // median over repeats
    double spread = 0.0;        // (max - min) / median
    std::size_t repeats = 0;
};

/// Wall time of estimate_field on a noisy gaussian-peaks field of each size.
std::vector<ScalingRecord> scaling(const std::vector<std::size_t>& sizes, const std::vector<unsigned>& threads_list,
                                   int half_size, std::size_t repeats, std::uint64_t seed);

std::vector<std::string> snr_csv_header();
std::vector<io::CsvRow> snr_csv_rows(const std::vector<BenchRecord>& records);
std::vector<std::string> window_csv_header();
std::vector<io::CsvRow> window_csv_rows(const std::vector<BenchRecord>& records);
std::vector<std::string> scaling_csv_header();
std::vector<io::CsvRow> scaling_csv_rows(const std::vector<ScalingRecord>& records);

/// Reproducibility record written next to every output.
struct RunManifest {
    std::string command;
    std::vector<std::string> argv;
    nlohmann::json config;
    std::string timestamp;

    std::string config_hash() const;  // FNV-1a 64 over the canonical config dump
    nlohmann::json to_json() const;
};

std::string fnv1a_hex(const std::string& bytes);
std::string utc_timestamp();

}  // namespace fringe::bench
