// Command-line front end: simulate, demodulate, bench {rmse-vs-snr, window-sweep, scaling}, diffusion.
//
// Exit codes: 0 ok, 2 invalid flags / config, 3 I/O failure, 4 carrier error, 5 field too small.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fringe/bench.hpp"
#include "fringe/diffusion.hpp"
#include "fringe/raster_io.hpp"
#include "fringe/rootmusic.hpp"
#include "fringe/spectral.hpp"
#include "fringe/synth.hpp"
#include "fringe/unwrap2d.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fringe;

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kIo = 3, kCarrier = 4, kTooSmall = 5 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int exit_code_for(Errc code) {
    switch (code) {
        case Errc::IoFailure:
        case Errc::MalformedHeader:
        case Errc::UnsupportedMaxval:
        case Errc::TruncatedData:
        case Errc::NonFiniteSample:
            return kIo;
        case Errc::CarrierOverlapsDC:
        case Errc::CarrierOutOfBand:
            return kCarrier;
        case Errc::FieldTooSmall:
            return kTooSmall;
        default:
            return kUsage;
    }
}

std::vector<double> parse_doubles(const std::string& text, const char* flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw UsageError(std::string(flag) + ": not a number: '" + tok + "'");
        }
    }
    if (out.empty()) throw UsageError(std::string(flag) + ": empty list");
    return out;
}

// Accepts "1,2,5" or an inclusive range "1..8".
std::vector<int> parse_int_list(const std::string& text, const char* flag) {
    if (const auto dots = text.find(".."); dots != std::string::npos) {
        try {
            const int lo = std::stoi(text.substr(0, dots));
            const int hi = std::stoi(text.substr(dots + 2));
            if (hi < lo) throw UsageError(std::string(flag) + ": empty range");
            std::vector<int> out;
            for (int i = lo; i <= hi; ++i) out.push_back(i);
            return out;
        } catch (const std::logic_error&) {
            throw UsageError(std::string(flag) + ": bad range '" + text + "'");
        }
    }
    std::vector<int> out;
    for (double v : parse_doubles(text, flag)) {
        if (v != static_cast<int>(v)) throw UsageError(std::string(flag) + ": expected integers");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(Errc::IoFailure, "cannot create directory " + dir.string() + ": " + ec.message());
}

void write_json(const fs::path& path, const json& j) { io::write_file(path, j.dump(2) + "\n"); }

void write_manifest(const fs::path& dir, const std::string& command, const std::vector<std::string>& argv,
                    const json& config) {
    bench::RunManifest m{command, argv, config, bench::utc_timestamp()};
    write_json(dir / "manifest.json", m.to_json());
}

synth::PhantomKind phantom_kind(const std::string& name) {
    const auto kind = synth::parse_phantom_kind(name);
    if (!kind) throw UsageError("--phantom: unknown kind '" + name + "' (gaussian-peaks | plane | fick-profile)");
    return *kind;
}

bool looks_like_pgm(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    char magic[2] = {0, 0};
    in.read(magic, 2);
    return magic[0] == 'P' && magic[1] == '5';
}

struct SimulateArgs {
    std::size_t size = 512;
    std::string phantom = "gaussian-peaks";
    std::optional<double> snr;
    std::uint64_t seed = 1;
    double amplitude = 20.0;
    std::string slope = "0.3,0.5";
    double diff_D = 1e-9, diff_t = 600.0, diff_tref = 120.0, diff_xscale = 40e-6;
    std::string out;
};

int run_simulate(const SimulateArgs& a, const std::vector<std::string>& argv) {
    synth::PhantomSpec spec;
    spec.kind = phantom_kind(a.phantom);
    spec.size = a.size;
    spec.seed = a.seed;
    spec.snr_db = a.snr;
    spec.amplitude = a.amplitude;
    const auto slope = parse_doubles(a.slope, "--slope");
    if (slope.size() != 2) throw UsageError("--slope expects sx,sy");
    spec.slope_x = slope[0];
    spec.slope_y = slope[1];
    spec.diffusion.D = a.diff_D;
    spec.diffusion.t = a.diff_t;
    spec.diffusion.t_ref = a.diff_tref;
    spec.diffusion.x_scale = a.diff_xscale;
    spec.validate();

    const auto ph = synth::make_phantom(spec);
    const fs::path out = a.out;
    ensure_dir(out);
    io::write_field(out / "truth.fr1", io::to_raster(ph.truth));
    io::write_field(out / "field.fr1", io::to_raster(ph.field));
    json cfg = {{"size", spec.size},           {"phantom", a.phantom},
                {"snr_db", a.snr ? json(*a.snr) : json(nullptr)},
                {"seed", spec.seed},           {"amplitude", spec.amplitude},
                {"slope", slope}};
    if (spec.kind == synth::PhantomKind::FickProfile)
        cfg["diffusion"] = {{"D", a.diff_D}, {"t", a.diff_t}, {"t_ref", a.diff_tref}, {"x_scale", a.diff_xscale}};
    write_manifest(out, "simulate", argv, cfg);
    return kOk;
}

struct DemodulateArgs {
    std::string in;
    std::string carrier;
    int L = 5;
    unsigned threads = 1;
    double tol = 1e-6;
    std::string border = "replicate";
    std::string out;
};

int run_demodulate(const DemodulateArgs& a, const std::vector<std::string>& argv) {
    music::EstimatorConfig cfg;
    cfg.half_size = a.L;
    cfg.unit_circle_tol = a.tol;
    if (a.border == "replicate")
        cfg.border = music::BorderPolicy::Replicate;
    else if (a.border == "skip")
        cfg.border = music::BorderPolicy::Skip;
    else
        throw UsageError("--border must be replicate or skip");
    cfg.validate();
    if (!fs::exists(a.in)) throw Error(Errc::IoFailure, "input not found: " + a.in);

    json diag;
    ComplexField field;
    if (looks_like_pgm(a.in)) {
        if (a.carrier.empty()) throw UsageError("PGM input requires --carrier fx,fy,r");
        const auto c = parse_doubles(a.carrier, "--carrier");
        if (c.size() != 3) throw UsageError("--carrier expects fx,fy,r");
        const auto img = io::read_pgm(a.in);
        auto dem = spectral::demodulate(img, {c[0], c[1], c[2]});
        field = std::move(dem.field);
        diag["carrier_removal"] = dem.removal == spectral::CarrierRemoval::BinShift ? "spectral-bin-shift"
                                                                                     : "pointwise-modulation";
    } else {
        const auto raster = io::read_field(a.in);
        if (raster.channels != 2) throw Error(Errc::MalformedHeader, "FR1 input must be complex (2 channels)");
        field = io::to_complex_field(raster);
        diag["carrier_removal"] = "none";
    }

    const auto res = bench::retrieve_phase(field, cfg, a.threads);
    const fs::path out = a.out;
    ensure_dir(out);
    io::write_field(out / "wrapped.fr1", io::to_raster(res.wrapped));
    io::write_field(out / "unwrapped.fr1", io::to_raster(res.unwrapped));
    diag["degenerate_pixels"] = res.diagnostics.degenerate_pixels;
    diag["skipped_pixels"] = res.diagnostics.skipped_pixels;
    diag["width"] = field.width;
    diag["height"] = field.height;
    write_json(out / "diagnostics.json", diag);
    // Thread count is excluded from the config: outputs do not depend on it.
    write_manifest(out, "demodulate", argv,
                   {{"input", a.in}, {"input_hash", bench::fnv1a_hex(io::read_file(a.in))}, {"carrier", a.carrier},
                    {"L", a.L}, {"unit_circle_tol", a.tol}, {"border", a.border}});
    return kOk;
}

struct SweepArgs {
    std::string phantom = "gaussian-peaks";
    std::size_t size = 512;
    std::size_t trials = 3;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    double amplitude = 20.0;
    std::string out;
};

bench::SweepOptions sweep_options(const SweepArgs& a) {
    bench::SweepOptions opt;
    opt.phantom.kind = phantom_kind(a.phantom);
    opt.phantom.size = a.size;
    opt.phantom.seed = a.seed;
    opt.phantom.amplitude = a.amplitude;
    opt.trials = a.trials;
    opt.threads = a.threads;
    opt.phantom.validate();
    if (a.trials == 0) throw UsageError("--trials must be >= 1");
    return opt;
}

json sweep_config(const SweepArgs& a) {
    return {{"phantom", a.phantom}, {"size", a.size}, {"trials", a.trials}, {"seed", a.seed}, {"amplitude", a.amplitude}};
}

struct DiffusionArgs {
    std::string stack;
    std::string geometry;
    bool subtract_first = false;
    std::string out;
};

// frames.txt: one "<time_s> <file.fr1>" per line, paths relative to the stack directory.
std::vector<diffusion::Frame> load_stack(const fs::path& dir) {
    const std::string index = io::read_file(dir / "frames.txt");
    std::istringstream in(index);
    std::string line;
    std::vector<diffusion::Frame> frames;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double t = 0.0;
        std::string file;
        if (!(ls >> t)) continue;
        if (!(ls >> file)) throw Error(Errc::MalformedHeader, "frames.txt: missing file name");
        frames.push_back({t, io::to_phase_map(io::read_field(dir / file), PhaseKind::Unwrapped)});
    }
    if (frames.empty()) throw Error(Errc::EmptyInput, "frames.txt lists no frames");
    return frames;
}

int run_diffusion(const DiffusionArgs& a, const std::vector<std::string>& argv) {
    const auto geom = diffusion::parse_geometry(io::read_file(a.geometry));
    auto frames = load_stack(a.stack);
    const fs::path out = a.out;
    ensure_dir(out);
    std::vector<diffusion::Frame> gradients;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const auto g = diffusion::index_gradient(frames[i].phase, geom);
        char name[64];
        std::snprintf(name, sizeof name, "gradient_%03zu.fr1", i);
        io::write_field(out / name, g);
        gradients.push_back({frames[i].time_s, io::to_phase_map(g, PhaseKind::Unwrapped)});
    }
    const auto series = diffusion::stack_series(gradients, a.subtract_first);
    io::write_field(out / "gradient_stack.fr1", series.stack);
    io::write_csv(out / "profiles.csv", series.csv_header, series.csv_rows);
    write_manifest(out, "diffusion", argv,
                   {{"stack", a.stack},
                    {"geometry", {{"f_x", geom.f_x}, {"n0", geom.n0}, {"L_cell", geom.L_cell}, {"mu", geom.mu},
                                  {"pixel_pitch", geom.pixel_pitch}}},
                    {"subtract_first", a.subtract_first},
                    {"gradient_per_radian", geom.gradient_per_radian()}});
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv, argv + argc);
    CLI::App app{"Windowed root-MUSIC fringe phase retrieval"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Synthesize a ground-truthed complex fringe field");
    simulate->add_option("--size", sim.size, "Field size in pixels (square)");
    simulate->add_option("--phantom", sim.phantom, "gaussian-peaks | plane | fick-profile");
    simulate->add_option("--snr", sim.snr, "SNR in dB (omit for noiseless)");
    simulate->add_option("--seed", sim.seed, "Noise seed");
    simulate->add_option("--amplitude", sim.amplitude, "Peak-to-valley (gaussian-peaks) or peak at t_ref (fick-profile), rad");
    simulate->add_option("--slope", sim.slope, "Plane phantom slopes sx,sy in rad/pixel");
    simulate->add_option("--diffusion-D", sim.diff_D, "Fick phantom diffusion coefficient, m^2/s");
    simulate->add_option("--diffusion-t", sim.diff_t, "Fick phantom time, s");
    simulate->add_option("--diffusion-tref", sim.diff_tref, "Fick phantom reference time, s");
    simulate->add_option("--diffusion-xscale", sim.diff_xscale, "Fick phantom metres per pixel");
    simulate->add_option("--out", sim.out, "Output directory")->required();

    DemodulateArgs dem;
    auto* demodulate = app.add_subcommand("demodulate", "Estimate wrapped and unwrapped phase");
    demodulate->add_option("--in", dem.in, "Complex FR1 field or 8-bit P5 PGM fringe image")->required();
    demodulate->add_option("--carrier", dem.carrier, "fx,fy,radius in cycles/pixel (PGM input)");
    demodulate->add_option("--L", dem.L, "Window half-size");
    demodulate->add_option("--threads", dem.threads, "Worker threads (0 = all cores)");
    demodulate->add_option("--unit-circle-tol", dem.tol, "Root selection tolerance");
    demodulate->add_option("--border", dem.border, "replicate | skip");
    demodulate->add_option("--out", dem.out, "Output directory")->required();

    auto* bench_cmd = app.add_subcommand("bench", "Benchmark sweeps");
    bench_cmd->require_subcommand(1);

    SweepArgs snr_args;
    std::string snr_list = "-5,0,5,10,15,20";
    int snr_L = 5;
    auto* snr_cmd = bench_cmd->add_subcommand("rmse-vs-snr", "Mean RMSE per SNR");
    snr_cmd->add_option("--snr-list", snr_list, "Comma-separated SNR values in dB");
    snr_cmd->add_option("--L", snr_L, "Window half-size");

    SweepArgs win_args;
    std::string L_list = "1..8";
    double win_snr = 0.0;
    auto* win_cmd = bench_cmd->add_subcommand("window-sweep", "Mean RMSE per window half-size");
    win_cmd->add_option("--L-list", L_list, "Half-sizes, e.g. 1..8 or 2,4,6");
    win_cmd->add_option("--snr", win_snr, "SNR in dB");

    for (auto [cmd, a] : {std::pair{snr_cmd, &snr_args}, std::pair{win_cmd, &win_args}}) {
        cmd->add_option("--phantom", a->phantom, "Phantom kind");
        cmd->add_option("--size", a->size, "Field size");
        cmd->add_option("--trials", a->trials, "Trials per point (seeds seed, seed+1, ...)");
        cmd->add_option("--seed", a->seed, "Base seed");
        cmd->add_option("--threads", a->threads, "Worker threads");
        cmd->add_option("--amplitude", a->amplitude, "Phantom amplitude, rad");
        cmd->add_option("--out", a->out, "Output directory")->required();
    }

    std::string sizes = "256,512,1024", threads_list = "1,2,4,8", scaling_out;
    int scaling_L = 3;
    std::size_t repeats = 5;
    std::uint64_t scaling_seed = 1;
    auto* scale_cmd = bench_cmd->add_subcommand("scaling", "Wall time per (size, threads)");
    scale_cmd->add_option("--sizes", sizes, "Field sizes");
    scale_cmd->add_option("--threads-list", threads_list, "Thread counts");
    scale_cmd->add_option("--L", scaling_L, "Window half-size");
    scale_cmd->add_option("--repeats", repeats, "Timed repeats per point (median reported)");
    scale_cmd->add_option("--seed", scaling_seed, "Noise seed");
    scale_cmd->add_option("--out", scaling_out, "Output directory")->required();

    DiffusionArgs dif;
    auto* diff_cmd = app.add_subcommand("diffusion", "Refractive-index gradient maps and profiles from a phase stack");
    diff_cmd->add_option("--stack", dif.stack, "Directory with frames.txt and unwrapped FR1 phase maps")->required();
    diff_cmd->add_option("--geometry", dif.geometry, "key = value file: f_x, n0, L_cell, mu, pixel_pitch")->required();
    diff_cmd->add_flag("--subtract-first", dif.subtract_first, "Subtract the first frame from all frames");
    diff_cmd->add_option("--out", dif.out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*simulate) return run_simulate(sim, args);
        if (*demodulate) return run_demodulate(dem, args);
        if (*diff_cmd) return run_diffusion(dif, args);
        if (*snr_cmd) {
            const auto opt = sweep_options(snr_args);
            const auto snrs = parse_doubles(snr_list, "--snr-list");
            const auto recs = bench::rmse_vs_snr(opt, snrs, snr_L);
            const fs::path out = snr_args.out;
            ensure_dir(out);
            io::write_csv(out / "rmse_vs_snr.csv", bench::snr_csv_header(), bench::snr_csv_rows(recs));
            auto cfg = sweep_config(snr_args);
            cfg["snr_list"] = snrs;
            cfg["L"] = snr_L;
            write_manifest(out, "bench rmse-vs-snr", args, cfg);
            return kOk;
        }
        if (*win_cmd) {
            const auto opt = sweep_options(win_args);
            const auto Ls = parse_int_list(L_list, "--L-list");
            for (int L : Ls)
                if (L < 1) throw UsageError("--L-list values must be >= 1");
            const auto recs = bench::window_sweep(opt, Ls, win_snr);
            const fs::path out = win_args.out;
            ensure_dir(out);
            io::write_csv(out / "window_sweep.csv", bench::window_csv_header(), bench::window_csv_rows(recs));
            auto cfg = sweep_config(win_args);
            cfg["L_list"] = Ls;
            cfg["snr_db"] = win_snr;
            write_manifest(out, "bench window-sweep", args, cfg);
            return kOk;
        }
        if (*scale_cmd) {
            std::vector<std::size_t> sz;
            for (int v : parse_int_list(sizes, "--sizes")) {
                if (v < 2 * scaling_L + 1) throw UsageError("--sizes must exceed the window");
                sz.push_back(static_cast<std::size_t>(v));
            }
            std::vector<unsigned> th;
            for (int v : parse_int_list(threads_list, "--threads-list")) {
                if (v < 1) throw UsageError("--threads-list values must be >= 1");
                th.push_back(static_cast<unsigned>(v));
            }
            const auto recs = bench::scaling(sz, th, scaling_L, repeats, scaling_seed);
            const fs::path out = scaling_out;
            ensure_dir(out);
            io::write_csv(out / "scaling.csv", bench::scaling_csv_header(), bench::scaling_csv_rows(recs));
            write_manifest(out, "bench scaling", args,
                           {{"sizes", sz}, {"threads_list", th}, {"L", scaling_L}, {"repeats", repeats},
                            {"seed", scaling_seed}, {"hardware_concurrency", std::thread::hardware_concurrency()}});
            return kOk;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    }
    return kUsage;
}
