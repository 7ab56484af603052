#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fringe/types.hpp"

namespace fringe::synth {

/// Free-diffusion setup: two layers separated at x = 0 at t = 0.
struct DiffusionSpec {
    double D = 1.0e-9;        // m^2/s
    double t = 600.0;         // s
    double c0 = 1.0;          // initial concentration step
    double x_scale = 40e-6;   // m per pixel
    double t_ref = 120.0;     // phantom amplitude is the peak phase at this time
    void validate() const;
};

enum class PhantomKind { GaussianPeaks, Plane, FickProfile };

std::optional<PhantomKind> parse_phantom_kind(const std::string& name);
const char* to_string(PhantomKind kind);

struct PhantomSpec {
    PhantomKind kind = PhantomKind::GaussianPeaks;
    double amplitude = 20.0;                  // peak-to-valley (gaussian-peaks), peak at t_ref (fick-profile)
    std::size_t size = 512;
    std::uint64_t seed = 1;
    std::optional<double> snr_db;             // none: noiseless
    double slope_x = 0.3;                     // plane phantom, rad/pixel
    double slope_y = 0.5;
    DiffusionSpec diffusion;
    void validate() const;
};

struct Phantom {
    PhaseMap truth;       // unwrapped
    ComplexField field;   // exp(j truth) + circular complex Gaussian noise
};

/// Noise variance per complex sample for A = 1: sigma^2 = 10^(-snr/10).
double noise_variance(double snr_db);

Phantom make_phantom(const PhantomSpec& spec);

PhaseMap phantom_phase(const PhantomSpec& spec);

/// Adds i.i.d. circular complex Gaussian noise with total variance `variance` per sample.
void add_noise(ComplexField& field, double variance, std::uint64_t seed);

/// c(x, t) = (c0 / 2) erfc(x / (2 sqrt(D t))).
double fick_concentration(const DiffusionSpec& spec, double x);
std::vector<double> fick_concentration(const DiffusionSpec& spec, std::span<const double> x);

/// Analytic dc/dx of the step solution.
double fick_gradient(const DiffusionSpec& spec, double x);

/// Seeded Gaussian source with a fixed algorithm (mt19937_64 + Box-Muller),
/// so the stream is identical across standard libraries.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed);
    double next();

private:
    double uniform();
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace fringe::synth
