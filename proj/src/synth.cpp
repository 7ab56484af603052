#include "fringe/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace fringe::synth {

namespace {

struct Peak {
    double cx, cy;   // centre, fraction of size
    double sigma;    // pixels
    double weight;
};

// Three lobes, scaled afterwards to the requested peak-to-valley. Widths are in pixels so
// the curvature seen by a window does not change with image size; at 20 rad they put the
// window-size optimum of the 0 dB error curve near L = 5.
constexpr std::array<Peak, 3> kPeaks{{
    {0.38, 0.42, 9.6, 1.0},
    {0.66, 0.62, 7.7, -0.8},
    {0.57, 0.20, 6.4, 0.55},
}};

}  // namespace

void DiffusionSpec::validate() const {
    if (!(D > 0.0) || !(t > 0.0) || !(t_ref > 0.0) || !(x_scale > 0.0) || !std::isfinite(c0))
        throw Error(Errc::InvalidSpec, "diffusion spec needs D > 0, t > 0, t_ref > 0, x_scale > 0");
}

std::optional<PhantomKind> parse_phantom_kind(const std::string& name) {
    if (name == "gaussian-peaks") return PhantomKind::GaussianPeaks;
    if (name == "plane") return PhantomKind::Plane;
    if (name == "fick-profile") return PhantomKind::FickProfile;
    return std::nullopt;
}

const char* to_string(PhantomKind kind) {
    switch (kind) {
        case PhantomKind::GaussianPeaks: return "gaussian-peaks";
        case PhantomKind::Plane: return "plane";
        case PhantomKind::FickProfile: return "fick-profile";
    }
    return "unknown";
}

void PhantomSpec::validate() const {
    if (size < 16) throw Error(Errc::InvalidSpec, "phantom size must be >= 16");
    if (!std::isfinite(amplitude)) throw Error(Errc::InvalidSpec, "phantom amplitude must be finite");
    if (snr_db && !std::isfinite(*snr_db)) throw Error(Errc::InvalidSpec, "snr must be finite");
    if (!std::isfinite(slope_x) || !std::isfinite(slope_y)) throw Error(Errc::InvalidSpec, "plane slopes must be finite");
    if (kind == PhantomKind::FickProfile) diffusion.validate();
}

double noise_variance(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

GaussianSource::GaussianSource(std::uint64_t seed) : engine_(seed) {}

double GaussianSource::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double GaussianSource::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

void add_noise(ComplexField& field, double variance, std::uint64_t seed) {
    GaussianSource g(seed);
    const double s = std::sqrt(variance / 2.0);
    for (auto& v : field.data) {
        const double re = g.next();
        const double im = g.next();
        v += cdouble(s * re, s * im);
    }
}

PhaseMap phantom_phase(const PhantomSpec& spec) {
    spec.validate();
    const std::size_t n = spec.size;
    const auto nd = static_cast<double>(n);
    PhaseMap phase(n, n, PhaseKind::Unwrapped);
    switch (spec.kind) {
        case PhantomKind::Plane:
            for (std::size_t y = 0; y < n; ++y)
                for (std::size_t x = 0; x < n; ++x)
                    phase.at(x, y) = spec.slope_x * static_cast<double>(x) + spec.slope_y * static_cast<double>(y);
            break;
        case PhantomKind::GaussianPeaks: {
            for (std::size_t y = 0; y < n; ++y)
                for (std::size_t x = 0; x < n; ++x) {
                    double v = 0.0;
                    for (const auto& p : kPeaks) {
                        const double dx = static_cast<double>(x) - p.cx * nd;
                        const double dy = static_cast<double>(y) - p.cy * nd;
                        const double s = p.sigma;
                        v += p.weight * std::exp(-(dx * dx + dy * dy) / (2.0 * s * s));
                    }
                    phase.at(x, y) = v;
                }
            const auto [lo, hi] = std::minmax_element(phase.data.begin(), phase.data.end());
            const double pv = *hi - *lo;
            const double scale = pv > 0.0 ? spec.amplitude / pv : 0.0;
            for (auto& v : phase.data) v *= scale;
            break;
        }
        case PhantomKind::FickProfile: {
            const auto& d = spec.diffusion;
            const double centre = (nd - 1.0) / 2.0;
            const double g_ref = std::abs(fick_gradient({d.D, d.t_ref, d.c0, d.x_scale, d.t_ref}, 0.0));
            for (std::size_t y = 0; y < n; ++y) {
                const double xpos = (static_cast<double>(y) - centre) * d.x_scale;
                const double v = g_ref > 0.0 ? spec.amplitude * std::abs(fick_gradient(d, xpos)) / g_ref : 0.0;
                for (std::size_t x = 0; x < n; ++x) phase.at(x, y) = v;
            }
            break;
        }
    }
    return phase;
}

Phantom make_phantom(const PhantomSpec& spec) {
    Phantom out;
    out.truth = phantom_phase(spec);
    out.field = ComplexField(spec.size, spec.size);
    for (std::size_t i = 0; i < out.field.size(); ++i) out.field.data[i] = std::polar(1.0, out.truth.data[i]);
    if (spec.snr_db) add_noise(out.field, noise_variance(*spec.snr_db), spec.seed);
    return out;
}

double fick_concentration(const DiffusionSpec& spec, double x) {
    return 0.5 * spec.c0 * std::erfc(x / (2.0 * std::sqrt(spec.D * spec.t)));
}

std::vector<double> fick_concentration(const DiffusionSpec& spec, std::span<const double> x) {
    spec.validate();
    std::vector<double> c(x.size());
    std::transform(x.begin(), x.end(), c.begin(), [&](double xi) { return fick_concentration(spec, xi); });
    return c;
}

double fick_gradient(const DiffusionSpec& spec, double x) {
    const double dt = spec.D * spec.t;
    return -spec.c0 / (2.0 * std::sqrt(std::numbers::pi * dt)) * std::exp(-x * x / (4.0 * dt));
}

}  // namespace fringe::synth
