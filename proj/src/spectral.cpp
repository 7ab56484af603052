#include "fringe/spectral.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace fringe::spectral {

namespace {

constexpr double pi = std::numbers::pi;

void fft_radix2(std::span<cdouble> a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<cdouble> tw(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k)
        tw[k] = std::polar(1.0, sign * 2.0 * pi * static_cast<double>(k) / static_cast<double>(n));
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const cdouble u = a[i + k];
                const cdouble v = a[i + k + half] * tw[k * stride];
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
        }
    }
}

// Chirp-z for arbitrary n; k^2 is reduced mod 2n so the chirp angle stays exact.
void fft_bluestein(std::span<cdouble> a, bool inverse) {
    const std::size_t n = a.size();
    const std::size_t m = std::bit_ceil(2 * n - 1);
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<cdouble> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto k2 = static_cast<double>((k * k) % (2 * n));
        chirp[k] = std::polar(1.0, sign * pi * k2 / static_cast<double>(n));
    }
    std::vector<cdouble> x(m), y(m);
    for (std::size_t k = 0; k < n; ++k) x[k] = a[k] * chirp[k];
    y[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) y[k] = y[m - k] = std::conj(chirp[k]);
    fft_radix2(x, false);
    fft_radix2(y, false);
    for (std::size_t i = 0; i < m; ++i) x[i] *= y[i];
    fft_radix2(x, true);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * inv_m * chirp[k];
}

ComplexField transform2(const ComplexField& in, bool inverse) {
    ComplexField out = in;
    std::vector<cdouble> line;
    line.resize(in.width);
    for (std::size_t y = 0; y < in.height; ++y) {
        std::span<cdouble> row(out.data.data() + y * in.width, in.width);
        fft(row, inverse);
    }
    line.resize(in.height);
    for (std::size_t x = 0; x < in.width; ++x) {
        for (std::size_t y = 0; y < in.height; ++y) line[y] = out.at(x, y);
        fft(line, inverse);
        for (std::size_t y = 0; y < in.height; ++y) out.at(x, y) = line[y];
    }
    return out;
}

// Signed bin frequency in cycles/sample, range (-0.5, 0.5].
double bin_frequency(std::size_t k, std::size_t n) {
    const auto kk = static_cast<double>(k);
    const auto nn = static_cast<double>(n);
    return (2 * k <= n) ? kk / nn : (kk - nn) / nn;
}

bool aligned_to_bin(double f, std::size_t n, long& bin) {
    const double pos = f * static_cast<double>(n);
    const double r = std::round(pos);
    if (std::abs(pos - r) > 1e-9) return false;
    const auto nn = static_cast<long>(n);
    bin = ((static_cast<long>(r) % nn) + nn) % nn;
    return true;
}

}  // namespace

void fft(std::span<cdouble> data, bool inverse) {
    const std::size_t n = data.size();
    if (n <= 1) return;
    if (std::has_single_bit(n))
        fft_radix2(data, inverse);
    else
        fft_bluestein(data, inverse);
    if (inverse) {
        const double s = 1.0 / static_cast<double>(n);
        for (auto& v : data) v *= s;
    }
}

ComplexField fft2(const ComplexField& field) { return transform2(field, false); }

ComplexField ifft2(const ComplexField& spectrum) { return transform2(spectrum, true); }

void validate_carrier(const CarrierSpec& c) {
    if (!std::isfinite(c.fx) || !std::isfinite(c.fy) || !std::isfinite(c.radius) || c.radius <= 0.0)
        throw Error(Errc::InvalidConfig, "carrier radius must be positive and finite");
    if (std::hypot(c.fx, c.fy) <= c.radius)
        throw Error(Errc::CarrierOverlapsDC, "bandpass mask around the carrier includes DC");
    if (std::abs(c.fx) + c.radius > 0.5 || std::abs(c.fy) + c.radius > 0.5)
        throw Error(Errc::CarrierOutOfBand, "carrier lobe extends past Nyquist");
}

DemodulationResult demodulate(const Grid<double>& intensity, const CarrierSpec& carrier) {
    validate_carrier(carrier);
    if (intensity.empty()) throw Error(Errc::EmptyInput, "empty image");
    const std::size_t w = intensity.width;
    const std::size_t h = intensity.height;

    long bx = 0, by = 0;
    const bool aligned = aligned_to_bin(carrier.fx, w, bx) && aligned_to_bin(carrier.fy, h, by);

    ComplexField signal(w, h);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const double v = intensity.at(x, y);
            if (aligned) {
                signal.at(x, y) = v;
            } else {
                const double arg = -2.0 * pi * (carrier.fx * static_cast<double>(x) + carrier.fy * static_cast<double>(y));
                signal.at(x, y) = std::polar(v, arg);
            }
        }
    }

    const ComplexField spectrum = fft2(signal);
    ComplexField base(w, h);
    const double r2 = carrier.radius * carrier.radius;
    for (std::size_t ky = 0; ky < h; ++ky) {
        const double fy = bin_frequency(ky, h);
        for (std::size_t kx = 0; kx < w; ++kx) {
            const double fx = bin_frequency(kx, w);
            if (fx * fx + fy * fy > r2) continue;
            if (aligned) {
                const std::size_t sx = (kx + static_cast<std::size_t>(bx)) % w;
                const std::size_t sy = (ky + static_cast<std::size_t>(by)) % h;
                base.at(kx, ky) = spectrum.at(sx, sy);
            } else {
                base.at(kx, ky) = spectrum.at(kx, ky);
            }
        }
    }
    return {ifft2(base), aligned ? CarrierRemoval::BinShift : CarrierRemoval::Modulation};
}

DemodulationResult demodulate(const io::IntensityImage& img, const CarrierSpec& carrier) {
    Grid<double> intensity(img.width, img.height);
    for (std::size_t i = 0; i < intensity.size(); ++i) intensity.data[i] = img.samples[i] / 255.0;
    return demodulate(intensity, carrier);
}

ComplexField demodulate_to_analytic(const io::IntensityImage& img, const CarrierSpec& carrier) {
    return demodulate(img, carrier).field;
}

}  // namespace fringe::spectral
