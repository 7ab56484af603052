#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fringe/spectral.hpp"

using namespace fringe;
using namespace fringe::spectral;
constexpr double kPi = std::numbers::pi;

namespace {

// Direct O(N^2) 2D DFT, forward, unnormalized.
ComplexField direct_dft2(const ComplexField& f) {
    ComplexField out(f.width, f.height);
    for (std::size_t ky = 0; ky < f.height; ++ky)
        for (std::size_t kx = 0; kx < f.width; ++kx) {
            cdouble acc = 0.0;
            for (std::size_t y = 0; y < f.height; ++y)
                for (std::size_t x = 0; x < f.width; ++x)
                    acc += f.at(x, y) * std::polar(1.0, -2 * kPi * (double(kx * x) / double(f.width) + double(ky * y) / double(f.height)));
            out.at(kx, ky) = acc;
        }
    return out;
}

ComplexField random_field(std::size_t w, std::size_t h, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    ComplexField f(w, h);
    for (auto& v : f.data) v = {g(rng), g(rng)};
    return f;
}

double max_diff(const ComplexField& a, const ComplexField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return Errc::IoFailure;
}

Grid<double> fringe_image(std::size_t n, double fx, double fy, auto&& phase) {
    Grid<double> img(n, n);
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t x = 0; x < n; ++x)
            img.at(x, y) = 0.5 + 0.5 * std::cos(2 * kPi * (fx * double(x) + fy * double(y)) + phase(double(x), double(y)));
    return img;
}

}  // namespace

TEST_CASE("fft2: constant field has a single DC bin") {
    const cdouble c(0.7, -0.2);
    ComplexField f(4, 4, c);
    const auto s = fft2(f);
    CHECK(std::abs(s.at(0, 0) - 16.0 * c) < 1e-12);
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(std::abs(s.data[i]) < 1e-12);
}

TEST_CASE("fft2: pure tone lands in one bin") {
    ComplexField f(8, 8);
    for (std::size_t y = 0; y < 8; ++y)
        for (std::size_t x = 0; x < 8; ++x) f.at(x, y) = std::polar(1.0, 2 * kPi * double(x) / 8.0);
    const auto s = fft2(f);
    for (std::size_t ky = 0; ky < 8; ++ky)
        for (std::size_t kx = 0; kx < 8; ++kx) CHECK(std::abs(s.at(kx, ky) - (kx == 1 && ky == 0 ? 64.0 : 0.0)) < 1e-12);
}

TEST_CASE("fft2: matches direct DFT and round-trips (radix-2 and Bluestein sizes)") {
    for (auto [w, h] : {std::pair<std::size_t, std::size_t>{5, 7}, {8, 4}, {12, 9}, {1, 6}, {16, 3}}) {
        const auto f = random_field(w, h, unsigned(w * 31 + h));
        CHECK(max_diff(fft2(f), direct_dft2(f)) < 1e-10);
        CHECK(max_diff(ifft2(fft2(f)), f) < 1e-12);
    }
}

TEST_CASE("fft: Parseval") {
    for (std::size_t n : {64u, 100u, 127u}) {
        auto f = random_field(n, 1, unsigned(n));
        double e_field = 0.0;
        for (const auto& v : f.data) e_field += std::norm(v);
        fft(f.data);
        double e_spec = 0.0;
        for (const auto& v : f.data) e_spec += std::norm(v);
        CHECK(std::abs(e_spec - double(n) * e_field) / (double(n) * e_field) < 1e-10);
    }
}

TEST_CASE("carrier geometry errors") {
    CHECK(code_of([] { validate_carrier({0.01, 0.0, 0.05}); }) == Errc::CarrierOverlapsDC);
    CHECK(code_of([] { validate_carrier({0.45, 0.0, 0.1}); }) == Errc::CarrierOutOfBand);
    CHECK(code_of([] { validate_carrier({0.2, 0.0, 0.0}); }) == Errc::InvalidConfig);
    CHECK_NOTHROW(validate_carrier({0.125, 0.0, 0.05}));
}

TEST_CASE("demodulate: zero-phase fringe gives zero phase") {
    const auto img = fringe_image(128, 0.125, 0.0, [](double, double) { return 0.0; });
    const auto res = demodulate(img, {0.125, 0.0, 0.05});
    CHECK(res.removal == CarrierRemoval::BinShift);
    double worst = 0.0;
    for (std::size_t y = 8; y < 120; ++y)
        for (std::size_t x = 8; x < 120; ++x) worst = std::max(worst, std::abs(std::arg(res.field.at(x, y))));
    CHECK(worst < 1e-6);

    // Same through the 8-bit path: the quantized cosine stays even, so the phase stays 0.
    io::IntensityImage img8{128, 128, std::vector<std::uint8_t>(128 * 128)};
    // Build from the folded index so x and 8 - x round identically.
    for (std::size_t y = 0; y < 128; ++y)
        for (std::size_t x = 0; x < 128; ++x) {
            const double k = double(std::min(x % 8, 8 - x % 8));
            img8.samples[y * 128 + x] = std::uint8_t(std::lround(127.5 + 127.5 * std::cos(2 * kPi * k / 8.0)));
        }
    const auto f8 = demodulate_to_analytic(img8, {0.125, 0.0, 0.05});
    worst = 0.0;
    for (std::size_t y = 8; y < 120; ++y)
        for (std::size_t x = 8; x < 120; ++x) worst = std::max(worst, std::abs(std::arg(f8.at(x, y))));
    CHECK(worst < 1e-6);
}

TEST_CASE("demodulate: smooth 3 rad Gaussian phase recovered") {
    auto g = [](double x, double y) { return 3.0 * std::exp(-((x - 64) * (x - 64) + (y - 60) * (y - 60)) / (2 * 16.0 * 16.0)); };
    const auto img = fringe_image(128, 0.125, 0.0, g);
    const auto f = demodulate(img, {0.125, 0.0, 0.05}).field;
    double worst = 0.0;
    for (std::size_t y = 12; y < 116; ++y)
        for (std::size_t x = 12; x < 116; ++x)
            worst = std::max(worst, std::abs(wrap_phase(std::arg(f.at(x, y)) - g(double(x), double(y)))));
    CHECK(worst < 0.05);
}

TEST_CASE("demodulate: off-bin carrier uses modulation and still recovers phase") {
    auto g = [](double x, double y) { return 1.5 * std::exp(-((x - 64) * (x - 64) + (y - 64) * (y - 64)) / (2 * 20.0 * 20.0)); };
    const auto img = fringe_image(128, 0.13, 0.07, g);
    const auto res = demodulate(img, {0.13, 0.07, 0.06});
    CHECK(res.removal == CarrierRemoval::Modulation);
    double worst = 0.0;
    for (std::size_t y = 24; y < 104; ++y)
        for (std::size_t x = 24; x < 104; ++x)
            worst = std::max(worst, std::abs(wrap_phase(std::arg(res.field.at(x, y)) - g(double(x), double(y)))));
    CHECK(worst < 0.05);
}

TEST_CASE("demodulate: global phase offset rotates the field") {
    // Periodic and band-limited to well inside the mask, so the filter is exact to ~1e-8.
    auto g = [](double x, double y) { return 0.6 * std::sin(2 * kPi * x / 64.0) + 0.4 * std::cos(2 * kPi * y / 64.0); };
    const double c = 0.9;
    const auto a = demodulate(fringe_image(64, 0.25, 0.0, g), {0.25, 0.0, 0.1}).field;
    const auto b = demodulate(fringe_image(64, 0.25, 0.0, [&](double x, double y) { return g(x, y) + c; }), {0.25, 0.0, 0.1}).field;
    double worst = 0.0;
    for (std::size_t y = 8; y < 56; ++y)
        for (std::size_t x = 8; x < 56; ++x) worst = std::max(worst, std::abs(wrap_phase(std::arg(b.at(x, y) / a.at(x, y)) - c)));
    CHECK(worst < 1e-6);
}
