#include <doctest.h>

#include <cmath>
#include <string>

#include "fringe/diffusion.hpp"
#include "fringe/synth.hpp"

using namespace fringe;
using namespace fringe::diffusion;

namespace {

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return Errc::IoFailure;
}

std::string message_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

OpticalGeometry water_cell() { return {1e4, 1.333, 0.01, 1.0, 1e-5}; }

PhaseMap constant_phase(std::size_t w, std::size_t h, double v) { return PhaseMap(w, h, PhaseKind::Unwrapped, v); }

}  // namespace

TEST_CASE("index gradient: worked example") {
    const auto g = water_cell();
    CHECK(g.gradient_per_radian() == doctest::Approx(0.6665).epsilon(1e-12));
    const auto r = index_gradient(constant_phase(3, 2, 1.0), g);
    CHECK(r.channels == 1);
    for (float v : r.samples) CHECK(v == doctest::Approx(0.6665).epsilon(1e-6));
}

TEST_CASE("index gradient: zero phase gives zero map") {
    const auto r = index_gradient(constant_phase(4, 4, 0.0), water_cell());
    for (float v : r.samples) CHECK(v == 0.0f);
}

TEST_CASE("index gradient: linear in phase") {
    PhaseMap a(5, 3, PhaseKind::Unwrapped), b(5, 3, PhaseKind::Unwrapped), s(5, 3, PhaseKind::Unwrapped);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a.data[i] = 0.5 * double(i);
        b.data[i] = -0.25 * double(i * i) / 7.0;
        s.data[i] = 2.0 * a.data[i] + 3.0 * b.data[i];
    }
    const auto g = water_cell();
    const auto ra = index_gradient(a, g), rb = index_gradient(b, g), rs = index_gradient(s, g);
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(double(rs.samples[i]) == doctest::Approx(2.0 * ra.samples[i] + 3.0 * rb.samples[i]).epsilon(1e-6));
}

TEST_CASE("gradient_per_radian algebra") {
    const auto base = water_cell();
    const double k = base.gradient_per_radian();
    auto with = [&](auto&& edit) {
        auto g = base;
        edit(g);
        return g.gradient_per_radian();
    };
    CHECK(with([](auto& g) { g.n0 *= 1.5; }) == doctest::Approx(1.5 * k));
    CHECK(with([](auto& g) { g.mu *= 2.0; }) == doctest::Approx(k / 2.0));
    CHECK(with([](auto& g) { g.f_x *= 4.0; }) == doctest::Approx(k / 4.0));
    CHECK(with([](auto& g) { g.L_cell *= 2.0; }) == doctest::Approx(k / 4.0));
    CHECK(with([](auto& g) { g.pixel_pitch *= 3.0; }) == k);
}

TEST_CASE("index gradient: errors") {
    CHECK(code_of([] { index_gradient(PhaseMap(2, 2, PhaseKind::Wrapped), water_cell()); }) == Errc::WrappedInput);
    auto g = water_cell();
    g.mu = 0.0;
    CHECK(code_of([&] { index_gradient(constant_phase(2, 2, 1.0), g); }) == Errc::InvalidGeometry);
    g = water_cell();
    g.n0 = 0.9;
    CHECK(code_of([&] { g.validate(); }) == Errc::InvalidGeometry);
}

TEST_CASE("parse_geometry") {
    const auto g = parse_geometry("# cell\nf_x = 1e4\nn0=1.333  # water\nL_cell = 0.01\nmu = 1\npixel_pitch = 1e-5\n\n");
    CHECK(g.f_x == 1e4);
    CHECK(g.n0 == 1.333);
    CHECK(g.L_cell == 0.01);
    CHECK(g.mu == 1.0);
    CHECK(g.pixel_pitch == 1e-5);

    const std::string no_fx = "n0 = 1.333\nL_cell = 0.01\nmu = 1\npixel_pitch = 1e-5\n";
    CHECK(code_of([&] { parse_geometry(no_fx); }) == Errc::InvalidGeometry);
    CHECK(message_of([&] { parse_geometry(no_fx); }).find("f_x") != std::string::npos);
    CHECK(code_of([] { parse_geometry("f_x = abc\n"); }) == Errc::InvalidGeometry);
    CHECK(code_of([] { parse_geometry("f_x 1e4\n"); }) == Errc::InvalidGeometry);
}

TEST_CASE("row_profile: mean over columns") {
    Grid<double> m(4, 3);
    for (std::size_t y = 0; y < 3; ++y)
        for (std::size_t x = 0; x < 4; ++x) m.at(x, y) = double(y * 10 + x);
    const auto p = row_profile(m);
    REQUIRE(p.size() == 3);
    CHECK(p[0] == 1.5);
    CHECK(p[1] == 11.5);
    CHECK(p[2] == 21.5);
}

TEST_CASE("stack_series: single frame") {
    PhaseMap f(3, 2, PhaseKind::Unwrapped);
    for (std::size_t i = 0; i < f.size(); ++i) f.data[i] = double(i);
    const auto s = stack_series({{120.0, f}});
    CHECK(s.stack.width == 3);
    CHECK(s.stack.height == 2);
    CHECK(s.csv_header == std::vector<std::string>{"row", "t_120s"});
    REQUIRE(s.csv_rows.size() == 2);
    CHECK(std::get<double>(s.csv_rows[1][1]) == 4.0);
}

TEST_CASE("stack_series: identical frames and subtract_first") {
    const auto f = constant_phase(4, 4, 2.5);
    const auto s = stack_series({{1.0, f}, {2.0, f}, {3.0, f}});
    CHECK(s.stack.height == 12);
    CHECK(s.profiles[0] == s.profiles[2]);
    const auto d = stack_series({{1.0, f}, {2.0, f}, {3.0, f}}, true);
    for (float v : d.stack.samples) CHECK(v == 0.0f);
}

TEST_CASE("stack_series: Fick frames decay like 1/sqrt(t)") {
    std::vector<Frame> frames;
    for (double t : {120.0, 480.0, 1920.0}) {
        synth::PhantomSpec spec;
        spec.kind = synth::PhantomKind::FickProfile;
        spec.size = 33;
        spec.amplitude = 5.0;
        spec.diffusion.t = t;
        frames.push_back({t, synth::phantom_phase(spec)});
    }
    const auto s = stack_series(frames);
    CHECK(s.profiles[0][16] == doctest::Approx(5.0));
    CHECK(s.profiles[1][16] == doctest::Approx(2.5));
    CHECK(s.profiles[2][16] == doctest::Approx(1.25));
    // The profile widens: the off-centre fraction of the peak grows with t.
    CHECK(s.profiles[1][4] / s.profiles[1][16] > s.profiles[0][4] / s.profiles[0][16]);
}

TEST_CASE("stack_series: errors") {
    const auto a = constant_phase(4, 4, 1.0);
    const auto b = constant_phase(4, 5, 1.0);
    CHECK(code_of([] { stack_series({}); }) == Errc::EmptyInput);
    CHECK(code_of([&] { stack_series({{1.0, a}, {2.0, b}}); }) == Errc::DimensionMismatch);
    CHECK(code_of([&] { stack_series({{2.0, a}, {1.0, a}}); }) == Errc::UnsortedTimes);
    CHECK(code_of([&] { stack_series({{1.0, a}, {1.0, a}}); }) == Errc::UnsortedTimes);
}
