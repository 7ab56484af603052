#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fringe {

using cdouble = std::complex<double>;

enum class Errc {
    IoFailure,
    MalformedHeader,
    UnsupportedMaxval,
    TruncatedData,
    NonFiniteSample,
    ArityMismatch,
    CarrierOverlapsDC,
    CarrierOutOfBand,
    NonFiniteInput,
    NoConvergence,
    DegreeZero,
    OutOfBounds,
    NoInteriorRoot,
    DegenerateWindow,
    FieldTooSmall,
    EmptyInput,
    InvalidSpec,
    InvalidConfig,
    WrappedInput,
    InvalidGeometry,
    DimensionMismatch,
    UnsortedTimes,
};

const char* to_string(Errc code) noexcept;

/// Library-wide exception; `code()` identifies the failure class.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what);
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Row-major 2D grid, y is the slow axis.
template <typename T>
struct Grid {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<T> data;

    Grid() = default;
    Grid(std::size_t w, std::size_t h, T fill = T{}) : width(w), height(h), data(w * h, fill) {}

    std::size_t size() const noexcept { return data.size(); }
    bool empty() const noexcept { return data.empty(); }

    T& at(std::size_t x, std::size_t y) { return data[y * width + x]; }
    const T& at(std::size_t x, std::size_t y) const { return data[y * width + x]; }

    bool operator==(const Grid&) const = default;
};

/// Analytic fringe signal and its spectral intermediates.
using ComplexField = Grid<cdouble>;

enum class PhaseKind { Wrapped, Unwrapped };

struct PhaseMap : Grid<double> {
    PhaseKind kind = PhaseKind::Wrapped;

    PhaseMap() = default;
    PhaseMap(std::size_t w, std::size_t h, PhaseKind k, double fill = 0.0) : Grid<double>(w, h, fill), kind(k) {}
};

/// Wrap to (-pi, pi].
double wrap_phase(double phi) noexcept;

}  // namespace fringe
