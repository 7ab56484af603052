#include "fringe/types.hpp"

#include <cmath>
#include <numbers>

namespace fringe {

const char* to_string(Errc code) noexcept {
    switch (code) {
        case Errc::IoFailure: return "IoFailure";
        case Errc::MalformedHeader: return "MalformedHeader";
        case Errc::UnsupportedMaxval: return "UnsupportedMaxval";
        case Errc::TruncatedData: return "TruncatedData";
        case Errc::NonFiniteSample: return "NonFiniteSample";
        case Errc::ArityMismatch: return "ArityMismatch";
        case Errc::CarrierOverlapsDC: return "CarrierOverlapsDC";
        case Errc::CarrierOutOfBand: return "CarrierOutOfBand";
        case Errc::NonFiniteInput: return "NonFiniteInput";
        case Errc::NoConvergence: return "NoConvergence";
        case Errc::DegreeZero: return "DegreeZero";
        case Errc::OutOfBounds: return "OutOfBounds";
        case Errc::NoInteriorRoot: return "NoInteriorRoot";
        case Errc::DegenerateWindow: return "DegenerateWindow";
        case Errc::FieldTooSmall: return "FieldTooSmall";
        case Errc::EmptyInput: return "EmptyInput";
        case Errc::InvalidSpec: return "InvalidSpec";
        case Errc::InvalidConfig: return "InvalidConfig";
        case Errc::WrappedInput: return "WrappedInput";
        case Errc::InvalidGeometry: return "InvalidGeometry";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::UnsortedTimes: return "UnsortedTimes";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

double wrap_phase(double phi) noexcept {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double w = phi - two_pi * std::round(phi / two_pi);
    if (w <= -std::numbers::pi) w += two_pi;
    if (w > std::numbers::pi) w -= two_pi;
    return w;
}

}  // namespace fringe
