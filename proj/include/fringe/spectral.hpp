#pragma once

#include <span>
#include <vector>

#include "fringe/raster_io.hpp"
#include "fringe/types.hpp"

namespace fringe::spectral {

/// In-place 1D DFT of any length (radix-2 when n is a power of two, Bluestein otherwise).
/// Forward is unnormalized; inverse is scaled by 1/n.
void fft(std::span<cdouble> data, bool inverse = false);

ComplexField fft2(const ComplexField& field);
ComplexField ifft2(const ComplexField& spectrum);

/// Spatial carrier and bandpass geometry, all in cycles/pixel.
struct CarrierSpec {
    double fx = 0.0;
    double fy = 0.0;
    double radius = 0.0;
};

enum class CarrierRemoval { BinShift, Modulation };

struct DemodulationResult {
    ComplexField field;
    CarrierRemoval removal = CarrierRemoval::BinShift;
};

/// Throws CarrierOverlapsDC / CarrierOutOfBand for an unusable carrier geometry.
void validate_carrier(const CarrierSpec& carrier);

/// Isolates the +1 lobe at (fx, fy) with a circular hard mask and moves it to baseband.
/// Bin-aligned carriers are shifted in the spectrum; others are removed by pointwise
/// modulation with exp(-j2pi(fx x + fy y)) before filtering.
DemodulationResult demodulate(const io::IntensityImage& img, const CarrierSpec& carrier);
DemodulationResult demodulate(const Grid<double>& intensity, const CarrierSpec& carrier);

ComplexField demodulate_to_analytic(const io::IntensityImage& img, const CarrierSpec& carrier);

}  // namespace fringe::spectral
