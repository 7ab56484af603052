#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fringe/raster_io.hpp"
#include "fringe/types.hpp"

namespace fringe::diffusion {

struct OpticalGeometry {
    double f_x = 0.0;          // fringe frequency, cycles/m
    double n0 = 1.0;           // reference refractive index
    double L_cell = 0.0;       // cell length along the optical axis, m
    double mu = 1.0;           // imaging magnification
    double pixel_pitch = 0.0;  // m/pixel
    void validate() const;

    /// dn/dx per radian of phase: n0 / (2 mu f_x L_cell^2).
    double gradient_per_radian() const;
};

/// Flat `key = value` text; `#` starts a comment. Missing keys throw InvalidGeometry naming the key.
OpticalGeometry parse_geometry(const std::string& text);

/// Pointwise K * phi, units 1/m.
io::FieldRaster index_gradient(const PhaseMap& phase, const OpticalGeometry& geom);

struct Frame {
    double time_s = 0.0;
    PhaseMap phase;
};

struct SeriesOutput {
    io::FieldRaster stack;                    // frames concatenated along y: width W, height H * T
    std::vector<std::vector<double>> profiles;  // per frame, row-wise mean over columns
    std::vector<std::string> csv_header;
    std::vector<io::CsvRow> csv_rows;         // row, then one column per frame
};

/// Times must be strictly increasing and all frames the same size.
/// With `subtract_first`, frame 0 is subtracted from every frame before profiling.
SeriesOutput stack_series(const std::vector<Frame>& frames, bool subtract_first = false);

/// Column-averaged profile: mean over x for each row.
std::vector<double> row_profile(const Grid<double>& map);

}  // namespace fringe::diffusion
