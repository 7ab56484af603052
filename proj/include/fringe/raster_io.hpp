#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "fringe/types.hpp"

namespace fringe::io {

struct IntensityImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> samples;

    bool operator==(const IntensityImage&) const = default;
};

/// float32 raster, 1 channel (real) or 2 channels (re, im interleaved).
struct FieldRaster {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t channels = 1;
    std::vector<float> samples;
};

/// Binary PGM (P5, maxval 255). Pixel bytes are copied verbatim.
IntensityImage read_pgm(const std::filesystem::path& path);
IntensityImage parse_pgm(const std::string& bytes);
void write_pgm(const std::filesystem::path& path, const IntensityImage& img);

/// `FR1 <w> <h> <c>\n` followed by w*h*c little-endian float32 values.
void write_field(const std::filesystem::path& path, const FieldRaster& field);
FieldRaster read_field(const std::filesystem::path& path);
std::string encode_field(const FieldRaster& field);
FieldRaster decode_field(const std::string& bytes);

FieldRaster to_raster(const ComplexField& field);
FieldRaster to_raster(const Grid<double>& grid);
ComplexField to_complex_field(const FieldRaster& raster);
PhaseMap to_phase_map(const FieldRaster& raster, PhaseKind kind);

using CsvCell = std::variant<std::int64_t, double, std::string>;
using CsvRow = std::vector<CsvCell>;

/// RFC-4180 style, '\n' line endings, floats with 6 significant digits.
std::string format_csv(const std::vector<std::string>& header, const std::vector<CsvRow>& rows);
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<CsvRow>& rows);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace fringe::io
