#include "fringe/raster_io.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

namespace fringe::io {

namespace {

class HeaderReader {
public:
    explicit HeaderReader(const std::string& bytes) : bytes_(bytes) {}

    // PGM allows '#' comments anywhere whitespace is allowed in the header.
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const char c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::size_t read_uint(const char* what) {
        skip_space_and_comments();
        const std::size_t start = pos_;
        std::size_t value = 0;
        while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
            value = value * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
            if (value > (std::size_t{1} << 40)) throw Error(Errc::MalformedHeader, std::string(what) + " too large");
            ++pos_;
        }
        if (pos_ == start) throw Error(Errc::MalformedHeader, std::string("expected ") + what);
        return value;
    }

    void expect_single_space() {
        if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_])))
            throw Error(Errc::MalformedHeader, "missing whitespace after header");
        ++pos_;
    }

    std::size_t pos() const { return pos_; }
    void advance(std::size_t n) { pos_ += n; }

private:
    const std::string& bytes_;
    std::size_t pos_ = 0;
};

void check_finite(const FieldRaster& f) {
    for (float v : f.samples)
        if (!std::isfinite(v)) throw Error(Errc::NonFiniteSample, "raster contains NaN or Inf");
}

void append_le32(std::string& out, float v) {
    const auto bits = std::bit_cast<std::uint32_t>(v);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFFu));
}

float load_le32(const char* p) {
    std::uint32_t bits = 0;
    for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return std::bit_cast<float>(bits);
}

std::string quote_csv(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_cell(const CsvCell& cell) {
    if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&cell)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6g", *d);
        return buf;
    }
    return quote_csv(std::get<std::string>(cell));
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoFailure, "cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(Errc::IoFailure, "read failed: " + path.string());
    return bytes;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoFailure, "cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error(Errc::IoFailure, "write failed: " + path.string());
}

IntensityImage parse_pgm(const std::string& bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
        throw Error(Errc::MalformedHeader, "not a binary PGM (P5)");
    HeaderReader hdr(bytes);
    hdr.advance(2);
    IntensityImage img;
    img.width = hdr.read_uint("width");
    img.height = hdr.read_uint("height");
    const std::size_t maxval = hdr.read_uint("maxval");
    hdr.expect_single_space();
    if (img.width == 0 || img.height == 0) throw Error(Errc::MalformedHeader, "zero image dimension");
    if (maxval != 255) throw Error(Errc::UnsupportedMaxval, "maxval " + std::to_string(maxval) + " (only 255 supported)");
    const std::size_t n = img.width * img.height;
    if (bytes.size() - hdr.pos() < n)
        throw Error(Errc::TruncatedData, "expected " + std::to_string(n) + " bytes, got " +
                                             std::to_string(bytes.size() - hdr.pos()));
    img.samples.assign(bytes.begin() + static_cast<std::ptrdiff_t>(hdr.pos()),
                       bytes.begin() + static_cast<std::ptrdiff_t>(hdr.pos() + n));
    return img;
}

IntensityImage read_pgm(const std::filesystem::path& path) { return parse_pgm(read_file(path)); }

void write_pgm(const std::filesystem::path& path, const IntensityImage& img) {
    if (img.samples.size() != img.width * img.height) throw Error(Errc::DimensionMismatch, "pgm sample count");
    std::string bytes = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    bytes.append(img.samples.begin(), img.samples.end());
    write_file(path, bytes);
}

std::string encode_field(const FieldRaster& field) {
    if (field.channels != 1 && field.channels != 2) throw Error(Errc::MalformedHeader, "channels must be 1 or 2");
    if (field.samples.size() != field.width * field.height * field.channels)
        throw Error(Errc::DimensionMismatch, "sample count does not match header");
    check_finite(field);
    std::string out = "FR1 " + std::to_string(field.width) + " " + std::to_string(field.height) + " " +
                      std::to_string(field.channels) + "\n";
    out.reserve(out.size() + 4 * field.samples.size());
    for (float v : field.samples) append_le32(out, v);
    return out;
}

FieldRaster decode_field(const std::string& bytes) {
    const auto nl = bytes.find('\n');
    if (nl == std::string::npos || nl > 80) throw Error(Errc::MalformedHeader, "missing FR1 header line");
    std::istringstream hdr(bytes.substr(0, nl));
    std::string magic;
    FieldRaster f;
    if (!(hdr >> magic >> f.width >> f.height >> f.channels) || magic != "FR1")
        throw Error(Errc::MalformedHeader, "bad FR1 header");
    std::string rest;
    if (hdr >> rest) throw Error(Errc::MalformedHeader, "trailing tokens in FR1 header");
    if (f.width == 0 || f.height == 0 || (f.channels != 1 && f.channels != 2))
        throw Error(Errc::MalformedHeader, "bad FR1 dimensions");
    const std::size_t n = f.width * f.height * f.channels;
    if (bytes.size() - (nl + 1) != 4 * n)
        throw Error(Errc::TruncatedData, "FR1 payload is " + std::to_string(bytes.size() - nl - 1) + " bytes, expected " +
                                             std::to_string(4 * n));
    f.samples.resize(n);
    const char* p = bytes.data() + nl + 1;
    for (std::size_t i = 0; i < n; ++i) f.samples[i] = load_le32(p + 4 * i);
    check_finite(f);
    return f;
}

void write_field(const std::filesystem::path& path, const FieldRaster& field) { write_file(path, encode_field(field)); }

FieldRaster read_field(const std::filesystem::path& path) { return decode_field(read_file(path)); }

FieldRaster to_raster(const ComplexField& field) {
    FieldRaster r{field.width, field.height, 2, {}};
    r.samples.reserve(2 * field.size());
    for (const auto& v : field.data) {
        r.samples.push_back(static_cast<float>(v.real()));
        r.samples.push_back(static_cast<float>(v.imag()));
    }
    return r;
}

FieldRaster to_raster(const Grid<double>& grid) {
    FieldRaster r{grid.width, grid.height, 1, {}};
    r.samples.reserve(grid.size());
    for (double v : grid.data) r.samples.push_back(static_cast<float>(v));
    return r;
}

ComplexField to_complex_field(const FieldRaster& raster) {
    ComplexField f(raster.width, raster.height);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (raster.channels == 2)
            f.data[i] = {raster.samples[2 * i], raster.samples[2 * i + 1]};
        else
            f.data[i] = {raster.samples[i], 0.0};
    }
    return f;
}

PhaseMap to_phase_map(const FieldRaster& raster, PhaseKind kind) {
    if (raster.channels != 1) throw Error(Errc::DimensionMismatch, "phase raster must have 1 channel");
    PhaseMap m(raster.width, raster.height, kind);
    for (std::size_t i = 0; i < m.size(); ++i) m.data[i] = raster.samples[i];
    return m;
}

std::string format_csv(const std::vector<std::string>& header, const std::vector<CsvRow>& rows) {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + quote_csv(header[i]);
    out += '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw Error(Errc::ArityMismatch, "row has " + std::to_string(row.size()) + " cells, header has " +
                                                 std::to_string(header.size()));
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_cell(row[i]);
        out += '\n';
    }
    return out;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<CsvRow>& rows) {
    write_file(path, format_csv(header, rows));
}

}  // namespace fringe::io
