#include "fringe/diffusion.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace fringe::diffusion {

void OpticalGeometry::validate() const {
    if (!(f_x > 0.0) || !(n0 >= 1.0) || !(L_cell > 0.0) || !(mu > 0.0) || !(pixel_pitch > 0.0) ||
        !std::isfinite(f_x * n0 * L_cell * mu * pixel_pitch))
        throw Error(Errc::InvalidGeometry, "need f_x > 0, n0 >= 1, L_cell > 0, mu > 0, pixel_pitch > 0");
}

double OpticalGeometry::gradient_per_radian() const { return n0 / (2.0 * mu * f_x * L_cell * L_cell); }

OpticalGeometry parse_geometry(const std::string& text) {
    std::map<std::string, double> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(Errc::InvalidGeometry, "line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        try {
            std::size_t used = 0;
            const double v = std::stod(val, &used);
            if (used != val.size()) throw std::invalid_argument(val);
            kv[key] = v;
        } catch (const std::exception&) {
            throw Error(Errc::InvalidGeometry, "key '" + key + "': not a number: " + val);
        }
    }
    auto get = [&](const char* key) {
        const auto it = kv.find(key);
        if (it == kv.end()) throw Error(Errc::InvalidGeometry, std::string("missing geometry key '") + key + "'");
        return it->second;
    };
    OpticalGeometry g;
    g.f_x = get("f_x");
    g.n0 = get("n0");
    g.L_cell = get("L_cell");
    g.mu = get("mu");
    g.pixel_pitch = get("pixel_pitch");
    g.validate();
    return g;
}

io::FieldRaster index_gradient(const PhaseMap& phase, const OpticalGeometry& geom) {
    if (phase.kind != PhaseKind::Unwrapped) throw Error(Errc::WrappedInput, "index gradient needs an unwrapped phase map");
    geom.validate();
    const double k = geom.gradient_per_radian();
    Grid<double> scaled(phase.width, phase.height);
    for (std::size_t i = 0; i < phase.size(); ++i) scaled.data[i] = k * phase.data[i];
    return io::to_raster(scaled);
}

std::vector<double> row_profile(const Grid<double>& map) {
    std::vector<double> prof(map.height, 0.0);
    for (std::size_t y = 0; y < map.height; ++y) {
        double s = 0.0;
        for (std::size_t x = 0; x < map.width; ++x) s += map.at(x, y);
        prof[y] = map.width ? s / static_cast<double>(map.width) : 0.0;
    }
    return prof;
}

SeriesOutput stack_series(const std::vector<Frame>& frames, bool subtract_first) {
    if (frames.empty()) throw Error(Errc::EmptyInput, "no frames");
    const std::size_t w = frames.front().phase.width;
    const std::size_t h = frames.front().phase.height;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (frames[i].phase.width != w || frames[i].phase.height != h)
            throw Error(Errc::DimensionMismatch, "frame " + std::to_string(i) + " has a different size");
        if (i > 0 && !(frames[i].time_s > frames[i - 1].time_s))
            throw Error(Errc::UnsortedTimes, "frame times must be strictly increasing");
    }

    SeriesOutput out;
    out.stack = io::FieldRaster{w, h * frames.size(), 1, {}};
    out.stack.samples.reserve(w * h * frames.size());
    out.csv_header.push_back("row");
    for (const auto& f : frames) {
        Grid<double> map = f.phase;
        if (subtract_first)
            for (std::size_t i = 0; i < map.size(); ++i) map.data[i] -= frames.front().phase.data[i];
        for (double v : map.data) out.stack.samples.push_back(static_cast<float>(v));
        out.profiles.push_back(row_profile(map));
        char name[64];
        std::snprintf(name, sizeof name, "t_%gs", f.time_s);
        out.csv_header.emplace_back(name);
    }
    for (std::size_t y = 0; y < h; ++y) {
        io::CsvRow row{static_cast<std::int64_t>(y)};
        for (const auto& p : out.profiles) row.emplace_back(p[y]);
        out.csv_rows.push_back(std::move(row));
    }
    return out;
}

}  // namespace fringe::diffusion
