#include "fringe/unwrap2d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

namespace fringe::unwrap {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

struct Edge {
    double score;
    std::uint32_t index;  // 2 * pixel + (0: right neighbour, 1: lower neighbour)
};

}  // namespace

Grid<double> reliability(const PhaseMap& wrapped) {
    const std::size_t w = wrapped.width;
    const std::size_t h = wrapped.height;
    Grid<double> rel(w, h);
    auto at = [&](std::ptrdiff_t x, std::ptrdiff_t y) {
        x = std::clamp<std::ptrdiff_t>(x, 0, static_cast<std::ptrdiff_t>(w) - 1);
        y = std::clamp<std::ptrdiff_t>(y, 0, static_cast<std::ptrdiff_t>(h) - 1);
        return wrapped.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
    };
    for (std::size_t yy = 0; yy < h; ++yy) {
        for (std::size_t xx = 0; xx < w; ++xx) {
            const auto x = static_cast<std::ptrdiff_t>(xx);
            const auto y = static_cast<std::ptrdiff_t>(yy);
            const double c = at(x, y);
            auto second = [&](double before, double after) {
                return wrap_phase(before - c) - wrap_phase(c - after);
            };
            const double hd = second(at(x - 1, y), at(x + 1, y));
            const double vd = second(at(x, y - 1), at(x, y + 1));
            const double d1 = second(at(x - 1, y - 1), at(x + 1, y + 1));
            const double d2 = second(at(x - 1, y + 1), at(x + 1, y - 1));
            const double d = std::sqrt(hd * hd + vd * vd + d1 * d1 + d2 * d2);
            rel.at(xx, yy) = 1.0 / std::max(d, 1e-300);
        }
    }
    return rel;
}

PhaseMap unwrap(const PhaseMap& wrapped) {
    if (wrapped.empty()) throw Error(Errc::EmptyInput, "empty phase map");
    if (wrapped.kind != PhaseKind::Wrapped) throw Error(Errc::InvalidConfig, "unwrap expects a wrapped phase map");
    const std::size_t w = wrapped.width;
    const std::size_t h = wrapped.height;
    const std::size_t n = w * h;
    const Grid<double> rel = reliability(wrapped);

    std::vector<Edge> edges;
    edges.reserve(2 * n);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const std::size_t i = y * w + x;
            if (x + 1 < w) edges.push_back({rel.data[i] + rel.data[i + 1], static_cast<std::uint32_t>(2 * i)});
            if (y + 1 < h) edges.push_back({rel.data[i] + rel.data[i + w], static_cast<std::uint32_t>(2 * i + 1)});
        }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.score != b.score ? a.score > b.score : a.index < b.index;
    });

    std::vector<std::uint32_t> group(n);
    std::iota(group.begin(), group.end(), 0u);
    std::vector<std::vector<std::uint32_t>> members(n);
    for (std::uint32_t i = 0; i < n; ++i) members[i] = {i};
    std::vector<std::int64_t> turns(n, 0);

    for (const Edge& e : edges) {
        const std::size_t a = e.index / 2;
        const std::size_t b = (e.index % 2 == 0) ? a + 1 : a + w;
        const std::uint32_t ga = group[a];
        const std::uint32_t gb = group[b];
        if (ga == gb) continue;
        const double ua = wrapped.data[a] + two_pi * static_cast<double>(turns[a]);
        const double ub = wrapped.data[b] + two_pi * static_cast<double>(turns[b]);
        const auto t = static_cast<std::int64_t>(std::round((ua - ub) / two_pi));

        // Move the smaller region; on equal size the region holding b moves.
        std::uint32_t keep = ga, move = gb;
        std::int64_t delta = t;
        if (members[gb].size() > members[ga].size()) {
            keep = gb;
            move = ga;
            delta = -t;
        }
        for (std::uint32_t p : members[move]) {
            turns[p] += delta;
            group[p] = keep;
        }
        members[keep].insert(members[keep].end(), members[move].begin(), members[move].end());
        std::vector<std::uint32_t>().swap(members[move]);
    }

    const auto anchor = static_cast<std::size_t>(std::max_element(rel.data.begin(), rel.data.end()) - rel.data.begin());
    const std::int64_t base = turns[anchor];

    PhaseMap out(w, h, PhaseKind::Unwrapped);
    for (std::size_t i = 0; i < n; ++i)
        out.data[i] = wrapped.data[i] + two_pi * static_cast<double>(turns[i] - base);
    return out;
}

}  // namespace fringe::unwrap
