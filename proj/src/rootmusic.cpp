#include "fringe/rootmusic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fringe::music {

using linalg::CMatrix;
using linalg::CPolynomial;

void EstimatorConfig::validate() const {
    if (half_size < 1) throw Error(Errc::InvalidConfig, "window half-size L must be >= 1");
    if (!(unit_circle_tol > 0.0 && unit_circle_tol < 0.1))
        throw Error(Errc::InvalidConfig, "unit_circle_tol must lie in (0, 0.1)");
}

CMatrix extract_window(const ComplexField& field, std::size_t cx, std::size_t cy, int half_size, BorderPolicy border) {
    if (field.empty()) throw Error(Errc::EmptyInput, "empty field");
    if (half_size < 1) throw Error(Errc::InvalidConfig, "window half-size L must be >= 1");
    const auto L = static_cast<std::ptrdiff_t>(half_size);
    const auto w = static_cast<std::ptrdiff_t>(field.width);
    const auto h = static_cast<std::ptrdiff_t>(field.height);
    const auto x0 = static_cast<std::ptrdiff_t>(cx);
    const auto y0 = static_cast<std::ptrdiff_t>(cy);
    if (border == BorderPolicy::Skip && (x0 < L || y0 < L || x0 + L >= w || y0 + L >= h))
        throw Error(Errc::OutOfBounds, "window exceeds field under skip policy");
    const auto m = static_cast<std::size_t>(2 * L + 1);
    CMatrix win(m, m);
    for (std::ptrdiff_t dy = -L; dy <= L; ++dy) {
        const std::ptrdiff_t yy = std::clamp<std::ptrdiff_t>(y0 + dy, 0, h - 1);
        for (std::ptrdiff_t dx = -L; dx <= L; ++dx) {
            const std::ptrdiff_t xx = std::clamp<std::ptrdiff_t>(x0 + dx, 0, w - 1);
            win(static_cast<std::size_t>(dy + L), static_cast<std::size_t>(dx + L)) =
                field.at(static_cast<std::size_t>(xx), static_cast<std::size_t>(yy));
        }
    }
    return win;
}

CPolynomial noise_polynomial(const CMatrix& basis, std::size_t first_noise_col) {
    const std::size_t m = basis.rows();
    CPolynomial p;
    p.coeffs.assign(2 * m - 1, cdouble{});
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
            cdouble crc = 0.0;
            for (std::size_t k = first_noise_col; k < basis.cols(); ++k) crc += basis(r, k) * std::conj(basis(c, k));
            p.coeffs[c + m - 1 - r] += crc;
        }
    }
    return p;
}

CPolynomial complement_polynomial(std::span<const cdouble> s) {
    const std::size_t m = s.size();
    CPolynomial p;
    p.coeffs.assign(2 * m - 1, cdouble{});
    p.coeffs[m - 1] = static_cast<double>(m);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) p.coeffs[c + m - 1 - r] -= s[r] * std::conj(s[c]);
    return p;
}

MusicPolynomials music_polynomials(const CMatrix& window) {
    if (window.rows() != window.cols() || window.rows() < 3)
        throw Error(Errc::DimensionMismatch, "window must be square with M >= 3");
    // U and V are unitary, so the noise projectors are I - u1 u1^H and I - v1 v1^H.
    const auto dom = linalg::dominant_singular_pair(window);
    return {complement_polynomial(dom.u), complement_polynomial(dom.v)};
}

cdouble select_root(std::span<const cdouble> roots, double unit_circle_tol) {
    const double limit = 1.0 + unit_circle_tol;
    std::ptrdiff_t best = -1;
    double best_mag = -1.0;
    double best_arg = 0.0;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const double mag = std::abs(roots[i]);
        if (!(mag < limit)) continue;
        const double arg = wrap_phase(std::arg(roots[i]));
        if (mag > best_mag || (mag == best_mag && arg < best_arg)) {
            best = static_cast<std::ptrdiff_t>(i);
            best_mag = mag;
            best_arg = arg;
        }
    }
    if (best < 0) throw Error(Errc::NoInteriorRoot, "no root inside the unit-circle band");
    return roots[static_cast<std::size_t>(best)];
}

namespace {

double window_alpha(const CMatrix& window, double omega_x, double omega_y) {
    const std::size_t m = window.rows();
    const auto L = static_cast<double>(m / 2);
    cdouble acc = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        const double y = static_cast<double>(r) - L;
        for (std::size_t c = 0; c < m; ++c) {
            const double x = static_cast<double>(c) - L;
            acc += window(r, c) * std::polar(1.0, -(omega_x * x + omega_y * y));
        }
    }
    return wrap_phase(std::arg(acc));
}

}  // namespace

void WarmEstimator::reset() {
    ry_.clear();
    rx_.clear();
}

std::vector<cdouble> WarmEstimator::roots_of(const CPolynomial& p, std::vector<cdouble>& warm) {
    if (cfg_.solver == RootSolver::CompanionQR) return linalg::companion_roots(p);
    std::vector<cdouble> roots;
    if (!warm.empty() && linalg::aberth_roots(p, roots, warm)) {
        warm = roots;
        return roots;
    }
    if (!linalg::aberth_roots(p, roots)) roots = linalg::companion_roots(p);
    warm = roots;
    return roots;
}

LocalEstimate WarmEstimator::estimate(const CMatrix& window) {
    if (window.rows() != window.cols() || window.rows() < 3)
        throw Error(Errc::DimensionMismatch, "window must be square with M >= 3");
    LocalEstimate est;
    try {
        const auto polys = music_polynomials(window);
        const cdouble zy = select_root(roots_of(polys.py, ry_), cfg_.unit_circle_tol);
        const cdouble zx = select_root(roots_of(polys.px, rx_), cfg_.unit_circle_tol);
        est.omega_y = std::arg(zy);
        est.omega_x = -std::arg(zx);
    } catch (const Error& e) {
        if (e.code() == Errc::DimensionMismatch) throw;
        reset();
        throw Error(Errc::DegenerateWindow, e.what());
    }
    est.alpha = window_alpha(window, est.omega_x, est.omega_y);
    return est;
}

LocalEstimate estimate_pixel(const CMatrix& window, const EstimatorConfig& cfg) {
    return WarmEstimator(cfg).estimate(window);
}

LocalEstimate estimate_pixel(const CMatrix& window, double unit_circle_tol) {
    EstimatorConfig cfg;
    cfg.unit_circle_tol = unit_circle_tol;
    return estimate_pixel(window, cfg);
}

FieldEstimate estimate_field(const ComplexField& field, const EstimatorConfig& cfg, unsigned threads) {
    cfg.validate();
    const auto m = static_cast<std::size_t>(cfg.window());
    if (field.width < m || field.height < m)
        throw Error(Errc::FieldTooSmall, "field smaller than one (2L+1)x(2L+1) window");
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

    const std::size_t w = field.width;
    const std::size_t h = field.height;
    const auto L = static_cast<std::size_t>(cfg.half_size);
    enum : std::uint8_t { kOk, kDegenerate, kSkipped };

    FieldEstimate out;
    out.phase = PhaseMap(w, h, PhaseKind::Wrapped);
    std::vector<std::uint8_t> status(w * h, kOk);

    std::atomic<std::size_t> next_row{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        try {
            // A row is the unit of work and the warm start never crosses rows, so the
            // result does not depend on how rows are spread over threads.
            for (std::size_t y = next_row++; y < h; y = next_row++) {
                WarmEstimator solver(cfg);
                for (std::size_t x = 0; x < w; ++x) {
                    const std::size_t idx = y * w + x;
                    if (cfg.border == BorderPolicy::Skip && (x < L || y < L || x + L >= w || y + L >= h)) {
                        status[idx] = kSkipped;
                        continue;
                    }
                    try {
                        const auto win = extract_window(field, x, y, cfg.half_size, BorderPolicy::Replicate);
                        out.phase.data[idx] = solver.estimate(win).alpha;
                    } catch (const Error& e) {
                        if (e.code() != Errc::DegenerateWindow) throw;
                        status[idx] = kDegenerate;
                    }
                }
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next_row = h;
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    // Sequential fill keeps the result independent of scheduling.
    std::ptrdiff_t last_valid = -1;
    std::ptrdiff_t first_valid = -1;
    for (std::size_t i = 0; i < status.size(); ++i)
        if (status[i] == kOk) {
            first_valid = static_cast<std::ptrdiff_t>(i);
            break;
        }
    for (std::size_t i = 0; i < status.size(); ++i) {
        switch (status[i]) {
            case kOk: last_valid = static_cast<std::ptrdiff_t>(i); break;
            case kSkipped: ++out.diagnostics.skipped_pixels; break;
            case kDegenerate: {
                ++out.diagnostics.degenerate_pixels;
                const std::ptrdiff_t src = last_valid >= 0 ? last_valid : first_valid;
                out.phase.data[i] = src >= 0 ? out.phase.data[static_cast<std::size_t>(src)] : 0.0;
                break;
            }
        }
    }
    out.diagnostics.threads = threads;
    return out;
}

}  // namespace fringe::music
