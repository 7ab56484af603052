#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fringe/smallmat.hpp"
#include "fringe/types.hpp"

namespace fringe::music {

enum class BorderPolicy { Replicate, Skip };

/// Aberth iterates the noise polynomial directly (warm-started along a row by
/// estimate_field); CompanionQR takes eigenvalues of the companion matrix.
/// Both meet the same root residual contract.
enum class RootSolver { Aberth, CompanionQR };

struct EstimatorConfig {
    int half_size = 5;              // L; window is (2L+1) x (2L+1)
    double unit_circle_tol = 1e-6;  // roots with |z| < 1 + tol are candidates
    BorderPolicy border = BorderPolicy::Replicate;
    RootSolver solver = RootSolver::Aberth;

    int window() const noexcept { return 2 * half_size + 1; }
    void validate() const;
};

/// Local plane-wave parameters of one window: phi = alpha + omega_x x + omega_y y,
/// with (x, y) measured from the window centre.
struct LocalEstimate {
    double omega_x = 0.0;
    double omega_y = 0.0;
    double alpha = 0.0;
};

/// M x M window centred on (cx, cy); row index is y, column index is x.
/// Replicate policy clamps out-of-range indices; Skip throws OutOfBounds.
linalg::CMatrix extract_window(const ComplexField& field, std::size_t cx, std::size_t cy, int half_size,
                               BorderPolicy border = BorderPolicy::Replicate);

struct MusicPolynomials {
    linalg::CPolynomial py;  // from left singular vectors, roots near e^{j omega_y}
    linalg::CPolynomial px;  // from right singular vectors, roots near e^{-j omega_x}
};

/// z^(M-1) u(1/conj z)^H C u(z) with C = N N^H for the noise subspace N (singular vectors 2..M).
/// Coefficient of z^(k+M-1) is the sum of C's k-th diagonal (column - row = k).
linalg::CPolynomial noise_polynomial(const linalg::CMatrix& basis, std::size_t first_noise_col);

/// Same polynomial for C = I - s s^H with a unit vector s (the signal direction).
linalg::CPolynomial complement_polynomial(std::span<const cdouble> s);

MusicPolynomials music_polynomials(const linalg::CMatrix& window);

/// Root with the largest modulus among those with |z| < 1 + tol.
/// Ties: smallest arg, then input order. Throws NoInteriorRoot when nothing qualifies.
cdouble select_root(std::span<const cdouble> roots, double unit_circle_tol = 1e-6);

LocalEstimate estimate_pixel(const linalg::CMatrix& window, double unit_circle_tol = 1e-6);
LocalEstimate estimate_pixel(const linalg::CMatrix& window, const EstimatorConfig& cfg);

/// Estimator that reuses the previous window's roots as Aberth starting points.
/// Only the iteration start changes; results agree with a cold start to roundoff.
class WarmEstimator {
public:
    explicit WarmEstimator(const EstimatorConfig& cfg) : cfg_(cfg) {}
    LocalEstimate estimate(const linalg::CMatrix& window);
    void reset();

private:
    std::vector<cdouble> roots_of(const linalg::CPolynomial& p, std::vector<cdouble>& warm);

    EstimatorConfig cfg_;
    std::vector<cdouble> ry_, rx_;
};

struct EstimateDiagnostics {
    std::size_t degenerate_pixels = 0;
    std::size_t skipped_pixels = 0;
    unsigned threads = 1;
};

struct FieldEstimate {
    PhaseMap phase;  // wrapped alpha per pixel
    EstimateDiagnostics diagnostics;
};

/// Per-pixel estimator over the whole field. Pixels are independent, so the result is
/// bitwise identical for every thread count. Degenerate pixels take the alpha of the
/// nearest preceding valid pixel in scan order (or the first valid one after them).
/// Under BorderPolicy::Skip, pixels closer than L to an edge are left at 0.
FieldEstimate estimate_field(const ComplexField& field, const EstimatorConfig& cfg, unsigned threads = 1);

}  // namespace fringe::music
