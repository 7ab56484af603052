#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fringe/types.hpp"

namespace fringe::linalg {

/// Dense complex matrix, row-major.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static CMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    cdouble& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cdouble& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<cdouble> data() noexcept { return data_; }
    std::span<const cdouble> data() const noexcept { return data_; }

    CMatrix adjoint() const;
    double frobenius_norm() const;

    friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
    friend CMatrix operator-(const CMatrix& a, const CMatrix& b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cdouble> data_;
};

struct SvdResult {
    CMatrix u;                  // M x M unitary, left singular vectors in columns
    std::vector<double> s;      // descending
    CMatrix vh;                 // M x M, rows are conjugated right singular vectors
    int sweeps = 0;
};

inline constexpr int kMaxJacobiSweeps = 100;

/// One-sided (Hestenes) Jacobi SVD of a square matrix, 2 <= M <= 64.
/// Columns of U are gauge-fixed so their largest-magnitude entry is real positive.
/// Left vectors belonging to numerically zero singular values are completed to an
/// orthonormal basis, so U is always unitary.
SvdResult svd(const CMatrix& m);

/// Largest singular value with its left and right vectors, from the same Jacobi
/// iteration as svd() but without accumulating V (v = A^H u / sigma1).
/// sigma2 is the next singular value. Throws NoConvergence for a numerically zero matrix.
struct DominantPair {
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    std::vector<cdouble> u;
    std::vector<cdouble> v;
    int sweeps = 0;
};
DominantPair dominant_singular_pair(const CMatrix& m);

/// Coefficients in ascending degree order.
struct CPolynomial {
    std::vector<cdouble> coeffs;

    std::size_t degree() const;       // after trimming zero high-order terms
    cdouble operator()(cdouble z) const;
    void trim();
};

/// Scaled backward residual |p(z)| / sum_k |c_k| max(1,|z|)^k.
double root_residual(const CPolynomial& p, cdouble z);

/// Roots as eigenvalues of the balanced companion matrix (shifted complex Hessenberg QR).
/// Any root failing the 1e-8 residual contract is refined by Aberth-Ehrlich iteration.
std::vector<cdouble> companion_roots(const CPolynomial& p);

inline constexpr double kRootResidualContract = 1e-8;

/// Aberth-Ehrlich simultaneous iteration. `initial` seeds the iteration when it holds
/// exactly degree() points, otherwise points on a circle are used. Returns false (roots
/// left as reached) if any root misses the residual contract after the iteration cap.
bool aberth_roots(const CPolynomial& p, std::vector<cdouble>& roots, std::span<const cdouble> initial = {});

/// Eigenvalues of an upper Hessenberg matrix (in place, destroyed).
std::vector<cdouble> hessenberg_eigenvalues(CMatrix& h);

}  // namespace fringe::linalg
