#include "fringe/smallmat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace fringe::linalg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double norm2(std::span<const cdouble> v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return s;
}

cdouble dot_conj(std::span<const cdouble> a, std::span<const cdouble> b) {
    cdouble s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

}  // namespace

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
}

double CMatrix::frobenius_norm() const { return std::sqrt(norm2(data_)); }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols_ != b.rows_) throw Error(Errc::DimensionMismatch, "matrix product shape mismatch");
    CMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const cdouble aik = a(i, k);
            for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(Errc::DimensionMismatch, "matrix difference shape mismatch");
    CMatrix out = a;
    for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= b.data_[i];
    return out;
}

namespace {

struct JacobiWork {
    std::size_t n = 0;
    std::vector<double> data;
    double* br = nullptr;
    double* bi = nullptr;
    double* vr = nullptr;  // null when V is not accumulated
    double* vi = nullptr;
    double negligible = 0.0;
    int sweeps = 0;
};

// One-sided Jacobi on the columns of m: afterwards B = A V has mutually orthogonal columns.
JacobiWork jacobi_orthogonalize(const CMatrix& m, bool accumulate_v) {
    const std::size_t n = m.rows();
    if (n != m.cols() || n < 2 || n > 64) throw Error(Errc::DimensionMismatch, "svd expects a square matrix, 2 <= M <= 64");
    double fro2 = 0.0;
    for (const auto& v : m.data()) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw Error(Errc::NonFiniteInput, "svd input");
        fro2 += std::norm(v);
    }

    // Column-major split re/im arrays.
    const std::size_t nn = n * n;
    JacobiWork w;
    w.n = n;
    w.data.assign((accumulate_v ? 4 : 2) * nn + n, 0.0);
    w.br = w.data.data();
    w.bi = w.br + nn;
    double* norms = w.bi + nn;
    if (accumulate_v) {
        w.vr = norms + n;
        w.vi = w.vr + nn;
        for (std::size_t i = 0; i < n; ++i) w.vr[i * n + i] = 1.0;
    }
    double* br = w.br;
    double* bi = w.bi;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            br[c * n + r] = m(r, c).real();
            bi[c * n + r] = m(r, c).imag();
        }

    const double tol = kEps * static_cast<double>(n);
    // Columns at roundoff level of the whole matrix carry no direction. Rotating them
    // against large columns only stirs roundoff and can cycle, so they are left alone
    // and later replaced by the basis completion.
    const double small = kEps * 16.0 * static_cast<double>(n);
    w.negligible = fro2 * small * small;
    bool converged = false;
    for (int sweep = 0; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
        converged = true;
        w.sweeps = sweep + 1;
        for (std::size_t c = 0; c < n; ++c) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += br[c * n + i] * br[c * n + i] + bi[c * n + i] * bi[c * n + i];
            norms[c] = s;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double alpha = norms[p];
                const double beta = norms[q];
                if (alpha <= w.negligible || beta <= w.negligible) continue;
                double* pr = br + p * n;
                double* pi = bi + p * n;
                double* qr = br + q * n;
                double* qi = bi + q * n;
                double gr = 0.0, gi = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    gr += pr[i] * qr[i] + pi[i] * qi[i];
                    gi += pr[i] * qi[i] - pi[i] * qr[i];
                }
                const double g2 = gr * gr + gi * gi;
                if (g2 == 0.0 || g2 <= tol * tol * alpha * beta) continue;
                converged = false;
                const double g = std::sqrt(g2);
                const double er = gr / g, ei = -gi / g;  // e^{-j arg gamma}
                const double zeta = (beta - alpha) / (2.0 * g);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                auto rotate = [&](double* xr, double* xi, double* yr, double* yi) {
                    for (std::size_t i = 0; i < n; ++i) {
                        const double ar = xr[i], ai = xi[i];
                        const double wr = er * yr[i] - ei * yi[i];
                        const double wi = er * yi[i] + ei * yr[i];
                        xr[i] = c * ar - s * wr;
                        xi[i] = c * ai - s * wi;
                        yr[i] = s * ar + c * wr;
                        yi[i] = s * ai + c * wi;
                    }
                };
                rotate(pr, pi, qr, qi);
                if (accumulate_v) rotate(w.vr + p * n, w.vi + p * n, w.vr + q * n, w.vi + q * n);
                norms[p] = alpha - t * g;
                norms[q] = beta + t * g;
            }
        }
    }
    if (!converged) throw Error(Errc::NoConvergence, "Jacobi SVD exceeded sweep cap");
    return w;
}

}  // namespace

SvdResult svd(const CMatrix& m) {
    JacobiWork w = jacobi_orthogonalize(m, true);
    const std::size_t n = w.n;
    const std::size_t nn = n * n;
    const double* br = w.br;
    const double* bi = w.bi;
    const double* vr = w.vr;
    const double* vi = w.vi;
    const double negligible = w.negligible;
    SvdResult res;
    res.sweeps = w.sweeps;

    std::vector<double> sigma(n);
    for (std::size_t c = 0; c < n; ++c) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += br[c * n + i] * br[c * n + i] + bi[c * n + i] * bi[c * n + i];
        sigma[c] = std::sqrt(s);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) { return sigma[a] > sigma[c]; });

    const double floor = std::max(std::sqrt(negligible), std::numeric_limits<double>::min() * 1e4);

    std::vector<cdouble> u(nn), vs(nn);
    std::vector<bool> have(n, false);
    res.s.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        res.s[k] = sigma[src];
        for (std::size_t i = 0; i < n; ++i) vs[k * n + i] = {vr[src * n + i], vi[src * n + i]};
        if (sigma[src] > floor) {
            const double inv = 1.0 / sigma[src];
            for (std::size_t i = 0; i < n; ++i) u[k * n + i] = cdouble(br[src * n + i], bi[src * n + i]) * inv;
            have[k] = true;
        }
    }

    // Complete U for numerically null directions: Gram-Schmidt (twice) on unit vectors.
    std::vector<cdouble> cand(n), best(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (have[k]) continue;
        double best_norm = -1.0;
        for (std::size_t e = 0; e < n; ++e) {
            std::fill(cand.begin(), cand.end(), cdouble{});
            cand[e] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (!have[j]) continue;
                    std::span<const cdouble> uj(u.data() + j * n, n);
                    const cdouble proj = dot_conj(uj, cand);
                    for (std::size_t i = 0; i < n; ++i) cand[i] -= proj * uj[i];
                }
            }
            const double nrm = norm2(cand);
            if (nrm > best_norm) {
                best_norm = nrm;
                best = cand;
            }
        }
        const double inv = 1.0 / std::sqrt(best_norm);
        for (std::size_t i = 0; i < n; ++i) u[k * n + i] = best[i] * inv;
        have[k] = true;
    }

    // Gauge: largest-magnitude entry of each U column real positive; V column rotated alike.
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t imax = 0;
        double amax = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = std::abs(u[k * n + i]);
            if (a > amax) {
                amax = a;
                imax = i;
            }
        }
        const cdouble ph = std::conj(u[k * n + imax]) / amax;
        for (std::size_t i = 0; i < n; ++i) {
            u[k * n + i] *= ph;
            vs[k * n + i] *= ph;
        }
        u[k * n + imax] = amax;
    }

    res.u = CMatrix(n, n);
    res.vh = CMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            res.u(i, k) = u[k * n + i];
            res.vh(k, i) = std::conj(vs[k * n + i]);
        }
    return res;
}

DominantPair dominant_singular_pair(const CMatrix& m) {
    JacobiWork w = jacobi_orthogonalize(m, false);
    const std::size_t n = w.n;
    DominantPair out;
    std::size_t best = 0;
    double s1 = -1.0, s2 = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += w.br[c * n + i] * w.br[c * n + i] + w.bi[c * n + i] * w.bi[c * n + i];
        s = std::sqrt(s);
        if (s > s1) {
            s2 = std::max(s2, s1);
            s1 = s;
            best = c;
        } else {
            s2 = std::max(s2, s);
        }
    }
    out.sigma1 = s1;
    out.sigma2 = std::max(s2, 0.0);
    out.sweeps = w.sweeps;
    if (!(s1 * s1 > w.negligible)) throw Error(Errc::NoConvergence, "matrix is numerically zero");
    out.u.resize(n);
    out.v.assign(n, cdouble{});
    const double inv = 1.0 / s1;
    for (std::size_t i = 0; i < n; ++i) out.u[i] = cdouble(w.br[best * n + i], w.bi[best * n + i]) * inv;
    // v1 = A^H u1 / sigma1
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out.v[c] += std::conj(m(r, c)) * out.u[r];
    for (auto& x : out.v) x *= inv;
    return out;
}

std::size_t CPolynomial::degree() const {
    std::size_t d = coeffs.size();
    while (d > 0 && coeffs[d - 1] == cdouble{}) --d;
    return d == 0 ? 0 : d - 1;
}

void CPolynomial::trim() {
    while (!coeffs.empty() && coeffs.back() == cdouble{}) coeffs.pop_back();
}

cdouble CPolynomial::operator()(cdouble z) const {
    cdouble acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
}

double root_residual(const CPolynomial& p, cdouble z) {
    const std::size_t d = p.degree();
    auto mag = [](cdouble c) { return std::sqrt(std::norm(c)); };
    const double r = mag(z);
    cdouble num = 0.0;
    double den = 0.0;
    if (r <= 1.0) {
        for (std::size_t k = d + 1; k-- > 0;) {
            num = num * z + p.coeffs[k];
            den += mag(p.coeffs[k]);
        }
    } else {
        // Evaluate z^-d p(z) to avoid overflow; the ratio is unchanged.
        const cdouble w = 1.0 / z;
        const double rinv = 1.0 / r;
        double scale = 1.0;
        for (std::size_t k = 0; k <= d; ++k) num = num * w + p.coeffs[k];
        for (std::size_t k = d + 1; k-- > 0;) {
            den += mag(p.coeffs[k]) * scale;
            scale *= rinv;
        }
    }
    if (den == 0.0) return 0.0;
    return mag(num) / den;
}

namespace {

void balance(CMatrix& h) {
    const std::size_t n = h.rows();
    constexpr double radix = 2.0;
    bool done = false;
    for (int iter = 0; iter < 100 && !done; ++iter) {
        done = true;
        for (std::size_t i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(h(j, i));
                r += std::abs(h(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix;
            double f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= radix * radix;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= radix * radix;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                for (std::size_t j = 0; j < n; ++j) h(i, j) /= f;
                for (std::size_t j = 0; j < n; ++j) h(j, i) *= f;
            }
        }
    }
}

void aberth_refine(const CPolynomial& p, std::vector<cdouble>& z) {
    const std::size_t d = z.size();
    CPolynomial dp;
    for (std::size_t k = 1; k <= d; ++k) dp.coeffs.push_back(p.coeffs[k] * static_cast<double>(k));
    for (int iter = 0; iter < 100; ++iter) {
        bool ok = true;
        for (std::size_t i = 0; i < d; ++i) {
            if (root_residual(p, z[i]) <= 1e-14) continue;
            ok = false;
            const cdouble w = p(z[i]) / dp(z[i]);
            cdouble s = 0.0;
            for (std::size_t j = 0; j < d; ++j)
                if (j != i) s += 1.0 / (z[i] - z[j]);
            const cdouble step = w / (1.0 - w * s);
            if (std::isfinite(step.real()) && std::isfinite(step.imag())) z[i] -= step;
        }
        if (ok) break;
    }
}

// Newton correction p(z)/p'(z); for |z| > 1 the reversed polynomial avoids overflow.
cdouble newton_ratio(const std::vector<cdouble>& c, std::size_t d, cdouble z) {
    if (std::norm(z) <= 1.0) {
        cdouble pv = c[d], dv = 0.0;
        for (std::size_t k = d; k-- > 0;) {
            dv = dv * z + pv;
            pv = pv * z + c[k];
        }
        return pv / dv;
    }
    // p(z) = z^d r(w), w = 1/z, r(w) = sum c_k w^(d-k); p'/p = w (d - w r'(w)/r(w)).
    const cdouble w = 1.0 / z;
    cdouble rv = c[0], dv = 0.0;
    for (std::size_t k = 1; k <= d; ++k) {
        dv = dv * w + rv;
        rv = rv * w + c[k];
    }
    return 1.0 / (w * (static_cast<double>(d) - w * dv / rv));
}

}  // namespace

bool aberth_roots(const CPolynomial& poly, std::vector<cdouble>& z, std::span<const cdouble> initial) {
    CPolynomial p = poly;
    p.trim();
    for (const auto& c : p.coeffs)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw Error(Errc::NonFiniteInput, "polynomial coefficient");
    if (p.coeffs.size() < 2) throw Error(Errc::DegreeZero, "polynomial has degree zero");
    const std::size_t d = p.coeffs.size() - 1;
    if (d == 1) {
        z = {-p.coeffs[0] / p.coeffs[1]};
        return true;
    }
    if (initial.size() == d) {
        z.assign(initial.begin(), initial.end());
    } else {
        const double r = std::pow(std::abs(p.coeffs[0]) / std::abs(p.coeffs[d]), 1.0 / static_cast<double>(d));
        const double radius = (r > 0.0 && std::isfinite(r)) ? r : 1.0;
        z.resize(d);
        for (std::size_t k = 0; k < d; ++k)
            z[k] = std::polar(radius, (2.0 * std::numbers::pi * static_cast<double>(k) + 0.4) / static_cast<double>(d));
    }
    std::vector<char> done(d, 0);
    for (int iter = 0; iter < 100; ++iter) {
        bool all = true;
        for (std::size_t i = 0; i < d; ++i) {
            if (done[i]) continue;
            const cdouble n = newton_ratio(p.coeffs, d, z[i]);
            const double zr = z[i].real(), zi = z[i].imag();
            double sr = 0.0, si = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                if (j == i) continue;
                const double dr = zr - z[j].real(), di = zi - z[j].imag();
                const double inv = 1.0 / (dr * dr + di * di);
                sr += dr * inv;
                si -= di * inv;
            }
            const cdouble step = n / (1.0 - n * cdouble(sr, si));
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
                done[i] = 1;
                continue;
            }
            z[i] -= step;
            if (std::norm(step) <= 16.0 * kEps * kEps * std::norm(z[i])) done[i] = 1;
            else all = false;
        }
        if (all) break;
    }
    for (const auto& r : z)
        if (!(root_residual(p, r) <= kRootResidualContract)) return false;
    // Every iterate can satisfy the residual while two of them share one root; the
    // root sum (Vieta) catches the missing one.
    cdouble sum = 0.0;
    double scale = 0.0;
    for (const auto& r : z) {
        sum += r;
        scale += std::sqrt(std::norm(r));
    }
    const cdouble expect = -p.coeffs[d - 1] / p.coeffs[d];
    return std::sqrt(std::norm(sum - expect)) <= 1e-7 * std::max(scale, 1.0);
}

std::vector<cdouble> hessenberg_eigenvalues(CMatrix& h) {
    const std::size_t n = h.rows();
    std::vector<cdouble> eig;
    eig.reserve(n);
    if (n == 0) return eig;
    const double hnorm = std::max(h.frobenius_norm(), std::numeric_limits<double>::min());
    std::vector<cdouble> gc(n), gs(n);

    std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - 1;
    int iter = 0;
    while (hi >= 0) {
        if (hi == 0) {
            eig.push_back(h(0, 0));
            break;
        }
        std::ptrdiff_t lo = hi;
        for (; lo > 0; --lo) {
            const auto l = static_cast<std::size_t>(lo);
            double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
            if (s == 0.0) s = hnorm;
            if (std::abs(h(l, l - 1)) <= kEps * s) {
                h(l, l - 1) = 0.0;
                break;
            }
        }
        const auto uhi = static_cast<std::size_t>(hi);
        if (lo == hi) {
            eig.push_back(h(uhi, uhi));
            --hi;
            iter = 0;
            continue;
        }
        if (++iter > 60) throw Error(Errc::NoConvergence, "companion QR iteration cap reached");
        const auto ulo = static_cast<std::size_t>(lo);

        cdouble mu;
        if (iter % 10 == 0) {
            // Exceptional shift breaks cycles.
            mu = h(uhi, uhi) + 0.75 * std::abs(h(uhi, uhi - 1)) * cdouble(1.0, 0.5);
        } else {
            const cdouble a = h(uhi - 1, uhi - 1), b = h(uhi - 1, uhi), c = h(uhi, uhi - 1), d = h(uhi, uhi);
            const cdouble half = 0.5 * (a - d);
            const cdouble disc = std::sqrt(half * half + b * c);
            const cdouble m1 = 0.5 * (a + d) + disc;
            const cdouble m2 = 0.5 * (a + d) - disc;
            mu = std::abs(m1 - d) < std::abs(m2 - d) ? m1 : m2;
        }

        for (std::size_t k = ulo; k <= uhi; ++k) h(k, k) -= mu;
        for (std::size_t k = ulo; k < uhi; ++k) {
            const cdouble x = h(k, k), y = h(k + 1, k);
            const double r = std::hypot(std::abs(x), std::abs(y));
            cdouble c = 1.0, s = 0.0;
            if (r != 0.0) {
                c = x / r;
                s = y / r;
            }
            gc[k] = c;
            gs[k] = s;
            for (std::size_t j = k; j <= uhi; ++j) {
                const cdouble a0 = h(k, j), a1 = h(k + 1, j);
                h(k, j) = std::conj(c) * a0 + std::conj(s) * a1;
                h(k + 1, j) = -s * a0 + c * a1;
            }
        }
        for (std::size_t k = ulo; k < uhi; ++k) {
            const cdouble c = gc[k], s = gs[k];
            const std::size_t rmax = std::min(k + 2, uhi);
            for (std::size_t i = ulo; i <= rmax; ++i) {
                const cdouble a0 = h(i, k), a1 = h(i, k + 1);
                h(i, k) = a0 * c + a1 * s;
                h(i, k + 1) = -a0 * std::conj(s) + a1 * std::conj(c);
            }
        }
        for (std::size_t k = ulo; k <= uhi; ++k) h(k, k) += mu;
    }
    return eig;
}

std::vector<cdouble> companion_roots(const CPolynomial& poly) {
    CPolynomial p = poly;
    p.trim();
    for (const auto& c : p.coeffs)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw Error(Errc::NonFiniteInput, "polynomial coefficient");
    if (p.coeffs.size() < 2) throw Error(Errc::DegreeZero, "polynomial has degree zero");
    const std::size_t d = p.coeffs.size() - 1;
    const cdouble lead = p.coeffs[d];
    if (d == 1) return {-p.coeffs[0] / lead};

    CMatrix h(d, d);
    for (std::size_t j = 0; j < d; ++j) h(0, j) = -p.coeffs[d - 1 - j] / lead;
    for (std::size_t i = 1; i < d; ++i) h(i, i - 1) = 1.0;
    balance(h);
    std::vector<cdouble> roots = hessenberg_eigenvalues(h);

    for (const auto& z : roots) {
        if (root_residual(p, z) > kRootResidualContract) {
            aberth_refine(p, roots);
            break;
        }
    }
    return roots;
}

}  // namespace fringe::linalg
