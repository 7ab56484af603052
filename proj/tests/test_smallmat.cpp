#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fringe/smallmat.hpp"

using namespace fringe;
using namespace fringe::linalg;
constexpr double kPi = std::numbers::pi;

namespace {

CMatrix random_matrix(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CMatrix m(n, n);
    for (auto& v : m.data()) v = {g(rng), g(rng)};
    return m;
}

CMatrix diag(const std::vector<double>& s) {
    CMatrix d(s.size(), s.size());
    for (std::size_t i = 0; i < s.size(); ++i) d(i, i) = s[i];
    return d;
}

void check_svd(const CMatrix& a, const SvdResult& r, double tol) {
    const auto n = a.rows();
    const auto I = CMatrix::identity(n);
    CHECK((r.u * diag(r.s) * r.vh - a).frobenius_norm() <= tol * std::max(1.0, a.frobenius_norm()));
    CHECK((r.u.adjoint() * r.u - I).frobenius_norm() < tol);
    CHECK((r.vh * r.vh.adjoint() - I).frobenius_norm() < tol);
    CHECK(std::is_sorted(r.s.rbegin(), r.s.rend()));
}

CPolynomial from_roots(const std::vector<cdouble>& roots, cdouble lead = 1.0) {
    CPolynomial p{{lead}};
    for (const auto& r : roots) {
        std::vector<cdouble> next(p.coeffs.size() + 1, 0.0);
        for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
            next[k + 1] += p.coeffs[k];
            next[k] -= r * p.coeffs[k];
        }
        p.coeffs = next;
    }
    return p;
}

// Durand-Kerner, used only as an independent oracle.
std::vector<cdouble> durand_kerner(const CPolynomial& p) {
    const std::size_t d = p.coeffs.size() - 1;
    std::vector<cdouble> z(d);
    for (std::size_t k = 0; k < d; ++k) z[k] = std::polar(1.3, 2 * kPi * double(k) / double(d) + 0.3);
    for (int it = 0; it < 3000; ++it) {
        for (std::size_t i = 0; i < d; ++i) {
            cdouble den = p.coeffs[d];
            for (std::size_t j = 0; j < d; ++j)
                if (j != i) den *= z[i] - z[j];
            z[i] -= p(z[i]) / den;
        }
    }
    return z;
}

double match_distance(std::vector<cdouble> a, std::vector<cdouble> b) {
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (const auto& z : a) {
        auto it = std::min_element(b.begin(), b.end(), [&](cdouble x, cdouble y) { return std::abs(x - z) < std::abs(y - z); });
        worst = std::max(worst, std::abs(*it - z));
        b.erase(it);
    }
    return worst;
}

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return Errc::IoFailure;
}

}  // namespace

TEST_CASE("svd: identity") {
    const auto r = svd(CMatrix::identity(3));
    for (double s : r.s) CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
    check_svd(CMatrix::identity(3), r, 1e-12);
}

TEST_CASE("svd: rank-1 a b^H") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    std::vector<cdouble> a(3), b(3);
    for (auto* v : {&a, &b}) {
        double n = 0;
        for (auto& x : *v) {
            x = {g(rng), g(rng)};
            n += std::norm(x);
        }
        for (auto& x : *v) x /= std::sqrt(n);
    }
    CMatrix m(3, 3);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) m(r, c) = a[r] * std::conj(b[c]);
    const auto res = svd(m);
    CHECK(res.s[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.s[1] < 1e-12);
    CHECK(res.s[2] < 1e-12);
    check_svd(m, res, 1e-12);
}

TEST_CASE("svd: random 5x5, eigen-relation of m m^H as oracle") {
    std::mt19937_64 rng(5);
    const auto a = random_matrix(5, rng);
    const auto r = svd(a);
    check_svd(a, r, 1e-10);
    const auto mmh = a * a.adjoint();
    for (std::size_t k = 0; k < 5; ++k) {
        double res = 0.0;
        for (std::size_t i = 0; i < 5; ++i) {
            cdouble acc = 0.0;
            for (std::size_t j = 0; j < 5; ++j) acc += mmh(i, j) * r.u(j, k);
            res = std::max(res, std::abs(acc - r.s[k] * r.s[k] * r.u(i, k)));
        }
        CHECK(res < 1e-10 * r.s[0] * r.s[0]);
    }
}

TEST_CASE("svd: Hermitian PSD input, U columns are eigenvectors") {
    std::mt19937_64 rng(6);
    const auto b = random_matrix(6, rng);
    const auto h = b * b.adjoint();
    const auto r = svd(h);
    for (std::size_t k = 0; k < 6; ++k)
        for (std::size_t i = 0; i < 6; ++i) {
            cdouble acc = 0.0;
            for (std::size_t j = 0; j < 6; ++j) acc += h(i, j) * r.u(j, k);
            CHECK(std::abs(acc - r.s[k] * r.u(i, k)) < 1e-9 * r.s[0]);
        }
}

TEST_CASE("svd: gauge, rank deficiency, sizes 2..17") {
    std::mt19937_64 rng(7);
    for (std::size_t n = 2; n <= 17; ++n) {
        auto a = random_matrix(n, rng);
        // Make the last two columns copies of the first: rank n-2 (or 1 for n = 2, 3).
        if (n >= 3)
            for (std::size_t r = 0; r < n; ++r) a(r, n - 1) = a(r, n - 2) = a(r, 0);
        const auto res = svd(a);
        check_svd(a, res, 1e-10);
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t imax = 0;
            for (std::size_t i = 1; i < n; ++i)
                if (std::abs(res.u(i, k)) > std::abs(res.u(imax, k))) imax = i;
            CHECK(std::abs(res.u(imax, k).imag()) < 1e-15);
            CHECK(res.u(imax, k).real() > 0.0);
        }
    }
}

TEST_CASE("svd: replicate-padded plane wave (roundoff-level columns) converges") {
    // Border window of a plane wave under clamping: several identical columns.
    const std::size_t m = 7;
    CMatrix w(m, m);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) w(r, c) = std::polar(1.0, 0.3 * double(std::max<std::size_t>(c, 3)) + 0.5 * double(r));
    const auto res = svd(w);
    CHECK(res.sweeps < kMaxJacobiSweeps);
    check_svd(w, res, 1e-10);
}

TEST_CASE("svd: errors") {
    CMatrix m(3, 3);
    m(1, 1) = std::nan("");
    CHECK(code_of([&] { svd(m); }) == Errc::NonFiniteInput);
    CHECK(code_of([] { svd(CMatrix(2, 3)); }) == Errc::DimensionMismatch);
}

TEST_CASE("dominant_singular_pair agrees with the full svd") {
    std::mt19937_64 rng(8);
    for (std::size_t n : {3u, 7u, 11u, 17u}) {
        const auto a = random_matrix(n, rng);
        const auto full = svd(a);
        const auto dom = dominant_singular_pair(a);
        CHECK(dom.sigma1 == doctest::Approx(full.s[0]).epsilon(1e-12));
        CHECK(dom.sigma2 == doctest::Approx(full.s[1]).epsilon(1e-12));
        // Same directions up to phase: |<u_full, u_dom>| = 1.
        cdouble du = 0.0, dv = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            du += std::conj(full.u(i, 0)) * dom.u[i];
            dv += full.vh(0, i) * dom.v[i];
        }
        CHECK(std::abs(du) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(dv) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(code_of([] { dominant_singular_pair(CMatrix(3, 3)); }) == Errc::NoConvergence);
}

TEST_CASE("companion_roots: z^2 - 1") {
    auto r = companion_roots(CPolynomial{{-1.0, 0.0, 1.0}});
    REQUIRE(r.size() == 2);
    std::sort(r.begin(), r.end(), [](cdouble a, cdouble b) { return a.real() < b.real(); });
    CHECK(std::abs(r[0] + 1.0) < 1e-12);
    CHECK(std::abs(r[1] - 1.0) < 1e-12);
}

TEST_CASE("companion_roots: known roots e^{j0.5}, 0.8 e^{j0.5}") {
    const std::vector<cdouble> truth = {std::polar(1.0, 0.5), std::polar(0.8, 0.5)};
    CHECK(match_distance(companion_roots(from_roots(truth)), truth) < 1e-8);
}

TEST_CASE("companion_roots: degree 8 random, residual and oracle") {
    std::mt19937_64 rng(10);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial) {
        CPolynomial p;
        for (int k = 0; k <= 8; ++k) p.coeffs.push_back({g(rng), g(rng)});
        const auto r = companion_roots(p);
        CHECK(r.size() == 8);
        for (const auto& z : r) CHECK(root_residual(p, z) < 1e-8);
        CHECK(match_distance(r, durand_kerner(p)) < 1e-7);
    }
}

TEST_CASE("companion_roots: invariant under coefficient scaling") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    CPolynomial p;
    for (int k = 0; k <= 10; ++k) p.coeffs.push_back({g(rng), g(rng)});
    CPolynomial q = p;
    for (auto& c : q.coeffs) c *= cdouble(-3.7, 1e3);
    CHECK(match_distance(companion_roots(p), companion_roots(q)) < 1e-8);
}

TEST_CASE("companion_roots: root count equals trimmed degree; degree zero rejected") {
    CHECK(companion_roots(CPolynomial{{1.0, 2.0, 3.0, 0.0, 0.0}}).size() == 2);
    CHECK(companion_roots(CPolynomial{{2.0, 1.0}}).size() == 1);
    CHECK(code_of([] { companion_roots(CPolynomial{{5.0, 0.0}}); }) == Errc::DegreeZero);
    CHECK(code_of([] { companion_roots(CPolynomial{}); }) == Errc::DegreeZero);
    CHECK(code_of([] { companion_roots(CPolynomial{{1.0, std::nan("")}}); }) == Errc::NonFiniteInput);
}

TEST_CASE("aberth_roots: agrees with companion QR, cold and warm") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g;
    for (int d : {2, 5, 12, 20, 32}) {
        CPolynomial p;
        for (int k = 0; k <= d; ++k) p.coeffs.push_back({g(rng), g(rng)});
        std::vector<cdouble> cold;
        REQUIRE(aberth_roots(p, cold));
        const auto qr = companion_roots(p);
        CHECK(match_distance(cold, qr) < 1e-8);
        // Warm start from slightly perturbed roots.
        std::vector<cdouble> seed = qr, warm;
        for (auto& z : seed) z += cdouble(1e-3, -1e-3);
        REQUIRE(aberth_roots(p, warm, seed));
        CHECK(match_distance(warm, qr) < 1e-8);
    }
}

TEST_CASE("aberth_roots: large-modulus roots do not overflow") {
    const std::vector<cdouble> truth = {1e3, cdouble(0, -2e3), 0.5, cdouble(-4e2, 4e2)};
    std::vector<cdouble> r;
    REQUIRE(aberth_roots(from_roots(truth), r));
    for (std::size_t i = 0; i < truth.size(); ++i) {
        double best = 1e300;
        for (const auto& z : r) best = std::min(best, std::abs(z - truth[i]) / std::abs(truth[i]));
        CHECK(best < 1e-10);
    }
}
