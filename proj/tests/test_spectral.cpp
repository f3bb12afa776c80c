#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "support/jacobi_oracle.hpp"
#include "support/random_hermitian.hpp"
#include "toa/core_operators.hpp"
#include "toa/errors.hpp"
#include "toa/spectral.hpp"

using namespace toa;

namespace {

std::vector<cplx> flat(const ComplexMatrix& a) { return {a.data().begin(), a.data().end()}; }

double frobenius(const ComplexMatrix& a) {
    double s = 0.0;
    for (const auto& z : a.data()) s += std::norm(z);
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("2x2 Hermitian eigenpairs by hand") {
    ComplexMatrix a(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 1.0;
    a(0, 1) = cplx(0, 1);
    a(1, 0) = cplx(0, -1);
    const auto d = eigendecompose_hermitian(a);
    CHECK(d.eigenvalues[0] == doctest::Approx(2.0));
    CHECK(d.eigenvalues[1] == doctest::Approx(0.0).epsilon(1e-15));
    // largest-modulus entry is real positive
    const auto v = d.eigenvector(0);
    const auto& big = std::abs(v[0]) >= std::abs(v[1]) ? v[0] : v[1];
    CHECK(big.imag() == 0.0);
    CHECK(big.real() > 0.0);
}

TEST_CASE("eigenvalue ties keep ascending original index") {
    std::vector<double> diag{1.0, 3.0, 1.0, 3.0};
    const auto d = eigendecompose_hermitian(ComplexMatrix::diagonal(diag));
    CHECK(d.eigenvalues == std::vector<double>{3.0, 3.0, 1.0, 1.0});
    CHECK(std::abs(d.eigenvector(0)[1]) == doctest::Approx(1.0));
    CHECK(std::abs(d.eigenvector(1)[3]) == doctest::Approx(1.0));
    CHECK(std::abs(d.eigenvector(2)[0]) == doctest::Approx(1.0));
}

TEST_CASE("random Hermitian matrices agree with the Jacobi oracle") {
    for (std::size_t n : {1u, 2u, 3u, 8u, 17u, 40u}) {
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            CAPTURE(n);
            CAPTURE(seed);
            const auto a = testing_support::random_hermitian(n, 1000 * n + seed);
            const auto d = eigendecompose_hermitian(a);
            const auto ref = oracle::jacobi_hermitian(flat(a), n);
            const double scale = 1.0 + frobenius(a);
            for (std::size_t k = 0; k < n; ++k) {
                CHECK(std::abs(d.eigenvalues[k] - ref.values[k]) < 1e-11 * scale);
                // same eigenline: |<v, w>| = 1 (random spectra are simple)
                const auto v = d.eigenvector(k);
                cplx ov = 0.0;
                for (std::size_t r = 0; r < n; ++r) ov += std::conj(v[r]) * ref.vectors[k][r];
                CHECK(std::abs(ov) == doctest::Approx(1.0).epsilon(1e-8));
            }
            CHECK(d.orthonormality_error() < 1e-12);
            CHECK(d.reconstruction_error(a) < 1e-12 * scale);
        }
    }
}

TEST_CASE("spectral transform and square root") {
    const auto a = testing_support::random_hermitian(10, 99);
    auto psd = a * a;
    const auto d = eigendecompose_hermitian(psd);
    const auto r = spectral_sqrt(d);
    CHECK(max_abs_diff(r * r, psd) < 1e-10 * (1.0 + psd.max_abs()));
    const auto da = eigendecompose_hermitian(a);
    CHECK_THROWS_AS(spectral_sqrt(da), DomainError);
    const auto clamped = spectral_sqrt(da, NegativeEigenvaluePolicy::ClampToZero);
    CHECK(passes_hermiticity(clamped));
    const auto same = spectral_transform(da, [](double x) { return x; });
    CHECK(max_abs_diff(same, a) < 1e-12 * (1.0 + a.max_abs()));
}

TEST_CASE("counting and sign census") {
    const auto d = eigendecompose_hermitian(ComplexMatrix::diagonal(std::vector<double>{2.0, -1.0, 0.0, 0.5, 1e-14}));
    CHECK(count_eigenvalues_above(d, 0.25) == 3);  // counts |tau| > lambda
    CHECK(count_eigenvalues_above(d, 2.0) == 0);
    CHECK_THROWS_AS(count_eigenvalues_above(d, 0.0), DomainError);
    const auto c = sign_census(d, 1e-12);
    CHECK(c.positive == 2);
    CHECK(c.negative == 1);
    CHECK(c.zero == 2);
}

TEST_CASE("propagator against the diagonal closed form") {
    const BasisTruncation b(3);
    const PhysicalParams p{1.0, 1.0, 1.0};
    const auto h = free_hamiltonian(b, p);
    const Propagator u(h, p);
    const auto m = u.matrix(0.3);
    for (int k = -3; k <= 3; ++k) {
        CHECK(std::abs(m(b.row(k), b.row(k)) - std::polar(1.0, -0.3 * k * k / 2.0)) < 1e-15);
    }
    // dense path: non-diagonal H
    const auto a = testing_support::random_hermitian(7, 5);
    const HermitianOperator ha(b, a);
    const Propagator ua(ha, p);
    const auto w = ua.matrix(0.7);
    CHECK(max_abs_diff(w.adjoint() * w, ComplexMatrix::identity(7)) < 1e-12);
    CHECK(max_abs_diff(ua.matrix(0.3) * ua.matrix(0.4), w) < 1e-12);
}

TEST_CASE("time translation of the arrival-time eigenbasis") {
    const BasisTruncation b(16);
    const PhysicalParams p{1.0, 1.0, 1.0};
    const QuadratureSpec q{QuadratureScheme::GaussLegendre, 4096};
    const auto t = build_symmetric_closed_form(RegulatorFunction::constant(0.0), b, p, q);
    const auto d = eigendecompose_hermitian(t);
    const auto h = free_hamiltonian(b, p);
    const auto rep = time_translation_report(d, h, 1.0, p);
    CHECK(rep.completeness_error() < 1e-8);
    CHECK(rep.min_max_overlap() <= 0.999);
    CHECK(rep.certifies_non_invariance());
    const auto zero = time_translation_report(d, h, 0.0, p);
    CHECK(zero.min_max_overlap() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_FALSE(zero.certifies_non_invariance());
}

TEST_CASE("position density of a momentum eigenstate is uniform") {
    const BasisTruncation b(4);
    const auto dens = position_density(StateVector::eigenstate(b, 2), 36);
    double s = 0.0;
    for (double x : dens) {
        CHECK(x == doctest::Approx(1.0 / 36.0).epsilon(1e-12));
        s += x;
    }
    CHECK(s == doctest::Approx(1.0));
    CHECK_THROWS_AS(position_density(StateVector::eigenstate(b, 2), 5), DomainError);
}
