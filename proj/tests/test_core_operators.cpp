#include <doctest.h>

#include <cmath>
#include <numbers>

#include "toa/core_operators.hpp"
#include "toa/errors.hpp"

using namespace toa;
using std::numbers::pi;

namespace {

const PhysicalParams natural{1.0, 1.0, 1.0};
const QuadratureSpec quad4096{QuadratureScheme::GaussLegendre, 4096};

// Direct evaluation of the symmetric closed form, written out term by term.
cplx closed_form_entry(int j, int k, double g_const, const PhysicalParams& p) {
    const double I = p.inertia();
    const double hb = p.hbar;
    const cplx i(0, 1);
    if (j == 0 && k == 0) return I * g_const;
    if (j == k) return I * pi / (hb * std::abs(k));
    if (j == 0) return I * (-1.0 / (2.0 * i * hb * double(k * k)));
    if (k == 0) return I * (1.0 / (2.0 * i * hb * double(j * j)));
    return I * double(j + k) / (2.0 * i * hb * double(j * k * (j - k)));
}

}  // namespace

TEST_CASE("classical arrival time by quadrant") {
    const auto g0 = RegulatorFunction::constant(0.0);
    CHECK(classical_toa(-1.0, -1.0, g0, natural) == doctest::Approx(2 * pi - 1.0));
    CHECK(classical_toa(1.0, -1.0, g0, natural) == doctest::Approx(1.0));
    CHECK(classical_toa(-1.0, 1.0, g0, natural) == doctest::Approx(1.0));
    CHECK(classical_toa(1.0, 1.0, g0, natural) == doctest::Approx(2 * pi - 1.0));
    CHECK(classical_toa(pi, 2.0, g0, natural) == doctest::Approx(pi / 2));
    CHECK(classical_toa(0.0, 3.0, g0, natural) == 0.0);
    CHECK(classical_toa(0.0, 3.0, g0, natural, ScreenConvention::FullRevolution) == doctest::Approx(2 * pi / 3));
    CHECK(classical_toa(0.5, 0.0, RegulatorFunction::constant(2.5), natural) == 2.5);
    CHECK_THROWS_AS(classical_toa(-pi, 1.0, g0, natural), DomainError);
    CHECK_THROWS_AS(classical_toa(4.0, 1.0, g0, natural), DomainError);
    // T scales with m r^2
    const PhysicalParams p{2.0, 3.0, 1.0};
    CHECK(classical_toa(1.0, 1.0, g0, p) == doctest::Approx(18.0 * (2 * pi - 1.0)));
}

TEST_CASE("regulator parsing") {
    CHECK(RegulatorFunction::parse("const:1.5")(0.3) == 1.5);
    CHECK(RegulatorFunction::parse("cos:2:1")(0.0) == doctest::Approx(3.0));
    CHECK(RegulatorFunction::parse("abs:2")(-0.5) == doctest::Approx(1.0));
    CHECK_THROWS_AS(RegulatorFunction::parse("cos:1:2"), DomainError);
    CHECK_THROWS_AS(RegulatorFunction::parse("const:-1"), DomainError);
    CHECK_THROWS_AS(RegulatorFunction::parse("spline"), DomainError);
    const auto rule = make_angular_rule(quad4096);
    CHECK(std::abs(RegulatorFunction::parse("cos:2:1").fourier(1, rule) - 0.5) < 1e-13);
    CHECK(RegulatorFunction::constant(3.0).fourier(0, rule) == cplx(3.0));
    CHECK(RegulatorFunction::constant(3.0).fourier(2, rule) == cplx(0.0));
}

TEST_CASE("quantizer element reduces to Kronecker deltas") {
    const auto weyl = OrderingKernel::weyl();
    const auto sym = OrderingKernel::symmetric();
    const QuadratureSpec q{QuadratureScheme::GaussLegendre, 512};
    const double th = 0.7;
    for (int n = -2; n <= 2; ++n) {
        for (int k = -2; k <= 2; ++k) {
            CAPTURE(n);
            CAPTURE(k);
            CHECK(std::abs(quantizer_element(weyl, th, n, k, k, q) - cplx(n == k ? 1.0 : 0.0)) < 1e-14);
            for (int j = -2; j <= 2; ++j) {
                const cplx expected =
                    std::polar(1.0, -(j - k) * th) * 0.5 * (double(j == n) + double(k == n));
                CHECK(std::abs(quantizer_element(sym, th, n, j, k, q) - expected) < 1e-14);
            }
        }
    }
    // Weyl off-diagonal: sinc at half-integers
    const cplx w = quantizer_element(weyl, 0.0, 0, 1, 0, q);
    CHECK(std::abs(w - cplx(2.0 / pi)) < 1e-14);
}

TEST_CASE("closed form reproduces hand-checked entries") {
    const BasisTruncation b(4);
    const auto t0 = build_symmetric_closed_form(RegulatorFunction::constant(0.0), b, natural, quad4096);
    CHECK(std::abs(t0.at(1, 2) - cplx(0, 0.75)) < 1e-12);
    CHECK(std::abs(t0.at(3, 3) - cplx(pi / 3)) < 1e-12);
    CHECK(std::abs(t0.at(2, 0) - cplx(0, -0.125)) < 1e-12);
    CHECK(std::abs(t0.at(0, 0)) < 1e-12);
    const auto tc = build_symmetric_closed_form(RegulatorFunction::constant(2.0), b, natural, quad4096);
    CHECK(std::abs(tc.at(0, 0) - cplx(2.0)) < 1e-12);

    const PhysicalParams p{2.0, 0.5, 0.25};
    const auto tp = build_symmetric_closed_form(RegulatorFunction::constant(0.7), b, p, quad4096);
    for (int j = -4; j <= 4; ++j)
        for (int k = -4; k <= 4; ++k) {
            CAPTURE(j);
            CAPTURE(k);
            CHECK(std::abs(tp.at(j, k) - closed_form_entry(j, k, 0.7, p)) < 1e-12);
        }
}

TEST_CASE("quadrature construction agrees with the closed form") {
    const BasisTruncation b(8);
    for (const char* g : {"const:0", "const:1", "cos:1:0.5", "abs:1"}) {
        CAPTURE(g);
        const auto reg = RegulatorFunction::parse(g);
        const auto quadr = build_operator_wwsc(OrderingKernel::symmetric(), reg, b, natural, quad4096);
        const auto closed = build_symmetric_closed_form(reg, b, natural, quad4096);
        CHECK(max_abs_diff(quadr.matrix(), closed.matrix()) < 1e-8);
        CHECK(passes_hermiticity(quadr.matrix()));
    }
}

TEST_CASE("operator scales as m r^2 / hbar for g = 0") {
    const BasisTruncation b(5);
    const auto g0 = RegulatorFunction::constant(0.0);
    const PhysicalParams p{3.0, 2.0, 0.5};
    const auto a = build_operator_wwsc(OrderingKernel::symmetric(), g0, b, natural, quad4096);
    const auto s = build_operator_wwsc(OrderingKernel::symmetric(), g0, b, p, quad4096);
    auto scaled = a.matrix();
    scaled *= cplx(p.inertia() / p.hbar);
    CHECK(max_abs_diff(scaled, s.matrix()) < 1e-10);
}

TEST_CASE("Weyl ordering gives a Hermitian operator with a reported cutoff error") {
    const BasisTruncation b(6);
    const auto g0 = RegulatorFunction::constant(0.0);
    const auto w = build_operator_wwsc(OrderingKernel::weyl(), g0, b, natural, quad4096);
    CHECK(passes_hermiticity(w.matrix()));
    const double est = wwsc_truncation_estimate(OrderingKernel::weyl(), g0, b, natural, quad4096);
    CHECK(std::isfinite(est));
    CHECK(est > 0.0);
    CHECK(wwsc_truncation_estimate(OrderingKernel::symmetric(), g0, b, natural, quad4096) == 0.0);
    // Weyl and symmetric agree on the diagonal
    const auto s = build_symmetric_closed_form(g0, b, natural, quad4096);
    for (int k = -6; k <= 6; ++k) CHECK(std::abs(w.at(k, k) - s.at(k, k)) < 1e-10);
}

TEST_CASE("a custom kernel equal to the symmetric one reproduces it") {
    const BasisTruncation b(4);
    const auto custom = OrderingKernel::custom([](double s, int l) { return cplx(std::cos(s * l / 2.0)); }, "cos");
    const auto g0 = RegulatorFunction::constant(0.0);
    const auto a = build_operator_wwsc(custom, g0, b, natural, quad4096);
    const auto s = build_symmetric_closed_form(g0, b, natural, quad4096);
    CHECK(max_abs_diff(a.matrix(), s.matrix()) < 1e-8);
}

TEST_CASE("free Hamiltonian") {
    const BasisTruncation b(3);
    const PhysicalParams p{2.0, 1.0, 1.0};
    const auto h = free_hamiltonian(b, p);
    CHECK(h.at(3, 3) == cplx(9.0 / 4.0));
    CHECK(h.at(-1, -1) == cplx(0.25));
    CHECK(h.at(1, 2) == cplx(0.0));
}

TEST_CASE("build rejects an undersized quadrature") {
    const BasisTruncation b(8);
    CHECK_THROWS_AS(build_operator_wwsc(OrderingKernel::symmetric(), RegulatorFunction::constant(0), b, natural,
                                        QuadratureSpec{QuadratureScheme::GaussLegendre, 32}),
                    InvalidQuadrature);
}
