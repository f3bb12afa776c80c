#include "toa/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace toa {

namespace {

constexpr std::size_t kPanelOrder = 16;

}  // namespace

std::string_view to_string(QuadratureScheme s) noexcept {
    switch (s) {
        case QuadratureScheme::TrapezoidPeriodic: return "trapezoid-periodic";
        case QuadratureScheme::GaussLegendre: return "gauss-legendre";
    }
    return "unknown";
}

QuadratureScheme parse_quadrature_scheme(std::string_view name) {
    if (name == "trapezoid-periodic" || name == "trapezoid") return QuadratureScheme::TrapezoidPeriodic;
    if (name == "gauss-legendre" || name == "gauss") return QuadratureScheme::GaussLegendre;
    throw InvalidQuadrature("unknown quadrature scheme '" + std::string(name) + "'");
}

void QuadratureSpec::validate_for(std::size_t dimension) const {
    if (nodes < 4 * dimension) {
        throw InvalidQuadrature("quadrature needs at least 4 * dimension = " + std::to_string(4 * dimension) +
                                " nodes, got " + std::to_string(nodes));
    }
    if (scheme == QuadratureScheme::TrapezoidPeriodic && nodes % 2 != 0) {
        throw InvalidQuadrature("trapezoid-periodic rule needs an even node count");
    }
    if (scheme == QuadratureScheme::GaussLegendre && nodes % (2 * kPanelOrder) != 0) {
        throw InvalidQuadrature("gauss-legendre rule needs a node count divisible by " +
                                std::to_string(2 * kPanelOrder));
    }
}

AngularRule gauss_legendre(std::size_t order) {
    AngularRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const std::size_t half = (order + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(order) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = p2;
            }
            const double pn = order == 1 ? x : p1;
            const double pnm1 = order == 1 ? 1.0 : p0;
            dp = static_cast<double>(order) * (x * pn - pnm1) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.nodes[order - 1 - i] = x;
        rule.weights[order - 1 - i] = w;
    }
    return rule;
}

AngularRule make_angular_rule(const QuadratureSpec& spec) {
    using std::numbers::pi;
    AngularRule rule;
    rule.nodes.reserve(spec.nodes);
    rule.weights.reserve(spec.nodes);
    if (spec.scheme == QuadratureScheme::TrapezoidPeriodic) {
        if (spec.nodes == 0 || spec.nodes % 2 != 0) {
            throw InvalidQuadrature("trapezoid-periodic rule needs a positive even node count");
        }
        const double h = 2.0 * pi / static_cast<double>(spec.nodes);
        for (std::size_t m = 0; m < spec.nodes; ++m) {
            rule.nodes.push_back(-pi + (static_cast<double>(m) + 0.5) * h);
            rule.weights.push_back(1.0 / static_cast<double>(spec.nodes));
        }
        return rule;
    }

    if (spec.nodes == 0 || spec.nodes % (2 * kPanelOrder) != 0) {
        throw InvalidQuadrature("gauss-legendre rule needs a node count divisible by " +
                                std::to_string(2 * kPanelOrder));
    }
    const AngularRule ref = gauss_legendre(kPanelOrder);
    const std::size_t panels = spec.nodes / kPanelOrder;
    const double width = 2.0 * pi / static_cast<double>(panels);
    // Panels tile (-pi, pi] with an edge at 0, the jump location of the arrival-time function.
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = -pi + (static_cast<double>(p) + 0.5) * width;
        for (std::size_t q = 0; q < kPanelOrder; ++q) {
            rule.nodes.push_back(mid + 0.5 * width * ref.nodes[q]);
            rule.weights.push_back(0.5 * width * ref.weights[q] / (2.0 * pi));
        }
    }
    return rule;
}

cplx fourier_coefficient(const PeriodicFunction& f, int l, const AngularRule& rule) {
    cplx acc{};
    for (std::size_t m = 0; m < rule.nodes.size(); ++m) {
        const double t = rule.nodes[m];
        acc += rule.weights[m] * f(t) * std::polar(1.0, -static_cast<double>(l) * t);
    }
    return acc;
}

cplx fourier_coefficient(const PeriodicFunction& f, int l, const QuadratureSpec& quad) {
    return fourier_coefficient(f, l, make_angular_rule(quad));
}

}  // namespace toa
