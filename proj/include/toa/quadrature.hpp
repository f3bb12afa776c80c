#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "toa/matrix.hpp"

namespace toa {

enum class QuadratureScheme {
    TrapezoidPeriodic,  ///< uniform midpoint grid, nodes straddle 0 and pi
    GaussLegendre,      ///< composite Gauss-Legendre panels with breakpoints at -pi, 0, pi
};

std::string_view to_string(QuadratureScheme s) noexcept;
QuadratureScheme parse_quadrature_scheme(std::string_view name);

struct QuadratureSpec {
    QuadratureScheme scheme = QuadratureScheme::GaussLegendre;
    std::size_t nodes = 2048;

    /// Throws InvalidQuadrature when the node count is unusable for the scheme
    /// or below the anti-aliasing bound 4 * dimension.
    void validate_for(std::size_t dimension) const;
};

/// Nodes and weights for (1/2pi) * integral over (-pi, pi]; weights sum to 1.
struct AngularRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

AngularRule make_angular_rule(const QuadratureSpec& spec);

/// Gauss-Legendre nodes and weights on [-1, 1].
AngularRule gauss_legendre(std::size_t order);

using PeriodicFunction = std::function<double(double)>;

/// Quadrature approximation of (1/2pi) * integral_{-pi}^{pi} f(t) e^{-i l t} dt.
cplx fourier_coefficient(const PeriodicFunction& f, int l, const QuadratureSpec& quad);
cplx fourier_coefficient(const PeriodicFunction& f, int l, const AngularRule& rule);

}  // namespace toa
