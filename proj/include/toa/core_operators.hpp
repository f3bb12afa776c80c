#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "toa/basis.hpp"
#include "toa/matrix.hpp"
#include "toa/quadrature.hpp"

namespace toa {

/// Value of the classical arrival time at Theta = 0 with L != 0, where the
/// branch formulas disagree.
enum class ScreenConvention {
    AtScreen,        ///< T(0, L) = 0: the particle already sits on the screen
    FullRevolution,  ///< T(0, L) = 2 pi m r^2 / |L|
};

/// Nonnegative regulator g(Theta) for the L = 0 fiber of the classical
/// arrival time.
class RegulatorFunction {
public:
    /// g = c for all Theta; Fourier coefficients are then c * delta_{l,0}.
    static RegulatorFunction constant(double c);
    static RegulatorFunction from_function(std::function<double(double)> g, std::string description);

    /// Parses "const:c", "cos:a:b" (g = a + b cos Theta, a >= |b|) or "abs:c" (g = c |Theta|).
    static RegulatorFunction parse(std::string_view spec);

    double operator()(double theta) const { return evaluator_(theta); }
    const std::optional<double>& constant_value() const noexcept { return constant_; }
    const std::string& description() const noexcept { return description_; }

    /// (1/2pi) * integral g(Theta) e^{-i l Theta}; analytic for constant g.
    cplx fourier(int l, const AngularRule& rule) const;

    /// Throws DomainError if g is negative on any node of the rule.
    void check_nonnegative(const AngularRule& rule) const;

private:
    RegulatorFunction(std::function<double(double)> g, std::optional<double> c, std::string description);

    std::function<double(double)> evaluator_;
    std::optional<double> constant_;
    std::string description_;
};

/// Ordering kernel K(sigma, l) of the generalized Stratonovich-Weyl quantizer.
class OrderingKernel {
public:
    enum class Kind { Weyl, Symmetric, Custom };

    static OrderingKernel weyl();
    static OrderingKernel symmetric();
    static OrderingKernel custom(std::function<cplx(double, int)> k, std::string name);
    static OrderingKernel parse(std::string_view name);

    Kind kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }

    cplx operator()(double sigma, int l) const;

    /// (1/2pi) * integral_{-pi}^{pi} K(sigma, l) e^{i sigma a} d sigma. Analytic
    /// for the named kernels, sigma-quadrature otherwise.
    cplx sigma_integral(int l, double a, const AngularRule& sigma_rule) const;

private:
    OrderingKernel(Kind kind, std::function<cplx(double, int)> k, std::string name);

    Kind kind_;
    std::function<cplx(double, int)> evaluator_;
    std::string name_;
};

/// First-passage time to the screen at Theta = 0 for angle theta in (-pi, pi]
/// and angular momentum L.
double classical_toa(double theta, double angular_momentum, const RegulatorFunction& g,
                     const PhysicalParams& params,
                     ScreenConvention convention = ScreenConvention::AtScreen);

/// <j| Omega_K(Theta, n) |k>.
cplx quantizer_element(const OrderingKernel& kernel, double theta, int n, int j, int k,
                       const QuadratureSpec& quad);

enum class Execution { Serial, Parallel };

struct WwscOptions {
    /// Cutoff on |n| in the angular-momentum sum; negative means n_max.
    int n_cutoff = -1;
    ScreenConvention convention = ScreenConvention::AtScreen;
    Execution execution = Execution::Parallel;
};

/// Arrival-time operator by direct phase-space quadrature of the
/// quantization integral, truncated to |n| <= cutoff.
HermitianOperator build_operator_wwsc(const OrderingKernel& kernel, const RegulatorFunction& g,
                                      const BasisTruncation& basis, const PhysicalParams& params,
                                      const QuadratureSpec& quad, const WwscOptions& options = {});

/// Largest entry change when the n-sum cutoff is doubled; zero for the
/// symmetric kernel whose quantizer vanishes unless n is j or k.
double wwsc_truncation_estimate(const OrderingKernel& kernel, const RegulatorFunction& g,
                                const BasisTruncation& basis, const PhysicalParams& params,
                                const QuadratureSpec& quad, const WwscOptions& options = {});

/// Symmetric-ordering arrival-time operator from its closed-form matrix
/// elements. The quadrature rule is only used for Fourier coefficients of a
/// non-constant g.
HermitianOperator build_symmetric_closed_form(const RegulatorFunction& g, const BasisTruncation& basis,
                                              const PhysicalParams& params, const QuadratureSpec& quad);

/// Free Hamiltonian on the ring, diag(hbar^2 k^2 / (2 m r^2)).
HermitianOperator free_hamiltonian(const BasisTruncation& basis, const PhysicalParams& params);

}  // namespace toa
