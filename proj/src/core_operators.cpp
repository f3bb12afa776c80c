#include "toa/core_operators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "toa/kernels.hpp"

namespace toa {

namespace {

using std::numbers::pi;

double parse_double(std::string_view text, std::string_view what) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw DomainError("cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

/// (1/2pi) * integral_{-pi}^{pi} e^{i sigma a} d sigma = sin(pi a) / (pi a), exact
/// at integer and half-integer a.
double unit_sinc(double a) {
    const double twice = 2.0 * a;
    if (twice == std::round(twice)) {
        if (a == std::round(a)) return a == 0.0 ? 1.0 : 0.0;
        const double m = std::floor(a);
        const double sign = std::fmod(std::abs(m), 2.0) == 0.0 ? 1.0 : -1.0;
        return sign / (pi * a);
    }
    return std::sin(pi * a) / (pi * a);
}

template <class EntryFn>
void fill(ComplexMatrix& out, Execution mode, EntryFn&& fn) {
    if (mode == Execution::Serial) {
        kernels::serial::fill_entries(out, fn);
    } else {
        kernels::parallel::fill_entries(out, fn);
    }
}

int effective_cutoff(const WwscOptions& options, const BasisTruncation& basis) {
    return options.n_cutoff < 0 ? basis.n_max() : options.n_cutoff;
}

ComplexMatrix wwsc_matrix(const OrderingKernel& kernel, const RegulatorFunction& g,
                          const BasisTruncation& basis, const PhysicalParams& params,
                          const QuadratureSpec& quad, const WwscOptions& options) {
    params.validate();
    const std::size_t dim = basis.dimension();
    quad.validate_for(dim);
    const AngularRule rule = make_angular_rule(quad);
    g.check_nonnegative(rule);

    const int cutoff = effective_cutoff(options, basis);
    const int l_max = 2 * basis.n_max();

    // fourier(n, l) = (1/2pi) * integral T(Theta, n hbar) e^{-i l Theta} dTheta.
    ComplexMatrix fourier(static_cast<std::size_t>(2 * cutoff + 1), static_cast<std::size_t>(2 * l_max + 1));
    fill(fourier, options.execution, [&](std::size_t row, std::size_t col) {
        const int n = static_cast<int>(row) - cutoff;
        const int l = static_cast<int>(col) - l_max;
        const double angular_momentum = n * params.hbar;
        cplx acc{};
        for (std::size_t m = 0; m < rule.nodes.size(); ++m) {
            const double theta = rule.nodes[m];
            const double t = classical_toa(theta, angular_momentum, g, params, options.convention);
            acc += rule.weights[m] * t * std::polar(1.0, -static_cast<double>(l) * theta);
        }
        return acc;
    });

    ComplexMatrix out(dim, dim);
    fill(out, options.execution, [&](std::size_t rj, std::size_t rk) {
        const int j = basis.label(rj);
        const int k = basis.label(rk);
        const int l = j - k;
        cplx acc{};
        for (int n = -cutoff; n <= cutoff; ++n) {
            const double a = 0.5 * (j + k) - n;
            const cplx s = kernel.sigma_integral(l, a, rule);
            if (s == cplx{}) continue;
            acc += s * fourier(static_cast<std::size_t>(n + cutoff), static_cast<std::size_t>(l + l_max));
        }
        return acc;
    });
    return out;
}

}  // namespace

RegulatorFunction::RegulatorFunction(std::function<double(double)> g, std::optional<double> c,
                                     std::string description)
    : evaluator_(std::move(g)), constant_(c), description_(std::move(description)) {}

RegulatorFunction RegulatorFunction::constant(double c) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
        throw DomainError("constant regulator must be a finite nonnegative number");
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, c);
    return RegulatorFunction([c](double) { return c; }, c, "const:" + std::string(buf, res.ptr));
}

RegulatorFunction RegulatorFunction::from_function(std::function<double(double)> g, std::string description) {
    return RegulatorFunction(std::move(g), std::nullopt, std::move(description));
}

RegulatorFunction RegulatorFunction::parse(std::string_view spec) {
    const auto parts = split(spec, ':');
    if (parts[0] == "const" && parts.size() == 2) {
        return constant(parse_double(parts[1], "regulator constant"));
    }
    if (parts[0] == "cos" && parts.size() == 3) {
        const double a = parse_double(parts[1], "regulator offset");
        const double b = parse_double(parts[2], "regulator amplitude");
        if (a < std::abs(b)) {
            throw DomainError("regulator cos:a:b needs a >= |b| to stay nonnegative");
        }
        return from_function([a, b](double t) { return a + b * std::cos(t); }, std::string(spec));
    }
    if (parts[0] == "abs" && parts.size() == 2) {
        const double c = parse_double(parts[1], "regulator slope");
        if (c < 0.0) throw DomainError("regulator abs:c needs c >= 0");
        return from_function([c](double t) { return c * std::abs(t); }, std::string(spec));
    }
    throw DomainError("unrecognised regulator spec '" + std::string(spec) +
                      "' (expected const:c, cos:a:b or abs:c)");
}

cplx RegulatorFunction::fourier(int l, const AngularRule& rule) const {
    if (constant_) return l == 0 ? cplx(*constant_) : cplx{};
    return fourier_coefficient(evaluator_, l, rule);
}

void RegulatorFunction::check_nonnegative(const AngularRule& rule) const {
    if (constant_) return;
    for (const double t : rule.nodes) {
        if (!(evaluator_(t) >= 0.0)) {
            throw DomainError("regulator g is negative at Theta = " + std::to_string(t));
        }
    }
}

OrderingKernel::OrderingKernel(Kind kind, std::function<cplx(double, int)> k, std::string name)
    : kind_(kind), evaluator_(std::move(k)), name_(std::move(name)) {}

OrderingKernel OrderingKernel::weyl() {
    return OrderingKernel(Kind::Weyl, [](double, int) { return cplx(1.0); }, "weyl");
}

OrderingKernel OrderingKernel::symmetric() {
    return OrderingKernel(
        Kind::Symmetric, [](double sigma, int l) { return cplx(std::cos(0.5 * l * sigma)); }, "symmetric");
}

OrderingKernel OrderingKernel::custom(std::function<cplx(double, int)> k, std::string name) {
    return OrderingKernel(Kind::Custom, std::move(k), std::move(name));
}

OrderingKernel OrderingKernel::parse(std::string_view name) {
    if (name == "weyl") return weyl();
    if (name == "symmetric") return symmetric();
    throw DomainError("unknown ordering kernel '" + std::string(name) + "' (expected weyl or symmetric)");
}

cplx OrderingKernel::operator()(double sigma, int l) const { return evaluator_(sigma, l); }

cplx OrderingKernel::sigma_integral(int l, double a, const AngularRule& sigma_rule) const {
    switch (kind_) {
        case Kind::Weyl:
            return unit_sinc(a);
        case Kind::Symmetric:
            // cos(l sigma / 2) splits into two exponentials with frequencies a +- l/2.
            return 0.5 * (unit_sinc(a + 0.5 * l) + unit_sinc(a - 0.5 * l));
        case Kind::Custom:
            break;
    }
    cplx acc{};
    for (std::size_t m = 0; m < sigma_rule.nodes.size(); ++m) {
        const double s = sigma_rule.nodes[m];
        acc += sigma_rule.weights[m] * evaluator_(s, l) * std::polar(1.0, s * a);
    }
    return acc;
}

double classical_toa(double theta, double angular_momentum, const RegulatorFunction& g,
                     const PhysicalParams& params, ScreenConvention convention) {
    if (!(theta > -pi && theta <= pi)) {
        throw DomainError("angle " + std::to_string(theta) + " outside (-pi, pi]");
    }
    const double inertia = params.inertia();
    const double L = angular_momentum;
    if (L == 0.0) return inertia * g(theta);
    if (theta == 0.0) {
        return convention == ScreenConvention::AtScreen ? 0.0 : inertia * 2.0 * pi / std::abs(L);
    }
    if (theta < 0.0 && L < 0.0) return -inertia * (2.0 * pi + theta) / L;
    if (theta > 0.0 && L > 0.0) return inertia * (2.0 * pi - theta) / L;
    return -inertia * theta / L;
}

cplx quantizer_element(const OrderingKernel& kernel, double theta, int n, int j, int k,
                       const QuadratureSpec& quad) {
    const AngularRule rule = kernel.kind() == OrderingKernel::Kind::Custom ? make_angular_rule(quad) : AngularRule{};
    const int l = j - k;
    return std::polar(1.0, -static_cast<double>(l) * theta) * kernel.sigma_integral(l, 0.5 * (j + k) - n, rule);
}

HermitianOperator build_operator_wwsc(const OrderingKernel& kernel, const RegulatorFunction& g,
                                      const BasisTruncation& basis, const PhysicalParams& params,
                                      const QuadratureSpec& quad, const WwscOptions& options) {
    return HermitianOperator(basis, wwsc_matrix(kernel, g, basis, params, quad, options));
}

double wwsc_truncation_estimate(const OrderingKernel& kernel, const RegulatorFunction& g,
                                const BasisTruncation& basis, const PhysicalParams& params,
                                const QuadratureSpec& quad, const WwscOptions& options) {
    if (kernel.kind() == OrderingKernel::Kind::Symmetric) return 0.0;
    WwscOptions doubled = options;
    doubled.n_cutoff = 2 * effective_cutoff(options, basis);
    const auto base = wwsc_matrix(kernel, g, basis, params, quad, options);
    const auto wide = wwsc_matrix(kernel, g, basis, params, quad, doubled);
    return max_abs_diff(base, wide);
}

HermitianOperator build_symmetric_closed_form(const RegulatorFunction& g, const BasisTruncation& basis,
                                              const PhysicalParams& params, const QuadratureSpec& quad) {
    params.validate();
    const std::size_t dim = basis.dimension();
    AngularRule rule;
    if (!g.constant_value()) {
        rule = make_angular_rule(quad);
        g.check_nonnegative(rule);
    }
    const double inertia = params.inertia();
    const double hbar = params.hbar;
    const cplx two_i_hbar(0.0, 2.0 * hbar);

    std::vector<cplx> g_hat(2 * static_cast<std::size_t>(basis.n_max()) + 1);
    for (int k = -basis.n_max(); k <= basis.n_max(); ++k) {
        g_hat[basis.row(k)] = g.fourier(k, rule);
    }

    ComplexMatrix out(dim, dim);
    for (int j = -basis.n_max(); j <= basis.n_max(); ++j) {
        for (int k = -basis.n_max(); k <= basis.n_max(); ++k) {
            cplx v;
            if (j == 0 && k == 0) {
                v = g_hat[basis.row(0)];
            } else if (k == 0) {
                v = 1.0 / (two_i_hbar * static_cast<double>(j * j)) + 0.5 * g_hat[basis.row(j)];
            } else if (j == 0) {
                v = -1.0 / (two_i_hbar * static_cast<double>(k * k)) + 0.5 * g_hat[basis.row(-k)];
            } else if (j == k) {
                v = pi / (hbar * std::abs(k));
            } else {
                const double ratio = static_cast<double>(j + k) / (static_cast<double>(j) * k * (j - k));
                v = ratio / two_i_hbar;
            }
            out(basis.row(j), basis.row(k)) = inertia * v;
        }
    }
    return HermitianOperator(basis, std::move(out));
}

HermitianOperator free_hamiltonian(const BasisTruncation& basis, const PhysicalParams& params) {
    params.validate();
    std::vector<double> energies(basis.dimension());
    for (std::size_t r = 0; r < energies.size(); ++r) {
        const double k = basis.label(r);
        energies[r] = params.hbar * params.hbar * k * k / (2.0 * params.inertia());
    }
    return HermitianOperator(basis, ComplexMatrix::diagonal(energies));
}

}  // namespace toa
