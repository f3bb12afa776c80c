#include "toa/waiting_screen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "toa/kernels.hpp"
#include "toa/spectral.hpp"

namespace toa {

namespace {

using std::numbers::pi;

// Operator whose expectation is the probability of absorption at one
// measurement: E itself for the projector absorber, 1 - E'^dagger E' otherwise.
ComplexMatrix detection_operator(const HermitianOperator& e, const ComplexMatrix& e_prime, AbsorberMode mode) {
    if (mode == AbsorberMode::Projector) return e.matrix();
    auto d = ComplexMatrix::identity(e_prime.rows());
    d -= kernels::parallel::adjoint_matmul(e_prime, e_prime);
    return d;
}

void require_same_basis(const StateVector& phi, const HermitianOperator& e, const HermitianOperator& h) {
    if (!(phi.basis() == e.basis()) || !(phi.basis() == h.basis())) {
        throw std::invalid_argument("state, screen and Hamiltonian must share one basis");
    }
}

double real_expectation(const ComplexMatrix& a, std::span<const cplx> x) {
    return std::max(0.0, expectation(a, x).real());
}

}  // namespace

std::string_view to_string(AbsorberMode mode) noexcept {
    switch (mode) {
        case AbsorberMode::Projector: return "projector";
        case AbsorberMode::ComplexPotential: return "complex-potential";
        case AbsorberMode::Custom: return "custom";
    }
    return "unknown";
}

std::string_view to_string(MeasureKind kind) noexcept { return kind == MeasureKind::POV ? "POV" : "GPOV"; }

void ScreenConfig::validate() const {
    if (!(eta > 0.0)) throw DomainError("measurement step eta must be positive");
    if (!(arc_begin >= -pi && arc_end <= pi && arc_begin < arc_end)) {
        throw DomainError("detection arc must satisfy -pi <= begin < end <= pi");
    }
    if (steps == 0) throw DomainError("number of measurement steps must be positive");
    if (absorber == AbsorberMode::ComplexPotential && !(potential > 0.0)) {
        throw DomainError("complex-potential absorber needs V0 > 0");
    }
    if (absorber == AbsorberMode::Custom && !custom_reflector) {
        throw DomainError("custom absorber needs an operator");
    }
    if (!(pov_tolerance >= 0.0)) throw DomainError("POV tolerance must be nonnegative");
}

HermitianOperator screen_projector(const ScreenConfig& cfg, const BasisTruncation& basis) {
    if (!(cfg.arc_begin >= -pi && cfg.arc_end <= pi && cfg.arc_begin < cfg.arc_end)) {
        throw DomainError("detection arc must satisfy -pi <= begin < end <= pi");
    }
    const std::size_t dim = basis.dimension();
    const std::size_t grid = cfg.grid_for(dim);
    if (grid < dim) {
        throw DomainError("position grid must have at least dimension = " + std::to_string(dim) + " points");
    }
    const double step = 2.0 * pi / static_cast<double>(grid);
    std::vector<double> inside;
    for (std::size_t m = 0; m < grid; ++m) {
        const double theta = -pi + (static_cast<double>(m) + 0.5) * step;
        if (theta >= cfg.arc_begin && theta < cfg.arc_end) inside.push_back(theta);
    }
    if (inside.empty()) {
        throw EmptyArc("no position grid point falls inside the detection arc");
    }

    // compressed(j, k) = (1/G) sum_{m in arc} e^{-i j Theta_m} e^{i k Theta_m}.
    ComplexMatrix compressed(dim, dim);
    kernels::parallel::fill_entries(compressed, [&](std::size_t rj, std::size_t rk) {
        const int l = basis.label(rk) - basis.label(rj);
        cplx acc{};
        for (const double theta : inside) acc += std::polar(1.0, l * theta);
        return acc / static_cast<double>(grid);
    });

    if (inside.size() == grid) {
        return HermitianOperator(basis, ComplexMatrix::identity(dim));
    }
    const auto d = eigendecompose_hermitian(compressed);
    const auto projector = spectral_transform(d, [](double x) { return x > 0.5 ? 1.0 : 0.0; });
    if (trace_real(projector) < 0.5) {
        throw EmptyArc("detection arc is too narrow to support a state at this truncation and grid");
    }
    return HermitianOperator(basis, projector);
}

double operator_norm(const ComplexMatrix& a) {
    const auto gram = kernels::parallel::adjoint_matmul(a, a);
    const auto d = eigendecompose_hermitian(gram);
    return d.eigenvalues.empty() ? 0.0 : std::sqrt(std::max(0.0, d.eigenvalues.front()));
}

ComplexMatrix reflector(const HermitianOperator& e, const ScreenConfig& cfg, const PhysicalParams& params) {
    cfg.validate();
    params.validate();
    const std::size_t dim = e.dimension();
    switch (cfg.absorber) {
        case AbsorberMode::Projector:
            return ComplexMatrix::identity(dim) - e.matrix();
        case AbsorberMode::ComplexPotential: {
            const double damping = std::exp(-cfg.potential * cfg.eta / params.hbar);
            auto out = ComplexMatrix::identity(dim) - e.matrix();
            out += cplx(damping) * e.matrix();
            return out;
        }
        case AbsorberMode::Custom: {
            const auto& op = *cfg.custom_reflector;
            if (op.rows() != dim || op.cols() != dim) {
                throw std::invalid_argument("custom reflector shape does not match the basis");
            }
            const double n = operator_norm(op);
            if (n > 1.0 + 1e-12) {
                throw ContractionViolation("custom reflector amplifies norms (operator norm " + std::to_string(n) + ")");
            }
            return op;
        }
    }
    throw std::logic_error("unhandled absorber mode");
}

double zeno_time(const StateVector& phi, const HermitianOperator& h, const PhysicalParams& params) {
    params.validate();
    const auto amps = phi.amplitudes();
    const auto hpsi = apply(h.matrix(), amps);
    const double mean = inner(amps, hpsi).real();
    // Variance as ||(H - <H>) psi||^2, which avoids cancellation in <H^2> - <H>^2.
    double variance = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) variance += std::norm(hpsi[i] - mean * amps[i]);
    const double spread = std::sqrt(variance);
    if (spread <= 1e-12 * (1.0 + std::abs(mean))) return std::numeric_limits<double>::infinity();
    return params.hbar / spread;
}

AbsorptionRecord absorption_probabilities(const StateVector& phi, const HermitianOperator& e,
                                          const ComplexMatrix& e_prime, const HermitianOperator& h,
                                          const ScreenConfig& cfg, const PhysicalParams& params) {
    cfg.validate();
    require_same_basis(phi, e, h);
    if (std::abs(norm(phi.amplitudes()) - 1.0) > 1e-10) {
        throw NotNormalized("input state is not normalized");
    }
    AbsorptionRecord rec;
    rec.eta = cfg.eta;
    rec.zeno_time = zeno_time(phi, h, params);
    if (!cfg.override_zeno_gate && !(cfg.eta > rec.zeno_time)) {
        throw ZenoGateError(cfg.eta, rec.zeno_time);
    }

    const Propagator u(h, params);
    const auto step = kernels::parallel::matmul(u.matrix(cfg.eta), e_prime);
    const auto detect = detection_operator(e, e_prime, cfg.absorber);

    std::vector<cplx> psi(phi.amplitudes().begin(), phi.amplitudes().end());
    rec.probabilities.reserve(cfg.steps + 1);
    rec.surviving_norm.reserve(cfg.steps + 2);
    for (std::size_t j = 0; j <= cfg.steps; ++j) {
        rec.surviving_norm.push_back(norm(psi) * norm(psi));
        rec.probabilities.push_back(std::min(1.0, real_expectation(detect, psi)));
        psi = kernels::parallel::matvec(step, psi);
    }
    rec.surviving_norm.push_back(norm(psi) * norm(psi));

    for (const double p : rec.probabilities) rec.total += p;
    rec.survival = 1.0 - rec.total;
    if (rec.total > 0.0) {
        const auto avg = average_arrival_time(rec.probabilities, cfg);
        rec.tau_mean = avg.value;
        rec.kind = avg.kind;
    } else {
        rec.kind = MeasureKind::GPOV;
    }
    return rec;
}

std::vector<double> absorption_chain(const StateVector& phi, const HermitianOperator& e, const HermitianOperator& h,
                                     const ScreenConfig& cfg, const PhysicalParams& params,
                                     std::span<const double> times) {
    require_same_basis(phi, e, h);
    if (times.empty() || times.front() != 0.0) {
        throw DomainError("measurement times must start at t_0 = 0");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw DomainError("measurement times must increase strictly");
    }
    const Propagator u(h, params);
    auto reflector_for = [&](double interval) {
        ScreenConfig local = cfg;
        local.eta = interval;
        return reflector(e, local, params);
    };

    std::vector<cplx> psi(phi.amplitudes().begin(), phi.amplitudes().end());
    std::vector<double> probs;
    probs.reserve(times.size());
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double preceding = j == 0 ? (times.size() > 1 ? times[1] : cfg.eta) : times[j] - times[j - 1];
        const auto e_prime = reflector_for(preceding);
        probs.push_back(std::min(1.0, real_expectation(detection_operator(e, e_prime, cfg.absorber), psi)));
        if (j + 1 < times.size()) {
            psi = u.apply(kernels::parallel::matvec(e_prime, psi), times[j + 1] - times[j]);
        }
    }
    return probs;
}

ArrivalTime average_arrival_time(std::span<const double> probabilities, const ScreenConfig& cfg) {
    double total = 0.0;
    double weighted = 0.0;
    for (std::size_t j = 0; j < probabilities.size(); ++j) {
        total += probabilities[j];
        weighted += static_cast<double>(j) * cfg.eta * probabilities[j];
    }
    if (!(total > 0.0)) {
        throw UndefinedAverage("average arrival time undefined: nothing was absorbed");
    }
    if (total >= 1.0 - cfg.pov_tolerance) return {weighted, MeasureKind::POV};
    return {weighted / total, MeasureKind::GPOV};
}

ArrivalTime average_arrival_time(const AbsorptionRecord& rec, const ScreenConfig& cfg) {
    return average_arrival_time(rec.probabilities, cfg);
}

HermitianOperator pov_element(const HermitianOperator& e, const ComplexMatrix& e_prime, const HermitianOperator& h,
                              const ScreenConfig& cfg, const PhysicalParams& params, std::size_t j) {
    const Propagator u(h, params);
    const auto step = kernels::parallel::matmul(u.matrix(cfg.eta), e_prime);
    auto power = ComplexMatrix::identity(e.dimension());
    for (std::size_t i = 0; i < j; ++i) power = kernels::parallel::matmul(step, power);
    const auto detect = detection_operator(e, e_prime, cfg.absorber);
    auto f = kernels::parallel::adjoint_matmul(power, kernels::parallel::matmul(detect, power));
    return HermitianOperator(e.basis(), std::move(f));
}

ComplexMatrix survival_operator(const ComplexMatrix& e_prime, const HermitianOperator& h, const ScreenConfig& cfg,
                                const PhysicalParams& params, std::size_t steps) {
    const Propagator u(h, params);
    const auto step = kernels::parallel::matmul(u.matrix(cfg.eta), e_prime);
    auto power = ComplexMatrix::identity(h.dimension());
    for (std::size_t i = 0; i < steps; ++i) power = kernels::parallel::matmul(step, power);
    return kernels::parallel::adjoint_matmul(power, power);
}

bool ZenoScan::nonincreasing_from(std::size_t n_from) const {
    const ZenoScanRow* prev = nullptr;
    for (const auto& row : rows) {
        if (row.n < n_from) continue;
        if (prev && row.probability > prev->probability) return false;
        prev = &row;
    }
    return true;
}

ZenoScan zeno_limit_scan(const StateVector& phi, const HermitianOperator& e, const HermitianOperator& h,
                         double total_time, std::span<const std::size_t> n_list, const PhysicalParams& params) {
    require_same_basis(phi, e, h);
    if (!(total_time > 0.0)) throw DomainError("Zeno scan needs a positive total time");
    params.validate();
    for (const auto n : n_list) {
        if (n == 0) throw DomainError("Zeno scan step counts must be positive");
    }

    const Propagator u(h, params);
    const auto e_prime = ComplexMatrix::identity(e.dimension()) - e.matrix();

    ZenoScan scan;
    scan.total_time = total_time;
    scan.rows.resize(n_list.size());
#pragma omp parallel for schedule(dynamic)
    for (long idx = 0; idx < static_cast<long>(n_list.size()); ++idx) {
        const std::size_t n = n_list[static_cast<std::size_t>(idx)];
        const double eta = total_time / static_cast<double>(n);
        const auto step = kernels::serial::matmul(u.matrix(eta), e_prime);
        std::vector<cplx> psi(phi.amplitudes().begin(), phi.amplitudes().end());
        for (std::size_t s = 0; s < n; ++s) psi = kernels::serial::matvec(step, psi);
        scan.rows[static_cast<std::size_t>(idx)] = {n, std::max(0.0, expectation(e.matrix(), psi).real())};
    }
    std::stable_sort(scan.rows.begin(), scan.rows.end(),
                     [](const ZenoScanRow& a, const ZenoScanRow& b) { return a.n < b.n; });
    return scan;
}

}  // namespace toa
