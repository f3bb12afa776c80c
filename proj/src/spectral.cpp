#include "toa/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "toa/kernels.hpp"

namespace toa {

namespace {

struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> offdiag;  // offdiag[i] couples i and i+1; last entry is 0
    ComplexMatrix transform;      // A = transform * T * transform^dagger
};

// Unitary reduction to a real symmetric tridiagonal matrix: Householder
// reflections followed by a diagonal phase change that makes the
// off-diagonal real and nonnegative.
Tridiagonal tridiagonalize(ComplexMatrix a) {
    const std::size_t n = a.rows();
    ComplexMatrix q = ComplexMatrix::identity(n);
    std::vector<cplx> v(n);
    std::vector<cplx> u(n);
    std::vector<cplx> w(n);

    for (std::size_t k = 0; k + 2 < n; ++k) {
        double tail = 0.0;
        for (std::size_t i = k + 2; i < n; ++i) tail += std::norm(a(i, k));
        if (tail == 0.0) continue;

        const cplx x0 = a(k + 1, k);
        const double xnorm = std::sqrt(tail + std::norm(x0));
        const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx(1.0);

        std::fill(v.begin(), v.end(), cplx{});
        for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
        v[k + 1] += phase * xnorm;
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
        const double tau = 2.0 / vnorm2;

        // A <- H A H with H = I - tau v v^dagger, as a Hermitian rank-2 update.
        for (std::size_t i = 0; i < n; ++i) {
            cplx acc{};
            for (std::size_t j = k + 1; j < n; ++j) acc += a(i, j) * v[j];
            u[i] = acc;
        }
        cplx vu{};
        for (std::size_t i = k + 1; i < n; ++i) vu += std::conj(v[i]) * u[i];
        for (std::size_t i = 0; i < n; ++i) w[i] = tau * u[i] - 0.5 * tau * tau * vu * v[i];
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= v[i] * std::conj(w[j]) + w[i] * std::conj(v[j]);
            }
        }

        // Q <- Q H.
        for (std::size_t i = 0; i < n; ++i) {
            cplx qv{};
            for (std::size_t j = k + 1; j < n; ++j) qv += q(i, j) * v[j];
            qv *= tau;
            for (std::size_t j = k + 1; j < n; ++j) q(i, j) -= qv * std::conj(v[j]);
        }
    }

    Tridiagonal t;
    t.diag.resize(n);
    t.offdiag.assign(n, 0.0);
    std::vector<cplx> phases(n, cplx(1.0));
    for (std::size_t i = 0; i < n; ++i) t.diag[i] = a(i, i).real();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const cplx e = a(i + 1, i);
        const double mag = std::abs(e);
        t.offdiag[i] = mag;
        phases[i + 1] = mag > 0.0 ? phases[i] * (e / mag) : phases[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) q(i, j) *= phases[j];
    }
    t.transform = std::move(q);
    return t;
}

// Implicit-shift QL iteration on a real symmetric tridiagonal matrix;
// eigenvectors accumulate into the columns of z (row-major n x n).
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z, std::size_t n) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const int nn = static_cast<int>(n);
    for (int l = 0; l < nn; ++l) {
        int iter = 0;
        int m = l;
        do {
            for (m = l; m < nn - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 200) {
                    throw std::runtime_error("tridiagonal QL iteration did not converge");
                }
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0;
                double c = 1.0;
                double p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (std::size_t k = 0; k < n; ++k) {
                        f = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * f;
                        z[k * n + i] = c * z[k * n + i] - s * f;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

std::vector<cplx> SpectralDecomposition::eigenvector(std::size_t k) const {
    std::vector<cplx> out(eigenvectors.rows());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = eigenvectors(i, k);
    return out;
}

double SpectralDecomposition::orthonormality_error() const {
    const auto gram = kernels::parallel::adjoint_matmul(eigenvectors, eigenvectors);
    return max_abs_diff(gram, ComplexMatrix::identity(gram.rows()));
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
    return spectral_transform(*this, [](double x) { return x; });
}

double SpectralDecomposition::reconstruction_error(const ComplexMatrix& a) const {
    return max_abs_diff(a, reconstruct());
}

SpectralDecomposition eigendecompose_hermitian(const ComplexMatrix& a) {
    if (!passes_hermiticity(a)) {
        throw NonHermitianInput("eigendecompose_hermitian: input is not Hermitian");
    }
    const std::size_t n = a.rows();
    SpectralDecomposition out;
    if (n == 0) return out;

    Tridiagonal t = tridiagonalize(a);
    std::vector<double> z(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;
    tridiagonal_ql(t.diag, t.offdiag, z, n);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return t.diag[x] > t.diag[y]; });

    // V = transform * Z, columns permuted into sorted order.
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        const std::size_t src = order[c];
        out.eigenvalues[c] = t.diag[src];
        for (std::size_t i = 0; i < n; ++i) {
            cplx acc{};
            for (std::size_t k = 0; k < n; ++k) acc += t.transform(i, k) * z[k * n + src];
            out.eigenvectors(i, c) = acc;
        }
        std::size_t pivot = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double mag = std::abs(out.eigenvectors(i, c));
            if (mag > best) {
                best = mag;
                pivot = i;
            }
        }
        if (best > 0.0) {
            const cplx fix = std::conj(out.eigenvectors(pivot, c)) / best;
            for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, c) *= fix;
            out.eigenvectors(pivot, c) = best;
        }
    }
    return out;
}

SpectralDecomposition eigendecompose_hermitian(const HermitianOperator& a) {
    return eigendecompose_hermitian(a.matrix());
}

std::size_t count_eigenvalues_above(const SpectralDecomposition& d, double lambda) {
    if (!(lambda > 0.0)) {
        throw DomainError("count_eigenvalues_above needs lambda > 0");
    }
    return static_cast<std::size_t>(
        std::count_if(d.eigenvalues.begin(), d.eigenvalues.end(), [&](double t) { return std::abs(t) > lambda; }));
}

SignCensus sign_census(const SpectralDecomposition& d, double zero_tol) {
    if (!(zero_tol >= 0.0)) {
        throw DomainError("sign_census needs zero_tol >= 0");
    }
    SignCensus c;
    for (const double t : d.eigenvalues) {
        if (std::abs(t) <= zero_tol) {
            ++c.zero;
        } else if (t > 0.0) {
            ++c.positive;
        } else {
            ++c.negative;
        }
    }
    return c;
}

ComplexMatrix spectral_transform(const SpectralDecomposition& d, const std::function<double(double)>& f) {
    const std::size_t n = d.size();
    ComplexMatrix scaled(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double fk = f(d.eigenvalues[k]);
        for (std::size_t i = 0; i < n; ++i) scaled(i, k) = d.eigenvectors(i, k) * fk;
    }
    return kernels::parallel::matmul(scaled, d.eigenvectors.adjoint());
}

ComplexMatrix spectral_sqrt(const SpectralDecomposition& d, NegativeEigenvaluePolicy policy, double zero_tol) {
    if (policy == NegativeEigenvaluePolicy::Reject) {
        for (const double t : d.eigenvalues) {
            if (t < -zero_tol) {
                throw DomainError("operator has negative eigenvalue " + std::to_string(t) +
                                  "; square root undefined under the reject policy");
            }
        }
    }
    return spectral_transform(d, [](double t) { return t > 0.0 ? std::sqrt(t) : 0.0; });
}

Propagator::Propagator(const HermitianOperator& h, const PhysicalParams& params)
    : diagonal_(true), hbar_(params.hbar) {
    params.validate();
    const auto& m = h.matrix();
    for (std::size_t i = 0; i < m.rows() && diagonal_; ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (i != j && m(i, j) != cplx{}) {
                diagonal_ = false;
                break;
            }
        }
    }
    if (diagonal_) {
        energies_.resize(m.rows());
        for (std::size_t i = 0; i < m.rows(); ++i) energies_[i] = m(i, i).real();
    } else {
        auto d = eigendecompose_hermitian(m);
        energies_ = std::move(d.eigenvalues);
        basis_change_ = std::move(d.eigenvectors);
    }
}

ComplexMatrix Propagator::matrix(double t) const {
    const std::size_t n = energies_.size();
    if (diagonal_) {
        ComplexMatrix u(n, n);
        for (std::size_t i = 0; i < n; ++i) u(i, i) = std::polar(1.0, -energies_[i] * t / hbar_);
        return u;
    }
    ComplexMatrix scaled(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx ph = std::polar(1.0, -energies_[k] * t / hbar_);
        for (std::size_t i = 0; i < n; ++i) scaled(i, k) = basis_change_(i, k) * ph;
    }
    return kernels::parallel::matmul(scaled, basis_change_.adjoint());
}

std::vector<cplx> Propagator::apply(std::span<const cplx> psi, double t) const {
    if (psi.size() != energies_.size()) {
        throw std::invalid_argument("Propagator::apply: dimension mismatch");
    }
    if (diagonal_) {
        std::vector<cplx> out(psi.begin(), psi.end());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] *= std::polar(1.0, -energies_[i] * t / hbar_);
        return out;
    }
    auto coeffs = kernels::parallel::matvec(basis_change_.adjoint(), psi);
    for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] *= std::polar(1.0, -energies_[k] * t / hbar_);
    return kernels::parallel::matvec(basis_change_, coeffs);
}

StateVector evolve(const StateVector& psi, const HermitianOperator& h, double t, const PhysicalParams& params) {
    if (!(psi.basis() == h.basis())) {
        throw std::invalid_argument("evolve: state and Hamiltonian live on different bases");
    }
    const Propagator u(h, params);
    return StateVector::normalized(psi.basis(), u.apply(psi.amplitudes(), t));
}

double TimeTranslationReport::min_max_overlap() const {
    return max_overlap.empty() ? 1.0 : *std::min_element(max_overlap.begin(), max_overlap.end());
}

double TimeTranslationReport::completeness_error() const {
    double worst = 0.0;
    for (const double s : overlap_sum) worst = std::max(worst, std::abs(s - 1.0));
    return worst;
}

bool TimeTranslationReport::certifies_non_invariance(double delta) const {
    return min_max_overlap() < 1.0 - delta;
}

TimeTranslationReport time_translation_report(const SpectralDecomposition& d, const HermitianOperator& h,
                                              double t, const PhysicalParams& params) {
    const std::size_t n = d.size();
    if (h.dimension() != n) {
        throw std::invalid_argument("time_translation_report: decomposition and Hamiltonian dimensions differ");
    }
    const Propagator u(h, params);
    const auto evolved = kernels::parallel::matmul(u.matrix(t), d.eigenvectors);
    const auto overlaps = kernels::parallel::adjoint_matmul(d.eigenvectors, evolved);

    TimeTranslationReport report;
    report.t = t;
    report.max_overlap.assign(n, 0.0);
    report.overlap_sum.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
            const double c = std::norm(overlaps(l, k));
            report.max_overlap[k] = std::max(report.max_overlap[k], c);
            report.overlap_sum[k] += c;
        }
    }
    return report;
}

std::vector<double> position_density(const StateVector& psi, std::size_t grid_size) {
    const auto& basis = psi.basis();
    if (grid_size < basis.dimension()) {
        throw DomainError("position grid must have at least dimension = " + std::to_string(basis.dimension()) +
                          " points");
    }
    using std::numbers::pi;
    const double step = 2.0 * pi / static_cast<double>(grid_size);
    const auto amps = psi.amplitudes();
    std::vector<double> density(grid_size);
#pragma omp parallel for schedule(static)
    for (long ml = 0; ml < static_cast<long>(grid_size); ++ml) {
        const double theta = -pi + (static_cast<double>(ml) + 0.5) * step;
        cplx value{};
        for (std::size_t r = 0; r < amps.size(); ++r) {
            value += amps[r] * std::polar(1.0, basis.label(r) * theta);
        }
        density[static_cast<std::size_t>(ml)] = std::norm(value) * step / (2.0 * pi);
    }
    return density;
}

}  // namespace toa
