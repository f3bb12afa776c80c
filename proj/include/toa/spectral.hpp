#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "toa/basis.hpp"
#include "toa/matrix.hpp"

namespace toa {

/// Eigenpairs of a Hermitian matrix. Eigenvalues are sorted descending (ties
/// keep solver order); column k of `eigenvectors` pairs with eigenvalues[k]
/// and has its largest-modulus entry real and positive.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;

    std::size_t size() const noexcept { return eigenvalues.size(); }
    std::vector<cplx> eigenvector(std::size_t k) const;

    /// max |V^dagger V - I|.
    double orthonormality_error() const;
    /// max |A - V diag(tau) V^dagger|.
    double reconstruction_error(const ComplexMatrix& a) const;
    /// V diag(tau) V^dagger.
    ComplexMatrix reconstruct() const;
};

/// Householder tridiagonalization followed by implicit-shift QL. Throws
/// NonHermitianInput when the input fails the Hermiticity invariant.
SpectralDecomposition eigendecompose_hermitian(const ComplexMatrix& a);
SpectralDecomposition eigendecompose_hermitian(const HermitianOperator& a);

/// #{k : |tau_k| > lambda}; lambda must be positive.
std::size_t count_eigenvalues_above(const SpectralDecomposition& d, double lambda);

struct SignCensus {
    std::size_t positive = 0;
    std::size_t negative = 0;
    std::size_t zero = 0;
};

SignCensus sign_census(const SpectralDecomposition& d, double zero_tol);

enum class NegativeEigenvaluePolicy { Reject, ClampToZero };

/// V diag(f(tau)) V^dagger.
ComplexMatrix spectral_transform(const SpectralDecomposition& d, const std::function<double(double)>& f);

/// Square root of a decomposed operator. Negative eigenvalues (beyond
/// -zero_tol) raise DomainError under Reject and are set to zero under Clamp.
ComplexMatrix spectral_sqrt(const SpectralDecomposition& d,
                            NegativeEigenvaluePolicy policy = NegativeEigenvaluePolicy::Reject,
                            double zero_tol = 1e-12);

/// exp(-i H t / hbar), using the diagonal directly when H is diagonal.
class Propagator {
public:
    Propagator(const HermitianOperator& h, const PhysicalParams& params);

    ComplexMatrix matrix(double t) const;
    std::vector<cplx> apply(std::span<const cplx> psi, double t) const;

private:
    bool diagonal_;
    double hbar_;
    std::vector<double> energies_;
    ComplexMatrix basis_change_;
};

StateVector evolve(const StateVector& psi, const HermitianOperator& h, double t, const PhysicalParams& params);

struct TimeTranslationReport {
    double t = 0.0;
    /// max_l |<tau_l| e^{-iHt/hbar} |tau_k>|^2, indexed by k.
    std::vector<double> max_overlap;
    /// sum_l |<tau_l| e^{-iHt/hbar} |tau_k>|^2, indexed by k; 1 by completeness.
    std::vector<double> overlap_sum;

    double min_max_overlap() const;
    /// Worst | sum_l c_lk - 1 |.
    double completeness_error() const;
    /// True when some eigenvector is carried off its eigenline: max overlap < 1 - delta.
    bool certifies_non_invariance(double delta = 1e-3) const;
};

TimeTranslationReport time_translation_report(const SpectralDecomposition& d, const HermitianOperator& h,
                                              double t, const PhysicalParams& params);

/// |<Theta_m|psi>|^2 * dTheta on the midpoint grid Theta_m = -pi + (m + 1/2) dTheta.
std::vector<double> position_density(const StateVector& psi, std::size_t grid_size);

}  // namespace toa
