#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "toa/basis.hpp"

namespace toa {

using cplx = std::complex<double>;

/// Dense row-major complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<cplx> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const cplx> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

    std::span<cplx> data() noexcept { return data_; }
    std::span<const cplx> data() const noexcept { return data_; }

    ComplexMatrix adjoint() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(cplx s);

    /// Largest entry modulus.
    double max_abs() const noexcept;

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);

/// Matrix product using the parallel kernel.
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

std::vector<cplx> apply(const ComplexMatrix& a, std::span<const cplx> x);

/// max |a - b| over entries; matrices must share a shape.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// max_{j,k} |A[j][k] - conj(A[k][j])|.
double hermiticity_residual(const ComplexMatrix& a);

/// True when the residual is within 1e-10 * (1 + max|A|).
bool passes_hermiticity(const ComplexMatrix& a);

/// Frobenius norm sqrt(sum |A_jk|^2).
double hilbert_schmidt_norm(const ComplexMatrix& a);

double trace_real(const ComplexMatrix& a);

/// Hermitian operator on a truncated angular-momentum basis. Construction
/// checks the Hermiticity invariant.
class HermitianOperator {
public:
    HermitianOperator(BasisTruncation basis, ComplexMatrix entries);

    const BasisTruncation& basis() const noexcept { return basis_; }
    const ComplexMatrix& matrix() const noexcept { return entries_; }
    std::size_t dimension() const noexcept { return basis_.dimension(); }

    /// Entry <j|A|k> addressed by momentum labels.
    cplx at(int j, int k) const { return entries_(basis_.row(j), basis_.row(k)); }

private:
    BasisTruncation basis_;
    ComplexMatrix entries_;
};

double hilbert_schmidt_norm(const HermitianOperator& a);

/// Unit-norm state in the truncated basis.
class StateVector {
public:
    /// Throws NotNormalized when | ||psi|| - 1 | > 1e-10.
    StateVector(BasisTruncation basis, std::vector<cplx> amplitudes);

    /// Rescales the amplitudes to unit norm; throws NotNormalized for a zero vector.
    static StateVector normalized(BasisTruncation basis, std::vector<cplx> amplitudes);

    /// Angular-momentum eigenstate |k>.
    static StateVector eigenstate(BasisTruncation basis, int k);

    /// Momentum-space Gaussian packet psi_k ~ exp(-(k - kbar)^2 / (4 s^2) - i k theta0),
    /// centred at angle theta0 with mean angular momentum kbar * hbar.
    static StateVector gaussian_packet(BasisTruncation basis, double kbar, double width, double theta0);

    const BasisTruncation& basis() const noexcept { return basis_; }
    std::span<const cplx> amplitudes() const noexcept { return amplitudes_; }
    cplx amplitude(int k) const { return amplitudes_[basis_.row(k)]; }

private:
    BasisTruncation basis_;
    std::vector<cplx> amplitudes_;
};

double norm(std::span<const cplx> x);
cplx inner(std::span<const cplx> x, std::span<const cplx> y);

/// <x|A|x> for arbitrary (not necessarily normalized) x.
cplx expectation(const ComplexMatrix& a, std::span<const cplx> x);

}  // namespace toa
