#include "toa/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "toa/kernels.hpp"

namespace toa {

namespace {

constexpr double kNormTolerance = 1e-10;

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("matrix shapes differ");
    }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            out(j, i) = std::conj((*this)(i, j));
        }
    }
    return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    require_same_shape(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    require_same_shape(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
}

double ComplexMatrix::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    return kernels::parallel::matmul(a, b);
}

std::vector<cplx> apply(const ComplexMatrix& a, std::span<const cplx> x) {
    return kernels::parallel::matvec(a, x);
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b);
    double m = 0.0;
    const auto da = a.data();
    const auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) m = std::max(m, std::abs(da[i] - db[i]));
    return m;
}

double hermiticity_residual(const ComplexMatrix& a) {
    if (!a.square()) {
        throw std::invalid_argument("hermiticity_residual: matrix is not square");
    }
    double r = 0.0;
    for (std::size_t j = 0; j < a.rows(); ++j) {
        for (std::size_t k = j; k < a.cols(); ++k) {
            r = std::max(r, std::abs(a(j, k) - std::conj(a(k, j))));
        }
    }
    return r;
}

bool passes_hermiticity(const ComplexMatrix& a) {
    return a.square() && hermiticity_residual(a) <= 1e-10 * (1.0 + a.max_abs());
}

double hilbert_schmidt_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (const auto& v : a.data()) s += std::norm(v);
    return std::sqrt(s);
}

double trace_real(const ComplexMatrix& a) {
    double t = 0.0;
    for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i).real();
    return t;
}

HermitianOperator::HermitianOperator(BasisTruncation basis, ComplexMatrix entries)
    : basis_(basis), entries_(std::move(entries)) {
    if (entries_.rows() != basis_.dimension() || entries_.cols() != basis_.dimension()) {
        throw std::invalid_argument("operator shape does not match basis dimension");
    }
    if (!passes_hermiticity(entries_)) {
        throw NonHermitianInput("operator violates the Hermiticity invariant (residual " +
                                std::to_string(hermiticity_residual(entries_)) + ")");
    }
}

double hilbert_schmidt_norm(const HermitianOperator& a) { return hilbert_schmidt_norm(a.matrix()); }

double norm(std::span<const cplx> x) {
    double s = 0.0;
    for (const auto& v : x) s += std::norm(v);
    return std::sqrt(s);
}

cplx inner(std::span<const cplx> x, std::span<const cplx> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("inner: dimension mismatch");
    }
    cplx s{};
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

cplx expectation(const ComplexMatrix& a, std::span<const cplx> x) {
    const auto ax = apply(a, x);
    return inner(x, ax);
}

StateVector::StateVector(BasisTruncation basis, std::vector<cplx> amplitudes)
    : basis_(basis), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != basis_.dimension()) {
        throw std::invalid_argument("state length does not match basis dimension");
    }
    const double n = norm(amplitudes_);
    if (std::abs(n - 1.0) > kNormTolerance) {
        throw NotNormalized("state norm " + std::to_string(n) + " differs from 1");
    }
}

StateVector StateVector::normalized(BasisTruncation basis, std::vector<cplx> amplitudes) {
    const double n = norm(amplitudes);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw NotNormalized("cannot normalize a zero or non-finite vector");
    }
    for (auto& v : amplitudes) v /= n;
    return StateVector(basis, std::move(amplitudes));
}

StateVector StateVector::eigenstate(BasisTruncation basis, int k) {
    std::vector<cplx> amps(basis.dimension());
    amps[basis.row(k)] = 1.0;
    return StateVector(basis, std::move(amps));
}

StateVector StateVector::gaussian_packet(BasisTruncation basis, double kbar, double width, double theta0) {
    if (!(width > 0.0)) {
        throw DomainError("packet width must be positive");
    }
    std::vector<cplx> amps(basis.dimension());
    for (std::size_t r = 0; r < amps.size(); ++r) {
        const double k = basis.label(r);
        const double d = k - kbar;
        // <Theta|k> = e^{ik Theta}/sqrt(2 pi), so the phase -k theta0 centres the packet at theta0.
        amps[r] = std::exp(-d * d / (4.0 * width * width)) * std::polar(1.0, -k * theta0);
    }
    return normalized(basis, std::move(amps));
}

}  // namespace toa
