#include "toa/kernels.hpp"

#include <stdexcept>

namespace toa::kernels {

namespace {

void require_product_shape(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matmul: inner dimensions differ");
    }
}

void require_adjoint_product_shape(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows()) {
        throw std::invalid_argument("adjoint_matmul: row counts differ");
    }
}

}  // namespace

namespace serial {

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_product_shape(a, b);
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            cplx acc{};
            for (std::size_t k = 0; k < a.cols(); ++k) {
                acc += a(i, k) * b(k, j);
            }
            c(i, j) = acc;
        }
    }
    return c;
}

ComplexMatrix adjoint_matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_adjoint_product_shape(a, b);
    ComplexMatrix c(a.cols(), b.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            cplx acc{};
            for (std::size_t k = 0; k < a.rows(); ++k) {
                acc += std::conj(a(k, i)) * b(k, j);
            }
            c(i, j) = acc;
        }
    }
    return c;
}

std::vector<cplx> matvec(const ComplexMatrix& a, std::span<const cplx> x) {
    if (a.cols() != x.size()) {
        throw std::invalid_argument("matvec: dimension mismatch");
    }
    std::vector<cplx> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx acc{};
        for (std::size_t k = 0; k < a.cols(); ++k) {
            acc += a(i, k) * x[k];
        }
        y[i] = acc;
    }
    return y;
}

}  // namespace serial

namespace parallel {

// Row-parallel with a B^T staging copy so the inner loop is contiguous; the
// k-summation order per entry matches serial::matmul.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_product_shape(a, b);
    const std::size_t n = a.rows();
    const std::size_t m = b.cols();
    const std::size_t inner = a.cols();
    std::vector<cplx> bt(inner * m);
    for (std::size_t k = 0; k < inner; ++k) {
        for (std::size_t j = 0; j < m; ++j) {
            bt[j * inner + k] = b(k, j);
        }
    }
    ComplexMatrix c(n, m);
#pragma omp parallel for schedule(static)
    for (long il = 0; il < static_cast<long>(n); ++il) {
        const auto i = static_cast<std::size_t>(il);
        const auto arow = a.row(i);
        for (std::size_t j = 0; j < m; ++j) {
            const cplx* bcol = bt.data() + j * inner;
            cplx acc{};
            for (std::size_t k = 0; k < inner; ++k) {
                acc += arow[k] * bcol[k];
            }
            c(i, j) = acc;
        }
    }
    return c;
}

ComplexMatrix adjoint_matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_adjoint_product_shape(a, b);
    const std::size_t n = a.cols();
    const std::size_t m = b.cols();
    const std::size_t inner = a.rows();
    std::vector<cplx> at(n * inner);
    std::vector<cplx> bt(m * inner);
    for (std::size_t k = 0; k < inner; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            at[i * inner + k] = std::conj(a(k, i));
        }
        for (std::size_t j = 0; j < m; ++j) {
            bt[j * inner + k] = b(k, j);
        }
    }
    ComplexMatrix c(n, m);
#pragma omp parallel for schedule(static)
    for (long il = 0; il < static_cast<long>(n); ++il) {
        const auto i = static_cast<std::size_t>(il);
        const cplx* arow = at.data() + i * inner;
        for (std::size_t j = 0; j < m; ++j) {
            const cplx* bcol = bt.data() + j * inner;
            cplx acc{};
            for (std::size_t k = 0; k < inner; ++k) {
                acc += arow[k] * bcol[k];
            }
            c(i, j) = acc;
        }
    }
    return c;
}

std::vector<cplx> matvec(const ComplexMatrix& a, std::span<const cplx> x) {
    if (a.cols() != x.size()) {
        throw std::invalid_argument("matvec: dimension mismatch");
    }
    std::vector<cplx> y(a.rows());
#pragma omp parallel for schedule(static) if (a.rows() * a.cols() > 16384)
    for (long il = 0; il < static_cast<long>(a.rows()); ++il) {
        const auto i = static_cast<std::size_t>(il);
        const auto arow = a.row(i);
        cplx acc{};
        for (std::size_t k = 0; k < a.cols(); ++k) {
            acc += arow[k] * x[k];
        }
        y[i] = acc;
    }
    return y;
}

}  // namespace parallel

int max_threads() noexcept {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace toa::kernels
