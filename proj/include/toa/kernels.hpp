#pragma once

// Dense kernels in two flavours: a serial reference and an OpenMP version.
// Each output entry is produced by one thread with the same inner-loop order
// as the reference, so both flavours return bit-identical results.

#include <cstddef>
#include <span>
#include <vector>

#include "toa/matrix.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace toa::kernels {

namespace serial {

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
/// a^dagger * b without forming the adjoint.
ComplexMatrix adjoint_matmul(const ComplexMatrix& a, const ComplexMatrix& b);
std::vector<cplx> matvec(const ComplexMatrix& a, std::span<const cplx> x);

/// out(i, j) = entry(i, j) for every i, j.
template <class EntryFn>
void fill_entries(ComplexMatrix& out, EntryFn&& entry) {
    for (std::size_t i = 0; i < out.rows(); ++i) {
        for (std::size_t j = 0; j < out.cols(); ++j) {
            out(i, j) = entry(i, j);
        }
    }
}

}  // namespace serial

namespace parallel {

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix adjoint_matmul(const ComplexMatrix& a, const ComplexMatrix& b);
std::vector<cplx> matvec(const ComplexMatrix& a, std::span<const cplx> x);

template <class EntryFn>
void fill_entries(ComplexMatrix& out, EntryFn&& entry) {
    const auto rows = static_cast<long>(out.rows());
    const auto cols = static_cast<long>(out.cols());
#pragma omp parallel for collapse(2) schedule(dynamic, 4)
    for (long i = 0; i < rows; ++i) {
        for (long j = 0; j < cols; ++j) {
            out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                entry(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
    }
}

}  // namespace parallel

/// Number of threads the parallel kernels will use.
int max_threads() noexcept;

}  // namespace toa::kernels
