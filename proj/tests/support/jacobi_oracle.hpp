#pragma once

// Cyclic complex Jacobi: slow, simple and independent of the library solver.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

struct Eigen {
    std::vector<double> values;               // descending
    std::vector<std::vector<cplx>> vectors;   // vectors[k] pairs with values[k]
};

// a is row-major n x n Hermitian.
inline Eigen jacobi_hermitian(std::vector<cplx> a, std::size_t n) {
    std::vector<cplx> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
    auto A = [&](std::size_t i, std::size_t j) -> cplx& { return a[i * n + j]; };

    double scale = 0.0;
    for (const auto& x : a) scale += std::norm(x);
    scale = std::sqrt(scale);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(A(p, q));
        if (std::sqrt(off) <= 1e-15 * (1.0 + scale)) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double mag = std::abs(A(p, q));
                if (mag == 0.0) continue;
                const cplx phase = A(p, q) / mag;  // e^{i phi}
                const double app = A(p, p).real();
                const double aqq = A(q, q).real();
                const double theta = (aqq - app) / (2.0 * mag);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const cplx em = std::conj(phase);

                // A <- A G, G = diag(1, e^{-i phi}) [[c, s], [-s, c]]
                for (std::size_t r = 0; r < n; ++r) {
                    const cplx arp = A(r, p);
                    const cplx arq = A(r, q);
                    A(r, p) = c * arp - s * em * arq;
                    A(r, q) = s * arp + c * em * arq;
                    const cplx vrp = v[r * n + p];
                    const cplx vrq = v[r * n + q];
                    v[r * n + p] = c * vrp - s * em * vrq;
                    v[r * n + q] = s * vrp + c * em * vrq;
                }
                // A <- G^dagger A
                for (std::size_t r = 0; r < n; ++r) {
                    const cplx apr = A(p, r);
                    const cplx aqr = A(q, r);
                    A(p, r) = c * apr - s * phase * aqr;
                    A(q, r) = s * apr + c * phase * aqr;
                }
                A(p, q) = 0.0;
                A(q, p) = 0.0;
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return A(x, x).real() > A(y, y).real(); });
    Eigen out;
    for (const auto k : order) {
        out.values.push_back(A(k, k).real());
        std::vector<cplx> col(n);
        for (std::size_t r = 0; r < n; ++r) col[r] = v[r * n + k];
        out.vectors.push_back(std::move(col));
    }
    return out;
}

}  // namespace oracle
