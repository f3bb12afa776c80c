#pragma once

#include <cstddef>

#include "toa/errors.hpp"

namespace toa {

/// Mass, ring radius and reduced Planck constant. Natural units by default.
struct PhysicalParams {
    double mass = 1.0;
    double radius = 1.0;
    double hbar = 1.0;

    /// Throws DomainError unless every field is strictly positive.
    void validate() const;

    /// m r^2, the moment of inertia; the global prefactor of every arrival-time quantity.
    double inertia() const noexcept { return mass * radius * radius; }
};

/// Angular-momentum eigenbasis |k>, k = -N..N, truncated at N = n_max.
/// Row 0 holds k = -N.
class BasisTruncation {
public:
    explicit BasisTruncation(int n_max);

    int n_max() const noexcept { return n_max_; }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(2 * n_max_ + 1); }

    std::size_t row(int k) const;
    int label(std::size_t row) const;

    bool contains(int k) const noexcept { return k >= -n_max_ && k <= n_max_; }

    friend bool operator==(const BasisTruncation&, const BasisTruncation&) = default;

private:
    int n_max_;
};

}  // namespace toa
