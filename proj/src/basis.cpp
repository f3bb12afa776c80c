#include "toa/basis.hpp"

#include <string>

namespace toa {

ZenoGateError::ZenoGateError(double eta, double zeno_time)
    : Error("measurement step eta = " + std::to_string(eta) +
            " does not exceed the Zeno time tau_z = " + std::to_string(zeno_time)),
      eta_(eta),
      zeno_time_(zeno_time) {}

void PhysicalParams::validate() const {
    if (!(mass > 0.0) || !(radius > 0.0) || !(hbar > 0.0)) {
        throw DomainError("physical parameters m, r, hbar must be strictly positive");
    }
}

BasisTruncation::BasisTruncation(int n_max) : n_max_(n_max) {
    if (n_max < 1) {
        throw DomainError("n_max must be a positive integer, got " + std::to_string(n_max));
    }
}

std::size_t BasisTruncation::row(int k) const {
    if (!contains(k)) {
        throw DomainError("momentum label " + std::to_string(k) + " outside truncated basis");
    }
    return static_cast<std::size_t>(k + n_max_);
}

int BasisTruncation::label(std::size_t row) const {
    if (row >= dimension()) {
        throw DomainError("row index out of range");
    }
    return static_cast<int>(row) - n_max_;
}

}  // namespace toa
