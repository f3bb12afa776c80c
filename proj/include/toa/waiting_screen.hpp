#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "toa/basis.hpp"
#include "toa/matrix.hpp"

namespace toa {

enum class AbsorberMode {
    Projector,         ///< E' = 1 - E
    ComplexPotential,  ///< E' = 1 - E + exp(-V0 eta / hbar) E
    Custom,            ///< user-supplied contraction
};

std::string_view to_string(AbsorberMode mode) noexcept;

/// POV when the absorption probabilities sum to one within tolerance,
/// generalized POV otherwise.
enum class MeasureKind { POV, GPOV };

std::string_view to_string(MeasureKind kind) noexcept;

struct ScreenConfig {
    /// Detection arc [arc_begin, arc_end) on the ring, -pi <= begin < end <= pi.
    double arc_begin = -0.2;
    double arc_end = 0.2;
    double eta = 0.1;
    std::size_t steps = 100;
    AbsorberMode absorber = AbsorberMode::Projector;
    double potential = 0.0;  ///< V0 for ComplexPotential
    std::optional<ComplexMatrix> custom_reflector;
    /// Position grid size for the screen projector; 0 selects 4 * dimension.
    std::size_t grid_size = 0;
    double pov_tolerance = 1e-2;
    bool override_zeno_gate = false;

    void validate() const;
    std::size_t grid_for(std::size_t dimension) const noexcept { return grid_size == 0 ? 4 * dimension : grid_size; }
};

/// Projector onto the detection arc. The arc indicator on the position grid
/// is conjugated into the momentum basis by the discrete transform; when the
/// grid is finer than the basis, the compressed indicator is rounded to its
/// nearest projector (eigenvalues above 1/2 kept). With grid_size equal to the
/// dimension this is exactly the unitary DFT conjugation.
HermitianOperator screen_projector(const ScreenConfig& cfg, const BasisTruncation& basis);

/// Non-absorption operator E' for the configured absorber and step eta.
ComplexMatrix reflector(const HermitianOperator& e, const ScreenConfig& cfg, const PhysicalParams& params);

/// Largest singular value; the contraction check for custom reflectors.
double operator_norm(const ComplexMatrix& a);

struct AbsorptionRecord {
    double eta = 0.0;
    std::vector<double> probabilities;  ///< P_0 .. P_J
    /// ||psi_j||^2 for j = 0 .. J+1, nonincreasing.
    std::vector<double> surviving_norm;
    double total = 0.0;     ///< sum_j P_j
    double survival = 1.0;  ///< 1 - total
    std::optional<double> tau_mean;
    MeasureKind kind = MeasureKind::GPOV;
    double zeno_time = 0.0;
};

/// Hbar over the energy spread of the state; +infinity for zero spread.
double zeno_time(const StateVector& phi, const HermitianOperator& h, const PhysicalParams& params);

/// P_j for j = 0..J with psi_0 = phi, psi_{j+1} = e^{-i eta H/hbar} E' psi_j and
/// P_j = <psi_j| (1 - E'^dagger E') |psi_j>, which is <psi_j|E|psi_j> for the
/// projector absorber. Enforces eta > tau_z unless cfg.override_zeno_gate.
AbsorptionRecord absorption_probabilities(const StateVector& phi, const HermitianOperator& e,
                                          const ComplexMatrix& e_prime, const HermitianOperator& h,
                                          const ScreenConfig& cfg, const PhysicalParams& params);

/// General measurement chain at times 0 = t_0 < t_1 < ... < t_n. The absorber
/// for a complex potential uses the interval preceding each measurement (the
/// first interval for t_0). No Zeno gate. Returns P_0 .. P_n.
std::vector<double> absorption_chain(const StateVector& phi, const HermitianOperator& e, const HermitianOperator& h,
                                     const ScreenConfig& cfg, const PhysicalParams& params,
                                     std::span<const double> times);

struct ArrivalTime {
    double value = 0.0;
    MeasureKind kind = MeasureKind::POV;
};

/// sum_j j eta P_j when the probabilities sum to 1 within cfg.pov_tolerance,
/// otherwise the same sum divided by sum_j P_j. Throws UndefinedAverage when
/// nothing is absorbed.
ArrivalTime average_arrival_time(std::span<const double> probabilities, const ScreenConfig& cfg);
ArrivalTime average_arrival_time(const AbsorptionRecord& rec, const ScreenConfig& cfg);

/// F_j = (e^{-i eta H/hbar} E')^{j dagger} (1 - E'^dagger E') (e^{-i eta H/hbar} E')^j.
HermitianOperator pov_element(const HermitianOperator& e, const ComplexMatrix& e_prime, const HermitianOperator& h,
                              const ScreenConfig& cfg, const PhysicalParams& params, std::size_t j);

/// (e^{-i eta H/hbar} E')^{J dagger} (e^{-i eta H/hbar} E')^J: what is left after J steps.
ComplexMatrix survival_operator(const ComplexMatrix& e_prime, const HermitianOperator& h, const ScreenConfig& cfg,
                                const PhysicalParams& params, std::size_t steps);

struct ZenoScanRow {
    std::size_t n = 0;
    double probability = 0.0;
};

struct ZenoScan {
    double total_time = 0.0;
    std::vector<ZenoScanRow> rows;  ///< sorted by n

    /// True when P_n does not increase across rows with n >= n_from.
    bool nonincreasing_from(std::size_t n_from) const;
};

/// P_n(t) at step j = n with eta = t/n and the projector absorber, for each n.
/// The Zeno gate is bypassed: the scan exists to exhibit the continuous-
/// observation limit. Sweep points run in parallel.
ZenoScan zeno_limit_scan(const StateVector& phi, const HermitianOperator& e, const HermitianOperator& h,
                         double total_time, std::span<const std::size_t> n_list, const PhysicalParams& params);

}  // namespace toa
