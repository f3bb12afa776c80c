#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "toa/basis.hpp"
#include "toa/matrix.hpp"
#include "toa/waiting_screen.hpp"

namespace toa::io {

/// Doubles as 17 significant digits; parses back to the identical bit pattern.
std::string format_double(double v);
double parse_double(const std::string& text);

/// Operator file, text:
///
///     toa-operator v1
///     dimension <2N+1>
///     n_max <N>
///     m <mass>
///     r <radius>
///     hbar <hbar>
///     kernel <name>
///     g <regulator description>
///     <j> <k> <re> <im>          (dimension^2 lines, row-major, j,k = -N..N)
///
/// j and k are momentum labels; label -N is matrix row 0.
struct OperatorFile {
    ComplexMatrix entries;
    int n_max = 1;
    PhysicalParams params;
    std::string kernel;
    std::string regulator;

    BasisTruncation basis() const { return BasisTruncation(n_max); }
};

void write_operator(std::ostream& out, const OperatorFile& file);
OperatorFile read_operator(std::istream& in);

void save_operator(const std::string& path, const OperatorFile& file);
OperatorFile load_operator(const std::string& path);

/// Spectrum file: `toa-spectrum v1`, the operator header fields, then one
/// `<k> <tau_k>` line per eigenvalue with k counted from 1.
struct SpectrumFile {
    OperatorFile header;  ///< entries left empty
    std::vector<double> eigenvalues;
};

void write_spectrum(std::ostream& out, const SpectrumFile& file);
SpectrumFile read_spectrum(std::istream& in);

/// Run record CSV: `j,t,P_j,cumulative,survival` rows followed by `# key=value`
/// metadata lines.
void write_run_record(std::ostream& out, const AbsorptionRecord& rec,
                      const std::vector<std::pair<std::string, std::string>>& metadata);

}  // namespace toa::io
