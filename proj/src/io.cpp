#include "toa/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace toa::io {

namespace {

constexpr const char* kOperatorMagic = "toa-operator v1";
constexpr const char* kSpectrumMagic = "toa-spectrum v1";

std::string next_line(std::istream& in, const char* what) {
    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError(std::string("unexpected end of file while reading ") + what);
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::string header_value(std::istream& in, const std::string& key) {
    const auto line = next_line(in, key.c_str());
    if (line.rfind(key + " ", 0) != 0) {
        throw FormatError("expected header field '" + key + "', got '" + line + "'");
    }
    return line.substr(key.size() + 1);
}

long parse_long(const std::string& text) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw FormatError("cannot parse integer from '" + text + "'");
    }
    return v;
}

void write_header(std::ostream& out, const char* magic, const OperatorFile& file) {
    const BasisTruncation basis(file.n_max);
    out << magic << '\n'
        << "dimension " << basis.dimension() << '\n'
        << "n_max " << file.n_max << '\n'
        << "m " << format_double(file.params.mass) << '\n'
        << "r " << format_double(file.params.radius) << '\n'
        << "hbar " << format_double(file.params.hbar) << '\n'
        << "kernel " << file.kernel << '\n'
        << "g " << file.regulator << '\n';
}

OperatorFile read_header(std::istream& in, const char* magic) {
    const auto first = next_line(in, "magic line");
    if (first != magic) {
        throw FormatError(std::string("missing '") + magic + "' magic line");
    }
    OperatorFile file;
    const long dimension = parse_long(header_value(in, "dimension"));
    file.n_max = static_cast<int>(parse_long(header_value(in, "n_max")));
    if (file.n_max < 1 || dimension != 2L * file.n_max + 1) {
        throw FormatError("dimension and n_max are inconsistent");
    }
    file.params.mass = parse_double(header_value(in, "m"));
    file.params.radius = parse_double(header_value(in, "r"));
    file.params.hbar = parse_double(header_value(in, "hbar"));
    try {
        file.params.validate();
    } catch (const DomainError& e) {
        throw FormatError(e.what());
    }
    file.kernel = header_value(in, "kernel");
    file.regulator = header_value(in, "g");
    return file;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw FormatError("cannot parse number from '" + text + "'");
    }
    return v;
}

void write_operator(std::ostream& out, const OperatorFile& file) {
    const BasisTruncation basis(file.n_max);
    if (file.entries.rows() != basis.dimension() || file.entries.cols() != basis.dimension()) {
        throw FormatError("operator entries do not match n_max");
    }
    write_header(out, kOperatorMagic, file);
    for (std::size_t r = 0; r < basis.dimension(); ++r) {
        for (std::size_t c = 0; c < basis.dimension(); ++c) {
            const cplx v = file.entries(r, c);
            out << basis.label(r) << ' ' << basis.label(c) << ' ' << format_double(v.real()) << ' '
                << format_double(v.imag()) << '\n';
        }
    }
}

OperatorFile read_operator(std::istream& in) {
    OperatorFile file = read_header(in, kOperatorMagic);
    const BasisTruncation basis(file.n_max);
    file.entries = ComplexMatrix(basis.dimension(), basis.dimension());
    for (std::size_t r = 0; r < basis.dimension(); ++r) {
        for (std::size_t c = 0; c < basis.dimension(); ++c) {
            std::istringstream fields(next_line(in, "operator entries"));
            std::string j, k, re, im, extra;
            if (!(fields >> j >> k >> re >> im) || (fields >> extra)) {
                throw FormatError("operator entry lines must read 'j k re im'");
            }
            if (parse_long(j) != basis.label(r) || parse_long(k) != basis.label(c)) {
                throw FormatError("operator entries out of order at row " + std::to_string(r));
            }
            file.entries(r, c) = cplx(parse_double(re), parse_double(im));
        }
    }
    return file;
}

void save_operator(const std::string& path, const OperatorFile& file) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open '" + path + "' for writing");
    write_operator(out, file);
    if (!out) throw FormatError("failed writing '" + path + "'");
}

OperatorFile load_operator(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open operator file '" + path + "'");
    return read_operator(in);
}

void write_spectrum(std::ostream& out, const SpectrumFile& file) {
    write_header(out, kSpectrumMagic, file.header);
    for (std::size_t k = 0; k < file.eigenvalues.size(); ++k) {
        out << (k + 1) << ' ' << format_double(file.eigenvalues[k]) << '\n';
    }
}

SpectrumFile read_spectrum(std::istream& in) {
    SpectrumFile file;
    file.header = read_header(in, kSpectrumMagic);
    const std::size_t count = BasisTruncation(file.header.n_max).dimension();
    for (std::size_t k = 0; k < count; ++k) {
        std::istringstream fields(next_line(in, "spectrum"));
        std::string idx, value;
        if (!(fields >> idx >> value) || parse_long(idx) != static_cast<long>(k + 1)) {
            throw FormatError("spectrum lines must read 'k tau_k' with k counted from 1");
        }
        file.eigenvalues.push_back(parse_double(value));
    }
    return file;
}

void write_run_record(std::ostream& out, const AbsorptionRecord& rec,
                      const std::vector<std::pair<std::string, std::string>>& metadata) {
    out << "j,t,P_j,cumulative,survival\n";
    double cumulative = 0.0;
    for (std::size_t j = 0; j < rec.probabilities.size(); ++j) {
        cumulative += rec.probabilities[j];
        out << j << ',' << format_double(static_cast<double>(j) * rec.eta) << ','
            << format_double(rec.probabilities[j]) << ',' << format_double(cumulative) << ','
            << format_double(1.0 - cumulative) << '\n';
    }
    for (const auto& [key, value] : metadata) out << "# " << key << '=' << value << '\n';
}

}  // namespace toa::io
