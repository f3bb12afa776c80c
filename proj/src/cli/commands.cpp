#include "toa/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "svg.hpp"
#include "toa/core_operators.hpp"
#include "toa/io.hpp"
#include "toa/kernels.hpp"
#include "toa/spectral.hpp"
#include "toa/waiting_screen.hpp"

namespace toa::cli {

namespace {

using io::format_double;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PhysicsOptions {
    double mass = 1.0;
    double radius = 1.0;
    double hbar = 1.0;

    void attach(CLI::App* app) {
        app->add_option("--m", mass, "particle mass")->capture_default_str();
        app->add_option("--r", radius, "ring radius")->capture_default_str();
        app->add_option("--hbar", hbar, "reduced Planck constant")->capture_default_str();
    }
    PhysicalParams params() const {
        PhysicalParams p{mass, radius, hbar};
        p.validate();
        return p;
    }
};

struct PacketOptions {
    double kbar = 5.0;
    double width = 3.0;
    double theta0 = -std::numbers::pi / 2.0;

    void attach(CLI::App* app) {
        app->add_option("--kbar", kbar, "packet mean angular momentum (units of hbar)")->capture_default_str();
        app->add_option("--width", width, "packet momentum spread s")->capture_default_str();
        app->add_option("--theta0", theta0, "packet centre angle")->capture_default_str();
    }
};

struct ArcOptions {
    double begin = -0.2;
    double end = 0.2;
    std::size_t grid = 0;

    void attach(CLI::App* app) {
        app->add_option("--arc-begin", begin, "detection arc start")->capture_default_str();
        app->add_option("--arc-end", end, "detection arc end")->capture_default_str();
        app->add_option("--grid", grid, "position grid size (0: 4 * dimension)")->capture_default_str();
    }
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) out.push_back(io::parse_double(item));
    return out;
}

std::vector<std::size_t> parse_count_list(const std::string& text) {
    std::vector<std::size_t> out;
    for (const auto& item : split_list(text)) {
        const double v = io::parse_double(item);
        if (!(v >= 1.0) || v != std::floor(v)) throw UsageError("step counts must be positive integers: " + item);
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

QuadratureSpec make_quadrature(const std::string& scheme, std::size_t nodes) {
    return QuadratureSpec{parse_quadrature_scheme(scheme), nodes};
}

ScreenConvention parse_convention(const std::string& name) {
    if (name == "at-screen") return ScreenConvention::AtScreen;
    if (name == "full-revolution") return ScreenConvention::FullRevolution;
    throw UsageError("unknown convention '" + name + "' (expected at-screen or full-revolution)");
}

void set_jobs(int jobs) {
#ifdef _OPENMP
    if (jobs > 0) omp_set_num_threads(jobs);
#else
    (void)jobs;
#endif
}

// ---- build -----------------------------------------------------------------

struct BuildOptions {
    PhysicsOptions physics;
    std::string kernel = "symmetric";
    std::string method = "closed-form";
    std::string regulator = "const:0";
    int n_max = 0;
    std::size_t quad_nodes = 2048;
    std::string quad_scheme = "gauss-legendre";
    int n_cutoff = -1;
    std::string convention = "at-screen";
    std::string out_path;
};

io::OperatorFile build_operator_file(const BuildOptions& o) {
    const auto params = o.physics.params();
    const BasisTruncation basis(o.n_max);
    const auto kernel = OrderingKernel::parse(o.kernel);
    const auto g = RegulatorFunction::parse(o.regulator);
    const auto quad = make_quadrature(o.quad_scheme, o.quad_nodes);

    io::OperatorFile file;
    file.n_max = o.n_max;
    file.params = params;
    file.kernel = o.kernel;
    file.regulator = g.description();
    if (o.method == "closed-form") {
        if (kernel.kind() != OrderingKernel::Kind::Symmetric) {
            throw UsageError("the closed-form method exists only for the symmetric kernel");
        }
        file.entries = build_symmetric_closed_form(g, basis, params, quad).matrix();
    } else if (o.method == "quadrature") {
        WwscOptions wo;
        wo.n_cutoff = o.n_cutoff;
        wo.convention = parse_convention(o.convention);
        file.entries = build_operator_wwsc(kernel, g, basis, params, quad, wo).matrix();
    } else {
        throw UsageError("unknown method '" + o.method + "' (expected closed-form or quadrature)");
    }
    return file;
}

int cmd_build(const BuildOptions& o, std::ostream& out, std::ostream& err) {
    const auto file = build_operator_file(o);
    const double residual = hermiticity_residual(file.entries);
    const double hs = hilbert_schmidt_norm(file.entries);
    std::ostream& report = o.out_path.empty() ? err : out;
    if (o.out_path.empty()) {
        io::write_operator(out, file);
    } else {
        io::save_operator(o.out_path, file);
        report << "wrote " << o.out_path << '\n';
    }
    report << "hermiticity_residual " << format_double(residual) << '\n'
           << "hilbert_schmidt_norm " << format_double(hs) << '\n';
    return passes_hermiticity(file.entries) ? kSuccess : kNumericCheckFailed;
}

// ---- compare ---------------------------------------------------------------

struct CompareOptions {
    BuildOptions build;
    std::string a_path;
    std::string b_path;
    double tolerance = 1e-8;
};

int cmd_compare(CompareOptions o, std::ostream& out) {
    ComplexMatrix a;
    ComplexMatrix b;
    if (!o.a_path.empty() || !o.b_path.empty()) {
        if (o.a_path.empty() || o.b_path.empty()) throw UsageError("compare needs both --a and --b");
        const auto fa = io::load_operator(o.a_path);
        const auto fb = io::load_operator(o.b_path);
        if (fa.n_max != fb.n_max) throw UsageError("operator files have different truncations");
        a = fa.entries;
        b = fb.entries;
        out << "compare " << o.a_path << " vs " << o.b_path << '\n';
    } else {
        if (o.build.n_max < 1) throw UsageError("compare needs --nmax or --a/--b");
        o.build.kernel = "symmetric";
        o.build.method = "quadrature";
        a = build_operator_file(o.build).entries;
        o.build.method = "closed-form";
        b = build_operator_file(o.build).entries;
        out << "compare quadrature vs closed-form, symmetric kernel, n_max " << o.build.n_max << ", g "
            << o.build.regulator << ", nodes " << o.build.quad_nodes << '\n';
    }
    const double diff = max_abs_diff(a, b);
    const bool ok = diff <= o.tolerance;
    out << "max_abs_diff " << format_double(diff) << '\n'
        << "tolerance " << format_double(o.tolerance) << '\n'
        << "verdict " << (ok ? "agree" : "DISAGREE") << '\n';
    return ok ? kSuccess : kNumericCheckFailed;
}

// ---- spectrum --------------------------------------------------------------

struct SpectrumOptions {
    std::string in_path;
    std::string out_path;
    std::string svg_path;
    std::string lambdas = "0.25,0.5,1";
    double zero_tol = 1e-12;
    double evolve_t = std::nan("");
};

int cmd_spectrum(const SpectrumOptions& o, std::ostream& out) {
    const auto file = io::load_operator(o.in_path);
    const HermitianOperator op(file.basis(), file.entries);
    const auto d = eigendecompose_hermitian(op);

    const double ortho = d.orthonormality_error();
    const double recon = d.reconstruction_error(op.matrix());
    const bool ok = ortho <= 1e-9 && recon <= 1e-8 * (1.0 + op.matrix().max_abs());

    if (!o.out_path.empty()) {
        io::SpectrumFile sf;
        sf.header = file;
        sf.header.entries = ComplexMatrix();
        sf.eigenvalues = d.eigenvalues;
        std::ofstream f(o.out_path);
        if (!f) throw FormatError("cannot open '" + o.out_path + "' for writing");
        io::write_spectrum(f, sf);
    } else {
        for (std::size_t k = 0; k < d.size(); ++k) out << (k + 1) << ' ' << format_double(d.eigenvalues[k]) << '\n';
    }

    const auto census = sign_census(d, o.zero_tol);
    out << "dimension " << d.size() << '\n'
        << "sign_census positive " << census.positive << " negative " << census.negative << " zero " << census.zero
        << '\n';
    for (const double lambda : parse_double_list(o.lambdas)) {
        out << "count_above " << format_double(lambda) << ' ' << count_eigenvalues_above(d, lambda) << '\n';
    }
    double hs_eig = 0.0;
    for (const double t : d.eigenvalues) hs_eig += t * t;
    out << "hilbert_schmidt_norm " << format_double(hilbert_schmidt_norm(op)) << " via_eigenvalues "
        << format_double(std::sqrt(hs_eig)) << '\n'
        << "orthonormality_error " << format_double(ortho) << '\n'
        << "reconstruction_error " << format_double(recon) << '\n';

    if (!std::isnan(o.evolve_t)) {
        const auto h = free_hamiltonian(file.basis(), file.params);
        const auto report = time_translation_report(d, h, o.evolve_t, file.params);
        out << "time_translation t " << format_double(o.evolve_t) << " min_max_overlap "
            << format_double(report.min_max_overlap()) << " completeness_error "
            << format_double(report.completeness_error()) << " non_invariant "
            << (report.certifies_non_invariance() ? "yes" : "no") << '\n';
    }
    if (!o.svg_path.empty()) {
        std::ofstream f(o.svg_path);
        if (!f) throw FormatError("cannot open '" + o.svg_path + "' for writing");
        f << scatter_svg(d.eigenvalues, "eigenvalues (descending)");
    }
    return ok ? kSuccess : kNumericCheckFailed;
}

// ---- screen ----------------------------------------------------------------

struct ScreenOptions {
    PhysicsOptions physics;
    PacketOptions packet;
    ArcOptions arc;
    int n_max = 32;
    double eta = 0.1;
    std::size_t steps = 100;
    std::string absorber = "projector";
    double v0 = 0.0;
    std::string custom_path;
    double pov_tol = 1e-2;
    bool override_zeno = false;
    std::string out_path;
    std::string replay;
};

int cmd_screen(const ScreenOptions& o, std::ostream& out, std::ostream& err) {
    ScreenConfig cfg;
    cfg.eta = o.eta;
    cfg.steps = o.steps;
    cfg.pov_tolerance = o.pov_tol;

    if (!o.replay.empty()) {
        if (!(o.eta > 0.0)) throw UsageError("--eta must be positive");
        const auto probs = parse_double_list(o.replay);
        const auto avg = average_arrival_time(probs, cfg);
        double total = 0.0;
        for (const double p : probs) total += p;
        out << "replay tau_mean " << format_double(avg.value) << " total " << format_double(total) << " kind "
            << to_string(avg.kind) << '\n';
        return kSuccess;
    }

    const auto params = o.physics.params();
    const BasisTruncation basis(o.n_max);
    cfg.arc_begin = o.arc.begin;
    cfg.arc_end = o.arc.end;
    cfg.grid_size = o.arc.grid;
    cfg.override_zeno_gate = o.override_zeno;
    if (o.absorber == "projector") {
        cfg.absorber = AbsorberMode::Projector;
    } else if (o.absorber == "complex") {
        cfg.absorber = AbsorberMode::ComplexPotential;
        cfg.potential = o.v0;
    } else if (o.absorber == "custom") {
        if (o.custom_path.empty()) throw UsageError("--absorber custom needs --custom-op");
        const auto f = io::load_operator(o.custom_path);
        if (f.n_max != o.n_max) throw UsageError("custom operator truncation differs from --nmax");
        cfg.absorber = AbsorberMode::Custom;
        cfg.custom_reflector = f.entries;
    } else {
        throw UsageError("unknown absorber '" + o.absorber + "' (expected projector, complex or custom)");
    }
    cfg.validate();

    const auto phi = StateVector::gaussian_packet(basis, o.packet.kbar, o.packet.width, o.packet.theta0);
    const auto e = screen_projector(cfg, basis);
    const auto h = free_hamiltonian(basis, params);
    const auto e_prime = reflector(e, cfg, params);
    const auto rec = absorption_probabilities(phi, e, e_prime, h, cfg, params);

    const std::vector<std::pair<std::string, std::string>> meta = {
        {"n_max", std::to_string(o.n_max)},
        {"m", format_double(params.mass)},
        {"r", format_double(params.radius)},
        {"hbar", format_double(params.hbar)},
        {"kbar", format_double(o.packet.kbar)},
        {"width", format_double(o.packet.width)},
        {"theta0", format_double(o.packet.theta0)},
        {"arc_begin", format_double(cfg.arc_begin)},
        {"arc_end", format_double(cfg.arc_end)},
        {"grid", std::to_string(cfg.grid_for(basis.dimension()))},
        {"eta", format_double(cfg.eta)},
        {"steps", std::to_string(cfg.steps)},
        {"absorber", std::string(to_string(cfg.absorber))},
        {"v0", format_double(cfg.potential)},
        {"zeno_time", format_double(rec.zeno_time)},
        {"total", format_double(rec.total)},
        {"tau_mean", rec.tau_mean ? format_double(*rec.tau_mean) : "undefined"},
        {"kind", std::string(to_string(rec.kind))},
    };
    std::ostream& summary = o.out_path.empty() ? err : out;
    if (o.out_path.empty()) {
        io::write_run_record(out, rec, meta);
    } else {
        std::ofstream f(o.out_path);
        if (!f) throw FormatError("cannot open '" + o.out_path + "' for writing");
        io::write_run_record(f, rec, meta);
    }
    summary << "tau_mean " << (rec.tau_mean ? format_double(*rec.tau_mean) : "undefined") << " total "
            << format_double(rec.total) << " kind " << to_string(rec.kind) << " zeno_time "
            << format_double(rec.zeno_time) << '\n';
    return kSuccess;
}

// ---- zeno ------------------------------------------------------------------

struct ZenoOptions {
    PhysicsOptions physics;
    PacketOptions packet;
    ArcOptions arc;
    int n_max = 32;
    double total_time = 1.0;
    std::string n_list = "1,2,4,8,16,32,64,128,256";
    std::size_t monotone_from = 8;
    bool empty_screen = false;
    int jobs = 0;
};

int cmd_zeno(const ZenoOptions& o, std::ostream& out) {
    set_jobs(o.jobs);
    const auto params = o.physics.params();
    const BasisTruncation basis(o.n_max);
    const auto phi = StateVector::gaussian_packet(basis, o.packet.kbar, o.packet.width, o.packet.theta0);
    const auto h = free_hamiltonian(basis, params);
    ScreenConfig cfg;
    cfg.arc_begin = o.arc.begin;
    cfg.arc_end = o.arc.end;
    cfg.grid_size = o.arc.grid;
    const auto e = o.empty_screen ? HermitianOperator(basis, ComplexMatrix(basis.dimension(), basis.dimension()))
                                  : screen_projector(cfg, basis);
    const auto counts = parse_count_list(o.n_list);
    const auto scan = zeno_limit_scan(phi, e, h, o.total_time, counts, params);

    out << "n,P_n\n";
    for (const auto& row : scan.rows) out << row.n << ',' << format_double(row.probability) << '\n';
    out << "# t=" << format_double(o.total_time) << '\n'
        << "# nonincreasing_from_" << o.monotone_from << '=' << (scan.nonincreasing_from(o.monotone_from) ? "yes" : "no")
        << '\n';
    if (!scan.rows.empty()) out << "# final_P=" << format_double(scan.rows.back().probability) << '\n';
    return kSuccess;
}

}  // namespace

std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    std::vector<std::string> tokens;
    std::string line;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError("config line without '=': " + line);
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw UsageError("config line with empty key");
        tokens.push_back("--" + key + "=" + value);
    }
    return tokens;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    // Splice `--config FILE` contents in front of the explicit flags; with
    // take-last semantics the explicit flags then win.
    std::vector<std::string> args;
    std::vector<std::string> from_config;
    for (std::size_t i = 0; i < raw_args.size(); ++i) {
        const auto& a = raw_args[i];
        try {
            if (a == "--config" && i + 1 < raw_args.size()) {
                auto t = config_tokens(raw_args[++i]);
                from_config.insert(from_config.end(), t.begin(), t.end());
                continue;
            }
            if (a.rfind("--config=", 0) == 0) {
                auto t = config_tokens(a.substr(9));
                from_config.insert(from_config.end(), t.begin(), t.end());
                continue;
            }
        } catch (const UsageError& e) {
            err << "error: " << e.what() << '\n';
            return kUsageError;
        }
        args.push_back(a);
    }
    if (!args.empty()) args.insert(args.begin() + 1, from_config.begin(), from_config.end());

    CLI::App app{"Time-of-arrival operators and waiting-screen statistics for a particle on a ring", "toa"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);

    BuildOptions build;
    auto* build_cmd = app.add_subcommand("build", "construct an arrival-time operator and write it to a file");
    build.physics.attach(build_cmd);
    build_cmd->add_option("--nmax", build.n_max, "basis truncation N (|k| <= N)")->required();
    build_cmd->add_option("--kernel", build.kernel, "ordering kernel: symmetric | weyl")->capture_default_str();
    build_cmd->add_option("--method", build.method, "closed-form | quadrature")->capture_default_str();
    build_cmd->add_option("--g", build.regulator, "regulator: const:c | cos:a:b | abs:c")->capture_default_str();
    build_cmd->add_option("--quad-nodes", build.quad_nodes, "quadrature node count")->capture_default_str();
    build_cmd->add_option("--quad-scheme", build.quad_scheme, "gauss-legendre | trapezoid-periodic")
        ->capture_default_str();
    build_cmd->add_option("--n-cutoff", build.n_cutoff, "cutoff of the angular-momentum sum (-1: nmax)")
        ->capture_default_str();
    build_cmd->add_option("--convention", build.convention, "T(0, L): at-screen | full-revolution")
        ->capture_default_str();
    build_cmd->add_option("--out", build.out_path, "operator file (stdout when omitted)");

    CompareOptions compare;
    compare.build.quad_nodes = 4096;
    auto* compare_cmd = app.add_subcommand("compare", "diff quadrature and closed-form operators");
    compare.build.physics.attach(compare_cmd);
    compare_cmd->add_option("--nmax", compare.build.n_max, "basis truncation N");
    compare_cmd->add_option("--g", compare.build.regulator, "regulator spec")->capture_default_str();
    compare_cmd->add_option("--quad-nodes", compare.build.quad_nodes, "quadrature node count")->capture_default_str();
    compare_cmd->add_option("--quad-scheme", compare.build.quad_scheme, "quadrature scheme")->capture_default_str();
    compare_cmd->add_option("--a", compare.a_path, "first operator file");
    compare_cmd->add_option("--b", compare.b_path, "second operator file");
    compare_cmd->add_option("--tol", compare.tolerance, "agreement tolerance")->capture_default_str();

    SpectrumOptions spectrum;
    auto* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalues, sign census and eigenvalue counts");
    spectrum_cmd->add_option("--in", spectrum.in_path, "operator file")->required();
    spectrum_cmd->add_option("--out", spectrum.out_path, "spectrum file (eigenvalues to stdout when omitted)");
    spectrum_cmd->add_option("--lambda", spectrum.lambdas, "comma-separated thresholds")->capture_default_str();
    spectrum_cmd->add_option("--zero-tol", spectrum.zero_tol, "sign census zero tolerance")->capture_default_str();
    spectrum_cmd->add_option("--svg", spectrum.svg_path, "write an SVG scatter of the spectrum");
    spectrum_cmd->add_option("--evolve-t", spectrum.evolve_t, "report time-translation overlaps at this t");

    ScreenOptions screen;
    auto* screen_cmd = app.add_subcommand("screen", "repeated-measurement waiting screen run");
    screen.physics.attach(screen_cmd);
    screen.packet.attach(screen_cmd);
    screen.arc.attach(screen_cmd);
    screen_cmd->add_option("--nmax", screen.n_max, "basis truncation N")->capture_default_str();
    screen_cmd->add_option("--eta", screen.eta, "measurement step")->capture_default_str();
    screen_cmd->add_option("--steps", screen.steps, "number of steps J")->capture_default_str();
    screen_cmd->add_option("--absorber", screen.absorber, "projector | complex | custom")->capture_default_str();
    screen_cmd->add_option("--v0", screen.v0, "complex potential strength V0")->capture_default_str();
    screen_cmd->add_option("--custom-op", screen.custom_path, "operator file holding a custom E'");
    screen_cmd->add_option("--pov-tol", screen.pov_tol, "POV classification tolerance")->capture_default_str();
    screen_cmd->add_flag("--override-zeno", screen.override_zeno, "allow eta <= Zeno time");
    screen_cmd->add_option("--out", screen.out_path, "run record CSV (stdout when omitted)");
    screen_cmd->add_option("--replay", screen.replay, "comma-separated P_j to average instead of simulating");

    ZenoOptions zeno;
    auto* zeno_cmd = app.add_subcommand("zeno", "continuous-observation limit scan of P_n(t)");
    zeno.physics.attach(zeno_cmd);
    zeno.packet.attach(zeno_cmd);
    zeno.arc.attach(zeno_cmd);
    zeno_cmd->add_option("--nmax", zeno.n_max, "basis truncation N")->capture_default_str();
    zeno_cmd->add_option("--t", zeno.total_time, "total time")->capture_default_str();
    zeno_cmd->add_option("--n-list", zeno.n_list, "comma-separated step counts")->capture_default_str();
    zeno_cmd->add_option("--monotone-from", zeno.monotone_from, "smallest n in the monotone check")->capture_default_str();
    zeno_cmd->add_flag("--empty-screen", zeno.empty_screen, "use E = 0");
    zeno_cmd->add_option("--jobs", zeno.jobs, "threads for the sweep (0: runtime default)")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return kUsageError;
    }

    try {
        if (build_cmd->parsed()) return cmd_build(build, out, err);
        if (compare_cmd->parsed()) return cmd_compare(compare, out);
        if (spectrum_cmd->parsed()) return cmd_spectrum(spectrum, out);
        if (screen_cmd->parsed()) return cmd_screen(screen, out, err);
        if (zeno_cmd->parsed()) return cmd_zeno(zeno, out);
    } catch (const ZenoGateError& e) {
        err << "error: Zeno gate: eta = " << format_double(e.eta()) << " must exceed tau_z = "
            << format_double(e.zeno_time()) << " (pass --override-zeno to bypass)\n";
        return kUsageError;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    return kUsageError;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace toa::cli
