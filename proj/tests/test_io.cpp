#include <doctest.h>

#include <sstream>

#include "support/random_hermitian.hpp"
#include "toa/core_operators.hpp"
#include "toa/errors.hpp"
#include "toa/io.hpp"

using namespace toa;

namespace {

io::OperatorFile sample(int n_max) {
    io::OperatorFile f;
    f.n_max = n_max;
    f.params = {2.0, 0.75, 0.5};
    f.kernel = "symmetric";
    f.regulator = "cos:1:0.5";
    f.entries = testing_support::random_hermitian(2 * n_max + 1, 42);
    return f;
}

}  // namespace

TEST_CASE("doubles round trip exactly") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 5e-324}) {
        CHECK(io::parse_double(io::format_double(v)) == v);
    }
    CHECK_THROWS_AS(io::parse_double("1.5x"), FormatError);
    CHECK_THROWS_AS(io::parse_double(""), FormatError);
}

TEST_CASE("operator files round trip bit for bit") {
    const auto f = sample(3);
    std::stringstream ss;
    io::write_operator(ss, f);
    const auto g = io::read_operator(ss);
    CHECK(g.n_max == 3);
    CHECK(g.params.mass == 2.0);
    CHECK(g.params.radius == 0.75);
    CHECK(g.params.hbar == 0.5);
    CHECK(g.kernel == "symmetric");
    CHECK(g.regulator == "cos:1:0.5");
    CHECK(max_abs_diff(f.entries, g.entries) == 0.0);
}

TEST_CASE("operator file layout") {
    const auto f = sample(1);
    std::stringstream ss;
    io::write_operator(ss, f);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(ss, line)) lines.push_back(line);
    REQUIRE(lines.size() == 8 + 9);
    CHECK(lines[0] == "toa-operator v1");
    CHECK(lines[1] == "dimension 3");
    CHECK(lines[2] == "n_max 1");
    CHECK(lines[8].rfind("-1 -1 ", 0) == 0);
    CHECK(lines[9].rfind("-1 0 ", 0) == 0);
    CHECK(lines[16].rfind("1 1 ", 0) == 0);
}

TEST_CASE("malformed operator files are rejected") {
    const auto f = sample(1);
    std::stringstream good;
    io::write_operator(good, f);
    const std::string text = good.str();

    auto reject = [](const std::string& s) {
        std::stringstream in(s);
        CHECK_THROWS_AS(io::read_operator(in), FormatError);
    };
    reject("");
    reject("toa-operator v2\n" + text.substr(text.find('\n') + 1));
    std::string wrong_dim = text;
    wrong_dim.replace(wrong_dim.find("dimension 3"), 11, "dimension 5");
    reject(wrong_dim);
    reject(text.substr(0, text.size() / 2));
    std::string swapped = text;
    swapped.replace(swapped.find("\n-1 -1 "), 7, "\n-1 0  ");
    reject(swapped);
    std::string bad_mass = text;
    bad_mass.replace(bad_mass.find("\nm 2"), 4, "\nm -2");
    reject(bad_mass);
}

TEST_CASE("spectrum files round trip") {
    io::SpectrumFile s;
    s.header = sample(2);
    s.eigenvalues = {3.5, 1.0 / 7.0, 0.0, -0.1, -2.25};
    std::stringstream ss;
    io::write_spectrum(ss, s);
    CHECK(ss.str().rfind("toa-spectrum v1\n", 0) == 0);
    const auto t = io::read_spectrum(ss);
    CHECK(t.eigenvalues == s.eigenvalues);
    CHECK(t.header.regulator == "cos:1:0.5");
}

TEST_CASE("run record CSV") {
    AbsorptionRecord rec;
    rec.eta = 0.5;
    rec.probabilities = {0.25, 0.5};
    std::stringstream ss;
    io::write_run_record(ss, rec, {{"absorber", "projector"}});
    CHECK(ss.str() == "j,t,P_j,cumulative,survival\n0,0,0.25,0.25,0.75\n1,0.5,0.5,0.75,0.25\n# absorber=projector\n");
}
