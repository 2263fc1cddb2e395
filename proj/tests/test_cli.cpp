#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cli.hpp"
#include "crc/report.hpp"
#include "gallery.hpp"

#include <chrono>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace crc;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    std::streambuf* old_out = std::cout.rdbuf(out.rdbuf());
    std::streambuf* old_err = std::cerr.rdbuf(err.rdbuf());
    int code = cli::run(args);
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("complex literal grammar") {
    CHECK(parse_complex("0") == Complex(0, 0));
    CHECK(parse_complex("2") == Complex(2, 0));
    CHECK(parse_complex("-3.5") == Complex(-3.5, 0));
    CHECK(parse_complex("i") == Complex(0, 1));
    CHECK(parse_complex("-i") == Complex(0, -1));
    CHECK(parse_complex("2i") == Complex(0, 2));
    CHECK(parse_complex("1+1i") == Complex(1, 1));
    CHECK(parse_complex("1 - 2i") == Complex(1, -2));
    CHECK(parse_complex("-0.5-2i") == Complex(-0.5, -2));
    CHECK(parse_complex("1.5e-3+2.25i") == Complex(1.5e-3, 2.25));
    CHECK(parse_complex("2.5e+2") == Complex(250, 0));
    CHECK(parse_complex("1e2i") == Complex(0, 100));
    CHECK_THROWS_AS(parse_complex("abc"), Error);
    CHECK_THROWS_AS(parse_complex(""), Error);

    auto list = parse_complex_list("0; 1+1i; 2+2i");
    REQUIRE(list.size() == 3);
    CHECK(list[2] == Complex(2, 2));
}

TEST_CASE("complex formatting round-trips exactly") {
    for (Complex z : {Complex(0, 0), Complex(1.0 / 3.0, -2.0 / 7.0), Complex(-1e-17, 4.25)}) {
        Complex back = parse_complex(format_complex(z));
        CHECK(back.real() == z.real());
        CHECK(back.imag() == z.imag());
    }
}

TEST_CASE("classify subcommand") {
    auto r = run_cli({"classify", "--roots", "0; 2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("dicritical_node stable") != std::string::npos);
    CHECK(r.out.find("dicritical_node unstable") != std::string::npos);
    CHECK(r.out.find("class: Q_ANTISADDLE_PAIR") != std::string::npos);
}

TEST_CASE("integral subcommand emits the rational three-circle form") {
    auto r = run_cli({"integral", "--roots", "0; 1+1i; 2+2i"});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"status\":\"found\"") != std::string::npos);
    CHECK(r.out.find("\"exponent\":1") != std::string::npos);
    CHECK(r.out.find("\"exponent\":-2") != std::string::npos);
}

TEST_CASE("integral subcommand flags the open double-root question") {
    auto r = run_cli({"integral", "--roots", "0; 0; 1+2i"});
    CHECK(r.code == 0);
    CHECK(r.out.find("note: open question") != std::string::npos);
    CHECK(r.out.find("\"status\":\"absent\"") != std::string::npos);
}

TEST_CASE("degree errors exit with code 2") {
    auto r = run_cli({"classify", "--coeffs", "0; 1; 0"});
    CHECK(r.code == 2);
    CHECK(r.err.find("DegreeUnsupported") != std::string::npos);

    auto r2 = run_cli({"classify", "--roots", "0; 1; 2; 3"});
    CHECK(r2.code == 2);
    auto r3 = run_cli({"classify"});
    CHECK(r3.code == 2);
}

TEST_CASE("portrait subcommand writes a deterministic SVG") {
    namespace fs = std::filesystem;
    fs::path p1 = fs::temp_directory_path() / "crp_test_a.svg";
    fs::path p2 = fs::temp_directory_path() / "crp_test_b.svg";
    auto r1 = run_cli({"portrait", "--roots", "0; 2i", "--out", p1.string()});
    auto r2 = run_cli({"portrait", "--roots", "0; 2i", "--out", p2.string()});
    CHECK(r1.code == 0);
    CHECK(r2.code == 0);
    std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    CHECK(s1.str() == s2.str());
    CHECK(s1.str().find("<svg") == 0);
    fs::remove(p1);
    fs::remove(p2);
}

TEST_CASE("report round trip: normalized roots reproduce the report modulo timing") {
    auto first = run_cli({"report", "--roots", "2; 0"});  // not normalized on purpose
    REQUIRE(first.code == 0);
    auto j1 = nlohmann::json::parse(first.out);

    std::string roots;
    for (const auto& r : j1["normalized_roots"]) {
        if (!roots.empty()) roots += "; ";
        roots += r.get<std::string>();
    }
    auto second = run_cli({"report", "--roots", roots});
    REQUIRE(second.code == 0);
    auto j2 = nlohmann::json::parse(second.out);

    auto third = run_cli({"report", "--roots", roots});
    auto j3 = nlohmann::json::parse(third.out);

    j2.erase("timing");
    j3.erase("timing");
    CHECK(j2.dump() == j3.dump());

    // and the analysis body (everything but input echo and timing) is stable
    // across the normalization fixed point
    j1.erase("timing");
    j1.erase("input");
    j2.erase("input");
    CHECK(j1.dump() == j2.dump());
}

TEST_CASE("a starved trace budget exits with code 3") {
    auto r = run_cli({"classify", "--roots", "0; 2", "--trace-budget", "1e-6"});
    CHECK(r.code == 3);
    CHECK(r.err.find("TraceBudgetExceeded") != std::string::npos);
}

TEST_CASE("reference gallery runs end-to-end well under budget") {
    auto t0 = std::chrono::steady_clock::now();
    for (const auto& entry : gallery::systems()) {
        std::string roots;
        for (crc::Complex z : entry.roots) {
            if (!roots.empty()) roots += "; ";
            roots += format_complex(z);
        }
        auto r = run_cli({"classify", "--roots", roots});
        CHECK(r.code == 0);
        CHECK(r.out.find(topological_class_name(entry.expected)) != std::string::npos);
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(secs < 14 * 10.0);
}

TEST_CASE("tolerance overrides via environment variables") {
    // ratio set needing denominator 2: max_denominator 1 forces Undecided
    auto found = run_cli({"integral", "--roots", "0; 1+1i; 3+3i"});
    CHECK(found.out.find("\"status\":\"found\"") != std::string::npos);

    setenv("CRC_MAX_DENOMINATOR", "1", 1);
    auto undecided = run_cli({"integral", "--roots", "0; 1+1i; 3+3i"});
    unsetenv("CRC_MAX_DENOMINATOR");
    CHECK(undecided.out.find("commensurability_undecided") != std::string::npos);

    auto flagged = run_cli({"integral", "--roots", "0; 1+1i; 3+3i", "--max-denominator", "1"});
    CHECK(flagged.out.find("commensurability_undecided") != std::string::npos);
}
