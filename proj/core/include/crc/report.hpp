#pragma once

#include "crc/darboux.hpp"
#include "crc/topology.hpp"

#include <string>
#include <utility>
#include <vector>

namespace crc {

// Complex literals: "a", "a+bi", "-bi", "i", "2.5e-3-1i", optional blanks.
Complex parse_complex(const std::string& text);
std::vector<Complex> parse_complex_list(const std::string& text);  // ';'-separated
std::string format_complex(Complex z);                             // %.17g, a+bi

struct ReportInput {
    enum class Kind { Roots, Coeffs };
    Kind kind = Kind::Roots;
    std::vector<Complex> values;
};

// Full analysis product: everything the CLI can print.
struct Report {
    int schema = 1;
    ReportInput input;
    HolomorphicSystem system;
    std::vector<EquilibriumReport> equilibria;
    ConsistencyVerdict consistency;
    FirstIntegral darboux;
    RationalIntegralResult rational;
    SeparatrixConfiguration config;
    TopologicalClass portrait_class = TopologicalClass::Q_ANTISADDLE_PAIR;
    std::vector<std::pair<int, CenterBoundary>> center_types;
    std::vector<std::string> notes;
    double elapsed_ms = 0.0;
};

Report analyze(const ReportInput& input, const Tolerances& tol = {});

// Deterministic JSON, schema-versioned; the "timing" object is the only
// nondeterministic field.
std::string report_to_json(const Report& report);

} // namespace crc
