#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace crc {

using Complex = std::complex<double>;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline bool finite(double v) { return std::isfinite(v); }
inline bool finite(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }
inline Complex to_complex(const Vec2& p) { return Complex(p.x, p.y); }
inline Vec2 to_vec2(const Complex& z) { return Vec2{z.real(), z.imag()}; }

enum class ErrorCode {
    BadInput,
    DegreeUnsupported,
    ZeroLeadingCoefficient,
    ZeroLambdaOnSimpleRoot,
    NoNontrivialSolution,
    SingularPoint,
    ChartDomainExceeded,
    OutsideDisk,
    TraceBudgetExceeded,
    NotACenter,
    NonRationalIntegral,
    ConfigurationInconsistent,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

// Numerical knobs, all overridable from the CLI (flags or CRC_* env vars).
struct Tolerances {
    double root_cluster = 1e-9;   // relative root-coincidence threshold
    double classify = 1e-10;      // relative |Re lambda| margin for center calls
    double collinear = 1e-9;      // three-center / three-node collinearity
    double singular = 1e-6;       // min distance to integral singularities
    double seed_offset = 1e-6;    // separatrix seed distance from its saddle, chart units
    double landing = 1e-4;        // capture radius at finite equilibria
    double trace_budget = 1e3;    // max rescaled time per trace
    double rk_tol = 1e-10;        // adaptive RK relative tolerance
    double chart_vmax = 0.5;      // chart validity bound in v
    int max_denominator = 64;     // commensurability search bound

    // Saddle-approach window used by the connection detector. A trace entering
    // |u| < conn_enter_u, v < conn_enter_v of a compatible saddle is monitored;
    // closest approach below conn_confirm declares the connection.
    double conn_enter_v = 0.15;
    double conn_enter_u = 0.15;
    double conn_confirm = 0.02;
};

} // namespace crc
