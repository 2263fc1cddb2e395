#pragma once

#include "crc/equilibria.hpp"
#include "crc/system.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace crc {

// An invariant f of the flow: Df = c(z) f. Linear invariants are z - root;
// exponential ones are exp(1/z^order) at a multiple root pinned to the origin.
struct Invariant {
    enum class Kind { Linear, Exponential };
    Kind kind = Kind::Linear;
    Complex root{0.0, 0.0};  // Linear
    int order = 0;           // Exponential: 1 (double root) or 2 (triple root)
    CPoly cofactor;          // ascending coefficients, degree <= n-1
};

// Real Darboux integral as a product of elementary factors:
//   prod ((x-a)^2 + (y-b)^2)^rho * exp( sum mu * theta_k + sum num/den )
struct PowerFactor {
    Vec2 center;
    double exponent;  // rho
};
struct AngleFactor {
    Vec2 center;
    double coefficient;  // mu, multiplies the angle about the center
};
struct ExpFactor {
    Poly2 num, den;  // contributes exp(num/den)
};

struct DarbouxIntegral {
    std::vector<PowerFactor> powers;
    std::vector<AngleFactor> angles;
    std::vector<ExpFactor> exps;
};

// Exact rational first integral. Either a product of circle powers with
// integer exponents, or a plain polynomial ratio (degenerate / node cases).
struct CircleFactor {
    Vec2 center;
    long long exponent;  // nonzero
};

struct RationalIntegral {
    enum class Form { CircleProduct, PolyRatio };
    Form form = Form::CircleProduct;
    std::vector<CircleFactor> circles;  // CircleProduct
    Poly2 num, den;                     // PolyRatio
};

using FirstIntegral = std::variant<DarbouxIntegral, RationalIntegral>;

enum class RationalStatus { Found, Absent, CommensurabilityUndecided };

struct RationalIntegralResult {
    RationalStatus status = RationalStatus::Absent;
    std::optional<RationalIntegral> integral;
    std::string reason;  // set for Absent / Undecided
};

std::vector<Invariant> build_invariants(const HolomorphicSystem& system,
                                        const Tolerances& tol = {});

// Nonzero exponents lambda_k with sum lambda_k c_k + conj identically zero,
// solved as a real null-space problem and matched to the closed form of the
// structural case (simple roots, double root, triple root).
std::vector<Complex> solve_exponents(const HolomorphicSystem& system,
                                     const std::vector<Invariant>& invariants,
                                     const Tolerances& tol = {});

// Max |coefficient| of sum lambda_k c_k + conj; diagnostic for tests.
double exponent_residual(const std::vector<Invariant>& invariants,
                         const std::vector<Complex>& lambdas);

// Real first integral. Degenerate one-point systems get their rational form
// directly; everything else gets the factored Darboux product.
FirstIntegral build_integral(const HolomorphicSystem& system, const Tolerances& tol = {});

RationalIntegralResult rational_integral(const HolomorphicSystem& system,
                                         const std::vector<EquilibriumReport>& reports,
                                         const Tolerances& tol = {});

// Relative residual of P H_x + Q H_y at a point, from the analytic
// log-derivative of the factor decomposition. Raises SingularPoint near
// factor singularities.
double integral_residual(const FirstIntegral& integral, const HolomorphicSystem& system,
                         double x, double y, const Tolerances& tol = {});

// Plain evaluation; angle factors use principal branches.
double eval_integral(const FirstIntegral& integral, double x, double y,
                     const Tolerances& tol = {});

// log H for the factored form (angle factors still principal-branch).
double eval_log_integral(const DarbouxIntegral& integral, double x, double y,
                         const Tolerances& tol = {});

// Branch-continued evaluation along an orbit polyline: feed successive points,
// read log H (factored form) or H (rational form) with angles unwrapped along
// the polyline.
class ContinuedEvaluator {
public:
    ContinuedEvaluator(const FirstIntegral& integral, Vec2 start, const Tolerances& tol = {});
    double advance(Vec2 p);      // H at p (angles continued)
    double advance_log(Vec2 p);  // log H at p

private:
    const FirstIntegral& integral_;
    Tolerances tol_;
    std::vector<double> raw_;   // last principal angle per angle factor
    std::vector<double> cont_;  // continued angle per angle factor
    bool rational_ = false;
};

// Evaluate with continuation along an explicit polyline ending at (x, y).
double eval_integral(const FirstIntegral& integral, double x, double y,
                     const std::vector<Vec2>& branch_path, const Tolerances& tol = {});

// Deterministic JSON serialization (fixed field order, %.17g reals).
std::string integral_to_json(const FirstIntegral& integral);
std::string rational_result_to_json(const RationalIntegralResult& result);

} // namespace crc
