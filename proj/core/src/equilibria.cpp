#include "crc/equilibria.hpp"

#include <cmath>

namespace crc {

const char* stability_name(Stability s) { return s == Stability::Stable ? "stable" : "unstable"; }
const char* rotation_name(Rotation r) { return r == Rotation::Ccw ? "ccw" : "cw"; }

const char* equilibrium_type_name(EquilibriumType t) {
    switch (t) {
        case EquilibriumType::DicriticalNode: return "dicritical_node";
        case EquilibriumType::Focus: return "focus";
        case EquilibriumType::IsochronousCenter: return "isochronous_center";
        case EquilibriumType::Degenerate: return "degenerate";
    }
    return "?";
}

namespace {

// Multiplicity-2 tangent line: orbits enter along directions theta with
// (k-1)theta = -arg(c) mod pi, c the product of differences to the remaining
// roots. Reported as (b, a) of bx + ay = 0, unit-normalized, b >= 0.
Vec2 double_root_tangent(const HolomorphicSystem& system, Complex z0, const Tolerances& tol) {
    Complex c(1.0, 0.0);
    const double sep = tol.root_cluster * system.root_scale() * 10.0;
    for (Complex r : system.roots_normalized())
        if (std::abs(r - z0) > sep) c *= (z0 - r);
    double theta = -std::arg(c);
    double b = -std::sin(theta), a = std::cos(theta);
    if (b < 0.0 || (b == 0.0 && a < 0.0)) {
        b = -b;
        a = -a;
    }
    return {b, a};
}

} // namespace

EquilibriumReport classify_equilibrium(const HolomorphicSystem& system, const RootEntry& root,
                                       const Tolerances& tol) {
    EquilibriumReport rep;
    rep.location = root.location;
    rep.multiplicity = root.multiplicity;
    rep.lambda = eval_derivative(system, root.location);

    if (root.multiplicity >= 2) {
        rep.lambda = Complex(0.0, 0.0);  // linear zero by definition
        rep.kind.type = EquilibriumType::Degenerate;
        rep.kind.elliptic_sectors = 2 * (root.multiplicity - 1);
        if (root.multiplicity == 2)
            rep.kind.tangent_line = double_root_tangent(system, root.location, tol);
        return rep;
    }

    const double alpha = rep.lambda.real();
    const double beta = rep.lambda.imag();
    const double mag = std::abs(rep.lambda);
    if (mag == 0.0)
        raise(ErrorCode::ZeroLambdaOnSimpleRoot,
              "P' vanished on a simple root; root clustering tolerance is off");

    if (std::abs(alpha) <= tol.classify * mag) {
        rep.kind.type = EquilibriumType::IsochronousCenter;
        rep.kind.rotation = beta > 0.0 ? Rotation::Ccw : Rotation::Cw;
        rep.kind.omega = beta;
        rep.marginal = alpha != 0.0;
    } else if (std::abs(beta) <= tol.classify * mag) {
        rep.kind.type = EquilibriumType::DicriticalNode;
        rep.kind.stability = alpha < 0.0 ? Stability::Stable : Stability::Unstable;
    } else {
        rep.kind.type = EquilibriumType::Focus;
        rep.kind.stability = alpha < 0.0 ? Stability::Stable : Stability::Unstable;
        rep.kind.rotation = beta > 0.0 ? Rotation::Ccw : Rotation::Cw;
    }
    return rep;
}

std::vector<EquilibriumReport> classify_all(const HolomorphicSystem& system,
                                            const Tolerances& tol) {
    std::vector<EquilibriumReport> out;
    for (const RootEntry& e : roots(system, tol).entries)
        out.push_back(classify_equilibrium(system, e, tol));
    return out;
}

ConsistencyVerdict global_consistency(const std::vector<EquilibriumReport>& reports, int degree,
                                      const Tolerances& tol) {
    ConsistencyVerdict v;
    for (const auto& r : reports) {
        if (r.kind.type == EquilibriumType::IsochronousCenter) v.center_count++;
        if (r.kind.type == EquilibriumType::DicriticalNode) v.node_count++;
    }
    if (degree != 3 || reports.size() != 3) return v;  // rule is cubic-only, simple roots
    v.applicable = true;

    auto check_triple = [&](int count, const char* what) {
        if (count == 2) {
            v.pass = false;
            v.failures.push_back(std::string("exactly two ") + what +
                                 " classified; counts must be 0, 1 or 3");
        }
        if (count == 3) {
            Complex p1 = reports[0].location, p2 = reports[1].location, p3 = reports[2].location;
            Complex d1 = p2 - p1, d2 = p3 - p1;
            double cross = d1.real() * d2.imag() - d1.imag() * d2.real();
            double scale = std::max(
                {1.0, std::abs(d1) * std::abs(d2), std::norm(d1), std::norm(d2)});
            double resid = std::abs(cross) / scale;
            v.collinearity_residual = resid;
            if (resid > tol.collinear) {
                v.pass = false;
                v.failures.push_back(std::string("three ") + what + " are not collinear");
            }
        }
    };
    check_triple(v.center_count, "centers");
    check_triple(v.node_count, "nodes");
    return v;
}

} // namespace crc
