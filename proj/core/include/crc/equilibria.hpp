#pragma once

#include "crc/system.hpp"

#include <optional>
#include <string>
#include <vector>

namespace crc {

enum class Stability { Stable, Unstable };
enum class Rotation { Ccw, Cw };

enum class EquilibriumType {
    DicriticalNode,
    Focus,
    IsochronousCenter,
    Degenerate,
};

struct EquilibriumKind {
    EquilibriumType type = EquilibriumType::Focus;
    std::optional<Stability> stability;      // node, focus
    std::optional<Rotation> rotation;        // focus, center
    double omega = 0.0;                      // center only: Im P'(z0), nonzero
    int elliptic_sectors = 0;                // degenerate only: 2(k-1)
    std::optional<Vec2> tangent_line;        // degenerate, mult 2: (b, a) of bx + ay = 0
};

struct EquilibriumReport {
    Complex location;   // normalized frame
    int multiplicity = 1;
    Complex lambda;     // P'(location); zero iff multiplicity > 1
    EquilibriumKind kind;
    bool marginal = false;  // |Re lambda| landed inside the classify band
};

struct ConsistencyVerdict {
    bool pass = true;
    bool applicable = false;  // cubic with three simple roots only
    int center_count = 0;
    int node_count = 0;
    std::optional<double> collinearity_residual;  // when a triple exists
    std::vector<std::string> failures;
};

EquilibriumReport classify_equilibrium(const HolomorphicSystem& system, const RootEntry& root,
                                       const Tolerances& tol = {});

std::vector<EquilibriumReport> classify_all(const HolomorphicSystem& system,
                                            const Tolerances& tol = {});

ConsistencyVerdict global_consistency(const std::vector<EquilibriumReport>& reports, int degree,
                                      const Tolerances& tol = {});

const char* stability_name(Stability s);
const char* rotation_name(Rotation r);
const char* equilibrium_type_name(EquilibriumType t);

} // namespace crc
