#pragma once

#include "crc/compactify.hpp"
#include "crc/equilibria.hpp"
#include "crc/system.hpp"

#include <optional>
#include <string>
#include <vector>

namespace crc {

struct LimitObject {
    enum class Kind { FiniteEquilibrium, EquatorSaddle };
    Kind kind = Kind::FiniteEquilibrium;
    int index = -1;  // equilibrium index (classification order) or saddle index

    bool operator==(const LimitObject& o) const { return kind == o.kind && index == o.index; }
};

struct PathPoint {
    Vec2 disk;
    Vec2 plane;
    bool has_plane = true;
};

struct Separatrix {
    int saddle_index = 0;
    bool unstable_side = false;  // true: flows into the disk forward in time
    std::vector<PathPoint> path;
    LimitObject limit;
};

struct SampledOrbit {
    Vec2 seed;
    std::vector<PathPoint> path;
    bool periodic = false;
    int winding_center = -1;  // equilibrium index enclosed by a periodic orbit
    std::optional<LimitObject> alpha;
    std::optional<LimitObject> omega;
};

struct SaddleConnection {
    int saddle_a = 0, saddle_b = 0;
    std::vector<int> separatrix_indices;  // traces realizing this orbit
};

struct SeparatrixConfiguration {
    HolomorphicSystem system;
    std::vector<EquilibriumReport> equilibria;
    std::vector<EquatorSaddle> saddles;
    std::vector<Separatrix> separatrices;
    std::vector<SaddleConnection> connections;
    std::vector<SampledOrbit> orbits;
};

enum class TopologicalClass {
    Q_ANTISADDLE_PAIR,
    Q_TWO_CENTERS,
    Q_DEGENERATE_DIPOLE,
    C_TRIPLE_DEGENERATE,
    C_DOUBLE_WITH_CENTER,
    C_DOUBLE_WITH_SINK,
    C_DOUBLE_WITH_SOURCE,
    C_THREE_CENTERS,
    C_ONE_CENTER_SOURCE_SINK,
    C_NO_CENTER_SHARED_SINK,
    C_NO_CENTER_SHARED_SOURCE,
};

const char* topological_class_name(TopologicalClass c);

Separatrix trace_separatrix(const HolomorphicSystem& system, const EquatorSaddle& saddle,
                            bool unstable_side, const Tolerances& tol = {});

SeparatrixConfiguration separatrix_configuration(const HolomorphicSystem& system,
                                                 const Tolerances& tol = {});

TopologicalClass classify_portrait(const SeparatrixConfiguration& config);

enum class CenterBoundary { B1, B2 };
CenterBoundary center_region_type(const SeparatrixConfiguration& config, int center_index,
                                  const Tolerances& tol = {});

struct PeriodResult {
    bool periodic = false;
    double period = 0.0;
};
// True-time first-return period of the orbit through `start`; NotPeriodic
// (periodic = false) when the orbit leaves toward a non-center limit.
PeriodResult orbit_period(const HolomorphicSystem& system, Vec2 start,
                          const Tolerances& tol = {});

// Deterministic JSON: saddles, separatrix polylines (decimated to at most
// 2000 points), limit assignments, class name.
std::string configuration_to_json(const SeparatrixConfiguration& config);

} // namespace crc
