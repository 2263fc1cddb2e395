#pragma once

#include "crc/darboux.hpp"
#include "crc/topology.hpp"

#include <string>
#include <vector>

namespace crc {

struct LevelPolyline {
    double level = 0.0;
    std::vector<Vec2> plane;  // plane coordinates; map with to_disk for display
};

// Marching-squares extraction of { H = level } on a [-window, window]^2 grid.
// Vertices are Newton-polished onto the level set. `window <= 0` picks
// 3 * max-root-magnitude + 2... the caller knows the system, so pass it.
std::vector<LevelPolyline> level_curves(const RationalIntegral& H,
                                        const std::vector<double>& levels, int grid,
                                        double window);

// Raises NonRationalIntegral for the factored (branchy) form.
std::vector<LevelPolyline> level_curves(const FirstIntegral& H, const std::vector<double>& levels,
                                        int grid, double window);

struct RenderOptions {
    int grid = 600;
    double window = 0.0;          // 0: 3 * max root magnitude + 2
    std::vector<double> levels;   // empty: derived from sampled orbits
    bool draw_level_curves = true;
};

// Everything the SVG shows, in disk coordinates; kept separate from the SVG
// text so invariants (containment, determinism) are checkable on geometry.
struct PortraitScene {
    struct Glyph {
        Vec2 disk;
        EquilibriumType type;
        bool filled = false;  // stable side
    };
    std::vector<double> saddle_ticks;              // equator angles
    std::vector<std::vector<Vec2>> separatrices;   // disk polylines
    std::vector<std::vector<Vec2>> orbits;
    std::vector<bool> orbit_forward;               // arrowhead orientation
    std::vector<std::vector<Vec2>> levels;
    std::vector<Glyph> glyphs;
};

PortraitScene build_scene(const SeparatrixConfiguration& config, const RenderOptions& options);

std::string scene_to_svg(const PortraitScene& scene);

// build_scene + scene_to_svg; byte-deterministic for identical inputs.
std::string render_portrait(const HolomorphicSystem& system,
                            const SeparatrixConfiguration& config,
                            const RenderOptions& options);

} // namespace crc
