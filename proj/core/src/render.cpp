#include "crc/render.hpp"

#include "crc/compactify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

namespace crc {

namespace {

// g = num - level * den; its zero set is { H = level } away from den = 0.
struct LevelFunction {
    Poly2 g, gx, gy;

    explicit LevelFunction(const RationalIntegral& H, double level) {
        Poly2 num = H.num, den = H.den;
        if (H.form == RationalIntegral::Form::CircleProduct) {
            num = Poly2::constant(1.0);
            den = Poly2::constant(1.0);
            for (const auto& f : H.circles) {
                Poly2 circ(2, 2);
                circ.coef(2, 0) = 1.0;
                circ.coef(0, 2) = 1.0;
                circ.coef(1, 0) = -2.0 * f.center.x;
                circ.coef(0, 1) = -2.0 * f.center.y;
                circ.coef(0, 0) = f.center.x * f.center.x + f.center.y * f.center.y;
                for (long long k = 0; k < std::llabs(f.exponent); ++k) {
                    if (f.exponent > 0)
                        num = num * circ;
                    else
                        den = den * circ;
                }
            }
        }
        g = num - den.scaled(level);
        gx = g.dx();
        gy = g.dy();
    }

    Vec2 polish(Vec2 p) const {
        for (int it = 0; it < 2; ++it) {
            double v = g.eval(p.x, p.y);
            double dx = gx.eval(p.x, p.y), dy = gy.eval(p.x, p.y);
            double n2 = dx * dx + dy * dy;
            if (n2 < 1e-30) break;
            p.x -= v * dx / n2;
            p.y -= v * dy / n2;
        }
        return p;
    }
};

struct EdgeKey {
    int kind;  // 0: horizontal edge at (i..i+1, j); 1: vertical at (i, j..j+1)
    int i, j;
    bool operator<(const EdgeKey& o) const {
        if (kind != o.kind) return kind < o.kind;
        if (i != o.i) return i < o.i;
        return j < o.j;
    }
};

} // namespace

std::vector<LevelPolyline> level_curves(const RationalIntegral& H,
                                        const std::vector<double>& levels, int grid,
                                        double window) {
    std::vector<LevelPolyline> out;
    const int n = std::max(grid, 8);
    const double R = window;
    const double hcell = 2.0 * R / n;

    for (double level : levels) {
        LevelFunction lf(H, level);

        std::vector<double> val((n + 1) * (n + 1));
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i)
                val[i + j * (n + 1)] = lf.g.eval(-R + i * hcell, -R + j * hcell);

        auto node = [&](int i, int j) { return val[i + j * (n + 1)]; };
        auto xpos = [&](int i) { return -R + i * hcell; };

        // one interpolated point per crossed edge, shared between cells
        std::map<EdgeKey, Vec2> edge_pt;
        auto edge_point = [&](EdgeKey k) -> Vec2 {
            auto it = edge_pt.find(k);
            if (it != edge_pt.end()) return it->second;
            double a, b;
            Vec2 p;
            if (k.kind == 0) {
                a = node(k.i, k.j);
                b = node(k.i + 1, k.j);
                double t = a / (a - b);
                p = {xpos(k.i) + t * hcell, xpos(k.j)};
            } else {
                a = node(k.i, k.j);
                b = node(k.i, k.j + 1);
                double t = a / (a - b);
                p = {xpos(k.i), xpos(k.j) + t * hcell};
            }
            edge_pt[k] = p;
            return p;
        };

        // per-cell segments as edge-key pairs
        std::vector<std::pair<EdgeKey, EdgeKey>> segments;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                double v00 = node(i, j), v10 = node(i + 1, j);
                double v01 = node(i, j + 1), v11 = node(i + 1, j + 1);
                int mask = (v00 > 0.0) | ((v10 > 0.0) << 1) | ((v11 > 0.0) << 2) |
                           ((v01 > 0.0) << 3);
                if (mask == 0 || mask == 15) continue;
                EdgeKey bottom{0, i, j}, top{0, i, j + 1}, left{1, i, j}, right{1, i + 1, j};
                auto emit = [&](EdgeKey a, EdgeKey b) { segments.emplace_back(a, b); };
                switch (mask) {
                    case 1: case 14: emit(left, bottom); break;
                    case 2: case 13: emit(bottom, right); break;
                    case 3: case 12: emit(left, right); break;
                    case 4: case 11: emit(top, right); break;
                    case 6: case 9: emit(bottom, top); break;
                    case 7: case 8: emit(left, top); break;
                    case 5: case 10: {
                        // saddle cell: split by the center sample
                        double c = lf.g.eval(xpos(i) + 0.5 * hcell, xpos(j) + 0.5 * hcell);
                        bool pos = c > 0.0;
                        if ((mask == 5) == pos) {
                            emit(left, bottom);
                            emit(top, right);
                        } else {
                            emit(left, top);
                            emit(bottom, right);
                        }
                        break;
                    }
                    default: break;
                }
            }

        // chain segments through shared edges
        std::map<EdgeKey, std::vector<int>> at_edge;
        for (size_t s = 0; s < segments.size(); ++s) {
            at_edge[segments[s].first].push_back(int(s));
            at_edge[segments[s].second].push_back(int(s));
        }
        std::vector<bool> used(segments.size(), false);
        for (size_t s0 = 0; s0 < segments.size(); ++s0) {
            if (used[s0]) continue;
            std::vector<EdgeKey> chain{segments[s0].first, segments[s0].second};
            used[s0] = true;
            // grow forward then backward
            for (int side = 0; side < 2; ++side) {
                while (true) {
                    EdgeKey tip = side == 0 ? chain.back() : chain.front();
                    int next = -1;
                    for (int cand : at_edge[tip])
                        if (!used[cand]) next = cand;
                    if (next < 0) break;
                    used[next] = true;
                    EdgeKey other = (segments[next].first < tip || tip < segments[next].first)
                                        ? segments[next].first
                                        : segments[next].second;
                    if (side == 0)
                        chain.push_back(other);
                    else
                        chain.insert(chain.begin(), other);
                }
            }
            LevelPolyline pl;
            pl.level = level;
            for (const EdgeKey& k : chain) pl.plane.push_back(lf.polish(edge_point(k)));
            if (pl.plane.size() >= 2) out.push_back(std::move(pl));
        }
    }
    return out;
}

std::vector<LevelPolyline> level_curves(const FirstIntegral& H, const std::vector<double>& levels,
                                        int grid, double window) {
    const auto* rational = std::get_if<RationalIntegral>(&H);
    if (!rational)
        raise(ErrorCode::NonRationalIntegral,
              "level curves need the branch-free rational form");
    return level_curves(*rational, levels, grid, window);
}

namespace {

std::vector<Vec2> disk_polyline(const std::vector<PathPoint>& path, size_t max_points) {
    size_t stride = path.size() > max_points ? (path.size() + max_points - 1) / max_points : 1;
    std::vector<Vec2> out;
    for (size_t i = 0; i < path.size(); i += stride) out.push_back(path[i].disk);
    if (!path.empty() && (path.size() - 1) % stride != 0) out.push_back(path.back().disk);
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

struct Pixel {
    double x, y;
};

Pixel px(Vec2 disk) { return {400.0 + 380.0 * disk.x, 400.0 - 380.0 * disk.y}; }

void svg_polyline(std::string& svg, const std::vector<Vec2>& pts, const char* cls) {
    if (pts.size() < 2) return;
    svg += "<polyline class=\"";
    svg += cls;
    svg += "\" points=\"";
    for (size_t i = 0; i < pts.size(); ++i) {
        Pixel p = px(pts[i]);
        if (i) svg += " ";
        svg += fmt(p.x) + "," + fmt(p.y);
    }
    svg += "\"/>\n";
}

} // namespace

PortraitScene build_scene(const SeparatrixConfiguration& config, const RenderOptions& options) {
    PortraitScene scene;
    for (const auto& s : config.saddles) scene.saddle_ticks.push_back(s.theta);

    for (const auto& s : config.separatrices) {
        std::vector<Vec2> pl = disk_polyline(s.path, 2000);
        // anchor the curve at its saddle on the equator
        pl.insert(pl.begin(),
                  {std::cos(config.saddles[s.saddle_index].theta),
                   std::sin(config.saddles[s.saddle_index].theta)});
        if (s.limit.kind == LimitObject::Kind::EquatorSaddle)
            pl.push_back({std::cos(config.saddles[s.limit.index].theta),
                          std::sin(config.saddles[s.limit.index].theta)});
        scene.separatrices.push_back(std::move(pl));
    }

    for (const auto& o : config.orbits) {
        scene.orbits.push_back(disk_polyline(o.path, 2000));
        scene.orbit_forward.push_back(true);
    }

    if (options.draw_level_curves) {
        RationalIntegralResult rr = rational_integral(config.system, config.equilibria);
        if (rr.status == RationalStatus::Found) {
            double window = options.window;
            if (window <= 0.0) window = 3.0 * config.system.root_scale() + 2.0;
            std::vector<double> levels = options.levels;
            if (levels.empty()) {
                // one level through each sampled orbit seed, plus the
                // separatrix level for zero-sum circle products
                std::set<long long> seen;
                for (const auto& o : config.orbits) {
                    try {
                        double h = eval_integral(FirstIntegral{*rr.integral}, o.seed.x, o.seed.y);
                        if (!std::isfinite(h)) continue;
                        long long key = llround(h * 1e6);
                        if (seen.insert(key).second) levels.push_back(h);
                    } catch (const Error&) {
                    }
                }
                if (rr.integral->form == RationalIntegral::Form::CircleProduct) {
                    long long sum = 0;
                    for (const auto& f : rr.integral->circles) sum += f.exponent;
                    if (sum == 0 && seen.insert(1000000).second) levels.push_back(1.0);
                }
                std::sort(levels.begin(), levels.end());
                if (levels.size() > 9) levels.resize(9);
            }
            for (auto& pl : level_curves(*rr.integral, levels, options.grid, window)) {
                std::vector<Vec2> disk;
                disk.reserve(pl.plane.size());
                for (Vec2 p : pl.plane) disk.push_back(to_disk(p.x, p.y));
                scene.levels.push_back(std::move(disk));
            }
        }
    }

    for (const auto& e : config.equilibria) {
        PortraitScene::Glyph g;
        g.disk = to_disk(e.location.real(), e.location.imag());
        g.type = e.kind.type;
        g.filled = e.kind.stability && *e.kind.stability == Stability::Stable;
        scene.glyphs.push_back(g);
    }
    return scene;
}

std::string scene_to_svg(const PortraitScene& scene) {
    std::string svg;
    svg +=
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" "
        "height=\"800\" viewBox=\"0 0 800 800\">\n";
    svg +=
        "<style>.equator{fill:none;stroke:#222222;stroke-width:2}"
        ".level{fill:none;stroke:#b8cbe0;stroke-width:1}"
        ".orbit{fill:none;stroke:#6688aa;stroke-width:1}"
        ".separatrix{fill:none;stroke:#202060;stroke-width:2}"
        ".saddle{stroke:#202060;stroke-width:3}"
        ".eq-glyph{stroke:#400000;stroke-width:1.5}</style>\n";
    svg += "<rect width=\"800\" height=\"800\" fill=\"#ffffff\"/>\n";
    svg += "<circle class=\"equator\" cx=\"400\" cy=\"400\" r=\"380\"/>\n";

    for (const auto& pl : scene.levels) svg_polyline(svg, pl, "level");
    for (size_t i = 0; i < scene.orbits.size(); ++i) {
        svg_polyline(svg, scene.orbits[i], "orbit");
        // arrowhead near 40% of the polyline
        const auto& pl = scene.orbits[i];
        if (pl.size() >= 3) {
            size_t k = pl.size() * 2 / 5;
            if (k + 1 >= pl.size()) k = pl.size() - 2;
            Pixel a = px(pl[k]), b = px(pl[k + 1]);
            double dx = b.x - a.x, dy = b.y - a.y;
            double nn = std::hypot(dx, dy);
            if (nn > 1e-9) {
                dx /= nn;
                dy /= nn;
                double s = 6.0;
                svg += "<path class=\"orbit\" fill=\"#6688aa\" d=\"M " + fmt(a.x) + " " +
                       fmt(a.y) + " L " + fmt(a.x - s * dx + 0.5 * s * dy) + " " +
                       fmt(a.y - s * dy - 0.5 * s * dx) + " L " +
                       fmt(a.x - s * dx - 0.5 * s * dy) + " " +
                       fmt(a.y - s * dy + 0.5 * s * dx) + " Z\"/>\n";
            }
        }
    }
    for (const auto& pl : scene.separatrices) svg_polyline(svg, pl, "separatrix");

    for (double th : scene.saddle_ticks) {
        Pixel a = px({0.97 * std::cos(th), 0.97 * std::sin(th)});
        Pixel b = px({std::cos(th), std::sin(th)});
        svg += "<line class=\"saddle\" x1=\"" + fmt(a.x) + "\" y1=\"" + fmt(a.y) + "\" x2=\"" +
               fmt(b.x) + "\" y2=\"" + fmt(b.y) + "\"/>\n";
    }

    for (const auto& g : scene.glyphs) {
        Pixel p = px(g.disk);
        const char* fill = g.filled ? "#400000" : "#ffffff";
        switch (g.type) {
            case EquilibriumType::DicriticalNode:
                svg += "<circle class=\"eq-glyph\" cx=\"" + fmt(p.x) + "\" cy=\"" + fmt(p.y) +
                       "\" r=\"6\" fill=\"" + fill + "\"/>\n";
                break;
            case EquilibriumType::Focus:
                svg += "<path class=\"eq-glyph\" fill=\"" + std::string(fill) + "\" d=\"M " +
                       fmt(p.x) + " " + fmt(p.y - 7.0) + " L " + fmt(p.x + 7.0) + " " +
                       fmt(p.y) + " L " + fmt(p.x) + " " + fmt(p.y + 7.0) + " L " +
                       fmt(p.x - 7.0) + " " + fmt(p.y) + " Z\"/>\n";
                break;
            case EquilibriumType::IsochronousCenter:
                svg += "<circle class=\"eq-glyph\" cx=\"" + fmt(p.x) + "\" cy=\"" + fmt(p.y) +
                       "\" r=\"6\" fill=\"#ffffff\"/>\n";
                svg += "<circle class=\"eq-glyph\" cx=\"" + fmt(p.x) + "\" cy=\"" + fmt(p.y) +
                       "\" r=\"1.5\" fill=\"#400000\"/>\n";
                break;
            case EquilibriumType::Degenerate:
                svg += "<rect class=\"eq-glyph\" x=\"" + fmt(p.x - 5.0) + "\" y=\"" +
                       fmt(p.y - 5.0) + "\" width=\"10\" height=\"10\" fill=\"#400000\"/>\n";
                break;
        }
    }

    svg += "</svg>\n";
    return svg;
}

std::string render_portrait(const HolomorphicSystem& system,
                            const SeparatrixConfiguration& config,
                            const RenderOptions& options) {
    (void)system;
    return scene_to_svg(build_scene(config, options));
}

} // namespace crc
