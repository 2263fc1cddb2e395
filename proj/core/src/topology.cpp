#include "crc/topology.hpp"

#include "crc/ode.hpp"
#include "jsonw.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace crc {

const char* topological_class_name(TopologicalClass c) {
    switch (c) {
        case TopologicalClass::Q_ANTISADDLE_PAIR: return "Q_ANTISADDLE_PAIR";
        case TopologicalClass::Q_TWO_CENTERS: return "Q_TWO_CENTERS";
        case TopologicalClass::Q_DEGENERATE_DIPOLE: return "Q_DEGENERATE_DIPOLE";
        case TopologicalClass::C_TRIPLE_DEGENERATE: return "C_TRIPLE_DEGENERATE";
        case TopologicalClass::C_DOUBLE_WITH_CENTER: return "C_DOUBLE_WITH_CENTER";
        case TopologicalClass::C_DOUBLE_WITH_SINK: return "C_DOUBLE_WITH_SINK";
        case TopologicalClass::C_DOUBLE_WITH_SOURCE: return "C_DOUBLE_WITH_SOURCE";
        case TopologicalClass::C_THREE_CENTERS: return "C_THREE_CENTERS";
        case TopologicalClass::C_ONE_CENTER_SOURCE_SINK: return "C_ONE_CENTER_SOURCE_SINK";
        case TopologicalClass::C_NO_CENTER_SHARED_SINK: return "C_NO_CENTER_SHARED_SINK";
        case TopologicalClass::C_NO_CENTER_SHARED_SOURCE: return "C_NO_CENTER_SHARED_SOURCE";
    }
    return "?";
}

namespace {

constexpr double kChartSwitchIn = 0.35;   // plane -> chart when best v at most this
constexpr double kChartSwitchOut = 0.5;   // chart -> plane when v at least this
constexpr double kPlaneFloorV = 1e-12;    // plane coords computable while v >= this

struct TraceState {
    ChartId chart = ChartId::Plane;
    State2 y{0.0, 0.0};
};

enum class StopKind { Landed, Connected, Periodic, Budget };

struct RunControl {
    int suppress_chart = -1;        // skip recording in this chart ...
    double suppress_below_v = 0.0;  // ... while v stays under this (one-shot)
};

struct TraceOutcome {
    StopKind kind = StopKind::Budget;
    int index = -1;       // equilibrium index (Landed) or saddle index (Connected)
    int winding_center = -1;
    std::vector<PathPoint> points;
};

double dist(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

class Tracer {
public:
    Tracer(const HolomorphicSystem& sys, const std::vector<EquilibriumReport>& reports,
           const std::vector<EquatorSaddle>& saddles, const Tolerances& tol)
        : sys_(sys), atlas_(sys), reports_(reports), saddles_(saddles), tol_(tol) {
        for (const auto& r : reports_) eq_pts_.push_back(to_vec2(r.location));
        for (size_t i = 0; i < reports_.size(); ++i)
            if (reports_[i].kind.type == EquilibriumType::IsochronousCenter)
                centers_.push_back(int(i));
        chart_saddle_.fill(-1);
        for (const auto& s : saddles_) chart_saddle_[int(s.chart)] = s.index;
    }

    const ChartAtlas& atlas() const { return atlas_; }
    const std::vector<EquilibriumReport>& reports() const { return reports_; }
    const std::vector<EquatorSaddle>& saddles() const { return saddles_; }

    TraceState state_from_plane(Vec2 p) const {
        Complex z = to_complex(p);
        ChartId best = atlas_.best_chart(z);
        ChartPoint cp{};
        bool in_chart = false;
        try {
            cp = atlas_.plane_to_chart(z, best);
            in_chart = cp.v <= kChartSwitchIn;
        } catch (const Error&) {
        }
        if (in_chart) return {best, {cp.u, cp.v}};
        return {ChartId::Plane, {p.x, p.y}};
    }

    bool plane_of(const TraceState& st, Vec2& out) const {
        if (st.chart == ChartId::Plane) {
            out = {st.y[0], st.y[1]};
            return true;
        }
        if (st.y[1] < kPlaneFloorV) return false;
        Complex z = atlas_.chart_to_plane(st.chart, st.y[0], st.y[1]);
        out = to_vec2(z);
        return true;
    }

    Vec2 disk_of(const TraceState& st) const {
        if (st.chart == ChartId::Plane) return to_disk(st.y[0], st.y[1]);
        double u = st.y[0], v = std::max(st.y[1], 0.0);
        if (v < 1e-12) {
            // effectively on the equator: project the direction
            double phi = int(st.chart) * M_PI / 2.0 + std::atan(u);
            return {std::cos(phi), std::sin(phi)};
        }
        Complex z = atlas_.chart_to_plane(st.chart, u, v);
        return to_disk(z.real(), z.imag());
    }

    TraceOutcome run(TraceState st, double dir, bool allow_periodic, Vec2 periodic_seed,
                     RunControl ctl = RunControl()) {
        TraceOutcome out;
        RkOptions opt;
        opt.rtol = tol_.rk_tol;
        opt.atol = tol_.rk_tol * 1e-2;

        auto record_point = [&](const TraceState& s, std::vector<PathPoint>& sink) {
            PathPoint pp;
            pp.disk = disk_of(s);
            Vec2 p;
            pp.has_plane = plane_of(s, p);
            if (pp.has_plane) pp.plane = p;
            sink.push_back(pp);
        };

        // saddle-approach monitoring
        int armed = -1;
        double d_min = 0.0;
        std::vector<PathPoint> buffer;

        // winding accumulators, one per center
        std::vector<double> acc(centers_.size(), 0.0), raw(centers_.size(), 0.0);
        bool winding_init = false;
        Vec2 prev_plane{};

        auto update_winding = [&](Vec2 p) -> int {
            if (!winding_init) {
                for (size_t c = 0; c < centers_.size(); ++c)
                    raw[c] = std::atan2(p.y - eq_pts_[centers_[c]].y,
                                        p.x - eq_pts_[centers_[c]].x);
                winding_init = true;
                prev_plane = p;
                return -1;
            }
            for (size_t c = 0; c < centers_.size(); ++c) {
                Vec2 ctr = eq_pts_[centers_[c]];
                double th = std::atan2(p.y - ctr.y, p.x - ctr.x);
                double delta = th - raw[c];
                if (delta > M_PI) delta -= 2.0 * M_PI;
                if (delta <= -M_PI) delta += 2.0 * M_PI;
                raw[c] = th;
                acc[c] += delta;
                if (std::abs(acc[c]) >= 2.0 * M_PI) {
                    double gap = dist(p, periodic_seed);
                    double radius = dist(p, ctr);
                    if (gap <= std::max(0.05 * radius, 1e-5)) return centers_[c];
                    acc[c] = 0.0;  // spiral: keep watching, landing will stop it
                }
            }
            prev_plane = p;
            return -1;
        };

        record_point(st, out.points);
        {
            Vec2 p;
            if (allow_periodic && plane_of(st, p)) update_winding(p);
        }

        double h = 1e-4;  // rhs carries the time direction; h stays positive
        double travelled = 0.0;
        const int max_steps = 4'000'000;

        for (int step_count = 0; step_count < max_steps; ++step_count) {
            if (travelled > tol_.trace_budget) {
                out.kind = StopKind::Budget;
                if (armed >= 0)
                    out.points.insert(out.points.end(), buffer.begin(), buffer.end());
                return out;
            }

            double cap = step_cap(st);
            h = std::min(std::max(h, 1e-14), cap);

            // Near the equator the level-set defect of the path scales like
            // rtol / v, so the local tolerance tightens proportionally to v.
            RkOptions opt_step = opt;
            if (st.chart != ChartId::Plane && st.y[1] < 1e-3) {
                opt_step.rtol = std::max(1e-7 * st.y[1], 1e-14);
                opt_step.atol = opt_step.rtol * 1e-3;
            }

            Rhs2 rhs = make_rhs(st.chart, dir);
            RkStep rs = dopri5::step(rhs, 0.0, st.y, h, opt_step);
            double h_used = h;
            h = std::min(rs.h_next, cap);
            if (!rs.accepted) continue;

            st.y = rs.y;
            if (st.chart != ChartId::Plane && st.y[1] < 0.0) st.y[1] = -st.y[1];
            travelled += h_used;
            maybe_switch(st);

            if (ctl.suppress_chart >= 0 &&
                (int(st.chart) != ctl.suppress_chart || st.y[1] >= ctl.suppress_below_v))
                ctl.suppress_chart = -1;
            if (ctl.suppress_chart < 0) {
                std::vector<PathPoint>& sink = (armed >= 0) ? buffer : out.points;
                record_point(st, sink);
            }

            Vec2 p;
            bool have_plane = plane_of(st, p);

            // landing at a finite equilibrium
            if (have_plane) {
                for (size_t i = 0; i < eq_pts_.size(); ++i) {
                    if (dist(p, eq_pts_[i]) <= tol_.landing) {
                        if (armed >= 0)
                            out.points.insert(out.points.end(), buffer.begin(), buffer.end());
                        out.kind = StopKind::Landed;
                        out.index = int(i);
                        return out;
                    }
                }
                if (allow_periodic) {
                    int wc = update_winding(p);
                    if (wc >= 0) {
                        out.kind = StopKind::Periodic;
                        out.winding_center = wc;
                        return out;
                    }
                }
            }

            // saddle-approach window
            if (st.chart != ChartId::Plane) {
                int sj = chart_saddle_[int(st.chart)];
                bool compatible =
                    sj >= 0 && saddles_[sj].mu_v * dir < 0.0;  // attracting in traced time
                double u = st.y[0], v = st.y[1];
                bool in_window = compatible && std::abs(u) <= tol_.conn_enter_u &&
                                 v <= tol_.conn_enter_v;
                if (armed < 0 && in_window) {
                    armed = sj;
                    d_min = std::hypot(u, v);
                    // the entry point stays on the committed path; subsequent
                    // points go to the buffer until the approach resolves
                } else if (armed >= 0 && armed == sj) {
                    double d = std::hypot(u, v);
                    d_min = std::min(d_min, d);
                    if (d <= tol_.conn_confirm) {
                        out.kind = StopKind::Connected;
                        out.index = armed;
                        return out;  // buffered window points discarded
                    }
                    if (std::abs(u) > 1.5 * tol_.conn_enter_u || v > 1.5 * tol_.conn_enter_v) {
                        out.points.insert(out.points.end(), buffer.begin(), buffer.end());
                        buffer.clear();
                        armed = -1;
                    }
                } else if (armed >= 0) {
                    // left the monitored chart: a pass-by
                    out.points.insert(out.points.end(), buffer.begin(), buffer.end());
                    buffer.clear();
                    armed = -1;
                }
            } else if (armed >= 0) {
                out.points.insert(out.points.end(), buffer.begin(), buffer.end());
                buffer.clear();
                armed = -1;
            }
        }
        out.kind = StopKind::Budget;
        return out;
    }

private:
    Rhs2 make_rhs(ChartId chart, double dir) const {
        if (chart == ChartId::Plane) {
            return [this, dir](double, const State2& y) -> State2 {
                Complex f = sys_.eval(Complex(y[0], y[1]));
                double n = std::abs(f);
                if (n < 1e-280) return {0.0, 0.0};
                return {dir * f.real() / n, dir * f.imag() / n};
            };
        }
        return [this, chart, dir](double, const State2& y) -> State2 {
            Vec2 f = atlas_.field(chart, y[0], y[1]);
            double n = std::hypot(f.x, f.y);
            if (n < 1e-280) return {0.0, 0.0};
            return {dir * f.x / n, dir * f.y / n};
        };
    }

    double step_cap(const TraceState& st) const {
        if (st.chart == ChartId::Plane) {
            double dmin = 1e30;
            for (const Vec2& e : eq_pts_)
                dmin = std::min(dmin, dist({st.y[0], st.y[1]}, e));
            return std::min(1.0, std::max(1e-6, 0.35 * dmin));
        }
        double u = st.y[0], v = st.y[1];
        double cap = std::min(0.2, std::max(1e-4, 0.3 * std::hypot(u, v)));
        Vec2 p;
        if (plane_of(st, p)) {
            double dmin = 1e30;
            for (const Vec2& e : eq_pts_) dmin = std::min(dmin, dist(p, e));
            cap = std::min(cap, std::max(1e-6, 0.3 * dmin * v * v / (1.0 + std::abs(u))));
        }
        return cap;
    }

    void maybe_switch(TraceState& st) const {
        if (st.chart == ChartId::Plane) {
            Complex z(st.y[0], st.y[1]);
            ChartId best = atlas_.best_chart(z);
            try {
                ChartPoint cp = atlas_.plane_to_chart(z, best);
                if (cp.v <= kChartSwitchIn) st = {best, {cp.u, cp.v}};
            } catch (const Error&) {
            }
            return;
        }
        double u = st.y[0], v = st.y[1];
        if (v >= kChartSwitchOut) {
            Complex z = atlas_.chart_to_plane(st.chart, u, v);
            st = {ChartId::Plane, {z.real(), z.imag()}};
            return;
        }
        if (std::abs(u) > 1.0) {
            // rotate into the neighbouring chart without leaving equator scale
            ChartId to = ChartId((int(st.chart) + (u > 0.0 ? 1 : 3)) % 4);
            ChartPoint cp = atlas_.chart_to_chart(st.chart, u, v, to);
            st = {to, {cp.u, cp.v}};
        }
    }

    const HolomorphicSystem& sys_;
    ChartAtlas atlas_;
    std::vector<EquilibriumReport> reports_;
    std::vector<EquatorSaddle> saddles_;
    Tolerances tol_;
    std::vector<Vec2> eq_pts_;
    std::vector<int> centers_;
    std::array<int, 4> chart_saddle_{};
};

Separatrix trace_one(Tracer& tracer, const EquatorSaddle& saddle, const Tolerances& tol) {
    auto local = tracer.atlas().saddle_local(saddle.chart);
    double vs = tol.seed_offset / std::sqrt(1.0 + local.c1 * local.c1);
    double us = local.c1 * vs + local.c2 * vs * vs + local.c3 * vs * vs * vs;
    TraceState st{saddle.chart, {us, vs}};
    double dir = saddle.inward_unstable ? 1.0 : -1.0;

    // The few steps right after the seed carry roundoff-floor transverse
    // noise that the level-set defect amplifies by 2/v^2; the deviation
    // contracts like (v0/v)^3, so points are recorded again from 50 v0 on.
    RunControl ctl;
    ctl.suppress_chart = int(saddle.chart);
    ctl.suppress_below_v = 50.0 * vs;
    TraceOutcome o = tracer.run(st, dir, false, {}, ctl);
    Separatrix sep;
    sep.saddle_index = saddle.index;
    sep.unstable_side = saddle.inward_unstable;
    sep.path = std::move(o.points);
    switch (o.kind) {
        case StopKind::Landed:
            sep.limit = {LimitObject::Kind::FiniteEquilibrium, o.index};
            break;
        case StopKind::Connected:
            sep.limit = {LimitObject::Kind::EquatorSaddle, o.index};
            break;
        default:
            raise(ErrorCode::TraceBudgetExceeded,
                  "separatrix trace exhausted its budget; tolerances are off");
    }
    return sep;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    double vx = b.x - a.x, vy = b.y - a.y;
    double wx = p.x - a.x, wy = p.y - a.y;
    double vv = vx * vx + vy * vy;
    double t = vv > 0.0 ? std::clamp((wx * vx + wy * vy) / vv, 0.0, 1.0) : 0.0;
    return std::hypot(wx - t * vx, wy - t * vy);
}

// Proper-crossing count of segment ab against a polyline in disk coordinates.
int segment_polyline_crossings(Vec2 a, Vec2 b, const std::vector<PathPoint>& path) {
    auto orient = [](Vec2 p, Vec2 q, Vec2 r) {
        double v = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
        return (v > 0.0) - (v < 0.0);
    };
    int count = 0;
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        Vec2 c = path[i].disk, d = path[i + 1].disk;
        int o1 = orient(a, b, c), o2 = orient(a, b, d);
        int o3 = orient(c, d, a), o4 = orient(c, d, b);
        if (o1 != o2 && o3 != o4 && o1 && o2 && o3 && o4) ++count;
    }
    return count;
}

} // namespace

Separatrix trace_separatrix(const HolomorphicSystem& system, const EquatorSaddle& saddle,
                            bool unstable_side, const Tolerances& tol) {
    if (unstable_side != saddle.inward_unstable)
        raise(ErrorCode::BadInput,
              "requested manifold side lies on the equator, not inside the disk");
    auto reports = classify_all(system, tol);
    auto saddles = equator_saddles(system, tol);
    Tracer tracer(system, reports, saddles, tol);
    return trace_one(tracer, saddle, tol);
}

namespace {

struct SeedSpec {
    Vec2 plane;
};

void thin_path(std::vector<PathPoint>& path, size_t keep) {
    if (path.size() <= keep) return;
    std::vector<PathPoint> out;
    size_t stride = (path.size() + keep - 1) / keep;
    for (size_t i = 0; i < path.size(); i += stride) out.push_back(path[i]);
    if (!(out.back().disk.x == path.back().disk.x && out.back().disk.y == path.back().disk.y))
        out.push_back(path.back());
    path = std::move(out);
}

double min_path_distance(Vec2 p, const std::vector<Separatrix>& seps, Vec2* nearest = nullptr) {
    double best = 1e30;
    for (const auto& s : seps)
        for (const auto& pt : s.path) {
            if (!pt.has_plane) continue;
            double d = dist(p, pt.plane);
            if (d < best) {
                best = d;
                if (nearest) *nearest = pt.plane;
            }
        }
    return best;
}

} // namespace

SeparatrixConfiguration separatrix_configuration(const HolomorphicSystem& system,
                                                 const Tolerances& tol) {
    SeparatrixConfiguration cfg{system, classify_all(system, tol),
                                equator_saddles(system, tol), {}, {}, {}};
    Tracer tracer(system, cfg.equilibria, cfg.saddles, tol);

    for (const auto& s : cfg.saddles) cfg.separatrices.push_back(trace_one(tracer, s, tol));

    // group saddle-to-saddle traces into connection orbits
    std::map<std::pair<int, int>, std::vector<int>> conn;
    for (size_t i = 0; i < cfg.separatrices.size(); ++i) {
        const Separatrix& s = cfg.separatrices[i];
        if (s.limit.kind == LimitObject::Kind::EquatorSaddle) {
            auto key = std::minmax(s.saddle_index, s.limit.index);
            conn[{key.first, key.second}].push_back(int(i));
        }
    }
    for (const auto& [key, idx] : conn)
        cfg.connections.push_back({key.first, key.second, idx});

    // ---- canonical-region orbit sampling ----
    std::vector<SeedSpec> seeds;
    const double scale = system.root_scale();

    // center annuli: between the center and the nearest separatrix point
    for (size_t i = 0; i < cfg.equilibria.size(); ++i) {
        const auto& r = cfg.equilibria[i];
        if (r.kind.type != EquilibriumType::IsochronousCenter) continue;
        Vec2 c = to_vec2(r.location);
        Vec2 nearest{c.x + 1.0, c.y};
        double d = min_path_distance(c, cfg.separatrices, &nearest);
        if (d > 1e20) d = 1.0;
        double ux = (nearest.x - c.x) / d, uy = (nearest.y - c.y) / d;
        double rr = std::max(0.5 * d, 4.0 * tol.landing);
        seeds.push_back({{c.x + rr * ux, c.y + rr * uy}});
    }

    // elliptic sectors at degenerate points: bisectors between the incoming
    // separatrix directions
    for (size_t i = 0; i < cfg.equilibria.size(); ++i) {
        const auto& r = cfg.equilibria[i];
        if (r.kind.type != EquilibriumType::Degenerate) continue;
        Vec2 c = to_vec2(r.location);
        std::vector<double> dirs;
        for (const auto& s : cfg.separatrices) {
            if (s.limit.kind != LimitObject::Kind::FiniteEquilibrium ||
                s.limit.index != int(i))
                continue;
            // sample the approach direction a little away from the point
            for (auto it = s.path.rbegin(); it != s.path.rend(); ++it) {
                if (!it->has_plane) continue;
                double d = dist(it->plane, c);
                if (d > 0.15 * scale && d < 0.9 * scale) {
                    dirs.push_back(std::atan2(it->plane.y - c.y, it->plane.x - c.x));
                    break;
                }
            }
        }
        std::sort(dirs.begin(), dirs.end());
        double rr = 0.3 * scale;
        for (const auto& other : cfg.equilibria) {
            if (&other == &r) continue;
            rr = std::min(rr, 0.4 * std::abs(other.location - r.location));
        }
        rr = std::max(rr, 4.0 * tol.landing);
        for (size_t k = 0; k < dirs.size(); ++k) {
            double next = (k + 1 < dirs.size()) ? dirs[k + 1] : dirs[0] + 2.0 * M_PI;
            double mid = 0.5 * (dirs[k] + next);
            seeds.push_back({{c.x + rr * std::cos(mid), c.y + rr * std::sin(mid)}});
        }
    }

    // gaps between angularly adjacent saddles, near the equator
    const double r_far = 4.0 * (scale + 1.0);
    const int ns = int(cfg.saddles.size());
    for (int j = 0; j < ns; ++j) {
        double th0 = cfg.saddles[j].theta;
        double th1 = cfg.saddles[(j + 1) % ns].theta;
        if ((j + 1) % ns == 0) th1 += 2.0 * M_PI;
        double mid = 0.5 * (th0 + th1);
        seeds.push_back({{r_far * std::cos(mid), r_far * std::sin(mid)}});
    }

    // trace each seed both ways, classify, dedupe by signature + separation
    for (const auto& seed : seeds) {
        bool skip = false;
        for (const auto& e : cfg.equilibria)
            if (dist(seed.plane, to_vec2(e.location)) < 2.0 * tol.landing) skip = true;
        if (min_path_distance(seed.plane, cfg.separatrices) < 2.0 * tol.landing) skip = true;
        if (skip) continue;

        TraceOutcome fwd = tracer.run(tracer.state_from_plane(seed.plane), 1.0, true, seed.plane);
        SampledOrbit orbit;
        orbit.seed = seed.plane;
        if (fwd.kind == StopKind::Budget) continue;
        if (fwd.kind == StopKind::Periodic) {
            orbit.periodic = true;
            orbit.winding_center = fwd.winding_center;
            orbit.path = std::move(fwd.points);
            orbit.path.push_back(orbit.path.front());  // close the loop
        } else {
            LimitObject om = fwd.kind == StopKind::Landed
                                 ? LimitObject{LimitObject::Kind::FiniteEquilibrium, fwd.index}
                                 : LimitObject{LimitObject::Kind::EquatorSaddle, fwd.index};
            TraceOutcome bwd =
                tracer.run(tracer.state_from_plane(seed.plane), -1.0, true, seed.plane);
            if (bwd.kind == StopKind::Budget || bwd.kind == StopKind::Periodic) continue;
            LimitObject al = bwd.kind == StopKind::Landed
                                 ? LimitObject{LimitObject::Kind::FiniteEquilibrium, bwd.index}
                                 : LimitObject{LimitObject::Kind::EquatorSaddle, bwd.index};
            orbit.alpha = al;
            orbit.omega = om;
            orbit.path.assign(bwd.points.rbegin(), bwd.points.rend());
            orbit.path.insert(orbit.path.end(), fwd.points.begin(), fwd.points.end());
        }
        thin_path(orbit.path, 4000);

        bool duplicate = false;
        for (const auto& kept : cfg.orbits) {
            if (kept.periodic != orbit.periodic) continue;
            if (orbit.periodic) {
                if (kept.winding_center != orbit.winding_center) continue;
            } else if (!(kept.alpha == orbit.alpha && kept.omega == orbit.omega)) {
                continue;
            }
            Vec2 a = to_disk(kept.seed.x, kept.seed.y);
            Vec2 b = to_disk(orbit.seed.x, orbit.seed.y);
            int crossings = 0;
            for (const auto& s : cfg.separatrices)
                crossings += segment_polyline_crossings(a, b, s.path);
            if (crossings % 2 != 0) continue;
            // same signature and no crossing: still keep both when the test
            // segment squeezes past an equilibrium or a separatrix endpoint
            // (the parity argument is blind there)
            double clearance = 1e30;
            for (const auto& e : cfg.equilibria) {
                Vec2 ed = to_disk(e.location.real(), e.location.imag());
                clearance = std::min(clearance, point_segment_distance(ed, a, b));
            }
            for (const auto& s : cfg.separatrices)
                for (size_t pi = 0; pi < s.path.size();
                     pi += 1 + s.path.size() / 400)
                    clearance =
                        std::min(clearance, point_segment_distance(s.path[pi].disk, a, b));
            if (clearance > 2e-3) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) cfg.orbits.push_back(std::move(orbit));
    }

    return cfg;
}

TopologicalClass classify_portrait(const SeparatrixConfiguration& config) {
    const int n = config.system.degree();
    const auto& eq = config.equilibria;

    if (int(config.separatrices.size()) != 2 * (n - 1))
        raise(ErrorCode::ConfigurationInconsistent, "separatrix count is off");
    int centers = 0, max_mult = 1;
    for (const auto& r : eq) {
        if (r.kind.type == EquilibriumType::IsochronousCenter) ++centers;
        max_mult = std::max(max_mult, r.multiplicity);
    }

    if (n == 2) {
        if (max_mult >= 2) return TopologicalClass::Q_DEGENERATE_DIPOLE;
        if (centers == 2) return TopologicalClass::Q_TWO_CENTERS;
        if (centers != 0)
            raise(ErrorCode::ConfigurationInconsistent, "quadratic kinds come in equal pairs");
        return TopologicalClass::Q_ANTISADDLE_PAIR;
    }

    if (max_mult == 3) return TopologicalClass::C_TRIPLE_DEGENERATE;
    if (max_mult == 2) {
        for (const auto& r : eq) {
            if (r.multiplicity != 1) continue;
            if (r.kind.type == EquilibriumType::IsochronousCenter)
                return TopologicalClass::C_DOUBLE_WITH_CENTER;
            if (!r.kind.stability)
                raise(ErrorCode::ConfigurationInconsistent, "simple point without stability");
            return *r.kind.stability == Stability::Stable
                       ? TopologicalClass::C_DOUBLE_WITH_SINK
                       : TopologicalClass::C_DOUBLE_WITH_SOURCE;
        }
        raise(ErrorCode::ConfigurationInconsistent, "double root without a simple partner");
    }

    if (centers == 3) return TopologicalClass::C_THREE_CENTERS;
    if (centers == 1) return TopologicalClass::C_ONE_CENTER_SOURCE_SINK;
    if (centers != 0)
        raise(ErrorCode::ConfigurationInconsistent, "cubic center count must be 0, 1 or 3");

    // no centers: one equilibrium absorbs/emits two separatrices
    std::array<int, 3> hits{0, 0, 0};
    for (const auto& s : config.separatrices) {
        if (s.limit.kind != LimitObject::Kind::FiniteEquilibrium)
            raise(ErrorCode::ConfigurationInconsistent,
                  "saddle connection without a center region");
        hits[s.limit.index] += 1;
    }
    int shared = -1;
    for (int i = 0; i < 3; ++i)
        if (hits[i] == 2) shared = i;
    if (shared < 0)
        raise(ErrorCode::ConfigurationInconsistent, "no shared limit among separatrices");
    if (!eq[shared].kind.stability)
        raise(ErrorCode::ConfigurationInconsistent, "shared limit lacks stability");

    // cross-check: the shared equilibrium is the stability minority
    int stable_count = 0;
    for (const auto& r : eq)
        if (r.kind.stability && *r.kind.stability == Stability::Stable) ++stable_count;
    bool shared_stable = *eq[shared].kind.stability == Stability::Stable;
    if ((shared_stable && stable_count != 1) || (!shared_stable && stable_count != 2))
        raise(ErrorCode::ConfigurationInconsistent,
              "shared limit disagrees with the stability split");

    return shared_stable ? TopologicalClass::C_NO_CENTER_SHARED_SINK
                         : TopologicalClass::C_NO_CENTER_SHARED_SOURCE;
}

CenterBoundary center_region_type(const SeparatrixConfiguration& config, int center_index,
                                  const Tolerances& tol) {
    (void)tol;
    if (center_index < 0 || center_index >= int(config.equilibria.size()) ||
        config.equilibria[center_index].kind.type != EquilibriumType::IsochronousCenter)
        raise(ErrorCode::NotACenter, "index does not name an isochronous center");

    Vec2 c = to_vec2(config.equilibria[center_index].location);
    Vec2 c_disk = to_disk(c.x, c.y);

    int adjacent = 0;
    for (const auto& conn : config.connections) {
        // nearest vertex of this connection orbit to the center
        double best = 1e30;
        Vec2 best_disk{};
        for (int si : conn.separatrix_indices)
            for (const auto& pt : config.separatrices[si].path) {
                if (!pt.has_plane) continue;
                double d = dist(pt.plane, c);
                if (d < best) {
                    best = d;
                    best_disk = pt.disk;
                }
            }
        if (best > 1e20) continue;
        // adjacency: the segment center -> nearest point crosses no other
        // separatrix
        int crossings = 0;
        for (size_t si = 0; si < config.separatrices.size(); ++si) {
            bool own = std::find(conn.separatrix_indices.begin(), conn.separatrix_indices.end(),
                                 int(si)) != conn.separatrix_indices.end();
            if (own) continue;
            crossings +=
                segment_polyline_crossings(c_disk, best_disk, config.separatrices[si].path);
        }
        if (crossings == 0) ++adjacent;
    }

    if (adjacent == 1) return CenterBoundary::B1;
    if (adjacent == 2) return CenterBoundary::B2;
    raise(ErrorCode::ConfigurationInconsistent,
          "center region bounded by " + std::to_string(adjacent) + " connections");
}

PeriodResult orbit_period(const HolomorphicSystem& system, Vec2 start, const Tolerances& tol) {
    auto reports = classify_all(system, tol);
    std::vector<Vec2> eq_pts;
    std::vector<int> centers;
    for (size_t i = 0; i < reports.size(); ++i) {
        eq_pts.push_back(to_vec2(reports[i].location));
        if (reports[i].kind.type == EquilibriumType::IsochronousCenter) centers.push_back(int(i));
    }

    Rhs2 rhs = [&](double, const State2& y) -> State2 {
        Complex f = system.eval(Complex(y[0], y[1]));
        return {f.real(), f.imag()};
    };

    RkOptions opt;
    opt.rtol = tol.rk_tol;
    opt.atol = tol.rk_tol * 1e-2;
    opt.h_max = 1e9;

    State2 y{start.x, start.y};
    double t = 0.0, h = 1e-4;
    std::vector<double> acc(centers.size(), 0.0), raw(centers.size(), 0.0);
    for (size_t c = 0; c < centers.size(); ++c)
        raw[c] = std::atan2(y[1] - eq_pts[centers[c]].y, y[0] - eq_pts[centers[c]].x);

    const double escape = 50.0 * (system.root_scale() + 1.0);
    const int max_steps = 4'000'000;

    for (int step_count = 0; step_count < max_steps; ++step_count) {
        if (t > tol.trace_budget)
            raise(ErrorCode::TraceBudgetExceeded, "no return before the time budget");

        // keep per-step angular motion below ~0.35 rad about every equilibrium
        Complex f = system.eval(Complex(y[0], y[1]));
        double speed = std::abs(f);
        if (speed < 1e-280) return {false, 0.0};
        double cap = 1e30;
        for (const Vec2& e : eq_pts) {
            double d = dist({y[0], y[1]}, e);
            cap = std::min(cap, 0.3 * std::max(d, 1e-12) / speed);
        }
        h = std::min(std::max(h, 1e-14), cap);

        RkStep rs = dopri5::step(rhs, t, y, h, opt);
        double h_used = h;
        h = std::min(rs.h_next, cap);
        if (!rs.accepted) continue;

        State2 y_prev = y;
        y = rs.y;
        t += h_used;

        for (size_t i = 0; i < eq_pts.size(); ++i) {
            bool is_center = std::find(centers.begin(), centers.end(), int(i)) != centers.end();
            if (!is_center && dist({y[0], y[1]}, eq_pts[i]) <= tol.landing) return {false, 0.0};
        }
        if (std::hypot(y[0], y[1]) > escape) return {false, 0.0};

        for (size_t c = 0; c < centers.size(); ++c) {
            Vec2 ctr = eq_pts[centers[c]];
            double th = std::atan2(y[1] - ctr.y, y[0] - ctr.x);
            double delta = th - raw[c];
            if (delta > M_PI) delta -= 2.0 * M_PI;
            if (delta <= -M_PI) delta += 2.0 * M_PI;
            raw[c] = th;
            double before = acc[c];
            acc[c] += delta;
            if (std::abs(acc[c]) >= 2.0 * M_PI) {
                // refine the 2*pi crossing inside the last step by bisection
                double target = std::copysign(2.0 * M_PI, acc[c]);
                double lo = 0.0, hi = h_used;
                auto angle_at = [&](double dt) {
                    State2 yy = dopri5::fixed_step(rhs, t - h_used, y_prev, dt);
                    double tth = std::atan2(yy[1] - ctr.y, yy[0] - ctr.x);
                    double prev =
                        std::atan2(y_prev[1] - ctr.y, y_prev[0] - ctr.x);
                    double dd = tth - prev;
                    if (dd > M_PI) dd -= 2.0 * M_PI;
                    if (dd <= -M_PI) dd += 2.0 * M_PI;
                    return before + dd;
                };
                for (int it = 0; it < 80; ++it) {
                    double mid = 0.5 * (lo + hi);
                    if (std::abs(angle_at(mid)) >= std::abs(target))
                        hi = mid;
                    else
                        lo = mid;
                }
                return {true, t - h_used + 0.5 * (lo + hi)};
            }
        }
    }
    raise(ErrorCode::TraceBudgetExceeded, "step limit exhausted");
}

namespace {

std::string limit_json(const LimitObject& l) {
    return jsonw::Obj()
        .str("kind", l.kind == LimitObject::Kind::FiniteEquilibrium ? "finite_equilibrium"
                                                                    : "equator_saddle")
        .integer("index", l.index)
        .str();
}

std::string path_json(const std::vector<PathPoint>& path, size_t max_points) {
    size_t stride = path.size() > max_points ? (path.size() + max_points - 1) / max_points : 1;
    jsonw::Arr arr;
    for (size_t i = 0; i < path.size(); i += stride)
        arr.push(jsonw::Arr()
                     .push(jsonw::num(path[i].disk.x))
                     .push(jsonw::num(path[i].disk.y))
                     .str());
    if (!path.empty() && (path.size() - 1) % stride != 0)
        arr.push(jsonw::Arr()
                     .push(jsonw::num(path.back().disk.x))
                     .push(jsonw::num(path.back().disk.y))
                     .str());
    return arr.str();
}

} // namespace

std::string configuration_to_json(const SeparatrixConfiguration& config) {
    jsonw::Obj root;

    jsonw::Arr saddles;
    for (const auto& s : config.saddles)
        saddles.push(jsonw::Obj()
                         .integer("index", s.index)
                         .real("theta", s.theta)
                         .str("inward_side", s.inward_unstable ? "unstable" : "stable")
                         .str());
    root.field("saddles", saddles.str());

    jsonw::Arr seps;
    for (const auto& s : config.separatrices)
        seps.push(jsonw::Obj()
                      .integer("saddle", s.saddle_index)
                      .str("orientation", s.unstable_side ? "unstable" : "stable")
                      .field("limit", limit_json(s.limit))
                      .field("points", path_json(s.path, 2000))
                      .str());
    root.field("separatrices", seps.str());

    jsonw::Arr conns;
    for (const auto& c : config.connections)
        conns.push(jsonw::Obj()
                       .integer("saddle_a", c.saddle_a)
                       .integer("saddle_b", c.saddle_b)
                       .str());
    root.field("connections", conns.str());

    jsonw::Arr orbits;
    for (const auto& o : config.orbits) {
        jsonw::Obj obj;
        obj.boolean("periodic", o.periodic);
        if (o.periodic) obj.integer("winding_center", o.winding_center);
        if (o.alpha) obj.field("alpha", limit_json(*o.alpha));
        if (o.omega) obj.field("omega", limit_json(*o.omega));
        obj.field("points", path_json(o.path, 2000));
        orbits.push(obj.str());
    }
    root.field("orbits", orbits.str());

    root.str("class", topological_class_name(classify_portrait(config)));
    return root.str();
}

} // namespace crc
