#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crc/darboux.hpp"
#include "crc/topology.hpp"
#include "gallery.hpp"

#include <cmath>
#include <set>

using namespace crc;

namespace {

HolomorphicSystem sys(std::initializer_list<Complex> roots) {
    return normalize_from_roots(std::vector<Complex>(roots));
}

const EquilibriumReport& eq_at(const SeparatrixConfiguration& cfg, Complex loc) {
    for (const auto& r : cfg.equilibria)
        if (std::abs(r.location - loc) < 1e-9) return r;
    REQUIRE(false);
    return cfg.equilibria.front();
}

int eq_index(const SeparatrixConfiguration& cfg, Complex loc) {
    for (size_t i = 0; i < cfg.equilibria.size(); ++i)
        if (std::abs(cfg.equilibria[i].location - loc) < 1e-9) return int(i);
    REQUIRE(false);
    return -1;
}

} // namespace

TEST_CASE("trace: west separatrix of a node pair lands at the origin") {
    auto s = sys({Complex(0, 0), Complex(2, 0)});
    auto saddles = equator_saddles(s);
    REQUIRE(saddles.size() == 2);
    REQUIRE(saddles[1].inward_unstable);
    auto sep = trace_separatrix(s, saddles[1], true);
    REQUIRE(sep.limit.kind == LimitObject::Kind::FiniteEquilibrium);
    // the landing point is the stable node at (0, 0)
    auto reps = classify_all(s);
    CHECK(std::abs(reps[sep.limit.index].location) < 1e-9);
    REQUIRE(sep.path.size() > 5);
    CHECK(std::hypot(sep.path.front().disk.x - std::cos(saddles[1].theta),
                     sep.path.front().disk.y - std::sin(saddles[1].theta)) < 1e-5);
    // the trace stays on the invariant axis and ends inside the capture ball
    for (const auto& pt : sep.path)
        if (pt.has_plane) CHECK(std::abs(pt.plane.y) <= 1e-8 * (1.0 + std::abs(pt.plane.x)));
    CHECK(std::abs(sep.path.back().plane.x) <= 2e-4);
}

TEST_CASE("trace: requesting the equator-side manifold is rejected") {
    auto s = sys({Complex(0, 0), Complex(2, 0)});
    auto saddles = equator_saddles(s);
    CHECK_THROWS_AS(trace_separatrix(s, saddles[1], false), Error);
}

TEST_CASE("trace: three-center connection follows the invariant conic") {
    auto s = sys({Complex(0, 0), Complex(1, 1), Complex(2, 2)});
    auto saddles = equator_saddles(s);
    auto sep = trace_separatrix(s, saddles[1], true);  // north, unstable side
    REQUIRE(sep.limit.kind == LimitObject::Kind::EquatorSaddle);
    CHECK(sep.limit.index == 0);  // east
    int plane_pts = 0;
    for (const auto& pt : sep.path) {
        if (!pt.has_plane) continue;
        ++plane_pts;
        double x = pt.plane.x, y = pt.plane.y;
        CHECK(std::abs(1.0 - 2.0 * x - 2.0 * y + 2.0 * x * y) <= 1e-6);
    }
    CHECK(plane_pts > 100);
}

TEST_CASE("trace: degenerate dipole east separatrix reaches the origin on +x") {
    auto s = sys({Complex(0, 0), Complex(0, 0)});
    auto saddles = equator_saddles(s);
    REQUIRE_FALSE(saddles[0].inward_unstable);
    auto sep = trace_separatrix(s, saddles[0], false);
    REQUIRE(sep.limit.kind == LimitObject::Kind::FiniteEquilibrium);
    for (const auto& pt : sep.path)
        if (pt.has_plane) {
            CHECK(pt.plane.x > 0.0);
            CHECK(std::abs(pt.plane.y) <= 1e-8 * (1.0 + pt.plane.x));
        }
    CHECK(std::abs(sep.path.back().plane.x) <= 2e-4);
}

TEST_CASE("configuration: two centers bounded by one connection orbit") {
    auto cfg = separatrix_configuration(sys({Complex(0, 0), Complex(0, 2)}));
    REQUIRE(cfg.separatrices.size() == 2);
    for (const auto& sep : cfg.separatrices)
        CHECK(sep.limit.kind == LimitObject::Kind::EquatorSaddle);
    REQUIRE(cfg.connections.size() == 1);
    CHECK(cfg.connections[0].separatrix_indices.size() == 2);
    // one sampled closed orbit per center region
    int periodic = 0;
    for (const auto& o : cfg.orbits) periodic += o.periodic;
    CHECK(periodic == 2);
}

TEST_CASE("configuration: shared-sink cubic sends both inward separatrices to it") {
    auto cfg = separatrix_configuration(sys({Complex(0, 0), Complex(-1, 0), Complex(1, 1)}));
    int sink = eq_index(cfg, Complex(0, 0));  // lambda = -1-i
    int hits = 0;
    for (const auto& sep : cfg.separatrices) {
        REQUIRE(sep.limit.kind == LimitObject::Kind::FiniteEquilibrium);
        if (sep.unstable_side) {
            CHECK(sep.limit.index == sink);
            ++hits;
        }
    }
    CHECK(hits == 2);
    CHECK(cfg.connections.empty());
}

TEST_CASE("configuration: triple root sends all four separatrices home") {
    auto cfg = separatrix_configuration(sys({Complex(0, 0), Complex(0, 0), Complex(0, 0)}));
    REQUIRE(cfg.separatrices.size() == 4);
    for (const auto& sep : cfg.separatrices) {
        REQUIRE(sep.limit.kind == LimitObject::Kind::FiniteEquilibrium);
        CHECK(sep.limit.index == 0);
    }
    CHECK(cfg.orbits.size() == 4);  // one homoclinic lobe per elliptic sector
}

TEST_CASE("classification of the full gallery") {
    for (const auto& entry : gallery::systems()) {
        CAPTURE(entry.name);
        auto cfg = separatrix_configuration(normalize_from_roots(entry.roots));
        CHECK(classify_portrait(cfg) == entry.expected);
    }
}

TEST_CASE("separatrix counts and alternation") {
    for (const auto& entry : gallery::systems()) {
        CAPTURE(entry.name);
        auto cfg = separatrix_configuration(normalize_from_roots(entry.roots));
        int n = cfg.system.degree();
        REQUIRE(int(cfg.separatrices.size()) == 2 * (n - 1));
        for (size_t j = 0; j < cfg.separatrices.size(); ++j)
            CHECK(cfg.separatrices[j].unstable_side == (j % 2 == 1));
    }
}

TEST_CASE("limit soundness: every limit is an equilibrium or a saddle; "
          "centers never absorb separatrices") {
    for (const auto& entry : gallery::systems()) {
        CAPTURE(entry.name);
        auto cfg = separatrix_configuration(normalize_from_roots(entry.roots));
        for (const auto& sep : cfg.separatrices) {
            if (sep.limit.kind == LimitObject::Kind::FiniteEquilibrium) {
                REQUIRE(sep.limit.index >= 0);
                REQUIRE(sep.limit.index < int(cfg.equilibria.size()));
                CHECK(cfg.equilibria[sep.limit.index].kind.type !=
                      EquilibriumType::IsochronousCenter);
            } else {
                REQUIRE(sep.limit.index >= 0);
                REQUIRE(sep.limit.index < int(cfg.saddles.size()));
            }
        }
    }
}

TEST_CASE("center boundary rule: centers exist iff saddle connections bound them") {
    for (const auto& entry : gallery::systems()) {
        CAPTURE(entry.name);
        auto cfg = separatrix_configuration(normalize_from_roots(entry.roots));
        int centers = 0;
        for (const auto& r : cfg.equilibria)
            centers += r.kind.type == EquilibriumType::IsochronousCenter;
        if (centers == 0) {
            CHECK(cfg.connections.empty());
        } else {
            CHECK_FALSE(cfg.connections.empty());
            // every center owns a well-defined one- or two-component boundary
            for (size_t i = 0; i < cfg.equilibria.size(); ++i)
                if (cfg.equilibria[i].kind.type == EquilibriumType::IsochronousCenter)
                    CHECK_NOTHROW(center_region_type(cfg, int(i)));
        }
    }
}

TEST_CASE("portrait class examples") {
    CHECK(classify_portrait(separatrix_configuration(sys({Complex(0, 0), Complex(1, 2)}))) ==
          TopologicalClass::Q_ANTISADDLE_PAIR);
    CHECK(classify_portrait(separatrix_configuration(
              sys({Complex(0, 0), Complex(0, 0), Complex(1, 1)}))) ==
          TopologicalClass::C_DOUBLE_WITH_CENTER);
    CHECK(classify_portrait(separatrix_configuration(
              sys({Complex(0, 0), Complex(0, 1), Complex(-1, -1)}))) ==
          TopologicalClass::C_NO_CENTER_SHARED_SOURCE);
}

TEST_CASE("center boundary components: B1/B2 assignments") {
    auto cfg3 = separatrix_configuration(sys({Complex(0, 0), Complex(1, 1), Complex(2, 2)}));
    CHECK(center_region_type(cfg3, eq_index(cfg3, Complex(0, 0))) == CenterBoundary::B1);
    CHECK(center_region_type(cfg3, eq_index(cfg3, Complex(1, 1))) == CenterBoundary::B2);
    CHECK(center_region_type(cfg3, eq_index(cfg3, Complex(2, 2))) == CenterBoundary::B1);

    auto cfgd = separatrix_configuration(sys({Complex(0, 0), Complex(0, 0), Complex(1, 1)}));
    CHECK(center_region_type(cfgd, eq_index(cfgd, Complex(1, 1))) == CenterBoundary::B1);
    CHECK_THROWS_AS(center_region_type(cfgd, eq_index(cfgd, Complex(0, 0))), Error);
}

TEST_CASE("connection level-set consistency for zero-sum circle integrals") {
    for (const char* which : {"two_centers", "three_centers"}) {
        auto s = which[0] == 't' && which[1] == 'w'
                     ? sys({Complex(0, 0), Complex(0, 2)})
                     : sys({Complex(0, 0), Complex(1, 1), Complex(2, 2)});
        auto cfg = separatrix_configuration(s);
        auto res = rational_integral(s, cfg.equilibria);
        REQUIRE(res.status == RationalStatus::Found);
        REQUIRE(res.integral->form == RationalIntegral::Form::CircleProduct);
        long long msum = 0;
        for (const auto& f : res.integral->circles) msum += f.exponent;
        REQUIRE(msum == 0);  // H tends to 1 at infinity
        FirstIntegral fi = *res.integral;
        for (const auto& sep : cfg.separatrices)
            for (const auto& pt : sep.path) {
                if (!pt.has_plane) continue;
                CHECK(std::abs(eval_integral(fi, pt.plane.x, pt.plane.y) - 1.0) <= 1e-5);
            }
    }
}

TEST_CASE("class is stable under scale perturbations of 1e-6") {
    for (const auto& entry : gallery::systems()) {
        CAPTURE(entry.name);
        for (double s : {1.0 + 1e-6, 1.0 - 1e-6}) {
            std::vector<Complex> roots = entry.roots;
            for (Complex& r : roots) r *= s;
            auto cfg = separatrix_configuration(normalize_from_roots(roots));
            CHECK(classify_portrait(cfg) == entry.expected);
        }
    }
}

TEST_CASE("orbit periods: isochronous centers, non-periodic node basin") {
    auto s = sys({Complex(0, 0), Complex(0, 2)});
    auto p1 = orbit_period(s, {0.1, 0.0});
    REQUIRE(p1.periodic);
    CHECK(p1.period == doctest::Approx(M_PI).epsilon(1e-6));
    auto p2 = orbit_period(s, {0.3, 0.0});
    REQUIRE(p2.periodic);
    CHECK(std::abs(p2.period - p1.period) <= 1e-4 * p1.period);

    auto n = sys({Complex(0, 0), Complex(2, 0)});
    CHECK_FALSE(orbit_period(n, {1.0, 1.0}).periodic);
}

TEST_CASE("configuration JSON: deterministic, decimated, carries the class") {
    auto cfg = separatrix_configuration(sys({Complex(0, 0), Complex(1, 1), Complex(2, 2)}));
    std::string a = configuration_to_json(cfg);
    std::string b = configuration_to_json(
        separatrix_configuration(sys({Complex(0, 0), Complex(1, 1), Complex(2, 2)})));
    CHECK(a == b);
    CHECK(a.find("\"class\":\"C_THREE_CENTERS\"") != std::string::npos);
    // decimation: no separatrix polyline may exceed 2000 points
    size_t pos = 0;
    while ((pos = a.find("\"points\":[", pos)) != std::string::npos) {
        size_t end = a.find("]]", pos);
        REQUIRE(end != std::string::npos);
        size_t count = 1;
        for (size_t i = pos; i < end; ++i)
            if (a[i] == '[') ++count;
        CHECK(count / 2 <= 2001);
        pos = end + 1;
    }
}
