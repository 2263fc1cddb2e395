#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crc/darboux.hpp"
#include "crc/ode.hpp"

#include <cmath>
#include <random>

using namespace crc;

namespace {

HolomorphicSystem sys(std::initializer_list<Complex> roots) {
    return normalize_from_roots(std::vector<Complex>(roots));
}

bool cpoly_eq(const CPoly& a, std::initializer_list<Complex> b, double tol = 1e-13) {
    if (a.size() != b.size()) return false;
    size_t i = 0;
    for (Complex c : b) {
        if (std::abs(a[i] - c) > tol) return false;
        ++i;
    }
    return true;
}

// true-time orbit polyline with steps short enough for branch continuation
std::vector<Vec2> integrate_orbit(const HolomorphicSystem& s, Vec2 p0, double tmax,
                                  double dir) {
    RkOptions opt;
    opt.rtol = 1e-11;
    opt.atol = 1e-13;
    opt.h_max = 1e9;
    Rhs2 rhs = [&](double, const State2& y) -> State2 {
        Complex f = s.eval(Complex(y[0], y[1]));
        return {dir * f.real(), dir * f.imag()};
    };
    std::vector<Vec2> pts{p0};
    State2 y{p0.x, p0.y};
    double t = 0.0, h = 1e-3;
    for (int guard = 0; guard < 2000000 && t < tmax; ++guard) {
        double cap = 1e9;
        Complex f = s.eval(Complex(y[0], y[1]));
        for (Complex r : s.roots_normalized()) {
            double d = std::abs(Complex(y[0], y[1]) - r);
            cap = std::min(cap, 0.35 * std::max(d, 1e-9) / std::max(std::abs(f), 1e-12));
        }
        h = std::min({h, cap, tmax - t});
        auto rs = dopri5::step(rhs, t, y, h, opt);
        double used = h;
        h = std::min(rs.h_next, cap);
        if (!rs.accepted) continue;
        y = rs.y;
        t += used;
        pts.push_back({y[0], y[1]});
        if (std::hypot(y[0], y[1]) > 40.0) break;
    }
    return pts;
}

double max_drift(const FirstIntegral& H, const std::vector<Vec2>& orbit) {
    ContinuedEvaluator ce(H, orbit.front());
    double l0 = ce.advance_log(orbit.front());
    double worst = 0.0;
    for (const Vec2& p : orbit) worst = std::max(worst, std::abs(std::expm1(ce.advance_log(p) - l0)));
    return worst;
}

} // namespace

TEST_CASE("invariants and cofactors: simple quadratic") {
    auto inv = build_invariants(sys({Complex(0, 0), Complex(2, 0)}));
    REQUIRE(inv.size() == 2);
    CHECK(inv[0].kind == Invariant::Kind::Linear);
    CHECK(inv[0].root == Complex(0, 0));
    CHECK(cpoly_eq(inv[0].cofactor, {Complex(-2, 0), Complex(1, 0)}));  // z - 2
    CHECK(inv[1].root == Complex(2, 0));
    CHECK(cpoly_eq(inv[1].cofactor, {Complex(0, 0), Complex(1, 0)}));  // z
}

TEST_CASE("invariants and cofactors: triple root") {
    auto inv = build_invariants(sys({Complex(0, 0), Complex(0, 0), Complex(0, 0)}));
    REQUIRE(inv.size() == 2);
    CHECK(inv[0].kind == Invariant::Kind::Linear);
    CHECK(cpoly_eq(inv[0].cofactor, {Complex(0, 0), Complex(0, 0), Complex(1, 0)}));  // z^2
    CHECK(inv[1].kind == Invariant::Kind::Exponential);
    CHECK(inv[1].order == 2);
    CHECK(cpoly_eq(inv[1].cofactor, {Complex(-2, 0)}));
}

TEST_CASE("invariants and cofactors: double root plus simple") {
    Complex z2(1, 1);
    auto inv = build_invariants(sys({Complex(0, 0), Complex(0, 0), z2}));
    REQUIRE(inv.size() == 3);
    CHECK(cpoly_eq(inv[0].cofactor, {Complex(0, 0), -z2, Complex(1, 0)}));  // z(z - z2)
    CHECK(cpoly_eq(inv[1].cofactor, {Complex(0, 0), Complex(0, 0), Complex(1, 0)}));  // z^2
    CHECK(inv[2].kind == Invariant::Kind::Exponential);
    CHECK(inv[2].order == 1);
    CHECK(cpoly_eq(inv[2].cofactor, {z2, Complex(-1, 0)}));  // -(z - z2)
}

TEST_CASE("cofactor identity: (z - r) c = P for every linear invariant") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    for (int k = 0; k < 100; ++k) {
        std::vector<Complex> roots{Complex(0, 0), Complex(u(rng), u(rng))};
        if (k % 2) roots.emplace_back(u(rng), u(rng));
        HolomorphicSystem s = normalize_from_roots(roots);
        for (const auto& inv : build_invariants(s)) {
            if (inv.kind != Invariant::Kind::Linear) continue;
            CPoly prod = cpoly_mul(CPoly{-inv.root, Complex(1, 0)}, inv.cofactor);
            const CPoly& p = s.coefficients();
            REQUIRE(prod.size() == p.size());
            for (size_t i = 0; i < p.size(); ++i)
                CHECK(std::abs(prod[i] - p[i]) <= 1e-12 * (1.0 + std::abs(p[i])));
        }
    }
}

TEST_CASE("exponents: quadratic pair (i/z2, -i/z2)") {
    auto s = sys({Complex(0, 0), Complex(2, 0)});
    auto lam = solve_exponents(s, build_invariants(s));
    REQUIRE(lam.size() == 2);
    CHECK(std::abs(lam[0] - Complex(0, 0.5)) < 1e-14);
    CHECK(std::abs(lam[1] - Complex(0, -0.5)) < 1e-14);
}

TEST_CASE("exponents: three centers get 1/omega_k") {
    auto s = sys({Complex(0, 0), Complex(1, 1), Complex(2, 2)});
    auto lam = solve_exponents(s, build_invariants(s));
    REQUIRE(lam.size() == 3);
    CHECK(std::abs(lam[0] - Complex(0.25, 0)) < 1e-13);
    CHECK(std::abs(lam[1] - Complex(-0.5, 0)) < 1e-13);
    CHECK(std::abs(lam[2] - Complex(0.25, 0)) < 1e-13);
}

TEST_CASE("exponents: double-root closed form") {
    Complex z2(1, 1);
    auto s = sys({Complex(0, 0), Complex(0, 0), z2});
    auto lam = solve_exponents(s, build_invariants(s));
    REQUIRE(lam.size() == 3);
    Complex z2c = std::conj(z2);
    CHECK(std::abs(lam[0] - z2c * z2c * Complex(0, 1)) < 1e-13);
    CHECK(std::abs(lam[1] + z2c * z2c * Complex(0, 1)) < 1e-13);
    CHECK(std::abs(lam[2] + z2c * std::norm(z2) * Complex(0, 1)) < 1e-13);
}

TEST_CASE("null-space identity holds to 1e-12 across random systems") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    for (int k = 0; k < 150; ++k) {
        std::vector<Complex> roots{Complex(0, 0)};
        int shape = k % 4;
        if (shape == 0) roots.emplace_back(u(rng), u(rng));
        if (shape == 1) {
            roots.emplace_back(u(rng), u(rng));
            roots.emplace_back(u(rng), u(rng));
        }
        if (shape == 2) {
            roots.emplace_back(0.0, 0.0);
            roots.emplace_back(u(rng), u(rng));
        }
        if (shape == 3) {
            roots.emplace_back(0.0, 0.0);
            if (k % 8 < 4) roots.emplace_back(0.0, 0.0);
        }
        HolomorphicSystem s = normalize_from_roots(roots);
        auto inv = build_invariants(s);
        auto lam = solve_exponents(s, inv);
        double scale = 0.0;
        for (Complex l : lam) scale = std::max(scale, std::abs(l));
        CHECK(exponent_residual(inv, lam) <= 1e-12 * std::max(1.0, scale) * 10.0);
    }
}

TEST_CASE("integral: two centers give pure circle powers") {
    auto H = build_integral(sys({Complex(0, 0), Complex(0, 2)}));
    const auto& D = std::get<DarbouxIntegral>(H);
    REQUIRE(D.powers.size() == 2);
    CHECK(D.angles.empty());
    CHECK(D.exps.empty());
    CHECK(D.powers[0].center.x == 0.0);
    CHECK(D.powers[0].center.y == 0.0);
    CHECK(D.powers[0].exponent == doctest::Approx(2.0));
    CHECK(D.powers[1].center.y == doctest::Approx(2.0));
    CHECK(D.powers[1].exponent == doctest::Approx(-2.0));
}

TEST_CASE("integral: two nodes give pure angle factors") {
    auto H = build_integral(sys({Complex(0, 0), Complex(2, 0)}));
    const auto& D = std::get<DarbouxIntegral>(H);
    CHECK(D.powers.empty());
    REQUIRE(D.angles.size() == 2);
    CHECK(D.angles[0].coefficient == doctest::Approx(-4.0));
    CHECK(D.angles[1].coefficient == doctest::Approx(4.0));
}

TEST_CASE("integral: degenerate dipoles get their rational forms directly") {
    auto Hq = build_integral(sys({Complex(0, 0), Complex(0, 0)}));
    const auto& Rq = std::get<RationalIntegral>(Hq);
    REQUIRE(Rq.form == RationalIntegral::Form::PolyRatio);
    CHECK(Rq.num == Poly2::monomial(0, 1, 1.0));
    Poly2 r2 = Poly2::monomial(2, 0, 1.0) + Poly2::monomial(0, 2, 1.0);
    CHECK(Rq.den == r2);

    auto Hc = build_integral(sys({Complex(0, 0), Complex(0, 0), Complex(0, 0)}));
    const auto& Rc = std::get<RationalIntegral>(Hc);
    CHECK(Rc.num == Poly2::monomial(1, 1, 1.0));
    CHECK(Rc.den == r2 * r2);
}

TEST_CASE("integral: double root with center partner") {
    auto H = build_integral(sys({Complex(0, 0), Complex(0, 0), Complex(1, 1)}));
    const auto& D = std::get<DarbouxIntegral>(H);
    REQUIRE(D.powers.size() == 2);
    CHECK(D.powers[0].exponent == doctest::Approx(1.0));   // ab = 1
    CHECK(D.powers[1].exponent == doctest::Approx(-1.0));
    CHECK(D.angles.empty());  // a^2 = b^2
    REQUIRE(D.exps.size() == 1);
    // exp factor: -(a^2+b^2)(bx + ay) / (x^2+y^2) = -2(x + y)/(x^2+y^2)
    CHECK(D.exps[0].num.eval(1.0, 0.0) == doctest::Approx(-2.0));
    CHECK(D.exps[0].num.eval(0.0, 1.0) == doctest::Approx(-2.0));
    CHECK(D.exps[0].den.eval(1.0, 1.0) == doctest::Approx(2.0));
}

TEST_CASE("rational integral: three commensurable centers") {
    auto s = sys({Complex(0, 0), Complex(1, 1), Complex(2, 2)});
    auto res = rational_integral(s, classify_all(s));
    REQUIRE(res.status == RationalStatus::Found);
    const auto& H = *res.integral;
    REQUIRE(H.form == RationalIntegral::Form::CircleProduct);
    REQUIRE(H.circles.size() == 3);
    CHECK(H.circles[0].exponent == 1);
    CHECK(H.circles[1].exponent == -2);
    CHECK(H.circles[2].exponent == 1);
    CHECK(H.circles[1].center.x == doctest::Approx(1.0));
    CHECK(H.circles[2].center.y == doctest::Approx(2.0));
    long long sum = 0;
    for (const auto& f : H.circles) sum += f.exponent;
    CHECK(sum == 0);
}

TEST_CASE("rational integral: foci block it") {
    auto s = sys({Complex(0, 0), Complex(1, 2)});
    auto res = rational_integral(s, classify_all(s));
    CHECK(res.status == RationalStatus::Absent);
}

TEST_CASE("rational integral: quadratic node and center closed forms") {
    auto sn = sys({Complex(0, 0), Complex(2, 0)});
    auto rn = rational_integral(sn, classify_all(sn));
    REQUIRE(rn.status == RationalStatus::Found);
    REQUIRE(rn.integral->form == RationalIntegral::Form::PolyRatio);
    CHECK(rn.integral->num == Poly2::monomial(0, 1, 1.0));  // y
    Poly2 den_expected = Poly2::monomial(2, 0, 1.0) + Poly2::monomial(0, 2, 1.0) +
                         Poly2::monomial(1, 0, -2.0);       // x(x-2) + y^2
    CHECK(rn.integral->den == den_expected);

    auto sc = sys({Complex(0, 0), Complex(0, 2)});
    auto rc = rational_integral(sc, classify_all(sc));
    REQUIRE(rc.status == RationalStatus::Found);
    REQUIRE(rc.integral->form == RationalIntegral::Form::CircleProduct);
    REQUIRE(rc.integral->circles.size() == 2);
    CHECK(rc.integral->circles[0].exponent == 1);
    CHECK(rc.integral->circles[1].exponent == -1);
    CHECK(rc.integral->circles[1].center.y == doctest::Approx(2.0));
}

TEST_CASE("rational integral: three nodes with rational eigenvalue ratios") {
    auto s = sys({Complex(0, 0), Complex(1, 0), Complex(3, 0)});
    auto reps = classify_all(s);
    for (const auto& r : reps) CHECK(r.kind.type == EquilibriumType::DicriticalNode);
    auto res = rational_integral(s, reps);
    REQUIRE(res.status == RationalStatus::Found);
    CHECK(res.integral->form == RationalIntegral::Form::PolyRatio);
    CHECK(res.integral->den.deg_x() + res.integral->den.deg_y() >= 1);
    // verified against the flow at sample points
    FirstIntegral fi = *res.integral;
    CHECK(integral_residual(fi, s, 2.0, 1.5) <= 1e-10);
}

TEST_CASE("rational integral: incommensurable centers are undecided") {
    double t = std::sqrt(2.0);
    auto s = sys({Complex(0, 0), Complex(1, 1), Complex(t, t)});
    auto res = rational_integral(s, classify_all(s));
    CHECK(res.status == RationalStatus::CommensurabilityUndecided);
}

TEST_CASE("rational integral: double-root cubic reports the open shape") {
    auto s = sys({Complex(0, 0), Complex(0, 0), Complex(1, 2)});
    auto res = rational_integral(s, classify_all(s));
    CHECK(res.status == RationalStatus::Absent);
    CHECK(res.reason.find("double-root") != std::string::npos);
}

TEST_CASE("no rational form ever has a constant denominator") {
    std::mt19937_64 rng(4096);
    std::uniform_real_distribution<double> u(0.3, 2.0);
    std::vector<HolomorphicSystem> cases = {
        sys({Complex(0, 0), Complex(0, 0)}),
        sys({Complex(0, 0), Complex(0, 0), Complex(0, 0)}),
        sys({Complex(0, 0), Complex(2, 0)}),
        sys({Complex(0, 0), Complex(0, 2)}),
        sys({Complex(0, 0), Complex(1, 1), Complex(2, 2)}),
        sys({Complex(0, 0), Complex(1, 0), Complex(3, 0)}),
    };
    for (int k = 0; k < 20; ++k) {
        double a = u(rng);
        cases.push_back(sys({Complex(0, 0), Complex(a, a), Complex(-2.0 * a, -2.0 * a)}));
    }
    for (const auto& s : cases) {
        auto res = rational_integral(s, classify_all(s));
        if (res.status != RationalStatus::Found) continue;
        if (res.integral->form == RationalIntegral::Form::PolyRatio) {
            CHECK(res.integral->den.deg_x() + res.integral->den.deg_y() >= 1);
        } else {
            bool has_negative = false;
            for (const auto& f : res.integral->circles) has_negative |= f.exponent < 0;
            CHECK(has_negative);
        }
    }
}

TEST_CASE("residual: exact integrals vanish, perturbed exponents do not") {
    auto s16 = sys({Complex(0, 0), Complex(1, 1), Complex(2, 2)});
    auto res = rational_integral(s16, classify_all(s16));
    REQUIRE(res.status == RationalStatus::Found);
    FirstIntegral fi = *res.integral;
    CHECK(integral_residual(fi, s16, 3.0, 0.5) <= 1e-10);

    auto sc = sys({Complex(0, 0), Complex(0, 2)});
    auto rc = rational_integral(sc, classify_all(sc));
    FirstIntegral fc = *rc.integral;
    CHECK(integral_residual(fc, sc, 1.0, 1.0) <= 1e-10);

    DarbouxIntegral bad;
    bad.powers.push_back({{0, 0}, 1.0});
    bad.powers.push_back({{1, 1}, -2.0});
    bad.powers.push_back({{2, 2}, 1.01});
    FirstIntegral fb = bad;
    CHECK(integral_residual(fb, s16, 3.0, 0.5) > 1e-4);

    // finite-difference Lie-derivative oracle agrees about the defect
    auto lie_fd = [&](const FirstIntegral& H, double x, double y) {
        Vec2 f = eval_field(s16, x, y);
        double n = std::hypot(f.x, f.y);
        double d = 1e-6;
        double hp = std::log(std::abs(eval_integral(H, x + d * f.x / n, y + d * f.y / n)));
        double hm = std::log(std::abs(eval_integral(H, x - d * f.x / n, y - d * f.y / n)));
        return std::abs(hp - hm) / (2.0 * d) * n;
    };
    CHECK(lie_fd(fb, 3.0, 0.5) > 1e-3);
    CHECK(lie_fd(fi, 3.0, 0.5) < 1e-3);
}

TEST_CASE("residual raises near singular points") {
    auto s = sys({Complex(0, 0), Complex(0, 2)});
    auto res = rational_integral(s, classify_all(s));
    FirstIntegral fi = *res.integral;
    CHECK_THROWS_AS(integral_residual(fi, s, 1e-9, 0.0), Error);
}

TEST_CASE("evaluation: closed-form values") {
    auto sc = sys({Complex(0, 0), Complex(0, 2)});
    FirstIntegral Hc = *rational_integral(sc, classify_all(sc)).integral;
    CHECK(eval_integral(Hc, 1.0, 1.0) == doctest::Approx(1.0));

    auto sq = sys({Complex(0, 0), Complex(0, 0)});
    FirstIntegral Hq = build_integral(sq);
    CHECK(eval_integral(Hq, 0.0, 1.0) == doctest::Approx(1.0));

    auto s16 = sys({Complex(0, 0), Complex(1, 1), Complex(2, 2)});
    FirstIntegral H16 = *rational_integral(s16, classify_all(s16)).integral;
    CHECK(eval_integral(H16, 0.0, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("residue identity over random simple-root cubics") {
    std::mt19937_64 rng(500);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    int done = 0;
    while (done < 500) {
        Complex z2(u(rng), u(rng)), z3(u(rng), u(rng));
        if (std::abs(z2) < 0.1 || std::abs(z3) < 0.1 || std::abs(z2 - z3) < 0.1) continue;
        HolomorphicSystem s = normalize_from_roots({Complex(0, 0), z2, z3});
        Complex sum(0, 0);
        double scale = 0.0;
        for (Complex r : s.roots_normalized()) {
            Complex inv = Complex(1, 0) / eval_derivative(s, r);
            sum += inv;
            scale = std::max(scale, std::abs(inv));
        }
        CHECK(std::abs(sum) <= 1e-9 * scale);
        ++done;
    }
}

TEST_CASE("conservation along orbits with branch continuation") {
    struct Case {
        HolomorphicSystem s;
        Vec2 start;
    };
    std::vector<Case> cases = {
        {sys({Complex(0, 0), Complex(1, 2)}), {0.4, 0.9}},    // spiral pair, angle factors
        {sys({Complex(0, 0), Complex(0, 0), Complex(1, 1)}), {1.3, 0.9}},  // exp factor
        {sys({Complex(0, 0), Complex(2, 0)}), {1.0, 0.8}},
        {sys({Complex(0, 0), Complex(0, 2)}), {0.5, 0.5}},
    };
    for (const auto& c : cases) {
        FirstIntegral H = build_integral(c.s);
        auto orbit = integrate_orbit(c.s, c.start, 5.0, 1.0);
        REQUIRE(orbit.size() > 10);
        CHECK(max_drift(H, orbit) <= 1e-6);
    }
}

TEST_CASE("serialization is deterministic and carries the factor structure") {
    auto s = sys({Complex(0, 0), Complex(1, 1), Complex(2, 2)});
    auto H = build_integral(s);
    std::string a = integral_to_json(H);
    std::string b = integral_to_json(build_integral(s));
    CHECK(a == b);
    CHECK(a.find("\"type\":\"darboux_product\"") != std::string::npos);

    auto res = rational_integral(s, classify_all(s));
    std::string r = rational_result_to_json(res);
    CHECK(r.find("\"status\":\"found\"") != std::string::npos);
    CHECK(r.find("circle_product") != std::string::npos);
}
