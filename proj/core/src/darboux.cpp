#include "crc/darboux.hpp"

#include "jsonw.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace crc {

namespace {

// Distinct roots ordered with the origin anchor first, then lexicographic.
std::vector<RootEntry> ordered_distinct_roots(const HolomorphicSystem& system,
                                              const Tolerances& tol) {
    RootSet rs = roots(system, tol);
    std::stable_sort(rs.entries.begin(), rs.entries.end(),
                     [](const RootEntry& a, const RootEntry& b) {
                         bool az = a.location == Complex(0.0, 0.0);
                         bool bz = b.location == Complex(0.0, 0.0);
                         if (az != bz) return az;
                         if (a.location.real() != b.location.real())
                             return a.location.real() < b.location.real();
                         return a.location.imag() < b.location.imag();
                     });
    return rs.entries;
}

CPoly divide_out(const CPoly& poly, Complex root, int times) {
    CPoly q = poly;
    for (int k = 0; k < times; ++k) q = cpoly_deflate(q, root);
    return q;
}

} // namespace

std::vector<Invariant> build_invariants(const HolomorphicSystem& system, const Tolerances& tol) {
    const CPoly& coeffs = system.coefficients();
    std::vector<Invariant> out;
    int max_mult = 1;
    for (const RootEntry& e : ordered_distinct_roots(system, tol)) {
        Invariant inv;
        inv.kind = Invariant::Kind::Linear;
        inv.root = e.location;
        inv.cofactor = divide_out(coeffs, e.location, 1);
        out.push_back(std::move(inv));
        max_mult = std::max(max_mult, e.multiplicity);
    }
    if (max_mult >= 2) {
        // The multiple root sits at the origin by normalization.
        Invariant inv;
        inv.kind = Invariant::Kind::Exponential;
        inv.order = max_mult - 1;
        inv.cofactor = divide_out(coeffs, Complex(0.0, 0.0), max_mult);
        for (Complex& c : inv.cofactor) c *= -double(max_mult - 1);
        out.push_back(std::move(inv));
    }
    return out;
}

namespace {

std::vector<Complex> canonical_exponents(const HolomorphicSystem& system,
                                         const std::vector<Invariant>& invariants,
                                         const Tolerances& tol) {
    const int n = system.degree();
    auto distinct = ordered_distinct_roots(system, tol);
    const Complex iu(0.0, 1.0);

    std::vector<Complex> lam(invariants.size());
    if (int(distinct.size()) == n) {
        if (n == 2) {
            Complex z2 = distinct[1].location;
            lam[0] = iu / z2;
            lam[1] = -iu / z2;
        } else {
            for (size_t k = 0; k < distinct.size(); ++k)
                lam[k] = iu / eval_derivative(system, distinct[k].location);
        }
    } else if (distinct.size() == 2) {
        // double root at 0, simple root z2
        Complex z2 = distinct[1].location;
        Complex z2c = std::conj(z2);
        lam[0] = z2c * z2c * iu;
        lam[1] = -z2c * z2c * iu;
        lam[2] = -z2c * std::norm(z2) * iu;
    } else {
        // single degenerate point: invariants are (z, exp(1/z^{n-1}))
        lam[0] = Complex(0.0, 0.0);
        lam[1] = iu / double(2 * (n - 1));
    }
    return lam;
}

} // namespace

double exponent_residual(const std::vector<Invariant>& invariants,
                         const std::vector<Complex>& lambdas) {
    size_t deg = 0;
    for (const Invariant& inv : invariants) deg = std::max(deg, inv.cofactor.size());
    std::vector<Complex> sum(deg, Complex(0.0, 0.0));
    for (size_t k = 0; k < invariants.size(); ++k)
        for (size_t j = 0; j < invariants[k].cofactor.size(); ++j)
            sum[j] += lambdas[k] * invariants[k].cofactor[j];
    double worst = std::abs(2.0 * sum[0].real());  // constant term meets its conjugate
    for (size_t j = 1; j < sum.size(); ++j) worst = std::max(worst, std::abs(sum[j]));
    return worst;
}

std::vector<Complex> solve_exponents(const HolomorphicSystem& system,
                                     const std::vector<Invariant>& invariants,
                                     const Tolerances& tol) {
    const int n = system.degree();
    const int K = int(invariants.size());

    // Real parameterization: unknowns (Re l_1, Im l_1, ..., Re l_K, Im l_K).
    // Rows: Re/Im of the z^j coefficient for j = 1..n-1, plus the real part of
    // the constant (the conjugate block contributes the same constraints).
    std::vector<std::vector<double>> a;
    for (int j = 1; j < n; ++j) {
        std::vector<double> re_row(2 * K, 0.0), im_row(2 * K, 0.0);
        for (int k = 0; k < K; ++k) {
            Complex g = (j < int(invariants[k].cofactor.size())) ? invariants[k].cofactor[j]
                                                                 : Complex(0.0, 0.0);
            re_row[2 * k] = g.real();
            re_row[2 * k + 1] = -g.imag();
            im_row[2 * k] = g.imag();
            im_row[2 * k + 1] = g.real();
        }
        a.push_back(std::move(re_row));
        a.push_back(std::move(im_row));
    }
    std::vector<double> c_row(2 * K, 0.0);
    for (int k = 0; k < K; ++k) {
        Complex g = invariants[k].cofactor.empty() ? Complex(0.0, 0.0) : invariants[k].cofactor[0];
        c_row[2 * k] = g.real();
        c_row[2 * k + 1] = -g.imag();
    }
    a.push_back(std::move(c_row));

    std::vector<double> w = null_vector(a);
    if (w.empty())
        raise(ErrorCode::NoNontrivialSolution, "cofactor system has trivial null space only");

    std::vector<Complex> canonical = canonical_exponents(system, invariants, tol);

    // The null space is one-dimensional here; the numeric vector must be a
    // real multiple of the closed form.
    double dot = 0.0, nw = 0.0, nc = 0.0;
    for (int k = 0; k < K; ++k) {
        dot += w[2 * k] * canonical[k].real() + w[2 * k + 1] * canonical[k].imag();
        nw += w[2 * k] * w[2 * k] + w[2 * k + 1] * w[2 * k + 1];
        nc += std::norm(canonical[k]);
    }
    double align = std::abs(dot) / std::sqrt(nw * nc);
    if (align < 1.0 - 1e-6)
        raise(ErrorCode::NoNontrivialSolution,
              "null space does not match the structural closed form");
    return canonical;
}

namespace {

Poly2 circle_poly(Vec2 c) {
    Poly2 p(2, 2);
    p.coef(2, 0) = 1.0;
    p.coef(0, 2) = 1.0;
    p.coef(1, 0) = -2.0 * c.x;
    p.coef(0, 1) = -2.0 * c.y;
    p.coef(0, 0) = c.x * c.x + c.y * c.y;
    return p;
}

RationalIntegral dipole_integral(int degree) {
    RationalIntegral H;
    H.form = RationalIntegral::Form::PolyRatio;
    Poly2 r2 = circle_poly({0.0, 0.0});
    if (degree == 2) {
        H.num = Poly2::monomial(0, 1, 1.0);  // y
        H.den = r2;
    } else {
        H.num = Poly2::monomial(1, 1, 1.0);  // x y
        H.den = r2 * r2;
    }
    return H;
}

} // namespace

FirstIntegral build_integral(const HolomorphicSystem& system, const Tolerances& tol) {
    auto distinct = ordered_distinct_roots(system, tol);
    const int n = system.degree();

    if (distinct.size() == 1) return dipole_integral(n);

    DarbouxIntegral H;
    auto add_pair = [&](Vec2 center, double rho, double mu) {
        if (rho != 0.0) H.powers.push_back({center, rho});
        if (mu != 0.0) H.angles.push_back({center, mu});
    };

    if (n == 2) {
        // exponents (i z2~, -i z2~): rho = +-b, mu = -+2a
        Complex z2 = distinct[1].location;
        double a = z2.real(), b = z2.imag();
        add_pair({0.0, 0.0}, b, -2.0 * a);
        add_pair({a, b}, -b, 2.0 * a);
        return H;
    }

    if (distinct.size() == 3) {
        for (const RootEntry& e : distinct) {
            Complex lam = Complex(0.0, 1.0) / eval_derivative(system, e.location);
            add_pair(to_vec2(e.location), lam.real(), -2.0 * lam.imag());
        }
        return H;
    }

    // double root at the origin plus a simple root z2 = a + bi
    Complex z2 = distinct[1].location;
    double a = z2.real(), b = z2.imag();
    add_pair({0.0, 0.0}, a * b, -(a * a - b * b));
    add_pair({a, b}, -a * b, a * a - b * b);
    ExpFactor ef;
    ef.num = Poly2(1, 1);
    ef.num.coef(1, 0) = -(a * a + b * b) * b;
    ef.num.coef(0, 1) = -(a * a + b * b) * a;
    ef.den = circle_poly({0.0, 0.0});
    H.exps.push_back(std::move(ef));
    return H;
}

namespace {

// Smallest integer vector proportional to d (nonzero entries), denominators
// bounded by max_den. Empty on failure.
std::vector<long long> integerize(const std::vector<double>& d, int max_den) {
    const size_t k = d.size();
    std::vector<long long> p(k), q(k);
    for (size_t j = 0; j < k; ++j) {
        double ratio = d[j] / d[0];
        if (!rational_approx(ratio, max_den, p[j], q[j])) return {};
    }
    long long l = 1;
    for (size_t j = 0; j < k; ++j) l = std::lcm(l, q[j]);
    std::vector<long long> m(k);
    for (size_t j = 0; j < k; ++j) m[j] = (l / q[j]) * p[j];
    long long g = 0;
    for (long long v : m) g = std::gcd(g, std::llabs(v));
    if (g == 0) return {};
    for (long long& v : m) v /= g;
    if (m[0] < 0)
        for (long long& v : m) v = -v;
    for (size_t j = 0; j < k; ++j) {
        if (m[j] == 0) return {};
        if (std::abs(double(m[j]) / double(m[0]) - d[j] / d[0]) >
            1e-9 * std::max(1.0, std::abs(d[j] / d[0])))
            return {};
    }
    return m;
}

Poly2 conj_linear_re(Complex r) {
    Poly2 p(1, 0);
    p.coef(1, 0) = 1.0;
    p.coef(0, 0) = -r.real();
    return p;
}

Poly2 conj_linear_im(Complex r) {
    Poly2 p(0, 1);
    p.coef(0, 1) = -1.0;
    p.coef(0, 0) = r.imag();
    return p;
}

// Normalize so the highest monomial (total degree, then x-degree) has
// coefficient exactly 1. Num and den scale independently; that changes the
// integral by a constant factor only.
void normalize_poly_ratio(RationalIntegral& H) {
    auto lead = [](const Poly2& p) {
        auto ms = p.monomials(1e-12 * std::max(1.0, p.max_abs_coef()));
        return ms.empty() ? 1.0 : std::get<2>(ms.back());
    };
    H.num.trim(1e-12 * std::max(1.0, H.num.max_abs_coef()));
    H.den.trim(1e-12 * std::max(1.0, H.den.max_abs_coef()));
    H.num = H.num.scaled(1.0 / lead(H.num));
    H.den = H.den.scaled(1.0 / lead(H.den));
}

bool verify_rational(const RationalIntegral& H, const HolomorphicSystem& system,
                     const Tolerances& tol) {
    FirstIntegral fi = H;
    const double radius = 1.7 * system.root_scale() + 0.5;
    int checked = 0;
    for (int k = 0; k < 48 && checked < 24; ++k) {
        double t = 2.0 * M_PI * (k + 0.37) / 48.0;
        double x = radius * std::cos(t), y = radius * std::sin(t);
        try {
            if (integral_residual(fi, system, x, y, tol) > 1e-8) return false;
            ++checked;
        } catch (const Error&) {
            // singular sample; skip
        }
    }
    return checked >= 12;
}

} // namespace

RationalIntegralResult rational_integral(const HolomorphicSystem& system,
                                         const std::vector<EquilibriumReport>& reports,
                                         const Tolerances& tol) {
    RationalIntegralResult result;
    const int n = system.degree();
    auto distinct = ordered_distinct_roots(system, tol);

    auto emit = [&](RationalIntegral H, bool exact_form) {
        if (!verify_rational(H, system, tol)) {
            if (exact_form)
                raise(ErrorCode::ConfigurationInconsistent,
                      "closed-form rational integral failed the residual check");
            result.status = RationalStatus::CommensurabilityUndecided;
            result.reason = "candidate exponents failed the residual verification";
            return;
        }
        result.status = RationalStatus::Found;
        result.integral = std::move(H);
    };

    if (distinct.size() == 1) {
        emit(dipole_integral(n), true);
        return result;
    }
    if (n == 3 && distinct.size() == 2) {
        result.status = RationalStatus::Absent;
        result.reason =
            "double-root cubic: no rational first integral is known for this shape "
            "(conjectured not to exist)";
        return result;
    }

    // Simple roots from here on. Pull the classified kind for each root.
    auto kind_at = [&](Complex loc) -> const EquilibriumReport* {
        for (const auto& r : reports)
            if (std::abs(r.location - loc) <= 1e-9 * system.root_scale()) return &r;
        return nullptr;
    };
    std::vector<const EquilibriumReport*> at;
    for (const auto& e : distinct) {
        const EquilibriumReport* r = kind_at(e.location);
        if (!r) raise(ErrorCode::BadInput, "reports do not cover all roots");
        at.push_back(r);
    }

    bool all_centers = true, all_nodes = true;
    for (const auto* r : at) {
        all_centers = all_centers && r->kind.type == EquilibriumType::IsochronousCenter;
        all_nodes = all_nodes && r->kind.type == EquilibriumType::DicriticalNode;
    }

    if (all_centers) {
        std::vector<double> d;
        for (const auto* r : at) d.push_back(1.0 / r->kind.omega);
        std::vector<long long> m = integerize(d, tol.max_denominator);
        if (m.empty()) {
            result.status = RationalStatus::CommensurabilityUndecided;
            result.reason = "no integer frequency ratio with denominator <= " +
                            std::to_string(tol.max_denominator);
            return result;
        }
        long long sum = std::accumulate(m.begin(), m.end(), 0LL);
        if (sum != 0) {
            result.status = RationalStatus::CommensurabilityUndecided;
            result.reason = "integer exponents violate the zero-sum constraint";
            return result;
        }
        RationalIntegral H;
        H.form = RationalIntegral::Form::CircleProduct;
        for (size_t j = 0; j < distinct.size(); ++j)
            H.circles.push_back({to_vec2(distinct[j].location), m[j]});
        emit(std::move(H), false);
        return result;
    }

    if (all_nodes) {
        std::vector<double> d;
        for (const auto* r : at) d.push_back(1.0 / r->lambda.real());
        std::vector<long long> m = integerize(d, tol.max_denominator);
        if (m.empty()) {
            result.status = RationalStatus::CommensurabilityUndecided;
            result.reason = "no integer eigenvalue ratio with denominator <= " +
                            std::to_string(tol.max_denominator);
            return result;
        }
        // H = Im W / Re W with W = prod over roots of (z - r)^{m} for m > 0
        // and (conj z - conj r)^{-m} for m < 0; the common positive modulus
        // factors cancel in the ratio.
        CPoly2 w = CPoly2::constant(Complex(1.0, 0.0));
        for (size_t j = 0; j < distinct.size(); ++j) {
            Complex r = distinct[j].location;
            CPoly2 f;
            if (m[j] > 0)
                f = CPoly2::linear_z(r);
            else
                f = CPoly2{conj_linear_re(r), conj_linear_im(r)};
            for (long long t = 0; t < std::llabs(m[j]); ++t) w = w * f;
        }
        RationalIntegral H;
        H.form = RationalIntegral::Form::PolyRatio;
        H.num = w.im;
        H.den = w.re;
        normalize_poly_ratio(H);
        if (H.den.deg_x() == 0 && H.den.deg_y() == 0)
            raise(ErrorCode::ConfigurationInconsistent,
                  "node integral degenerated to a polynomial");
        emit(std::move(H), false);
        return result;
    }

    result.status = RationalStatus::Absent;
    result.reason = "foci present: trajectories spiral, no rational first integral";
    return result;
}

namespace {

constexpr double kTiny = 1e-280;

struct TermAccumulator {
    double sum = 0.0;
    double mag = 0.0;
    void add(double term, double magnitude) {
        sum += term;
        mag = std::max(mag, std::abs(magnitude));
    }
};

void require_regular(const DarbouxIntegral& H, double x, double y, const Tolerances& tol) {
    auto near = [&](Vec2 c) {
        return std::hypot(x - c.x, y - c.y) <= tol.singular;
    };
    for (const auto& f : H.powers)
        if (near(f.center)) raise(ErrorCode::SingularPoint, "power factor center");
    for (const auto& f : H.angles)
        if (near(f.center)) raise(ErrorCode::SingularPoint, "angle factor center");
    for (const auto& f : H.exps)
        if (std::abs(f.den.eval(x, y)) <=
            tol.singular * tol.singular * std::max(1.0, f.den.max_abs_coef()))
            raise(ErrorCode::SingularPoint, "exponential factor denominator");
}

void require_regular(const RationalIntegral& H, double x, double y, const Tolerances& tol) {
    if (H.form == RationalIntegral::Form::CircleProduct) {
        for (const auto& f : H.circles)
            if (std::hypot(x - f.center.x, y - f.center.y) <= tol.singular)
                raise(ErrorCode::SingularPoint, "circle factor center");
    } else {
        if (std::abs(H.den.eval(x, y)) <=
            tol.singular * tol.singular * std::max(1.0, H.den.max_abs_coef()))
            raise(ErrorCode::SingularPoint, "denominator zero set");
    }
}

} // namespace

double integral_residual(const FirstIntegral& integral, const HolomorphicSystem& system,
                         double x, double y, const Tolerances& tol) {
    Vec2 f = eval_field(system, x, y);
    const double P = f.x, Q = f.y;
    TermAccumulator acc;

    auto add_power_term = [&](Vec2 c, double rho) {
        double dx = x - c.x, dy = y - c.y;
        double r2 = dx * dx + dy * dy;
        acc.add(rho * 2.0 * (P * dx + Q * dy) / r2,
                std::abs(rho) * 2.0 * (std::abs(P * dx) + std::abs(Q * dy)) / r2);
    };
    auto add_angle_term = [&](Vec2 c, double mu) {
        double dx = x - c.x, dy = y - c.y;
        double r2 = dx * dx + dy * dy;
        acc.add(mu * (Q * dx - P * dy) / r2,
                std::abs(mu) * (std::abs(Q * dx) + std::abs(P * dy)) / r2);
    };

    if (const auto* H = std::get_if<DarbouxIntegral>(&integral)) {
        require_regular(*H, x, y, tol);
        for (const auto& fac : H->powers) add_power_term(fac.center, fac.exponent);
        for (const auto& fac : H->angles) add_angle_term(fac.center, fac.coefficient);
        for (const auto& fac : H->exps) {
            // d(num/den) = (grad num * den - num * grad den) / den^2
            double nv = fac.num.eval(x, y), dv = fac.den.eval(x, y);
            double nx = fac.num.dx().eval(x, y), ny = fac.num.dy().eval(x, y);
            double dxv = fac.den.dx().eval(x, y), dyv = fac.den.dy().eval(x, y);
            double t1 = (P * nx + Q * ny) * dv;
            double t2 = nv * (P * dxv + Q * dyv);
            double d2 = dv * dv;
            acc.add((t1 - t2) / d2,
                    ((std::abs(P * nx) + std::abs(Q * ny)) * std::abs(dv) +
                     std::abs(nv) * (std::abs(P * dxv) + std::abs(Q * dyv))) /
                        d2);
        }
        return std::abs(acc.sum) / std::max(acc.mag, kTiny);
    }

    const auto& H = std::get<RationalIntegral>(integral);
    require_regular(H, x, y, tol);
    if (H.form == RationalIntegral::Form::CircleProduct) {
        for (const auto& fac : H.circles) add_power_term(fac.center, double(fac.exponent));
        return std::abs(acc.sum) / std::max(acc.mag, kTiny);
    }
    double nv = H.num.eval(x, y), dv = H.den.eval(x, y);
    double nx = H.num.dx().eval(x, y), ny = H.num.dy().eval(x, y);
    double dxv = H.den.dx().eval(x, y), dyv = H.den.dy().eval(x, y);
    double t1 = (P * nx + Q * ny) * dv;
    double t2 = nv * (P * dxv + Q * dyv);
    double mag = (std::abs(P * nx) + std::abs(Q * ny)) * std::abs(dv) +
                 std::abs(nv) * (std::abs(P * dxv) + std::abs(Q * dyv));
    return std::abs(t1 - t2) / std::max(mag, kTiny);
}

double eval_log_integral(const DarbouxIntegral& H, double x, double y, const Tolerances& tol) {
    require_regular(H, x, y, tol);
    double acc = 0.0;
    for (const auto& f : H.powers) {
        double dx = x - f.center.x, dy = y - f.center.y;
        acc += f.exponent * std::log(dx * dx + dy * dy);
    }
    for (const auto& f : H.angles)
        acc += f.coefficient * std::atan2(y - f.center.y, x - f.center.x);
    for (const auto& f : H.exps) acc += f.num.eval(x, y) / f.den.eval(x, y);
    return acc;
}

double eval_integral(const FirstIntegral& integral, double x, double y, const Tolerances& tol) {
    if (const auto* H = std::get_if<DarbouxIntegral>(&integral))
        return std::exp(eval_log_integral(*H, x, y, tol));
    const auto& H = std::get<RationalIntegral>(integral);
    require_regular(H, x, y, tol);
    if (H.form == RationalIntegral::Form::CircleProduct) {
        double v = 1.0;
        for (const auto& f : H.circles) {
            double dx = x - f.center.x, dy = y - f.center.y;
            v *= std::pow(dx * dx + dy * dy, double(f.exponent));
        }
        return v;
    }
    return H.num.eval(x, y) / H.den.eval(x, y);
}

ContinuedEvaluator::ContinuedEvaluator(const FirstIntegral& integral, Vec2 start,
                                       const Tolerances& tol)
    : integral_(integral), tol_(tol) {
    rational_ = std::holds_alternative<RationalIntegral>(integral_);
    if (!rational_) {
        const auto& H = std::get<DarbouxIntegral>(integral_);
        for (const auto& f : H.angles) {
            double th = std::atan2(start.y - f.center.y, start.x - f.center.x);
            raw_.push_back(th);
            cont_.push_back(th);
        }
    }
}

double ContinuedEvaluator::advance_log(Vec2 p) {
    if (rational_) return std::log(std::abs(advance(p)));
    const auto& H = std::get<DarbouxIntegral>(integral_);
    require_regular(H, p.x, p.y, tol_);
    double acc = 0.0;
    for (const auto& f : H.powers) {
        double dx = p.x - f.center.x, dy = p.y - f.center.y;
        acc += f.exponent * std::log(dx * dx + dy * dy);
    }
    for (size_t k = 0; k < H.angles.size(); ++k) {
        const auto& f = H.angles[k];
        double th = std::atan2(p.y - f.center.y, p.x - f.center.x);
        double delta = th - raw_[k];
        if (delta > M_PI) delta -= 2.0 * M_PI;
        if (delta <= -M_PI) delta += 2.0 * M_PI;
        raw_[k] = th;
        cont_[k] += delta;
        acc += f.coefficient * cont_[k];
    }
    for (const auto& f : H.exps) acc += f.num.eval(p.x, p.y) / f.den.eval(p.x, p.y);
    return acc;
}

double ContinuedEvaluator::advance(Vec2 p) {
    if (rational_) return eval_integral(integral_, p.x, p.y, tol_);
    return std::exp(advance_log(p));
}

double eval_integral(const FirstIntegral& integral, double x, double y,
                     const std::vector<Vec2>& branch_path, const Tolerances& tol) {
    if (branch_path.empty() || std::holds_alternative<RationalIntegral>(integral))
        return eval_integral(integral, x, y, tol);
    ContinuedEvaluator ce(integral, branch_path.front(), tol);
    double v = 0.0;
    for (const Vec2& p : branch_path) v = ce.advance(p);
    v = ce.advance({x, y});
    return v;
}

namespace {

std::string vec2_json(Vec2 v) {
    return jsonw::Obj().real("x", v.x).real("y", v.y).str();
}

std::string poly2_json(const Poly2& p) {
    jsonw::Arr arr;
    for (const auto& [i, j, c] : p.monomials())
        arr.push(jsonw::Arr()
                     .push(jsonw::num(i))
                     .push(jsonw::num(j))
                     .push(jsonw::num(c))
                     .str());
    return arr.str();
}

std::string darboux_json(const DarbouxIntegral& H) {
    jsonw::Arr factors;
    for (const auto& f : H.powers)
        factors.push(jsonw::Obj()
                         .str("type", "power")
                         .field("center", vec2_json(f.center))
                         .real("exponent", f.exponent)
                         .str());
    for (const auto& f : H.angles)
        factors.push(jsonw::Obj()
                         .str("type", "angle")
                         .field("center", vec2_json(f.center))
                         .real("coefficient", f.coefficient)
                         .str());
    for (const auto& f : H.exps)
        factors.push(jsonw::Obj()
                         .str("type", "exp")
                         .field("numerator", poly2_json(f.num))
                         .field("denominator", poly2_json(f.den))
                         .str());
    return jsonw::Obj().str("type", "darboux_product").field("factors", factors.str()).str();
}

std::string rational_json(const RationalIntegral& H) {
    if (H.form == RationalIntegral::Form::CircleProduct) {
        jsonw::Arr factors;
        for (const auto& f : H.circles)
            factors.push(jsonw::Obj()
                             .field("center", vec2_json(f.center))
                             .integer("exponent", f.exponent)
                             .str());
        return jsonw::Obj().str("type", "circle_product").field("factors", factors.str()).str();
    }
    return jsonw::Obj()
        .str("type", "poly_ratio")
        .field("numerator", poly2_json(H.num))
        .field("denominator", poly2_json(H.den))
        .str();
}

} // namespace

std::string integral_to_json(const FirstIntegral& integral) {
    if (const auto* H = std::get_if<DarbouxIntegral>(&integral)) return darboux_json(*H);
    return rational_json(std::get<RationalIntegral>(integral));
}

std::string rational_result_to_json(const RationalIntegralResult& result) {
    jsonw::Obj obj;
    switch (result.status) {
        case RationalStatus::Found: obj.str("status", "found"); break;
        case RationalStatus::Absent: obj.str("status", "absent"); break;
        case RationalStatus::CommensurabilityUndecided:
            obj.str("status", "commensurability_undecided");
            break;
    }
    if (result.integral) obj.field("integral", rational_json(*result.integral));
    if (!result.reason.empty()) obj.str("reason", result.reason);
    return obj.str();
}

} // namespace crc
