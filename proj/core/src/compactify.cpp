#include "crc/compactify.hpp"

#include <cmath>

namespace crc {

Vec2 to_disk(double x, double y) {
    double d = 1.0 / std::sqrt(1.0 + x * x + y * y);
    return {x * d, y * d};
}

Vec2 from_disk(double X, double Y) {
    double r2 = X * X + Y * Y;
    if (r2 >= 1.0) raise(ErrorCode::OutsideDisk, "point not inside the open unit disk");
    double d = 1.0 / std::sqrt(1.0 - r2);
    return {X * d, Y * d};
}

namespace {

Complex chart_rotation(ChartId chart) {
    switch (chart) {
        case ChartId::East: return {1.0, 0.0};
        case ChartId::North: return {0.0, 1.0};
        case ChartId::West: return {-1.0, 0.0};
        case ChartId::South: return {0.0, -1.0};
        case ChartId::Plane: break;
    }
    raise(ErrorCode::BadInput, "equator chart expected");
}

} // namespace

ChartAtlas::ChartAtlas(const HolomorphicSystem& system) : n_(system.degree()) {
    const CPoly& c = system.coefficients();
    for (int chart = 0; chart < 4; ++chart) {
        Complex rot = chart_rotation(ChartId(chart));
        CPoly g(c.size());
        Complex phase = std::conj(rot);  // e^{i(k-1)phi} at k = 0
        for (size_t k = 0; k < c.size(); ++k) {
            g[k] = c[k] * phase;
            phase *= rot;
        }
        gamma_[chart] = std::move(g);
    }
}

Vec2 ChartAtlas::field(ChartId chart, double u, double v) const {
    const CPoly& g = gamma_[int(chart)];
    const Complex one_iu(1.0, u);
    double vp[4] = {1.0, v, v * v, v * v * v};
    Complex w(0.0, 0.0);
    Complex up(1.0, 0.0);  // (1+iu)^k
    for (int k = 0; k <= n_; ++k) {
        w += g[k] * up * vp[n_ - k];
        up *= one_iu;
    }
    Complex t = Complex(1.0, -u) * w;
    return {t.imag(), -v * w.real()};
}

Complex ChartAtlas::chart_to_plane(ChartId chart, double u, double v) const {
    return chart_rotation(chart) * Complex(1.0, u) / v;
}

ChartPoint ChartAtlas::plane_to_chart(Complex z, ChartId chart) const {
    Complex w = std::conj(chart_rotation(chart)) * z;
    if (w.real() <= 0.0) raise(ErrorCode::ChartDomainExceeded, "point behind the chart plane");
    return {chart, w.imag() / w.real(), 1.0 / w.real()};
}

ChartId ChartAtlas::best_chart(Complex z) const {
    double best = -1.0;
    ChartId out = ChartId::East;
    for (int c = 0; c < 4; ++c) {
        double re = (std::conj(chart_rotation(ChartId(c))) * z).real();
        if (re > best) {
            best = re;
            out = ChartId(c);
        }
    }
    return out;
}

ChartPoint ChartAtlas::chart_to_chart(ChartId from, double u, double v, ChartId to) const {
    // w_to = e^{i(phi_from - phi_to)} (1 + iu) / v; stays well scaled near the
    // equator (no excursion through huge plane coordinates).
    Complex rel = chart_rotation(from) * std::conj(chart_rotation(to));
    Complex w_num = rel * Complex(1.0, u);
    if (w_num.real() <= 0.0) raise(ErrorCode::ChartDomainExceeded, "charts do not overlap here");
    return {to, w_num.imag() / w_num.real(), v / w_num.real()};
}

ChartAtlas::LocalSaddle ChartAtlas::saddle_local(ChartId chart) const {
    const CPoly& g = gamma_[int(chart)];

    // Bivariate Taylor of W at (0, 0): W_{ij} u^i v^j with j = n - k.
    // (1+iu)^k contributes C(k, i) i^i u^i.
    auto wc = [&](int i, int j) -> Complex {
        int k = n_ - j;
        if (k < 0 || k > n_ || i > k) return {0.0, 0.0};
        double binom = 1.0;
        for (int t = 0; t < i; ++t) binom = binom * double(k - t) / double(t + 1);
        Complex ipow(1.0, 0.0);
        for (int t = 0; t < i; ++t) ipow *= Complex(0.0, 1.0);
        return g[k] * binom * ipow;
    };
    // f = Im[(1 - iu) W]; g_fld = -v Re W.
    auto fc = [&](int i, int j) {
        Complex vij = wc(i, j);
        if (i >= 1) vij -= Complex(0.0, 1.0) * wc(i - 1, j);
        return vij.imag();
    };
    auto gc = [&](int i, int j) { return j >= 1 ? -wc(i, j - 1).real() : 0.0; };

    const double f10 = fc(1, 0), f01 = fc(0, 1), f20 = fc(2, 0), f11 = fc(1, 1),
                 f02 = fc(0, 2), f30 = fc(3, 0), f21 = fc(2, 1), f12 = fc(1, 2),
                 f03 = fc(0, 3);
    const double g01 = gc(0, 1), g11 = gc(1, 1), g02 = gc(0, 2), g21 = gc(2, 1),
                 g12 = gc(1, 2), g03 = gc(0, 3);

    LocalSaddle s;
    s.mu_u = f10;
    s.mu_v = g01;
    s.c1 = f01 / (g01 - f10);
    s.c2 = (s.c1 * s.c1 * g11 + s.c1 * g02 - f20 * s.c1 * s.c1 - f11 * s.c1 - f02) /
           (f10 - 2.0 * g01);
    s.c3 = (s.c1 * (g11 * s.c2 + g21 * s.c1 * s.c1 + g12 * s.c1 + g03) +
            2.0 * s.c2 * (g11 * s.c1 + g02) - 2.0 * f20 * s.c1 * s.c2 - f11 * s.c2 -
            f30 * s.c1 * s.c1 * s.c1 - f21 * s.c1 * s.c1 - f12 * s.c1 - f03) /
           (f10 - 3.0 * g01);
    return s;
}

std::vector<EquatorSaddle> equator_saddles(const HolomorphicSystem& system,
                                           const Tolerances& tol) {
    (void)tol;
    ChartAtlas atlas(system);
    const int n = system.degree();
    std::vector<EquatorSaddle> out;
    for (int j = 0; j < 2 * (n - 1); ++j) {
        EquatorSaddle s;
        s.index = j;
        s.theta = j * M_PI / (n - 1);
        s.chart = ChartId(2 * j / (n - 1));
        auto local = atlas.saddle_local(s.chart);
        s.mu_u = local.mu_u;
        s.mu_v = local.mu_v;
        s.inward_unstable = local.mu_v > 0.0;
        out.push_back(s);
    }
    return out;
}

Vec2 chart_field(const HolomorphicSystem& system, ChartId chart, double u, double v,
                 const Tolerances& tol) {
    if (chart == ChartId::Plane) return eval_field(system, u, v);
    if (v < 0.0 || v > tol.chart_vmax)
        raise(ErrorCode::ChartDomainExceeded,
              "v outside [0, " + std::to_string(tol.chart_vmax) + "]");
    return ChartAtlas(system).field(chart, u, v);
}

} // namespace crc
