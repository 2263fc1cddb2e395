#pragma once

#include <array>
#include <cmath>
#include <functional>

namespace crc {

// Dormand-Prince 5(4) for 2-dimensional states; enough for every flow in
// this project (plane field, chart fields, section refinement).
using State2 = std::array<double, 2>;
using Rhs2 = std::function<State2(double, const State2&)>;

struct RkOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_min = 1e-14;
    double h_max = 1.0;
};

struct RkStep {
    bool accepted = false;
    State2 y{};
    double error = 0.0;
    double h_next = 0.0;
};

namespace dopri5 {

inline std::array<State2, 7> stages(const Rhs2& f, double t, const State2& y, double h) {
    static constexpr double c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    static constexpr double a[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
    };
    std::array<State2, 7> k;
    k[0] = f(t, y);
    for (int s = 1; s < 7; ++s) {
        State2 ys = y;
        for (int j = 0; j < s; ++j) {
            ys[0] += h * a[s][j] * k[j][0];
            ys[1] += h * a[s][j] * k[j][1];
        }
        k[s] = f(t + c[s] * h, ys);
    }
    return k;
}

inline State2 combine(const State2& y, const std::array<State2, 7>& k, double h) {
    static constexpr double b[7] = {35.0 / 384,    0.0,        500.0 / 1113, 125.0 / 192,
                                    -2187.0 / 6784, 11.0 / 84, 0.0};
    State2 out = y;
    for (int s = 0; s < 7; ++s) {
        out[0] += h * b[s] * k[s][0];
        out[1] += h * b[s] * k[s][1];
    }
    return out;
}

// One controlled step attempt. `h` may be negative (backward time).
inline RkStep step(const Rhs2& f, double t, const State2& y, double h, const RkOptions& opt) {
    static constexpr double e[7] = {71.0 / 57600,      0.0,        -71.0 / 16695,
                                    71.0 / 1920,       -17253.0 / 339200,
                                    22.0 / 525,        -1.0 / 40};
    auto k = stages(f, t, y, h);
    State2 ynew = combine(y, k, h);

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
        double ei = 0.0;
        for (int s = 0; s < 7; ++s) ei += e[s] * k[s][i];
        ei *= h;
        double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / 2.0);

    RkStep out;
    out.error = err;
    out.accepted = err <= 1.0;
    double factor = 0.9 * std::pow(std::max(err, 1e-16), -0.2);
    factor = std::min(5.0, std::max(0.2, factor));
    double hn = h * factor;
    double mag = std::min(std::max(std::abs(hn), opt.h_min), opt.h_max);
    out.h_next = std::copysign(mag, h);
    out.y = out.accepted ? ynew : y;
    return out;
}

inline State2 fixed_step(const Rhs2& f, double t, const State2& y, double h) {
    return combine(y, stages(f, t, y, h), h);
}

} // namespace dopri5
} // namespace crc
