#include "crc/system.hpp"

#include <algorithm>
#include <cmath>

namespace crc {

namespace {

struct Cluster {
    Complex center;
    int count = 0;
};

std::vector<Cluster> cluster_roots(std::vector<Complex> raw, double rel_tol) {
    double scale = 1.0;
    for (Complex r : raw) scale = std::max(scale, std::abs(r));
    const double tol = rel_tol * scale;

    std::sort(raw.begin(), raw.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    std::vector<Cluster> clusters;
    for (Complex r : raw) {
        bool merged = false;
        for (Cluster& c : clusters) {
            if (std::abs(r - c.center) <= tol) {
                c.center = (c.center * double(c.count) + r) / double(c.count + 1);
                c.count += 1;
                merged = true;
                break;
            }
        }
        if (!merged) clusters.push_back({r, 1});
    }
    return clusters;
}

bool lex_less(Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

HolomorphicSystem normalize_common(Complex leading, const std::vector<Complex>& raw_roots,
                                   const Tolerances& tol) {
    const int n = int(raw_roots.size());
    auto clusters = cluster_roots(raw_roots, tol.root_cluster);

    // Anchor: highest multiplicity; prefer an exact zero among ties (keeps
    // already-normalized input fixed), else lexicographic minimum.
    int anchor = 0;
    for (size_t i = 1; i < clusters.size(); ++i) {
        const Cluster& a = clusters[anchor];
        const Cluster& c = clusters[i];
        if (c.count > a.count) {
            anchor = int(i);
        } else if (c.count == a.count) {
            bool a_zero = a.center == Complex(0.0, 0.0);
            bool c_zero = c.center == Complex(0.0, 0.0);
            if (!a_zero && (c_zero || lex_less(c.center, a.center))) anchor = int(i);
        }
    }

    Complex shift = clusters[anchor].center;
    Complex scale = (n == 2) ? leading : std::sqrt(leading);
    AffineMap map{scale, shift};

    std::vector<Complex> normalized;
    normalized.reserve(n);
    for (int k = 0; k < clusters[anchor].count; ++k) normalized.push_back(Complex(0.0, 0.0));
    std::vector<Complex> rest;
    for (size_t i = 0; i < clusters.size(); ++i) {
        if (int(i) == anchor) continue;
        Complex z = scale * (clusters[i].center - shift);
        for (int k = 0; k < clusters[i].count; ++k) rest.push_back(z);
    }
    std::sort(rest.begin(), rest.end(), lex_less);
    normalized.insert(normalized.end(), rest.begin(), rest.end());

    return HolomorphicSystem::from_normalized_roots(std::move(normalized), map, tol);
}

} // namespace

HolomorphicSystem HolomorphicSystem::from_normalized_roots(std::vector<Complex> roots,
                                                           AffineMap map,
                                                           const Tolerances& tol) {
    (void)tol;
    HolomorphicSystem s;
    if (roots.size() != 2 && roots.size() != 3)
        raise(ErrorCode::DegreeUnsupported, "degree must be 2 or 3");
    for (Complex r : roots)
        if (!finite(r)) raise(ErrorCode::BadInput, "non-finite root");
    if (roots.front() != Complex(0.0, 0.0))
        raise(ErrorCode::BadInput, "normalized system requires first root at 0");
    s.roots_ = std::move(roots);
    s.coeffs_ = cpoly_from_roots(s.roots_);
    s.map_ = map;
    return s;
}

Complex HolomorphicSystem::eval(Complex z) const {
    Complex acc(1.0, 0.0);
    for (Complex r : roots_) acc *= (z - r);
    return acc;
}

Complex HolomorphicSystem::derivative(Complex z) const {
    // Sum over roots of the product of the remaining differences.
    Complex total(0.0, 0.0);
    for (size_t k = 0; k < roots_.size(); ++k) {
        Complex term(1.0, 0.0);
        for (size_t j = 0; j < roots_.size(); ++j)
            if (j != k) term *= (z - roots_[j]);
        total += term;
    }
    return total;
}

double HolomorphicSystem::root_scale() const {
    double s = 1.0;
    for (Complex r : roots_) s = std::max(s, std::abs(r));
    return s;
}

HolomorphicSystem normalize(const std::vector<Complex>& coefficients_high_first,
                            const Tolerances& tol) {
    for (Complex c : coefficients_high_first)
        if (!finite(c)) raise(ErrorCode::BadInput, "non-finite coefficient");

    std::vector<Complex> c = coefficients_high_first;
    while (!c.empty() && c.front() == Complex(0.0, 0.0)) c.erase(c.begin());
    if (c.empty())
        raise(ErrorCode::ZeroLeadingCoefficient, "zero polynomial");
    const int deg = int(c.size()) - 1;
    if (deg != 2 && deg != 3)
        raise(ErrorCode::DegreeUnsupported,
              "effective degree " + std::to_string(deg) + " not in {2, 3}");

    Complex leading = c.front();
    CPoly ascending(c.rbegin(), c.rend());
    for (Complex& v : ascending) v /= leading;
    std::vector<Complex> raw = cpoly_solve(ascending);
    return normalize_common(leading, raw, tol);
}

HolomorphicSystem normalize_from_roots(const std::vector<Complex>& roots, const Tolerances& tol) {
    const int deg = int(roots.size());
    if (deg != 2 && deg != 3)
        raise(ErrorCode::DegreeUnsupported,
              "root count " + std::to_string(deg) + " not in {2, 3}");
    for (Complex r : roots)
        if (!finite(r)) raise(ErrorCode::BadInput, "non-finite root");
    return normalize_common(Complex(1.0, 0.0), roots, tol);
}

RootSet roots(const HolomorphicSystem& system, const Tolerances& tol) {
    auto clusters = cluster_roots(system.roots_normalized(), tol.root_cluster);
    RootSet rs;
    for (const auto& c : clusters) rs.entries.push_back({c.center, c.count});
    std::sort(rs.entries.begin(), rs.entries.end(), [](const RootEntry& a, const RootEntry& b) {
        return lex_less(a.location, b.location);
    });
    return rs;
}

Vec2 eval_field(const HolomorphicSystem& system, double x, double y) {
    if (!finite(x) || !finite(y)) raise(ErrorCode::BadInput, "non-finite evaluation point");
    Complex v = system.eval(Complex(x, y));
    return {v.real(), v.imag()};
}

Complex eval_derivative(const HolomorphicSystem& system, Complex z0) {
    return system.derivative(z0);
}

RealField real_field(const HolomorphicSystem& system) {
    CPoly2 prod = CPoly2::constant(Complex(1.0, 0.0));
    for (Complex r : system.roots_normalized()) prod = prod * CPoly2::linear_z(r);
    return {prod.re, prod.im};
}

} // namespace crc
