#pragma once

#include "crc/poly.hpp"
#include "crc/types.hpp"

#include <vector>

namespace crc {

// User frame -> normalized frame: zeta = scale * (z - shift).
struct AffineMap {
    Complex scale{1.0, 0.0};
    Complex shift{0.0, 0.0};

    Complex forward(Complex z) const { return scale * (z - shift); }
    Complex inverse(Complex zeta) const { return zeta / scale + shift; }
    bool is_identity() const { return scale == Complex(1.0, 0.0) && shift == Complex(0.0, 0.0); }
};

struct RootEntry {
    Complex location;
    int multiplicity = 1;
};

struct RootSet {
    std::vector<RootEntry> entries;
    int degree() const {
        int d = 0;
        for (const auto& e : entries) d += e.multiplicity;
        return d;
    }
};

// Monic Cauchy-Riemann polynomial field dz/dt = prod (z - r_k), with the
// first root pinned at the origin. All analysis happens in this frame; the
// stored affine map carries results back to user coordinates.
class HolomorphicSystem {
public:
    static HolomorphicSystem from_normalized_roots(std::vector<Complex> roots,
                                                   AffineMap map = {},
                                                   const Tolerances& tol = {});

    int degree() const { return int(roots_.size()); }
    const std::vector<Complex>& roots_normalized() const { return roots_; }
    const AffineMap& normalization() const { return map_; }
    const CPoly& coefficients() const { return coeffs_; }  // monic, ascending

    Complex eval(Complex z) const;
    Complex derivative(Complex z) const;

    double root_scale() const;  // max root magnitude, >= 1 floor for tolerances

private:
    std::vector<Complex> roots_;
    CPoly coeffs_;
    AffineMap map_;
};

// Normalize a coefficient-form field (highest degree first). Trims exact-zero
// leading coefficients; rejects effective degree outside {2, 3}.
HolomorphicSystem normalize(const std::vector<Complex>& coefficients_high_first,
                            const Tolerances& tol = {});

// Normalize a root list (leading coefficient 1 implied).
HolomorphicSystem normalize_from_roots(const std::vector<Complex>& roots,
                                       const Tolerances& tol = {});

// Cluster the system's roots into (location, multiplicity) pairs.
RootSet roots(const HolomorphicSystem& system, const Tolerances& tol = {});

// (Re P, Im P) at z = x + iy.
Vec2 eval_field(const HolomorphicSystem& system, double x, double y);

Complex eval_derivative(const HolomorphicSystem& system, Complex z0);

// Real-form polynomial pair (P, Q) with P_x = Q_y, P_y = -Q_x.
struct RealField {
    Poly2 p, q;
};
RealField real_field(const HolomorphicSystem& system);

} // namespace crc
