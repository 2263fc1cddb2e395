#pragma once

#include "crc/system.hpp"

#include <array>
#include <vector>

namespace crc {

// Four rotated local charts cover the equator; Plane is the identity chart.
// Chart c (angle phi = c*pi/2) uses w = e^{-i phi} z, u = Im w / Re w,
// v = 1 / Re w, valid on Re w > 0, i.e. directions within 90 degrees of phi.
enum class ChartId { Plane = -1, East = 0, North = 1, West = 2, South = 3 };

struct ChartPoint {
    ChartId chart = ChartId::Plane;
    double u = 0.0;
    double v = 0.0;
};

struct EquatorSaddle {
    int index = 0;              // theta_j = j * pi / (n - 1)
    double theta = 0.0;
    ChartId chart = ChartId::East;  // chart whose origin is this saddle
    bool inward_unstable = false;   // in-disk separatrix side is the unstable manifold
    double mu_u = 0.0;              // linearization along the equator
    double mu_v = 0.0;              // linearization into the disk
};

Vec2 to_disk(double x, double y);
Vec2 from_disk(double X, double Y);  // raises OutsideDisk on X^2 + Y^2 >= 1

// Equator-chart machinery for one normalized system. The rescaled field
//   u' = Im[(1 - iu) W],  v' = -v Re W,   W(u,v) = sum gamma_k (1+iu)^k v^{n-k}
// extends the plane field to v = 0 after multiplying time by v^{n-1}.
class ChartAtlas {
public:
    explicit ChartAtlas(const HolomorphicSystem& system);

    int degree() const { return n_; }

    // Raw rescaled field; polynomial in (u, v), no domain checks.
    Vec2 field(ChartId chart, double u, double v) const;

    Complex chart_to_plane(ChartId chart, double u, double v) const;
    ChartPoint plane_to_chart(Complex z, ChartId chart) const;
    ChartId best_chart(Complex z) const;  // maximizes Re(e^{-i phi} z)
    ChartPoint chart_to_chart(ChartId from, double u, double v, ChartId to) const;

    // Saddle data at the chart origin: eigenvalues and the in-disk invariant
    // manifold expansion u = c1 v + c2 v^2 + c3 v^3.
    struct LocalSaddle {
        double mu_u = 0.0;
        double mu_v = 0.0;
        double c1 = 0.0, c2 = 0.0, c3 = 0.0;
    };
    LocalSaddle saddle_local(ChartId chart) const;

private:
    int n_ = 2;
    std::array<CPoly, 4> gamma_;  // rotated coefficients per chart
};

std::vector<EquatorSaddle> equator_saddles(const HolomorphicSystem& system,
                                           const Tolerances& tol = {});

// Domain-checked field evaluation (the public operation).
Vec2 chart_field(const HolomorphicSystem& system, ChartId chart, double u, double v,
                 const Tolerances& tol = {});

} // namespace crc
