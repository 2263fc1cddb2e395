#pragma once

#include "crc/types.hpp"

#include <vector>

namespace crc {

// Univariate complex polynomials, coefficients in ascending order:
// c[0] + c[1] z + ... + c[n] z^n.
using CPoly = std::vector<Complex>;

Complex cpoly_eval(const CPoly& c, Complex z);
CPoly cpoly_derivative(const CPoly& c);
CPoly cpoly_from_roots(const std::vector<Complex>& roots);          // monic
CPoly cpoly_mul(const CPoly& a, const CPoly& b);
CPoly cpoly_deflate(const CPoly& c, Complex root);                  // divide by (z - root)

// Closed-form roots for degree 1..3 (quadratic formula / Cardano), each
// polished with one Newton step. Leading coefficient must be nonzero.
std::vector<Complex> cpoly_solve(const CPoly& c);

// Dense bivariate real polynomial, coefficient of x^i y^j at coef(i, j).
class Poly2 {
public:
    Poly2() : nx_(1), ny_(1), c_(1, 0.0) {}
    Poly2(int deg_x, int deg_y) : nx_(deg_x + 1), ny_(deg_y + 1), c_(nx_ * ny_, 0.0) {}

    static Poly2 constant(double v);
    static Poly2 monomial(int i, int j, double coeff);

    double& coef(int i, int j) { return c_[i + j * nx_]; }
    double coef(int i, int j) const {
        return (i < nx_ && j < ny_) ? c_[i + j * nx_] : 0.0;
    }
    int deg_x() const { return nx_ - 1; }
    int deg_y() const { return ny_ - 1; }

    double eval(double x, double y) const;
    Poly2 dx() const;
    Poly2 dy() const;

    Poly2 operator+(const Poly2& o) const;
    Poly2 operator-(const Poly2& o) const;
    Poly2 operator*(const Poly2& o) const;
    Poly2 scaled(double s) const;

    bool is_zero(double tol = 0.0) const;
    double max_abs_coef() const;
    void trim(double tol = 0.0);  // drop trailing all-below-tol rows/columns

    // Monomial list sorted by (i + j, i); skips |coef| <= tol. Used by the
    // deterministic serializers.
    std::vector<std::tuple<int, int, double>> monomials(double tol = 0.0) const;

    bool operator==(const Poly2& o) const;

private:
    int nx_, ny_;
    std::vector<double> c_;
};

// Complex bivariate polynomial in (x, y); used to expand products like
// prod (z - z_k)^{m_k} into Re/Im parts.
struct CPoly2 {
    Poly2 re, im;

    static CPoly2 constant(Complex v);
    static CPoly2 linear_z(Complex shift);  // z - shift, with z = x + iy
    CPoly2 operator*(const CPoly2& o) const;
};

// Null vector of an m x n real matrix (row-major). Full-pivot Gaussian
// elimination; if the rank decision is marginal, falls back to the
// eigenvector of the smallest eigenvalue of A^T A (Jacobi iteration) and
// applies `sv_threshold` relative to the largest singular value. Returns an
// empty vector when no null direction exists above the threshold.
std::vector<double> null_vector(const std::vector<std::vector<double>>& a,
                                double sv_threshold = 1e-10);

// Best rational approximation p/q of x with q <= max_den (continued
// fractions). Returns false if even the best candidate misses by more than
// `tol` in relative terms.
bool rational_approx(double x, int max_den, long long& p, long long& q, double tol = 1e-9);

} // namespace crc
