#include "crc/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace crc {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::BadInput: return "BadInput";
        case ErrorCode::DegreeUnsupported: return "DegreeUnsupported";
        case ErrorCode::ZeroLeadingCoefficient: return "ZeroLeadingCoefficient";
        case ErrorCode::ZeroLambdaOnSimpleRoot: return "ZeroLambdaOnSimpleRoot";
        case ErrorCode::NoNontrivialSolution: return "NoNontrivialSolution";
        case ErrorCode::SingularPoint: return "SingularPoint";
        case ErrorCode::ChartDomainExceeded: return "ChartDomainExceeded";
        case ErrorCode::OutsideDisk: return "OutsideDisk";
        case ErrorCode::TraceBudgetExceeded: return "TraceBudgetExceeded";
        case ErrorCode::NotACenter: return "NotACenter";
        case ErrorCode::NonRationalIntegral: return "NonRationalIntegral";
        case ErrorCode::ConfigurationInconsistent: return "ConfigurationInconsistent";
    }
    return "UnknownError";
}

Complex cpoly_eval(const CPoly& c, Complex z) {
    Complex acc(0.0, 0.0);
    for (size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
    return acc;
}

CPoly cpoly_derivative(const CPoly& c) {
    if (c.size() <= 1) return CPoly{Complex(0.0, 0.0)};
    CPoly d(c.size() - 1);
    for (size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * double(k);
    return d;
}

CPoly cpoly_from_roots(const std::vector<Complex>& roots) {
    CPoly c{Complex(1.0, 0.0)};
    for (const Complex& r : roots) {
        CPoly next(c.size() + 1, Complex(0.0, 0.0));
        for (size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= c[k] * r;
        }
        c = std::move(next);
    }
    return c;
}

CPoly cpoly_mul(const CPoly& a, const CPoly& b) {
    CPoly out(a.size() + b.size() - 1, Complex(0.0, 0.0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

CPoly cpoly_deflate(const CPoly& c, Complex root) {
    const size_t n = c.size() - 1;
    CPoly q(n, Complex(0.0, 0.0));
    Complex carry = c[n];
    for (size_t k = n; k-- > 0;) {
        q[k] = carry;
        carry = c[k] + carry * root;
    }
    return q;
}

namespace {

Complex newton_polish(const CPoly& c, const CPoly& d, Complex z) {
    Complex f = cpoly_eval(c, z);
    Complex df = cpoly_eval(d, z);
    if (std::abs(df) > 1e-30) {
        Complex z1 = z - f / df;
        if (std::abs(cpoly_eval(c, z1)) < std::abs(f)) return z1;
    }
    return z;
}

std::vector<Complex> solve_quadratic(Complex a, Complex b, Complex c) {
    // Stable form: avoid cancellation in -b +- sqrt(disc).
    Complex disc = b * b - 4.0 * a * c;
    Complex s = std::sqrt(disc);
    if (std::real(std::conj(b) * s) > 0.0) s = -s;
    Complex q = -0.5 * (b - s);
    Complex r1 = q / a;
    Complex r2 = (std::abs(q) > 0.0) ? c / q : -b / a - r1;
    return {r1, r2};
}

std::vector<Complex> solve_cubic(Complex a, Complex b, Complex c, Complex d) {
    // Depressed cubic t^3 + p t + q via z = t - b/(3a).
    Complex shift = b / (3.0 * a);
    Complex p = c / a - shift * shift * 3.0;
    Complex q = 2.0 * shift * shift * shift - shift * c / a + d / a;

    std::vector<Complex> ts;
    const Complex w(-0.5, std::sqrt(3.0) / 2.0);  // primitive cube root of unity
    if (std::abs(p) < 1e-300) {
        Complex u = std::pow(-q, 1.0 / 3.0);
        ts = {u, u * w, u * std::conj(w)};
    } else {
        Complex disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
        Complex u3 = -q / 2.0 + disc;
        if (std::abs(u3) < std::abs(-q / 2.0 - disc)) u3 = -q / 2.0 - disc;
        Complex u = std::pow(u3, 1.0 / 3.0);
        for (int k = 0; k < 3; ++k) {
            ts.push_back(u - p / (3.0 * u));
            u *= w;
        }
    }
    for (Complex& t : ts) t -= shift;
    return ts;
}

} // namespace

std::vector<Complex> cpoly_solve(const CPoly& c) {
    if (c.empty() || std::abs(c.back()) == 0.0)
        raise(ErrorCode::ZeroLeadingCoefficient, "leading coefficient must be nonzero");
    const size_t deg = c.size() - 1;
    std::vector<Complex> roots;
    switch (deg) {
        case 1: roots = {-c[0] / c[1]}; break;
        case 2: roots = solve_quadratic(c[2], c[1], c[0]); break;
        case 3: roots = solve_cubic(c[3], c[2], c[1], c[0]); break;
        default: raise(ErrorCode::DegreeUnsupported, "closed-form solver handles degree 1..3");
    }
    CPoly d = cpoly_derivative(c);
    for (Complex& r : roots) {
        r = newton_polish(c, d, r);
        r = newton_polish(c, d, r);
    }
    return roots;
}

Poly2 Poly2::constant(double v) {
    Poly2 p;
    p.coef(0, 0) = v;
    return p;
}

Poly2 Poly2::monomial(int i, int j, double coeff) {
    Poly2 p(i, j);
    p.coef(i, j) = coeff;
    return p;
}

double Poly2::eval(double x, double y) const {
    // Horner in y, then x.
    double acc = 0.0;
    for (int j = ny_; j-- > 0;) {
        double row = 0.0;
        for (int i = nx_; i-- > 0;) row = row * x + c_[i + j * nx_];
        acc = acc * y + row;
    }
    return acc;
}

Poly2 Poly2::dx() const {
    if (nx_ == 1) return Poly2();
    Poly2 out(nx_ - 2, ny_ - 1);
    for (int j = 0; j < ny_; ++j)
        for (int i = 1; i < nx_; ++i) out.coef(i - 1, j) = coef(i, j) * i;
    return out;
}

Poly2 Poly2::dy() const {
    if (ny_ == 1) return Poly2();
    Poly2 out(nx_ - 1, ny_ - 2);
    for (int j = 1; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i) out.coef(i, j - 1) = coef(i, j) * j;
    return out;
}

Poly2 Poly2::operator+(const Poly2& o) const {
    Poly2 out(std::max(deg_x(), o.deg_x()), std::max(deg_y(), o.deg_y()));
    for (int j = 0; j <= out.deg_y(); ++j)
        for (int i = 0; i <= out.deg_x(); ++i) out.coef(i, j) = coef(i, j) + o.coef(i, j);
    return out;
}

Poly2 Poly2::operator-(const Poly2& o) const { return *this + o.scaled(-1.0); }

Poly2 Poly2::operator*(const Poly2& o) const {
    Poly2 out(deg_x() + o.deg_x(), deg_y() + o.deg_y());
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i) {
            double v = c_[i + j * nx_];
            if (v == 0.0) continue;
            for (int jo = 0; jo <= o.deg_y(); ++jo)
                for (int io = 0; io <= o.deg_x(); ++io)
                    out.coef(i + io, j + jo) += v * o.coef(io, jo);
        }
    return out;
}

Poly2 Poly2::scaled(double s) const {
    Poly2 out = *this;
    for (double& v : out.c_) v *= s;
    return out;
}

bool Poly2::is_zero(double tol) const {
    for (double v : c_)
        if (std::abs(v) > tol) return false;
    return true;
}

double Poly2::max_abs_coef() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
}

void Poly2::trim(double tol) {
    int mx = 0, my = 0;
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i)
            if (std::abs(coef(i, j)) > tol) {
                mx = std::max(mx, i);
                my = std::max(my, j);
            }
    Poly2 out(mx, my);
    for (int j = 0; j <= my; ++j)
        for (int i = 0; i <= mx; ++i) out.coef(i, j) = coef(i, j);
    *this = out;
}

std::vector<std::tuple<int, int, double>> Poly2::monomials(double tol) const {
    std::vector<std::tuple<int, int, double>> out;
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i)
            if (std::abs(coef(i, j)) > tol) out.emplace_back(i, j, coef(i, j));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        int da = std::get<0>(a) + std::get<1>(a), db = std::get<0>(b) + std::get<1>(b);
        if (da != db) return da < db;
        return std::get<0>(a) < std::get<0>(b);
    });
    return out;
}

bool Poly2::operator==(const Poly2& o) const {
    int mx = std::max(deg_x(), o.deg_x()), my = std::max(deg_y(), o.deg_y());
    for (int j = 0; j <= my; ++j)
        for (int i = 0; i <= mx; ++i)
            if (coef(i, j) != o.coef(i, j)) return false;
    return true;
}

CPoly2 CPoly2::constant(Complex v) {
    return {Poly2::constant(v.real()), Poly2::constant(v.imag())};
}

CPoly2 CPoly2::linear_z(Complex shift) {
    CPoly2 p;
    p.re = Poly2::monomial(1, 0, 1.0) - Poly2::constant(shift.real());
    p.im = Poly2::monomial(0, 1, 1.0) - Poly2::constant(shift.imag());
    return p;
}

CPoly2 CPoly2::operator*(const CPoly2& o) const {
    CPoly2 out;
    out.re = re * o.re - im * o.im;
    out.im = re * o.im + im * o.re;
    return out;
}

namespace {

// Jacobi eigen-decomposition of a small symmetric matrix; returns the
// eigenvector of the smallest eigenvalue and all eigenvalues.
void jacobi_smallest(std::vector<std::vector<double>> s, std::vector<double>& evec,
                     std::vector<double>& evals) {
    const int n = int(s.size());
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) v[i][i] = 1.0;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += s[p][q] * s[p][q];
        if (off < 1e-300) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(s[p][q]) < 1e-300) continue;
                double theta = (s[q][q] - s[p][p]) / (2.0 * s[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double cth = 1.0 / std::sqrt(t * t + 1.0), sth = t * cth;
                for (int k = 0; k < n; ++k) {
                    double skp = s[k][p], skq = s[k][q];
                    s[k][p] = cth * skp - sth * skq;
                    s[k][q] = sth * skp + cth * skq;
                }
                for (int k = 0; k < n; ++k) {
                    double spk = s[p][k], sqk = s[q][k];
                    s[p][k] = cth * spk - sth * sqk;
                    s[q][k] = sth * spk + cth * sqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = cth * vkp - sth * vkq;
                    v[k][q] = sth * vkp + cth * vkq;
                }
            }
    }
    evals.assign(n, 0.0);
    int imin = 0;
    for (int i = 0; i < n; ++i) {
        evals[i] = s[i][i];
        if (evals[i] < evals[imin]) imin = i;
    }
    evec.assign(n, 0.0);
    for (int k = 0; k < n; ++k) evec[k] = v[k][imin];
}

} // namespace

std::vector<double> null_vector(const std::vector<std::vector<double>>& a, double sv_threshold) {
    if (a.empty()) return {};
    const int rows = int(a.size());
    const int cols = int(a[0].size());

    // Full-pivot Gaussian elimination.
    std::vector<std::vector<double>> m = a;
    std::vector<int> col_of(cols);
    std::iota(col_of.begin(), col_of.end(), 0);
    double scale = 0.0;
    for (const auto& row : m)
        for (double v : row) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) {
        std::vector<double> e(cols, 0.0);
        e[0] = 1.0;
        return e;
    }
    const double pivot_tol = scale * 1e-12;

    int rank = 0;
    for (; rank < std::min(rows, cols); ++rank) {
        int pr = rank, pc = rank;
        double best = 0.0;
        for (int r = rank; r < rows; ++r)
            for (int c = rank; c < cols; ++c)
                if (std::abs(m[r][c]) > best) {
                    best = std::abs(m[r][c]);
                    pr = r;
                    pc = c;
                }
        if (best <= pivot_tol) break;
        std::swap(m[rank], m[pr]);
        for (int r = 0; r < rows; ++r) std::swap(m[r][rank], m[r][pc]);
        std::swap(col_of[rank], col_of[pc]);
        for (int r = 0; r < rows; ++r) {
            if (r == rank) continue;
            double f = m[r][rank] / m[rank][rank];
            if (f == 0.0) continue;
            for (int c = rank; c < cols; ++c) m[r][c] -= f * m[rank][c];
            m[r][rank] = 0.0;
        }
    }

    if (rank < cols) {
        // Free variable = first non-pivot column; back-substitute.
        std::vector<double> x(cols, 0.0);
        x[col_of[rank]] = 1.0;
        for (int r = rank - 1; r >= 0; --r) {
            double rhs = -m[r][rank];  // column `rank` is the free one
            x[col_of[r]] = rhs / m[r][r];
        }
        double nrm = 0.0;
        for (double v : x) nrm += v * v;
        nrm = std::sqrt(nrm);
        for (double& v : x) v /= nrm;
        return x;
    }

    // Marginal rank decision: singular-value style fallback on A^T A.
    std::vector<std::vector<double>> ata(cols, std::vector<double>(cols, 0.0));
    for (int i = 0; i < cols; ++i)
        for (int j = 0; j < cols; ++j) {
            double s = 0.0;
            for (int r = 0; r < rows; ++r) s += a[r][i] * a[r][j];
            ata[i][j] = s;
        }
    std::vector<double> evec, evals;
    jacobi_smallest(ata, evec, evals);
    double emax = 0.0, emin = evals[0];
    for (double e : evals) {
        emax = std::max(emax, e);
        emin = std::min(emin, e);
    }
    if (emax <= 0.0) return {};
    if (std::sqrt(std::max(emin, 0.0)) > sv_threshold * std::sqrt(emax)) return {};
    return evec;
}

bool rational_approx(double x, int max_den, long long& p, long long& q, double tol) {
    // Continued-fraction convergents with denominator bound.
    long long p0 = 1, q0 = 0, p1 = 0, q1 = 1;  // p0/q0 = 1/0, p1/q1 = 0/1
    double v = x;
    for (int it = 0; it < 64; ++it) {
        double fa = std::floor(v);
        if (fa > 1e17 || fa < -1e17) break;
        long long a = (long long)fa;
        long long p2 = a * p0 + p1, q2 = a * q0 + q1;
        if (q2 > max_den) break;
        p1 = p0; q1 = q0; p0 = p2; q0 = q2;
        double rem = v - fa;
        if (std::abs(rem) < 1e-14 * std::max(1.0, std::abs(x))) break;
        v = 1.0 / rem;
    }
    if (q0 == 0) return false;
    p = p0;
    q = q0;
    double err = std::abs(x - double(p) / double(q));
    return err <= tol * std::max(1.0, std::abs(x));
}

} // namespace crc
