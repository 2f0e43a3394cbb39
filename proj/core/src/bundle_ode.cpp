#include "ckem/bundle_ode.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ckem/errors.hpp"

namespace ckem {

namespace {

using HighPrecision = boost::multiprecision::cpp_bin_float_50;

template <class T>
T ipow(const T& x, int n) {
    T r(1);
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

// h_0..h_K of the complete homogeneous symmetric polynomials in the given nodes.
template <class T, std::size_t N>
std::vector<T> complete_homogeneous(const std::array<T, N>& nodes, int K) {
    std::vector<T> h(static_cast<std::size_t>(K + 1), T(0));
    h[0] = T(1);
    for (const T& x : nodes)
        for (int k = 1; k <= K; ++k) h[static_cast<std::size_t>(k)] += x * h[static_cast<std::size_t>(k - 1)];
    return h;
}

template <class T>
T at(const std::vector<T>& h, int k) {
    return k < 0 ? T(0) : h[static_cast<std::size_t>(k)];
}

// (A, B, C, D) of Psi = A t^2m + B t^(2m-1) + C t^2 - D.
// Rows are Psi at the confluent nodes (t0, t0, t1, t1) in divided-difference form:
// Psi[t0] = 0, Psi[t0,t0] = 2, Psi[t0,t0,t1] = -2/h, Psi[t0,t0,t1,t1] = 0, h = t1 - t0.
// For t^n the entries are h_{n-j}(nodes) and all positive, unlike the raw value/derivative rows.
template <class T>
std::array<T, 4> solve_coefficients(int m, const T& t0, const T& t1) {
    using std::abs;
    const int n1 = 2 * m, n2 = 2 * m - 1;
    const auto h1 = complete_homogeneous<T, 1>({t0}, n1);
    const auto h2 = complete_homogeneous<T, 2>({t0, t0}, n1);
    const auto h3 = complete_homogeneous<T, 3>({t0, t0, t1}, n1);
    const auto h4 = complete_homogeneous<T, 4>({t0, t0, t1, t1}, n1);
    T M[4][4] = {{at(h1, n1), at(h1, n2), at(h1, 2), T(-1)},
                 {at(h2, n1 - 1), at(h2, n2 - 1), at(h2, 1), T(0)},
                 {at(h3, n1 - 2), at(h3, n2 - 2), T(1), T(0)},
                 {at(h4, n1 - 3), at(h4, n2 - 3), T(0), T(0)}};
    T rhs[4] = {T(0), T(2), T(-2) / (t1 - t0), T(0)};

    T scale[4];
    for (int j = 0; j < 4; ++j) {
        scale[j] = T(0);
        for (int i = 0; i < 4; ++i)
            if (abs(M[i][j]) > scale[j]) scale[j] = abs(M[i][j]);
        for (int i = 0; i < 4; ++i) M[i][j] /= scale[j];
    }
    int perm[4] = {0, 1, 2, 3};
    for (int k = 0; k < 4; ++k) {
        int piv = k;
        for (int i = k + 1; i < 4; ++i)
            if (abs(M[perm[i]][k]) > abs(M[perm[piv]][k])) piv = i;
        std::swap(perm[k], perm[piv]);
        const int pk = perm[k];
        if (M[pk][k] == T(0)) throw std::logic_error("profile system is singular");
        for (int i = k + 1; i < 4; ++i) {
            const int pi = perm[i];
            const T f = M[pi][k] / M[pk][k];
            for (int j = k; j < 4; ++j) M[pi][j] -= f * M[pk][j];
            rhs[pi] -= f * rhs[pk];
        }
    }
    std::array<T, 4> x;
    for (int k = 3; k >= 0; --k) {
        const int pk = perm[k];
        T s = rhs[pk];
        for (int j = k + 1; j < 4; ++j) s -= M[pk][j] * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(k)] = s / M[pk][k];
    }
    for (int j = 0; j < 4; ++j) x[static_cast<std::size_t>(j)] /= scale[j];
    return x;
}

template <class T>
std::array<T, 5> closed_form(int m, const T& a, const T& b) {
    const T a2m = ipow(a, 2 * m), b2m = ipow(b, 2 * m);
    const T am = ipow(a, m), bm = ipow(b, m);
    const T E = 2 * a2m * b2m * (b - a) * (b - a) * (b + a) * m * m - 3 * a2m * b2m * (b - a) * (b - a) * (b + a) * m
              - (bm - am) * (bm + am) * (ipow(a, 3) * b2m - a2m * ipow(b, 3));
    const T A = a * a * b * b * (a + b)
              * (2 * (a - b) * (ipow(b, 2 * m - 2) + ipow(a, 2 * m - 2)) * m + 3 * ipow(b, 2 * m - 1)
                 - a * ipow(b, 2 * m - 2) + ipow(a, 2 * m - 2) * b - 3 * ipow(a, 2 * m - 1))
              / E;
    const T B = 2 * a * a * b * b * (a + b)
              * ((b - a) * (ipow(b, 2 * m - 1) + ipow(a, 2 * m - 1)) * m - (bm - am) * (bm + am)) / E;
    const T cq = (b2m * (2 * a2m * b * b - 2 * ipow(a, 2 * m + 2)) * m - a * a * ipow(b, 4 * m)
                  + b2m * (ipow(a, 2 * m + 2) - a2m * b * b) + ipow(a, 4 * m) * b * b)
               / E;
    const T dq = (b2m * (2 * ipow(a, 2 * m + 1) * ipow(b, 3) - 2 * ipow(a, 2 * m + 3) * b) * m
                  - ipow(a, 4) * ipow(b, 4 * m) + ipow(a, 4 * m) * ipow(b, 4)
                  + b2m * (2 * ipow(a, 2 * m + 3) * b - 2 * ipow(a, 2 * m + 1) * ipow(b, 3)))
               / E;
    return {A, B, cq * (2 * (m - 1) * (2 * m - 3)), dq * (2 * m * (2 * m - 1)), E};
}

void check_interval(int m, double t0, double t1) {
    if (m < 2) throw DomainError("profile solve requires m >= 2");
    if (!(t0 > 0.0) || !(t1 > t0) || !std::isfinite(t1)) throw DomainError("profile solve requires 0 < t0 < t1");
}

double relative_difference(double x, double ref) {
    const double d = std::abs(x - ref);
    return ref == 0.0 ? d : d / std::abs(ref);
}

}  // namespace

double PsiSolution::psi(double t) const {
    return std::pow(t, 2 * m - 1) * (A * t + B) + t2_coefficient() * t * t + constant_term();
}

double PsiSolution::dpsi(double t) const {
    return std::pow(t, 2 * m - 2) * (2 * m * A * t + (2 * m - 1) * B) + 2.0 * t2_coefficient() * t;
}

double PsiSolution::d2psi(double t) const {
    return std::pow(t, 2 * m - 3) * (2.0 * m * (2 * m - 1) * A * t + (2.0 * m - 1) * (2 * m - 2) * B)
         + 2.0 * t2_coefficient();
}

double PsiSolution::psi_factored(double t) const {
    const auto h = complete_homogeneous<double, 3>({t, t0, t1}, 2 * m - 2);
    const double Q = A * at(h, 2 * m - 2) + B * at(h, 2 * m - 3) + t2_coefficient();
    return (t - t0) * (t - t1) * Q;
}

double PsiSolution::ode_residual(double t) const {
    return t * t * d2psi(t) - 2.0 * (2 * m - 1) * t * dpsi(t) + 2.0 * m * (2 * m - 1) * psi(t)
         - (c_coef * t * t - d_coef);
}

double PsiSolution::residual_max(int grid) const {
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double t = t0 + (t1 - t0) * i / (grid - 1);
        worst = std::max(worst, std::abs(ode_residual(t)));
        scale = std::max({scale, std::abs(c_coef * t * t), std::abs(d_coef)});
    }
    return worst / scale;
}

double PsiSolution::conformal_relation(double t) const {
    return c_coef - d2psi(t)
         - (d_coef / (t * t) - 2.0 * (2 * m - 1) * dpsi(t) / t + 2.0 * m * (2 * m - 1) * psi(t) / (t * t));
}

PsiClosedForm psi_closed_form(int m, double t0, double t1) {
    check_interval(m, t0, t1);
    const auto cf = closed_form<HighPrecision>(m, HighPrecision(t0), HighPrecision(t1));
    return {cf[0].convert_to<double>(), cf[1].convert_to<double>(), cf[2].convert_to<double>(),
            cf[3].convert_to<double>(), cf[4].convert_to<double>()};
}

PsiSolution solve_psi(int m, double t0, double t1) {
    check_interval(m, t0, t1);
    // The t^2m and t^(2m-1) columns are nearly parallel once t1/t0 - 1 is small relative to 1/m,
    // so the elimination runs in 50 digits and only the result is rounded.
    const auto x = solve_coefficients<HighPrecision>(m, HighPrecision(t0), HighPrecision(t1));
    PsiSolution s;
    s.m = m;
    s.t0 = t0;
    s.t1 = t1;
    s.A = x[0].convert_to<double>();
    s.B = x[1].convert_to<double>();
    s.c_coef = HighPrecision(x[2] * (2 * (m - 1) * (2 * m - 3))).convert_to<double>();
    s.d_coef = HighPrecision(x[3] * (2 * m * (2 * m - 1))).convert_to<double>();
    const PsiClosedForm cf = psi_closed_form(m, t0, t1);
    s.E = cf.E;
    s.closed_form_discrepancy = std::max({relative_difference(s.A, cf.A), relative_difference(s.B, cf.B),
                                          relative_difference(s.c_coef, cf.c), relative_difference(s.d_coef, cf.d)});
    return s;
}

PositivityCertificate certify_positivity(const PsiSolution& sol) {
    PositivityCertificate cert;
    const int m = sol.m;
    cert.endpoint_slopes = sol.dpsi(sol.t0) > 0.0 && sol.dpsi(sol.t1) < 0.0;
    if (!cert.endpoint_slopes) cert.violating_t = sol.dpsi(sol.t0) > 0.0 ? sol.t1 : sol.t0;

    // (Psi'/t)' = t^(2m-4) (2m(2m-2) A t + (2m-1)(2m-3) B): Psi'/t is monotone on each side of t*.
    std::vector<double> knots{sol.t0};
    if (sol.A != 0.0) {
        const double ts = -(2.0 * m - 1) * (2 * m - 3) * sol.B / (2.0 * m * (2 * m - 2) * sol.A);
        if (ts > sol.t0 && ts < sol.t1) {
            cert.turning_point = ts;
            knots.push_back(ts);
        }
    }
    knots.push_back(sol.t1);
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double a = sol.dpsi(knots[i]), b = sol.dpsi(knots[i + 1]);
        if ((a > 0.0 && b <= 0.0) || (a < 0.0 && b >= 0.0)) ++cert.derivative_sign_changes;
    }

    constexpr int samples = 10000;
    cert.grid_min = std::numeric_limits<double>::infinity();
    double argmin = sol.t0;
    for (int i = 1; i <= samples; ++i) {
        const double t = sol.t0 + (sol.t1 - sol.t0) * i / (samples + 1);
        const double v = sol.psi_factored(t);
        if (v < cert.grid_min) {
            cert.grid_min = v;
            argmin = t;
        }
    }
    if (!(cert.grid_min > 0.0) && !cert.violating_t) cert.violating_t = argmin;
    if (cert.derivative_sign_changes != 1 && !cert.violating_t)
        cert.violating_t = cert.turning_point.value_or(0.5 * (sol.t0 + sol.t1));
    cert.positive = cert.endpoint_slopes && cert.derivative_sign_changes == 1 && cert.grid_min > 0.0;
    return cert;
}

ScalarCurvatureConstants scalar_curvature_constants(int m, double t0, double t1) {
    const PsiSolution s = solve_psi(m, t0, t1);
    return {s.c_coef, s.d_coef};
}

namespace {

std::pair<HighPrecision, HighPrecision> unit_interval_constants(int m, const HighPrecision& t0) {
    const auto x = solve_coefficients<HighPrecision>(m, t0, t0 + 1);
    return {x[2] * (2 * (m - 1) * (2 * m - 3)), x[3] * (2 * m * (2 * m - 1))};
}

}  // namespace

CmScanResult cm_scan(int m, double t0_min, double t0_max, int steps, std::optional<double> target) {
    if (m < 2) throw DomainError("cm scan requires m >= 2");
    if (!(t0_min > 0.0) || !(t0_max > t0_min)) throw DomainError("cm scan requires 0 < t0_min < t0_max");
    if (steps < 2) throw DomainError("cm scan needs at least 2 steps");
    CmScanResult r;
    r.m = m;
    r.target = target;
    const double lmin = std::log(t0_min), lmax = std::log(t0_max);
    std::vector<HighPrecision> cs;
    for (int i = 0; i < steps; ++i) {
        const double t0 = i == 0 ? t0_min : (i + 1 == steps ? t0_max : std::exp(lmin + (lmax - lmin) * i / (steps - 1)));
        const auto [c, d] = unit_interval_constants(m, HighPrecision(t0));
        cs.push_back(c);
        r.rows.push_back({t0, c.convert_to<double>(), d.convert_to<double>()});
    }
    r.strictly_decreasing = true;
    HighPrecision lo = cs[0], hi = cs[0];
    for (std::size_t i = 0; i < cs.size(); ++i) {
        lo = std::min(lo, cs[i]);
        hi = std::max(hi, cs[i]);
        if (i > 0 && !(cs[i] < cs[i - 1])) r.strictly_decreasing = false;
    }
    r.c_min = lo.convert_to<double>();
    r.c_max = hi.convert_to<double>();
    if (!target) return r;

    const HighPrecision goal(*target);
    for (std::size_t i = 0; i + 1 < cs.size(); ++i) {
        const HighPrecision fa = cs[i] - goal, fb = cs[i + 1] - goal;
        if (fa == 0 || (fa > 0) != (fb > 0) || fb == 0) {
            // bisection in log t0 on a segment where c - target changes sign
            HighPrecision a(r.rows[i].t0), b(r.rows[i + 1].t0);
            const bool a_above = fa > 0;
            for (int it = 0; it < 400 && b / a - 1 > HighPrecision(1e-40); ++it) {
                const HighPrecision mid = sqrt(a * b);
                const bool above = unit_interval_constants(m, mid).first - goal > 0;
                (above == a_above ? a : b) = mid;
            }
            const HighPrecision t0 = sqrt(a * b);
            r.target_found = true;
            r.t0_for_target = t0.convert_to<double>();
            r.c_at_t0 = unit_interval_constants(m, t0).first.convert_to<double>();
            return r;
        }
    }
    return r;
}

}  // namespace ckem
