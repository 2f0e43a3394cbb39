#pragma once

#include <optional>
#include <vector>

namespace ckem {

// Profile of an S^1-invariant fiber metric on CP^1 x M (complex dimension m):
//     Psi(t) = A t^(2m) + B t^(2m-1) + c t^2 / (2(m-1)(2m-3)) - d / (2m(2m-1))
// solving t^2 Psi'' - 2(2m-1) t Psi' + 2m(2m-1) Psi = c t^2 - d on [t0, t1] with
// Psi(t0) = Psi(t1) = 0, Psi'(t0) = 2, Psi'(t1) = -2.
struct PsiSolution {
    int m = 2;
    double t0 = 0.0, t1 = 0.0;
    double A = 0.0, B = 0.0;
    double c_coef = 0.0;  // c
    double d_coef = 0.0;  // d
    double E = 0.0;       // denominator of the closed-form coefficients
    // Largest relative difference between the linear solve and the closed forms over (A, B, c, d).
    double closed_form_discrepancy = 0.0;

    double t2_coefficient() const { return c_coef / (2.0 * (m - 1) * (2 * m - 3)); }
    double constant_term() const { return -d_coef / (2.0 * m * (2 * m - 1)); }

    double psi(double t) const;
    double dpsi(double t) const;
    double d2psi(double t) const;
    // Psi(t) = (t - t0)(t - t1) Q(t) evaluated through Q, which has no cancellation near the ends.
    double psi_factored(double t) const;

    // Left side minus right side of the ODE.
    double ode_residual(double t) const;
    // max |ode_residual| / max(|c t^2|, |d|) over `grid` evenly spaced points of [t0, t1].
    double residual_max(int grid = 1000) const;
    // c - Psi'' - (d / t^2 - 2(2m-1) Psi' / t + 2m(2m-1) Psi / t^2): the scalar-curvature relation.
    double conformal_relation(double t) const;
};

// Throws DomainError unless m >= 2 and 0 < t0 < t1.
PsiSolution solve_psi(int m, double t0, double t1);

// Closed forms for (A, B, c, d) and E at (a, b) = (t0, t1), evaluated in 50-digit
// arithmetic and rounded.
struct PsiClosedForm {
    double A, B, c, d, E;
};

PsiClosedForm psi_closed_form(int m, double t0, double t1);

struct PositivityCertificate {
    bool positive = false;
    bool endpoint_slopes = false;          // Psi'(t0) > 0 and Psi'(t1) < 0
    std::optional<double> turning_point;   // zero of (Psi'/t)' inside (t0, t1)
    int derivative_sign_changes = 0;       // zeros of Psi' in (t0, t1)
    double grid_min = 0.0;                 // min of Psi on 10^4 interior points
    std::optional<double> violating_t;
};

PositivityCertificate certify_positivity(const PsiSolution& sol);

struct ScalarCurvatureConstants {
    double c_target = 0.0;  // base scalar curvature required
    double d_scal = 0.0;    // resulting constant scalar curvature
};

ScalarCurvatureConstants scalar_curvature_constants(int m, double t0, double t1);

struct CmScanRow {
    double t0 = 0.0;
    double c = 0.0;
    double d = 0.0;
};

struct CmScanResult {
    int m = 2;
    std::vector<CmScanRow> rows;  // t0 log-spaced, ascending; interval [t0, t0 + 1]
    double c_min = 0.0, c_max = 0.0;
    bool strictly_decreasing = false;
    std::optional<double> target;
    bool target_found = false;
    std::optional<double> t0_for_target;
    std::optional<double> c_at_t0;
};

// Tabulates c over [t0, t0 + 1] for t0 log-spaced on [t0_min, t0_max], in 50-digit arithmetic
// so monotonicity is judged reliably even where c - (8m - 8) is below double resolution. With a
// target inside the observed range, inverts c by bisection on a bracketing segment.
CmScanResult cm_scan(int m, double t0_min, double t0_max, int steps, std::optional<double> target = std::nullopt);

}  // namespace ckem
