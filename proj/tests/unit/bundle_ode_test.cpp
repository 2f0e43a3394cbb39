#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <array>
#include <cmath>
#include <random>

#include "ckem/bundle_ode.hpp"
#include "ckem/errors.hpp"

using namespace ckem;

namespace {

using Big = boost::multiprecision::cpp_bin_float_50;

struct Coeffs {
    double A, B, c, d;
};

// Boundary conditions Psi(t0) = Psi(t1) = 0, Psi'(t0) = 2, Psi'(t1) = -2 as a dense 4x4 system,
// solved by Gauss-Jordan in 50 digits.
Coeffs oracle_coeffs(int m, double t0d, double t1d) {
    const Big t0 = t0d, t1 = t1d;
    const Big k2 = Big(1) / (2 * (m - 1) * (2 * m - 3)), k0 = Big(-1) / (2 * m * (2 * m - 1));
    auto row_psi = [&](const Big& t) {
        return std::array<Big, 4>{pow(t, 2 * m), pow(t, 2 * m - 1), k2 * t * t, k0};
    };
    auto row_dpsi = [&](const Big& t) {
        return std::array<Big, 4>{2 * m * pow(t, 2 * m - 1), (2 * m - 1) * pow(t, 2 * m - 2), 2 * k2 * t, Big(0)};
    };
    std::array<std::array<Big, 5>, 4> M;
    const std::array<std::array<Big, 4>, 4> rows{row_psi(t0), row_psi(t1), row_dpsi(t0), row_dpsi(t1)};
    const std::array<Big, 4> rhs{0, 0, 2, -2};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) M[i][j] = rows[i][j];
        M[i][4] = rhs[i];
    }
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (abs(M[r][col]) > abs(M[piv][col])) piv = r;
        std::swap(M[col], M[piv]);
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            const Big f = M[r][col] / M[col][col];
            for (int j = col; j < 5; ++j) M[r][j] -= f * M[col][j];
        }
    }
    return {static_cast<double>(M[0][4] / M[0][0]), static_cast<double>(M[1][4] / M[1][1]),
            static_cast<double>(M[2][4] / M[2][2]), static_cast<double>(M[3][4] / M[3][3])};
}

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

}  // namespace

TEST(PsiSolve, UnitIntervalValues) {
    const auto s = solve_psi(2, 1, 2);
    EXPECT_NEAR(s.A, 0.5, 1e-14);
    EXPECT_NEAR(s.B, -3.0, 1e-14);
    EXPECT_NEAR(s.c_coef, 9.0, 1e-13);
    EXPECT_NEAR(s.d_coef, 24.0, 1e-13);
    for (int m = 2; m <= 6; ++m) {
        const auto r = solve_psi(m, 1, 2);
        const auto o = oracle_coeffs(m, 1, 2);
        EXPECT_LT(rel(r.A, o.A), 1e-13) << m;
        EXPECT_LT(rel(r.B, o.B), 1e-13) << m;
        EXPECT_LT(rel(r.c_coef, o.c), 1e-13) << m;
        EXPECT_LT(rel(r.d_coef, o.d), 1e-13) << m;
        EXPECT_LT(r.closed_form_discrepancy, 1e-14);
        EXPECT_LT(r.residual_max(), 1e-13);
        EXPECT_TRUE(certify_positivity(r).positive);
    }
}

TEST(PsiSolve, BoundaryConditions) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> lt(-3, 3), gap(-4, 2);
    for (int m = 2; m <= 6; ++m)
        for (int i = 0; i < 20; ++i) {
            const double t0 = std::pow(10.0, lt(rng)), t1 = t0 * (1 + std::pow(10.0, gap(rng)));
            const auto s = solve_psi(m, t0, t1);
            const double scale = t1 - t0;
            EXPECT_NEAR(s.psi_factored(t0), 0.0, 1e-12 * scale);
            EXPECT_NEAR(s.psi_factored(t1), 0.0, 1e-12 * scale);
            EXPECT_NEAR(s.dpsi(t0), 2.0, 1e-7);
            EXPECT_NEAR(s.dpsi(t1), -2.0, 1e-7) << "m=" << m << " [" << t0 << "," << t1 << "]";
            const auto o = oracle_coeffs(m, t0, t1);
            EXPECT_LT(rel(s.c_coef, o.c), 1e-9) << "m=" << m << " [" << t0 << "," << t1 << "]";
            EXPECT_LT(rel(s.d_coef, o.d), 1e-9) << "m=" << m << " [" << t0 << "," << t1 << "]";
            const double mid = 0.5 * (t0 + t1);
            EXPECT_NEAR(s.psi_factored(mid), s.psi(mid), 1e-6 * std::abs(s.psi_factored(mid)) + 1e-9 * scale);
        }
}

TEST(PsiSolve, ClosedFormsAgree) {
    for (int m = 2; m <= 6; ++m)
        for (auto [t0, t1] : {std::pair{1.0, 2.0}, {0.1, 7.0}, {3.0, 3.5}, {1e-3, 1.0}}) {
            const auto s = solve_psi(m, t0, t1);
            const auto cf = psi_closed_form(m, t0, t1);
            EXPECT_LT(rel(cf.A, s.A), 1e-12);
            EXPECT_LT(rel(cf.B, s.B), 1e-12);
            EXPECT_LT(rel(cf.c, s.c_coef), 1e-12);
            EXPECT_LT(rel(cf.d, s.d_coef), 1e-12);
            EXPECT_EQ(cf.E, s.E);
            EXPECT_LT(s.closed_form_discrepancy, 1e-10);
        }
}

TEST(PsiSolve, ResidualAndDerivatives) {
    const auto s = solve_psi(4, 0.5, 3.0);
    EXPECT_LT(s.residual_max(2000), 1e-12);
    const double h = 1e-5;
    for (double t : {0.7, 1.5, 2.9}) {
        EXPECT_NEAR(s.dpsi(t), (s.psi(t + h) - s.psi(t - h)) / (2 * h), 1e-6);
        EXPECT_NEAR(s.d2psi(t), (s.dpsi(t + h) - s.dpsi(t - h)) / (2 * h), 1e-5);
        EXPECT_NEAR(s.conformal_relation(t), 0.0, 1e-10 * s.c_coef);
    }
    EXPECT_NEAR(s.t2_coefficient(), s.c_coef / (2.0 * 3 * 5), 1e-15 * s.c_coef);
    EXPECT_NEAR(s.constant_term(), -s.d_coef / 56.0, 1e-15 * s.d_coef);
}

TEST(PsiSolve, ConditioningOverWideRatios) {
    for (int m = 2; m <= 6; ++m)
        for (double ratio : {1 + 1e-6, 1 + 1e-3, 2.0, 1e3, 1e6}) {
            const auto s = solve_psi(m, 1.0, ratio);
            EXPECT_LT(s.closed_form_discrepancy, 1e-10) << "m=" << m << " ratio=" << ratio;
            EXPECT_LT(s.residual_max(), 1e-10) << "m=" << m << " ratio=" << ratio;
            EXPECT_TRUE(certify_positivity(s).positive) << "m=" << m << " ratio=" << ratio;
        }
}

TEST(Positivity, Certificates) {
    const auto a = certify_positivity(solve_psi(2, 1, 2));
    EXPECT_TRUE(a.positive);
    EXPECT_TRUE(a.endpoint_slopes);
    EXPECT_EQ(a.derivative_sign_changes, 1);
    EXPECT_GT(a.grid_min, 0.0);
    EXPECT_FALSE(a.violating_t);

    const auto b = certify_positivity(solve_psi(5, 0.1, 7));
    EXPECT_TRUE(b.positive);
    ASSERT_TRUE(b.turning_point);
    EXPECT_GT(*b.turning_point, 0.1);
    EXPECT_LT(*b.turning_point, 7.0);

    const auto c = certify_positivity(solve_psi(3, 2, 2.001));
    EXPECT_TRUE(c.positive);
    EXPECT_GT(c.grid_min, 0.0);
}

TEST(Positivity, DetectsANegativeProfile) {
    PsiSolution s = solve_psi(2, 1, 2);
    s.A = -s.A;  // no longer a solution; Psi turns negative inside
    const auto cert = certify_positivity(s);
    EXPECT_FALSE(cert.positive);
    EXPECT_TRUE(cert.violating_t);
}

TEST(ScalarCurvature, ConstantsMatchSolve) {
    const auto k = scalar_curvature_constants(3, 1.0, 2.5);
    const auto s = solve_psi(3, 1.0, 2.5);
    EXPECT_EQ(k.c_target, s.c_coef);
    EXPECT_EQ(k.d_scal, s.d_coef);
}

TEST(ScalarCurvature, LargeRadiusLimit) {
    for (int m = 2; m <= 6; ++m) {
        const double c = solve_psi(m, 1e4, 1e4 + 1).c_coef;
        EXPECT_NEAR(c, 8.0 * m - 8.0, 1e-2) << m;
        EXPECT_GT(c, 8.0 * m - 8.0);
    }
    EXPECT_NEAR(solve_psi(3, 1e4, 1e4 + 1).c_coef, 16.0000000933, 1e-8);
    EXPECT_GT(solve_psi(2, 1e-3, 1 + 1e-3).c_coef, 1e3);
}

TEST(CmScan, MonotoneAndInvertible) {
    const auto r = cm_scan(2, 1e-4, 1e6, 201, 10.0);
    ASSERT_EQ(r.rows.size(), 201u);
    EXPECT_EQ(r.rows.front().t0, 1e-4);
    EXPECT_EQ(r.rows.back().t0, 1e6);
    EXPECT_TRUE(r.strictly_decreasing);
    EXPECT_GT(r.c_min, 8.0);
    EXPECT_TRUE(r.target_found);
    ASSERT_TRUE(r.t0_for_target);
    EXPECT_NEAR(*r.t0_for_target, (std::sqrt(5.0) - 1) / 2, 1e-10);
    EXPECT_NEAR(solve_psi(2, *r.t0_for_target, *r.t0_for_target + 1).c_coef, 10.0, 1e-8);

    for (double target : {8.5, 100.0}) {
        const auto t = cm_scan(2, 1e-4, 1e6, 201, target);
        ASSERT_TRUE(t.target_found);
        EXPECT_NEAR(*t.c_at_t0, target, 1e-8 * target);
    }
    const auto q = cm_scan(4, 1e-4, 1e6, 201, 25.0);
    ASSERT_TRUE(q.target_found);
    EXPECT_NEAR(solve_psi(4, *q.t0_for_target, *q.t0_for_target + 1).c_coef, 25.0, 1e-8);
}

TEST(CmScan, LimitIsNotAttained) {
    const auto r = cm_scan(2, 1e-4, 1e6, 201, 8.0);
    EXPECT_FALSE(r.target_found);
    EXPECT_FALSE(r.t0_for_target);
    EXPECT_GT(r.c_min, 8.0);
    for (std::size_t i = 1; i < r.rows.size(); ++i) EXPECT_LE(r.rows[i].c, r.rows[i - 1].c);
}

TEST(BundleOde, Errors) {
    EXPECT_THROW(solve_psi(1, 1, 2), DomainError);
    EXPECT_THROW(solve_psi(2, 0, 2), DomainError);
    EXPECT_THROW(solve_psi(2, 2, 2), DomainError);
    EXPECT_THROW(solve_psi(2, 3, 2), DomainError);
    EXPECT_THROW(psi_closed_form(2, -1, 2), DomainError);
    EXPECT_THROW(cm_scan(2, 1e-4, 1e6, 1), DomainError);
    EXPECT_THROW(cm_scan(2, 0, 1e6, 10), DomainError);
    EXPECT_THROW(cm_scan(1, 1e-4, 1e6, 10), DomainError);
}
