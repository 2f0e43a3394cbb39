#include <gtest/gtest.h>

#include <random>

#include "ckem/bundle_ode.hpp"
#include "ckem/functional.hpp"
#include "oracles.hpp"

using namespace ckem;

namespace {

struct Case {
    Family family;
    Polytope P;
    SliceConstraint slice;
    explicit Case(const Family& f) : family(f), P(make_family(f)), slice(family_slice(f, P)) {}
};

std::vector<Case> random_cases(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> U(0.05, 0.95), R(1.0, 5.0);
    std::vector<Case> out;
    out.emplace_back(Family::cp2());
    for (int i = 0; i < n; ++i) {
        out.emplace_back(Family::p1xp1(R(rng)));
        out.emplace_back(Family::blowup(U(rng)));
        out.emplace_back(Family::hirzebruch(U(rng), 2 + i % 3));
    }
    return out;
}

}  // namespace

TEST(Properties, VertexValuesAreExactlyLinear) {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> N(-50, 50), D(1, 30);
    auto q = [&] { return Rational(N(rng), D(rng)); };
    for (const auto& c : random_cases(rng, 3)) {
        for (int i = 0; i < 10; ++i) {
            const ExactAffineFn f{q(), q(), q()}, g{q(), q(), q()};
            const Rational C = q();
            const auto vf = vertex_values(f, c.P), vg = vertex_values(g, c.P), vs = vertex_values(f + g, c.P),
                       vc = vertex_values(C * f, c.P);
            for (std::size_t j = 0; j < vf.size(); ++j) {
                EXPECT_EQ(vs[j], vf[j] + vg[j]);
                EXPECT_EQ(vc[j], C * vf[j]);
            }
        }
    }
}

TEST(Properties, ConeIsClosedUnderPositiveScaling) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> C(1e-3, 1e3);
    for (const auto& c : random_cases(rng, 3)) {
        const PositivityCone cone(c.P);
        for (int i = 0; i < 20; ++i) {
            const AffineFn f = oracle::random_cone_point(c.P, rng, 2.0, 1e-3, 1.0);
            ASSERT_TRUE(cone.contains(f));
            EXPECT_TRUE(cone.contains(C(rng) * f));
            EXPECT_FALSE(cone.contains(-1.0 * f));
        }
    }
}

TEST(Properties, SliceMeetsEachRayOnce) {
    std::mt19937_64 rng(43);
    for (const auto& c : random_cases(rng, 3)) {
        for (int i = 0; i < 20; ++i) {
            const AffineFn f = oracle::random_cone_point(c.P, rng);
            const auto g = c.slice.project(f);
            ASSERT_TRUE(g);
            EXPECT_NEAR(c.slice.residual(*g), 0.0, 1e-14);
            const double t = g->c0 / f.c0;
            EXPECT_GT(t, 0.0);
            EXPECT_NEAR(g->k1, t * f.k1, 1e-14 * (1 + std::abs(g->k1)));
            const auto h = c.slice.project(5.0 * f);
            EXPECT_NEAR(h->k1, g->k1, 1e-14 * (1 + std::abs(g->k1)));
            EXPECT_NEAR(h->c0, g->c0, 1e-14 * (1 + std::abs(g->c0)));
        }
    }
}

TEST(Properties, IntegralsArePositiveAndHomogeneous) {
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> C(0.01, 100);
    for (const auto& c : random_cases(rng, 3)) {
        for (int i = 0; i < 10; ++i) {
            const AffineFn f = oracle::random_cone_point(c.P, rng);
            const double s = C(rng);
            for (int k : {2, 3, 4, 5}) {
                const double v = interior_power_integral(c.P, f, k).value;
                const double b = boundary_power_integral(c.P, f, k).value;
                EXPECT_GT(v, 0.0);
                EXPECT_GT(b, 0.0);
                EXPECT_NEAR(interior_power_integral(c.P, s * f, k).value * std::pow(s, k), v, 1e-12 * v);
                EXPECT_NEAR(boundary_power_integral(c.P, s * f, k).value * std::pow(s, k), b, 1e-12 * b);
            }
        }
    }
}

TEST(Properties, FunctionalConstantsArePositive) {
    std::mt19937_64 rng(45);
    for (const auto& c : random_cases(rng, 3)) {
        for (int i = 0; i < 10; ++i) {
            const AffineFn f = oracle::random_slice_point(c.P, c.slice, rng, 2.0);
            const auto r = volume_functional(c.P, f, &c.slice);
            EXPECT_GT(r.d_const, 0.0);
            EXPECT_GT(r.c_const, 0.0);
            EXPECT_NEAR(r.V2, r.V * r.V, 1e-14 * r.V2);
            for (double C : {1e-3, 1.0, 1e3}) EXPECT_NEAR(volume(c.P, C * f), r.V, 1e-13 * r.V);
        }
    }
}

TEST(Properties, NonCriticalPointsHaveNonzeroFutaki) {
    // gradient and obstruction vanish together; away from critical points both are nonzero
    std::mt19937_64 rng(46);
    int checked = 0;
    for (const auto& c : random_cases(rng, 4)) {
        for (int i = 0; i < 10; ++i) {
            const AffineFn f = oracle::random_slice_point(c.P, c.slice, rng);
            const auto g = slice_gradient(c.P, f, c.slice);
            const double V2 = volume_functional(c.P, f).V2;
            if (std::hypot(g[0], g[1]) < 1e-3 * V2) continue;
            ++checked;
            const AffineFn n = normalize_to_tilde(c.P, f);
            const Vec3 F = futaki_invariant(c.P, n);
            EXPECT_GT(std::hypot(F[0], F[1], F[2]), 1e-8) << c.family.name();
            const double dv = volume_c0_derivative(c.P, f);
            const double gap = c_constant(c.P, f) - d_constant(c.P, f);
            if (std::abs(gap) > 1e-10 * d_constant(c.P, f)) {
                EXPECT_NE(dv > 0, gap > 0);
            }
        }
    }
    EXPECT_GT(checked, 50);
}

TEST(Properties, ProfileSolutionsArePositive) {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> lt(-4, 4), gap(-6, 6);
    for (int m = 2; m <= 8; ++m)
        for (int i = 0; i < 30; ++i) {
            const double t0 = std::pow(10.0, lt(rng));
            const double t1 = t0 * (1 + std::pow(10.0, gap(rng)));
            if (!(t1 > t0)) continue;
            const auto s = solve_psi(m, t0, t1);
            const auto cert = certify_positivity(s);
            EXPECT_TRUE(cert.positive) << "m=" << m << " [" << t0 << ", " << t1 << "]";
            EXPECT_EQ(cert.derivative_sign_changes, 1);
        }
}
