#include "ckem/functional.hpp"

#include <cmath>
#include <numbers>

namespace ckem {

namespace {

constexpr double kPi = std::numbers::pi;
const double kVPrefactor = 2.0 * std::numbers::sqrt2 * kPi;  // 4 pi / sqrt(2!)

// Boundary integral of f^-(2m-2), interior of f^-2m, and the gradients that also give the k = 3, 5 moments.
struct Pieces {
    IntegralReport B;
    IntegralReport I;

    double Vol() const { return I.value; }
    // boundary / interior integrals of h f^-3 and h f^-5 for h = mu1, mu2, 1
    double b3(int a) const { return -B.grad[a] / 2.0; }
    double i5(int a) const { return -I.grad[a] / 4.0; }
    double d() const { return 2.0 * B.value / I.value; }
    double c() const { return 2.0 * b3(2) / i5(2); }
};

Pieces pieces(const Polytope& P, const AffineFn& f, Derivatives level) {
    return {boundary_power_integral(P, f, 2 * kComplexDimension - 2, {}, level),
            interior_power_integral(P, f, 2 * kComplexDimension, {}, level)};
}

Vec3 v2_gradient(const Pieces& p) {
    const double B = p.B.value, I = p.I.value;
    Vec3 g{};
    for (int a = 0; a < 3; ++a) g[a] = 8.0 * kPi * kPi * (2.0 * B * p.B.grad[a] / I - B * B * p.I.grad[a] / (I * I));
    return g;
}

Vec2d restrict_gradient(const Vec3& g, const SliceConstraint& slice) {
    const auto dc = slice.c0_gradient();
    return {g[0] + g[2] * dc[0], g[1] + g[2] * dc[1]};
}

}  // namespace

FunctionalValue volume_functional(const Polytope& P, const AffineFn& f, const SliceConstraint* slice) {
    if (slice) slice->require_on_slice(f);
    const Pieces p = pieces(P, f, Derivatives::gradient);
    FunctionalValue out;
    const double B = p.B.value, I = p.I.value;
    out.V = kVPrefactor * B / std::sqrt(I);
    out.V2 = 8.0 * kPi * kPi * B * B / I;
    out.d_const = p.d();
    out.c_const = p.c();
    for (int a = 0; a < 3; ++a) out.futaki[a] = 2.0 * p.b3(a) - out.c_const * p.i5(a);
    out.grad_V2_full = v2_gradient(p);
    if (slice) out.grad_V2_slice = restrict_gradient(out.grad_V2_full, *slice);
    out.dV_dc0 = -kVPrefactor * p.i5(2) / std::sqrt(I) * (out.c_const - out.d_const);
    out.condition_flag = p.I.condition_flag;
    return out;
}

double volume(const Polytope& P, const AffineFn& f) {
    const double B = boundary_power_integral(P, f, 2, {}, Derivatives::none).value;
    const double I = interior_power_integral(P, f, 4, {}, Derivatives::none).value;
    return kVPrefactor * B / std::sqrt(I);
}

double d_constant(const Polytope& P, const AffineFn& f) {
    const double B = boundary_power_integral(P, f, 2, {}, Derivatives::none).value;
    const double I = interior_power_integral(P, f, 4, {}, Derivatives::none).value;
    return 2.0 * B / I;
}

double c_constant(const Polytope& P, const AffineFn& f) {
    const double B3 = boundary_power_integral(P, f, 3, {}, Derivatives::none).value;
    const double I5 = interior_power_integral(P, f, 5, {}, Derivatives::none).value;
    return 2.0 * B3 / I5;
}

Vec3 futaki_invariant(const Polytope& P, const AffineFn& f) { return volume_functional(P, f).futaki; }

double futaki_on(const Polytope& P, const AffineFn& f, const AffineFn& h) {
    const Vec3 F = futaki_invariant(P, f);
    return h.k1 * F[0] + h.k2 * F[1] + h.c0 * F[2];
}

AffineFn normalize_to_tilde(const Polytope& P, const AffineFn& f) {
    return (1.0 / std::sqrt(d_constant(P, f))) * f;
}

Vec2d slice_gradient(const Polytope& P, const AffineFn& f, const SliceConstraint& slice) {
    slice.require_on_slice(f);
    return restrict_gradient(v2_gradient(pieces(P, f, Derivatives::gradient)), slice);
}

V2Derivatives v2_derivatives(const Polytope& P, const AffineFn& f) {
    const Pieces p = pieces(P, f, Derivatives::hessian);
    const double B = p.B.value, I = p.I.value;
    const Vec3& gB = p.B.grad;
    const Vec3& gI = p.I.grad;
    const Mat3& HB = *p.B.hessian;
    const Mat3& HI = *p.I.hessian;
    V2Derivatives out;
    const double s = 8.0 * kPi * kPi;
    out.V2 = s * B * B / I;
    out.grad = v2_gradient(p);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            out.hessian[a][b] = s * (2.0 * gB[a] * gB[b] / I + 2.0 * B * HB[a][b] / I
                                     - 2.0 * B * (gB[a] * gI[b] + gI[a] * gB[b]) / (I * I)
                                     - B * B * HI[a][b] / (I * I) + 2.0 * B * B * gI[a] * gI[b] / (I * I * I));
    return out;
}

SliceModel slice_model(const Polytope& P, const AffineFn& f, const SliceConstraint& slice) {
    slice.require_on_slice(f);
    const V2Derivatives full = v2_derivatives(P, f);
    const auto dc = slice.c0_gradient();
    // columns of the 3x2 Jacobian of (k1, k2) -> (k1, k2, c0(k1, k2))
    const double J[3][2] = {{1.0, 0.0}, {0.0, 1.0}, {dc[0], dc[1]}};
    SliceModel m;
    m.V2 = full.V2;
    m.grad = restrict_gradient(full.grad, slice);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double h = 0.0;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) h += J[a][i] * full.hessian[a][b] * J[b][j];
            m.hessian[i][j] = h;
        }
    m.hessian[0][1] = m.hessian[1][0] = 0.5 * (m.hessian[0][1] + m.hessian[1][0]);
    return m;
}

double volume_c0_derivative(const Polytope& P, const AffineFn& f) { return volume_functional(P, f).dV_dc0; }

}  // namespace ckem
