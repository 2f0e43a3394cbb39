#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "ckem/geometry.hpp"
#include "ckem/integrals.hpp"

namespace ckem {

// Complex dimension of the toric surface; all polytope computations use it.
inline constexpr int kComplexDimension = 2;

// Reports carry this tag: integrals, d, c and Futaki components omit the (2 pi)^m / m! factor;
// only V carries its 4 pi / (m!)^(1/m) prefactor.
inline constexpr std::string_view kConvention = "bare-2pi";

using Vec2d = std::array<double, 2>;
using Mat2 = std::array<Vec2d, 2>;

struct FunctionalValue {
    double V = 0.0;
    double V2 = 0.0;
    double d_const = 0.0;
    double c_const = 0.0;
    Vec3 futaki{};             // components on mu1, mu2, 1
    Vec3 grad_V2_full{};       // in (k1, k2, c0)
    std::optional<Vec2d> grad_V2_slice;
    double dV_dc0 = 0.0;       // at fixed (k1, k2)
    ConditionFlag condition_flag = ConditionFlag::exact;
};

// V = 2 sqrt2 pi * B / sqrt(I) with B the boundary integral of f^-2 and I the interior integral of f^-4.
// With a slice, f must lie on it and grad_V2_slice is filled.
FunctionalValue volume_functional(const Polytope& P, const AffineFn& f, const SliceConstraint* slice = nullptr);

double volume(const Polytope& P, const AffineFn& f);
double d_constant(const Polytope& P, const AffineFn& f);
double c_constant(const Polytope& P, const AffineFn& f);
Vec3 futaki_invariant(const Polytope& P, const AffineFn& f);
// Futaki invariant on the potential h = h.k1 mu1 + h.k2 mu2 + h.c0.
double futaki_on(const Polytope& P, const AffineFn& f, const AffineFn& h);

// C f with C = d^(-1/2), so d_constant of the result is 1.
AffineFn normalize_to_tilde(const Polytope& P, const AffineFn& f);

// Gradient of V^2 in (k1, k2) with c0 eliminated by the slice. Throws ContractError off the slice.
Vec2d slice_gradient(const Polytope& P, const AffineFn& f, const SliceConstraint& slice);

struct V2Derivatives {
    double V2 = 0.0;
    Vec3 grad{};
    Mat3 hessian{};
};

V2Derivatives v2_derivatives(const Polytope& P, const AffineFn& f);

struct SliceModel {
    double V2 = 0.0;
    Vec2d grad{};
    Mat2 hessian{};
};

SliceModel slice_model(const Polytope& P, const AffineFn& f, const SliceConstraint& slice);

// Analytic c0-derivative of V at fixed (k1, k2); equals -2 sqrt2 pi I5 / sqrt(I4) * (c - d) where
// I5, I4 are the interior integrals of f^-5 and f^-4.
double volume_c0_derivative(const Polytope& P, const AffineFn& f);

}  // namespace ckem
