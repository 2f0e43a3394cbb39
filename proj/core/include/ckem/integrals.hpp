#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ckem/geometry.hpp"
#include "ckem/rational.hpp"

namespace ckem {

// Integrals here are bare: no (2 pi)^m / m! factors. Boundary integrals use the lattice measure,
// under which every edge has total mass equal to its lattice length.

enum class Region { interior, boundary };

std::string_view to_string(Region region) noexcept;

enum class ConditionFlag {
    exact,                     // closed form throughout
    near_degenerate_fallback,  // f numerically constant: c^-k times the polytope moment
};

std::string_view to_string(ConditionFlag flag) noexcept;

// Integrand mu1^i * mu2^j.
struct Moment {
    int i = 0;
    int j = 0;
    friend bool operator==(const Moment&, const Moment&) = default;
};

enum class Derivatives { none, gradient, hessian };

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

// Value of the integral of mu^moment * f^-k and its derivatives in (k1, k2, c0).
struct IntegralReport {
    double value = 0.0;
    Vec3 grad{};
    std::optional<Mat3> hessian;
    ConditionFlag condition_flag = ConditionFlag::exact;
};

// Preconditions: f > 0 on P (PositivityError otherwise), k >= 1 and i + j <= 2 (DomainError).
IntegralReport boundary_power_integral(const Polytope& P, const AffineFn& f, int k, Moment moment = {},
                                       Derivatives derivatives = Derivatives::gradient);
IntegralReport interior_power_integral(const Polytope& P, const AffineFn& f, int k, Moment moment = {},
                                       Derivatives derivatives = Derivatives::gradient);
IntegralReport power_integral(Region region, const Polytope& P, const AffineFn& f, int k, Moment moment = {},
                              Derivatives derivatives = Derivatives::gradient);

// Exact value: rational_part + log_part. When no logarithm arises (the usual case, pure negative
// powers with k >= degree + 2) log_part is 0 and hybrid is false; otherwise the rational
// coefficients are exact and the logarithms are evaluated in floating point.
struct ExactIntegral {
    Rational rational_part;
    double log_part = 0.0;
    bool hybrid = false;
    ConditionFlag condition_flag = ConditionFlag::exact;

    double value() const { return to_double(rational_part) + log_part; }
};

ExactIntegral boundary_power_integral_exact(const Polytope& P, const ExactAffineFn& f, int k, Moment moment = {});
ExactIntegral interior_power_integral_exact(const Polytope& P, const ExactAffineFn& f, int k, Moment moment = {});

// Batch form of the kernel: integrals of mu1^i mu2^j f^-k for each term, sharing one traversal
// of the polytope. No degree limit; k >= 0.
struct MonomialTerm {
    int i = 0;
    int j = 0;
    int k = 0;
};

struct TermValues {
    std::vector<double> values;
    ConditionFlag condition_flag = ConditionFlag::exact;
};

TermValues integrate_terms(Region region, const Polytope& P, const AffineFn& f, std::span<const MonomialTerm> terms);

// Exact polygon moment of mu1^i mu2^j (area for (0,0), perimeter in lattice measure on the boundary).
Rational polytope_moment(Region region, const Polytope& P, Moment moment = {});

// Independent check: fan triangulation with n*n barycentric sub-cells and the centroid rule, or
// the midpoint rule with n cells per edge on the boundary. Error O(n^-2).
double quadrature_oracle(const Polytope& P, const AffineFn& f, int k, Moment moment, int n,
                         Region region = Region::interior);

// t^r ((1-t) u + t w)^-k integrated over [0, 1], with w = u + delta; u, w > 0.
double segment_primitive(int r, int k, double u, double delta);

}  // namespace ckem
