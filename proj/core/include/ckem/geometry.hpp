#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ckem/errors.hpp"
#include "ckem/rational.hpp"

namespace ckem {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct ExactPoint {
    Rational x;
    Rational y;

    Point to_double() const { return {ckem::to_double(x), ckem::to_double(y)}; }
    static ExactPoint from_double(double x, double y) { return {to_rational(x), to_rational(y)}; }
};

struct Edge {
    std::size_t start = 0;
    std::size_t end = 0;
    ExactPoint direction;      // primitive: integer coprime components
    Rational lattice_length;   // end - start == lattice_length * direction
    double length = 0.0;       // lattice_length as a double
};

class Polytope {
public:
    // Vertices must already be counterclockwise and strictly convex.
    static Polytope from_ccw(std::vector<ExactPoint> vertices, std::string label = {});
    // Any order; sorted counterclockwise by angle about the vertex centroid.
    static Polytope from_points(std::vector<ExactPoint> points, std::string label = {});

    std::size_t size() const noexcept { return vertices_.size(); }
    std::span<const Point> vertices() const noexcept { return vertices_; }
    std::span<const ExactPoint> exact_vertices() const noexcept { return exact_; }
    std::span<const Edge> edges() const noexcept { return edges_; }
    const std::string& label() const noexcept { return label_; }

    const Rational& exact_area() const noexcept { return area_; }
    double area() const noexcept { return to_double(area_); }
    // Largest vertex distance from the origin.
    double radius() const noexcept { return radius_; }

    // Vertices whose two primitive edge vectors do not form a lattice basis.
    const std::vector<std::size_t>& non_delzant_vertices() const noexcept { return non_delzant_; }
    bool is_delzant() const noexcept { return non_delzant_.empty(); }

private:
    Polytope() = default;

    std::vector<ExactPoint> exact_;
    std::vector<Point> vertices_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> non_delzant_;
    Rational area_;
    double radius_ = 0.0;
    std::string label_;
};

struct AffineFn {
    double k1 = 0.0;
    double k2 = 0.0;
    double c0 = 0.0;

    double operator()(const Point& p) const noexcept { return k1 * p.x + k2 * p.y + c0; }
    std::array<double, 3> coeffs() const noexcept { return {k1, k2, c0}; }
    static AffineFn from_coeffs(const std::array<double, 3>& c) noexcept { return {c[0], c[1], c[2]}; }

    friend AffineFn operator+(const AffineFn& a, const AffineFn& b) noexcept {
        return {a.k1 + b.k1, a.k2 + b.k2, a.c0 + b.c0};
    }
    friend AffineFn operator*(double s, const AffineFn& a) noexcept { return {s * a.k1, s * a.k2, s * a.c0}; }
    friend bool operator==(const AffineFn&, const AffineFn&) = default;
};

struct ExactAffineFn {
    Rational k1;
    Rational k2;
    Rational c0;

    Rational operator()(const ExactPoint& p) const { return k1 * p.x + k2 * p.y + c0; }
    AffineFn to_double() const { return {ckem::to_double(k1), ckem::to_double(k2), ckem::to_double(c0)}; }
    static ExactAffineFn from_double(const AffineFn& f) {
        return {to_rational(f.k1), to_rational(f.k2), to_rational(f.c0)};
    }

    friend ExactAffineFn operator+(const ExactAffineFn& a, const ExactAffineFn& b) {
        return {a.k1 + b.k1, a.k2 + b.k2, a.c0 + b.c0};
    }
    friend ExactAffineFn operator*(const Rational& s, const ExactAffineFn& a) {
        return {s * a.k1, s * a.k2, s * a.c0};
    }
    friend bool operator==(const ExactAffineFn&, const ExactAffineFn&) = default;
};

std::vector<double> vertex_values(const AffineFn& f, const Polytope& P);
std::vector<Rational> vertex_values(const ExactAffineFn& f, const Polytope& P);

// Strict floating comparison of the minimum vertex value against zero.
bool is_positive(const AffineFn& f, const Polytope& P);
// Exact comparison.
bool is_positive(const ExactAffineFn& f, const Polytope& P);

// Smallest vertex value (the distance-like margin to the cone boundary).
double margin(const AffineFn& f, const Polytope& P);

// Throws PositivityError naming the first vertex with the smallest value when f <= 0 there.
void require_positive(const AffineFn& f, const Polytope& P);
void require_positive(const ExactAffineFn& f, const Polytope& P);

// {f : f > 0 on P}; keeps a reference, so P must outlive the cone.
class PositivityCone {
public:
    explicit PositivityCone(const Polytope& P) noexcept : P_(&P) {}

    const Polytope& polytope() const noexcept { return *P_; }
    bool contains(const AffineFn& f) const { return is_positive(f, *P_); }
    bool contains(const ExactAffineFn& f) const { return is_positive(f, *P_); }
    double margin(const AffineFn& f) const { return ckem::margin(f, *P_); }

private:
    const Polytope* P_;
};

// s1*k1 + s2*k2 + s0*c0 = 1, with s0 != 0 so c0 can be eliminated.
class SliceConstraint {
public:
    // Throws DomainError when s0 == 0 or the constraint is nonpositive on the whole cone.
    SliceConstraint(double s1, double s2, double s0, const Polytope& P);

    // Sum of f over the vertices equals 1.
    static SliceConstraint vertex_sum(const Polytope& P);

    double s1() const noexcept { return s_[0]; }
    double s2() const noexcept { return s_[1]; }
    double s0() const noexcept { return s_[2]; }
    const std::array<double, 3>& coeffs() const noexcept { return s_; }

    double apply(const AffineFn& f) const noexcept { return s_[0] * f.k1 + s_[1] * f.k2 + s_[2] * f.c0; }
    double residual(const AffineFn& f) const noexcept { return apply(f) - 1.0; }
    // Throws ContractError when |residual| exceeds 1e-12 relative to the magnitude of the terms.
    void require_on_slice(const AffineFn& f) const;

    AffineFn at(double k1, double k2) const noexcept { return {k1, k2, (1.0 - s_[0] * k1 - s_[1] * k2) / s_[2]}; }
    double c0_for(double k1, double k2) const noexcept { return at(k1, k2).c0; }
    // Derivative of c0 with respect to (k1, k2) along the slice.
    std::array<double, 2> c0_gradient() const noexcept { return {-s_[0] / s_[2], -s_[1] / s_[2]}; }
    // Point of the slice on the ray through f; nullopt when the ray misses it.
    std::optional<AffineFn> project(const AffineFn& f) const noexcept;

private:
    std::array<double, 3> s_;
};

enum class FamilyKind { cp2, p1xp1, blowup, hirzebruch };

std::string_view to_string(FamilyKind kind) noexcept;
std::optional<FamilyKind> parse_family_kind(std::string_view name) noexcept;

struct Family {
    FamilyKind kind = FamilyKind::cp2;
    Rational p = 1;
    int q = 1;

    double p_value() const { return to_double(p); }
    // Throws DomainError naming the family's constraint.
    void validate() const;
    std::string name() const;

    static Family cp2() { return {FamilyKind::cp2, 1, 1}; }
    static Family p1xp1(double p) { return {FamilyKind::p1xp1, to_rational(p), 1}; }
    static Family blowup(double p) { return {FamilyKind::blowup, to_rational(p), 1}; }
    static Family hirzebruch(double p, int q) { return {FamilyKind::hirzebruch, to_rational(p), q}; }
};

Polytope make_family(const Family& family);

// The family's standard slice: a+b+3c=1 (cp2), b+pa+2c=1 (p1xp1), (2-p)b+2pa+4c=1 (blowup),
// (2-p)qb+2pa+4c=1 (hirzebruch).
SliceConstraint family_slice(const Family& family, const Polytope& P);

}  // namespace ckem
