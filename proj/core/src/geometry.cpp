#include "ckem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace ckem {

PositivityError::PositivityError(std::size_t vertex, double x, double y, double value)
    : DomainError([&] {
          std::ostringstream os;
          os.precision(17);
          os << "f is not positive on the polytope: f(v" << vertex << " = (" << x << ", " << y
             << ")) = " << value;
          return os.str();
      }()),
      vertex_(vertex), x_(x), y_(y), value_(value) {}

namespace {

Rational cross(const ExactPoint& a, const ExactPoint& b) { return a.x * b.y - a.y * b.x; }

ExactPoint sub(const ExactPoint& a, const ExactPoint& b) { return {a.x - b.x, a.y - b.y}; }

}  // namespace

Polytope Polytope::from_ccw(std::vector<ExactPoint> vertices, std::string label) {
    const std::size_t n = vertices.size();
    if (n < 3) throw InputError("a polygon needs at least 3 vertices");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (vertices[i].x == vertices[j].x && vertices[i].y == vertices[j].y)
                throw InputError("repeated vertex " + std::to_string(i) + " and " + std::to_string(j));

    // Strict convexity with CCW orientation: every other vertex lies strictly left of every edge.
    // This also excludes self-overlapping star polygons, which pass the consecutive-turn test.
    for (std::size_t i = 0; i < n; ++i) {
        const ExactPoint& a = vertices[i];
        const ExactPoint e = sub(vertices[(i + 1) % n], a);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || j == (i + 1) % n) continue;
            const int s = sign(cross(e, sub(vertices[j], a)));
            if (s == 0) throw InputError("collinear vertices at edge " + std::to_string(i));
            if (s < 0) throw InputError("vertices are not in strictly convex counterclockwise order");
        }
    }

    Polytope P;
    P.label_ = std::move(label);
    P.vertices_.reserve(n);
    for (const auto& v : vertices) {
        P.vertices_.push_back(v.to_double());
        P.radius_ = std::max(P.radius_, std::hypot(P.vertices_.back().x, P.vertices_.back().y));
    }

    Rational twice_area = 0;
    P.edges_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        const ExactPoint d = sub(vertices[j], vertices[i]);
        Edge e;
        e.start = i;
        e.end = j;
        e.lattice_length = rational_gcd(d.x, d.y);
        e.direction = {d.x / e.lattice_length, d.y / e.lattice_length};
        e.length = to_double(e.lattice_length);
        P.edges_.push_back(std::move(e));
        twice_area += cross(vertices[i], vertices[j]);
    }
    P.area_ = twice_area / 2;

    for (std::size_t i = 0; i < n; ++i) {
        const Edge& in = P.edges_[(i + n - 1) % n];
        const Edge& out = P.edges_[i];
        // Primitive vectors from the vertex along its two edges.
        const ExactPoint back{-in.direction.x, -in.direction.y};
        if (abs(cross(out.direction, back)) != 1) P.non_delzant_.push_back(i);
    }

    P.exact_ = std::move(vertices);
    return P;
}

Polytope Polytope::from_points(std::vector<ExactPoint> points, std::string label) {
    if (points.size() < 3) throw InputError("a polygon needs at least 3 vertices");
    Rational cx = 0, cy = 0;
    for (const auto& p : points) {
        cx += p.x;
        cy += p.y;
    }
    const Rational count(static_cast<long>(points.size()));
    const ExactPoint centroid{cx / count, cy / count};

    // Exact angular sort: half-plane first, then cross product.
    auto half = [&](const ExactPoint& d) { return (d.y < 0 || (d.y == 0 && d.x < 0)) ? 1 : 0; };
    std::vector<ExactPoint> rel;
    rel.reserve(points.size());
    for (const auto& p : points) {
        ExactPoint d = sub(p, centroid);
        if (d.x == 0 && d.y == 0) throw InputError("a vertex coincides with the centroid");
        rel.push_back(std::move(d));
    }
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const int ha = half(rel[a]), hb = half(rel[b]);
        if (ha != hb) return ha < hb;
        return cross(rel[a], rel[b]) > 0;
    });
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        const auto& a = rel[order[i]];
        const auto& b = rel[order[i + 1]];
        if (half(a) == half(b) && cross(a, b) == 0) throw InputError("two vertices at the same angle");
    }
    std::vector<ExactPoint> sorted;
    sorted.reserve(points.size());
    for (std::size_t i : order) sorted.push_back(std::move(points[i]));
    return from_ccw(std::move(sorted), std::move(label));
}

std::vector<double> vertex_values(const AffineFn& f, const Polytope& P) {
    std::vector<double> out;
    out.reserve(P.size());
    for (const auto& v : P.vertices()) out.push_back(f(v));
    return out;
}

std::vector<Rational> vertex_values(const ExactAffineFn& f, const Polytope& P) {
    std::vector<Rational> out;
    out.reserve(P.size());
    for (const auto& v : P.exact_vertices()) out.push_back(f(v));
    return out;
}

double margin(const AffineFn& f, const Polytope& P) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& v : P.vertices()) m = std::min(m, f(v));
    return m;
}

bool is_positive(const AffineFn& f, const Polytope& P) { return margin(f, P) > 0.0; }

bool is_positive(const ExactAffineFn& f, const Polytope& P) {
    for (const auto& v : P.exact_vertices())
        if (f(v) <= 0) return false;
    return true;
}

void require_positive(const AffineFn& f, const Polytope& P) {
    std::size_t worst = 0;
    double value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < P.size(); ++i) {
        const double fv = f(P.vertices()[i]);
        if (fv < value || std::isnan(fv)) {
            value = fv;
            worst = i;
            if (std::isnan(fv)) break;
        }
    }
    if (!(value > 0.0)) throw PositivityError(worst, P.vertices()[worst].x, P.vertices()[worst].y, value);
}

void require_positive(const ExactAffineFn& f, const Polytope& P) {
    for (std::size_t i = 0; i < P.size(); ++i) {
        const Rational fv = f(P.exact_vertices()[i]);
        if (fv <= 0) throw PositivityError(i, P.vertices()[i].x, P.vertices()[i].y, to_double(fv));
    }
}

SliceConstraint::SliceConstraint(double s1, double s2, double s0, const Polytope& P) : s_{s1, s2, s0} {
    for (double s : s_)
        if (!std::isfinite(s)) throw DomainError("slice coefficients must be finite");
    if (s0 == 0.0) throw DomainError("slice must involve c0 (s0 != 0)");
    // The constraint is nonpositive on the whole cone iff -s lies in the cone spanned by the
    // vertex rows (v, 1): s0 < 0 and (s1/s0, s2/s0) in the closed polygon.
    if (s0 < 0.0) {
        const ExactPoint q{to_rational(s1) / to_rational(s0), to_rational(s2) / to_rational(s0)};
        const auto V = P.exact_vertices();
        bool inside = true;
        for (std::size_t i = 0; i < V.size() && inside; ++i) {
            const ExactPoint e = sub(V[(i + 1) % V.size()], V[i]);
            if (cross(e, sub(q, V[i])) < 0) inside = false;
        }
        if (inside) throw DomainError("slice does not meet the positivity cone");
    }
}

SliceConstraint SliceConstraint::vertex_sum(const Polytope& P) {
    double sx = 0.0, sy = 0.0;
    for (const auto& v : P.exact_vertices()) {
        sx += to_double(v.x);
        sy += to_double(v.y);
    }
    return SliceConstraint(sx, sy, static_cast<double>(P.size()), P);
}

void SliceConstraint::require_on_slice(const AffineFn& f) const {
    const double scale = std::max(1.0, std::abs(s_[0] * f.k1) + std::abs(s_[1] * f.k2) + std::abs(s_[2] * f.c0));
    const double r = residual(f);
    if (!(std::abs(r) <= 1e-12 * scale)) {
        std::ostringstream os;
        os.precision(17);
        os << "point is off the slice (residual " << r << ")";
        throw ContractError(os.str());
    }
}

std::optional<AffineFn> SliceConstraint::project(const AffineFn& f) const noexcept {
    const double t = apply(f);
    if (!(t > 0.0) || !std::isfinite(t)) return std::nullopt;
    return (1.0 / t) * f;
}

std::string_view to_string(FamilyKind kind) noexcept {
    switch (kind) {
        case FamilyKind::cp2: return "cp2";
        case FamilyKind::p1xp1: return "p1xp1";
        case FamilyKind::blowup: return "blowup";
        case FamilyKind::hirzebruch: return "hirzebruch";
    }
    return "unknown";
}

std::optional<FamilyKind> parse_family_kind(std::string_view name) noexcept {
    for (FamilyKind k : {FamilyKind::cp2, FamilyKind::p1xp1, FamilyKind::blowup, FamilyKind::hirzebruch})
        if (name == to_string(k)) return k;
    return std::nullopt;
}

void Family::validate() const {
    switch (kind) {
        case FamilyKind::cp2: return;
        case FamilyKind::p1xp1:
            if (p < 1) throw DomainError("p1xp1 requires p >= 1");
            return;
        case FamilyKind::blowup:
            if (p <= 0 || p >= 1) throw DomainError("blowup requires 0 < p < 1");
            return;
        case FamilyKind::hirzebruch:
            if (p <= 0 || p >= 1) throw DomainError("hirzebruch requires 0 < p < 1");
            if (q < 1) throw DomainError("hirzebruch requires an integer q >= 1");
            return;
    }
}

std::string Family::name() const {
    std::ostringstream os;
    os.precision(17);
    os << to_string(kind);
    if (kind != FamilyKind::cp2) os << "(p=" << p_value();
    if (kind == FamilyKind::hirzebruch) os << ",q=" << q;
    if (kind != FamilyKind::cp2) os << ")";
    return os.str();
}

Polytope make_family(const Family& family) {
    family.validate();
    const Rational& p = family.p;
    const Rational q(family.q);
    std::vector<ExactPoint> v;
    switch (family.kind) {
        case FamilyKind::cp2: v = {{0, 0}, {1, 0}, {0, 1}}; break;
        case FamilyKind::p1xp1: v = {{0, 0}, {p, 0}, {p, 1}, {0, 1}}; break;
        case FamilyKind::blowup: v = {{0, 0}, {p, 0}, {p, 1 - p}, {0, 1}}; break;
        case FamilyKind::hirzebruch: v = {{0, 0}, {p, 0}, {p, (1 - p) * q}, {0, q}}; break;
    }
    return Polytope::from_ccw(std::move(v), family.name());
}

SliceConstraint family_slice(const Family& family, const Polytope& P) {
    const double p = family.p_value();
    const double q = family.q;
    switch (family.kind) {
        case FamilyKind::cp2: return SliceConstraint(1.0, 1.0, 3.0, P);
        case FamilyKind::p1xp1: return SliceConstraint(p, 1.0, 2.0, P);
        case FamilyKind::blowup: return SliceConstraint(2.0 * p, 2.0 - p, 4.0, P);
        case FamilyKind::hirzebruch: return SliceConstraint(2.0 * p, (2.0 - p) * q, 4.0, P);
    }
    throw DomainError("unknown family");
}

}  // namespace ckem
