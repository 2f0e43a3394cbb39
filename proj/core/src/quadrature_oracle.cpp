#include <cmath>

#include "ckem/integrals.hpp"
#include "summation.hpp"

namespace ckem {

namespace {

double integrand(const AffineFn& f, int k, Moment m, double x, double y) {
    return std::pow(x, m.i) * std::pow(y, m.j) * std::pow(f({x, y}), -k);
}

}  // namespace

double quadrature_oracle(const Polytope& P, const AffineFn& f, int k, Moment moment, int n, Region region) {
    if (n < 1) throw DomainError("quadrature subdivision count must be positive");
    require_positive(f, P);
    const auto V = P.vertices();
    detail::CompensatedSum sum;
    if (region == Region::boundary) {
        for (const auto& e : P.edges()) {
            const Point& a = V[e.start];
            const Point& b = V[e.end];
            detail::CompensatedSum edge;
            for (int c = 0; c < n; ++c) {
                const double t = (c + 0.5) / n;
                edge.add(integrand(f, k, moment, a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)));
            }
            sum.add(e.length * edge.value() / n);
        }
        return sum.value();
    }
    // fan from vertex 0; each triangle split into n^2 congruent sub-triangles
    for (std::size_t t = 1; t + 1 < V.size(); ++t) {
        const Point& A = V[0];
        const Point u{(V[t].x - A.x) / n, (V[t].y - A.y) / n};
        const Point w{(V[t + 1].x - A.x) / n, (V[t + 1].y - A.y) / n};
        const double cell_area = 0.5 * std::abs(u.x * w.y - u.y * w.x);
        detail::CompensatedSum tri;
        for (int a = 0; a < n; ++a)
            for (int b = 0; a + b < n; ++b) {
                // upward cell (a,b),(a+1,b),(a,b+1): centroid at (a+1/3, b+1/3)
                double ca = a + 1.0 / 3.0, cb = b + 1.0 / 3.0;
                tri.add(integrand(f, k, moment, A.x + ca * u.x + cb * w.x, A.y + ca * u.y + cb * w.y));
                if (a + b + 2 <= n) {
                    // downward cell (a+1,b),(a,b+1),(a+1,b+1)
                    ca = a + 2.0 / 3.0;
                    cb = b + 2.0 / 3.0;
                    tri.add(integrand(f, k, moment, A.x + ca * u.x + cb * w.x, A.y + ca * u.y + cb * w.y));
                }
            }
        sum.add(cell_area * tri.value());
    }
    return sum.value();
}

}  // namespace ckem
