#pragma once

// Shared traversal for the closed-form integrals, generic over the scalar type so the same code
// serves double evaluation and exact rational evaluation.
//
// Interior: vertices are sorted by the level zeta = g.mu (g = (k1, k2)). Between consecutive levels
// the polygon is a trapezoid whose two sides lie on fixed edges; with s in [0,1] across the slab and
// tau in [0,1] across the section, mu(s, tau) is bilinear and
//     dmu = (zeta_b - zeta_a) * (g_perp . (hi(s) - lo(s))) / |g|^2  ds dtau,
//     f   = (1 - s) f_a + s f_b.
// The tau integral of a monomial is a polynomial in s, leaving a sum of 1D primitives
//     int_0^1 s^r ((1-s) u + s w)^-k ds.
// Boundary: each edge is parametrized on [0,1] and weighted by its lattice length.

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ckem/integrals.hpp"

namespace ckem::detail {

template <class T>
struct Vec2 {
    T x, y;
};

// Dense polynomial in (s, t): coefficient of s^a t^b at a * (dt + 1) + b.
template <class T>
struct Poly2 {
    int ds = 0;
    int dt = 0;
    std::vector<T> c;

    Poly2() : c(1, T(0)) {}
    Poly2(int ds_, int dt_) : ds(ds_), dt(dt_), c(static_cast<std::size_t>((ds_ + 1) * (dt_ + 1)), T(0)) {}

    static Poly2 constant(const T& v) {
        Poly2 p;
        p.c[0] = v;
        return p;
    }
    // c00 + c10 s + c01 t + c11 s t
    static Poly2 bilinear(const T& c00, const T& c10, const T& c01, const T& c11) {
        Poly2 p(1, 1);
        p.at(0, 0) = c00;
        p.at(1, 0) = c10;
        p.at(0, 1) = c01;
        p.at(1, 1) = c11;
        return p;
    }

    T& at(int a, int b) { return c[static_cast<std::size_t>(a * (dt + 1) + b)]; }
    const T& at(int a, int b) const { return c[static_cast<std::size_t>(a * (dt + 1) + b)]; }

    friend Poly2 operator*(const Poly2& x, const Poly2& y) {
        Poly2 r(x.ds + y.ds, x.dt + y.dt);
        for (int a = 0; a <= x.ds; ++a)
            for (int b = 0; b <= x.dt; ++b) {
                const T& xv = x.at(a, b);
                if (xv == T(0)) continue;
                for (int e = 0; e <= y.ds; ++e)
                    for (int g = 0; g <= y.dt; ++g) r.at(a + e, b + g) += xv * y.at(e, g);
            }
        return r;
    }
};

template <class T>
std::vector<Poly2<T>> powers(const Poly2<T>& base, int n) {
    std::vector<Poly2<T>> out;
    out.reserve(static_cast<std::size_t>(n + 1));
    out.push_back(Poly2<T>::constant(T(1)));
    for (int e = 1; e <= n; ++e) out.push_back(out.back() * base);
    return out;
}

// One piece (slab or edge): accumulate scale * int_0^1 weight(s) * [int_0^1 mu1^i mu2^j dtau] * f(s)^-k ds
// for every term, where weight(s) = w0 + w1 s and f(s) = u + s delta.
template <class Kernel>
void accumulate_piece(const Poly2<typename Kernel::T>& m1, const Poly2<typename Kernel::T>& m2,
                      const typename Kernel::T& w0, const typename Kernel::T& w1,
                      const typename Kernel::T& scale, const typename Kernel::T& u,
                      const typename Kernel::T& delta, std::span<const MonomialTerm> terms,
                      std::vector<typename Kernel::Acc>& out) {
    using T = typename Kernel::T;
    int max_i = 0, max_j = 0;
    for (const auto& t : terms) {
        max_i = std::max(max_i, t.i);
        max_j = std::max(max_j, t.j);
    }
    const auto p1 = powers(m1, max_i);
    const auto p2 = powers(m2, max_j);
    std::vector<T> in_s;
    for (std::size_t n = 0; n < terms.size(); ++n) {
        const auto& term = terms[n];
        const Poly2<T> q = p1[static_cast<std::size_t>(term.i)] * p2[static_cast<std::size_t>(term.j)];
        // integrate over the second variable, then multiply by the affine weight
        in_s.assign(static_cast<std::size_t>(q.ds + 2), T(0));
        for (int a = 0; a <= q.ds; ++a) {
            T acc(0);
            for (int b = 0; b <= q.dt; ++b) acc += q.at(a, b) / T(b + 1);
            in_s[static_cast<std::size_t>(a)] += acc * w0;
            in_s[static_cast<std::size_t>(a + 1)] += acc * w1;
        }
        for (std::size_t r = 0; r < in_s.size(); ++r)
            if (in_s[r] != T(0)) Kernel::add(out[n], scale * in_s[r], static_cast<int>(r), term.k, u, delta);
    }
}

template <class T>
Vec2<T> point_at_level(const Vec2<T>& P, const Vec2<T>& Q, const T& zP, const T& zQ, const T& z) {
    const T lam = (z - zP) / (zQ - zP);
    return {P.x + lam * (Q.x - P.x), P.y + lam * (Q.y - P.y)};
}

// Interior integrals over the polygon (CCW vertices) of mu^term f^-term.k, with f = g.mu + c0 and
// g != 0. Levels closer than merge_tol * span are treated as one.
template <class Kernel>
void interior_slabs(std::span<const Vec2<typename Kernel::T>> V, const typename Kernel::T& k1,
                    const typename Kernel::T& k2, const typename Kernel::T& c0,
                    std::span<const MonomialTerm> terms, std::vector<typename Kernel::Acc>& out,
                    const typename Kernel::T& merge_tol) {
    using T = typename Kernel::T;
    const std::size_t n = V.size();
    std::vector<T> zeta(n);
    for (std::size_t i = 0; i < n; ++i) zeta[i] = k1 * V[i].x + k2 * V[i].y;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return zeta[a] < zeta[b] || (zeta[a] == zeta[b] && a < b);
    });
    const T span = zeta[order.back()] - zeta[order.front()];
    const T min_gap = merge_tol * span;
    const T g2 = k1 * k1 + k2 * k2;

    for (std::size_t s = 0; s + 1 < n; ++s) {
        const T za = zeta[order[s]];
        const T zb = zeta[order[s + 1]];
        const T gap = zb - za;
        if (!(gap > min_gap) || gap == T(0)) continue;
        const T zm = (za + zb) / T(2);

        Vec2<T> ends[2][2];  // [side][level a/b]
        int found = 0;
        for (std::size_t e = 0; e < n && found < 2; ++e) {
            const std::size_t e2 = (e + 1) % n;
            const T& zp = zeta[e];
            const T& zq = zeta[e2];
            if ((zp < zm && zm < zq) || (zq < zm && zm < zp)) {
                ends[found][0] = point_at_level(V[e], V[e2], zp, zq, za);
                ends[found][1] = point_at_level(V[e], V[e2], zp, zq, zb);
                ++found;
            }
        }
        if (found != 2) throw std::logic_error("slab decomposition: level set does not cut two edges");

        // orient so the section runs along +g_perp, g_perp = (-k2, k1)
        auto perp = [&](const Vec2<T>& a, const Vec2<T>& b) { return -k2 * (b.x - a.x) + k1 * (b.y - a.y); };
        T la = perp(ends[0][0], ends[1][0]);
        T lb = perp(ends[0][1], ends[1][1]);
        if (la + lb < T(0)) {
            std::swap(ends[0][0], ends[1][0]);
            std::swap(ends[0][1], ends[1][1]);
            la = -la;
            lb = -lb;
        }
        const Vec2<T>& La = ends[0][0];
        const Vec2<T>& Lb = ends[0][1];
        const Vec2<T>& Ha = ends[1][0];
        const Vec2<T>& Hb = ends[1][1];
        const auto m1 = Poly2<T>::bilinear(La.x, Lb.x - La.x, Ha.x - La.x, (Hb.x - Lb.x) - (Ha.x - La.x));
        const auto m2 = Poly2<T>::bilinear(La.y, Lb.y - La.y, Ha.y - La.y, (Hb.y - Lb.y) - (Ha.y - La.y));
        const T w0 = la / g2;
        const T w1 = (lb - la) / g2;
        accumulate_piece<Kernel>(m1, m2, w0, w1, gap, za + c0, gap, terms, out);
    }
}

template <class Kernel>
void boundary_edges(std::span<const Vec2<typename Kernel::T>> V, std::span<const typename Kernel::T> lattice_length,
                    const typename Kernel::T& k1, const typename Kernel::T& k2, const typename Kernel::T& c0,
                    std::span<const MonomialTerm> terms, std::vector<typename Kernel::Acc>& out) {
    using T = typename Kernel::T;
    const std::size_t n = V.size();
    for (std::size_t e = 0; e < n; ++e) {
        const Vec2<T>& P = V[e];
        const Vec2<T>& Q = V[(e + 1) % n];
        const T dx = Q.x - P.x, dy = Q.y - P.y;
        const auto m1 = Poly2<T>::bilinear(P.x, dx, T(0), T(0));
        const auto m2 = Poly2<T>::bilinear(P.y, dy, T(0), T(0));
        const T u = k1 * P.x + k2 * P.y + c0;
        const T delta = k1 * dx + k2 * dy;
        accumulate_piece<Kernel>(m1, m2, T(1), T(0), lattice_length[e], u, delta, terms, out);
    }
}

}  // namespace ckem::detail
