#include "ckem/integrals.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "slab_kernel.hpp"
#include "summation.hpp"

namespace ckem {

std::string_view to_string(Region region) noexcept {
    return region == Region::interior ? "interior" : "boundary";
}

std::string_view to_string(ConditionFlag flag) noexcept {
    return flag == ConditionFlag::exact ? "exact" : "near_degenerate_fallback";
}

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

long long ibinomial(int n, int k) {
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// r! (k-r-2)! / (k-1)! = 1 / ((k-1) C(k-2, r))
double closed_form_prefactor(int r, int k) { return 1.0 / ((k - 1) * binomial(k - 2, r)); }

}  // namespace

double segment_primitive(int r, int k, double u, double delta) {
    if (k == 0) return 1.0 / (r + 1);
    const double w = u + delta;
    if (k >= r + 2) {
        // r!(k-r-2)!/(k-1)! * u^-1 w^-(r+1) * sum_{i=0}^{m} u^-i C(m-i+r, r) w^-(m-i), all terms positive
        const int m = k - r - 2;
        const double iu = 1.0 / u, iw = 1.0 / w;
        double h = 0.0, ui = 1.0;
        for (int i = 0; i <= m; ++i) {
            h += ui * binomial(m - i + r, r) * std::pow(iw, m - i);
            ui *= iu;
        }
        return closed_form_prefactor(r, k) * iu * std::pow(iw, r + 1) * h;
    }
    const double d = delta / u;
    const double uk = std::pow(u, -k);
    if (std::abs(d) < 0.5) {
        // binomial series in d; terms decay like |d|^n
        double term = 1.0, sum = 0.0;
        for (int n = 0; n < 400; ++n) {
            const double add = term / (r + n + 1);
            sum += add;
            if (std::abs(add) <= 1e-17 * std::abs(sum)) break;
            term *= -d * (k + n) / (n + 1);
        }
        return uk * sum;
    }
    // t = (v - 1)/d: int_1^{1+d} (v-1)^r v^-k dv / d^(r+1)
    const double v1 = 1.0 + d;
    detail::CompensatedSum sum;
    for (int i = 0; i <= r; ++i) {
        const int e = i - k + 1;
        const double J = e == 0 ? std::log1p(d) : (std::pow(v1, e) - 1.0) / e;
        sum.add(binomial(r, i) * (((r - i) % 2) ? -1.0 : 1.0) * J);
    }
    return uk * sum.value() / std::pow(d, r + 1);
}

namespace {

struct FloatKernel {
    using T = double;
    using Acc = detail::CompensatedSum;
    static void add(Acc& acc, double weight, int r, int k, double u, double delta) {
        acc.add(weight * segment_primitive(r, k, u, delta));
    }
};

Rational rpow(const Rational& x, int n) {
    Rational r = 1;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

struct ExactKernel {
    using T = Rational;
    struct Acc {
        Rational rational = 0;
        detail::CompensatedSum log;
        bool hybrid = false;
    };
    static void add(Acc& acc, const Rational& weight, int r, int k, const Rational& u, const Rational& delta) {
        if (k == 0) {
            acc.rational += weight / (r + 1);
            return;
        }
        const Rational w = u + delta;
        if (k >= r + 2) {
            const int m = k - r - 2;
            const Rational iu = 1 / u, iw = 1 / w;
            Rational h = 0, ui = 1;
            for (int i = 0; i <= m; ++i) {
                h += ui * Rational(ibinomial(m - i + r, r)) * rpow(iw, m - i);
                ui *= iu;
            }
            const Rational pref = Rational(1) / (Rational(k - 1) * ibinomial(k - 2, r));
            acc.rational += weight * pref * iu * rpow(iw, r + 1) * h;
            return;
        }
        const Rational uk = 1 / rpow(u, k);
        if (delta == 0) {
            acc.rational += weight * uk / (r + 1);
            return;
        }
        const Rational d = delta / u;
        const Rational v1 = 1 + d;
        const Rational pref = weight * uk / rpow(d, r + 1);
        for (int i = 0; i <= r; ++i) {
            const int e = i - k + 1;
            const Rational coef = pref * ibinomial(r, i) * (((r - i) % 2) ? -1 : 1);
            if (e == 0) {
                acc.log.add(to_double(coef) * std::log1p(to_double(d)));
                acc.hybrid = true;
            } else if (e > 0) {
                acc.rational += coef * (rpow(v1, e) - 1) / e;
            } else {
                acc.rational += coef * (1 / rpow(v1, -e) - 1) / e;
            }
        }
    }
};

std::vector<detail::Vec2<double>> float_vertices(const Polytope& P) {
    std::vector<detail::Vec2<double>> v;
    v.reserve(P.size());
    for (const auto& p : P.vertices()) v.push_back({p.x, p.y});
    return v;
}

std::vector<detail::Vec2<Rational>> exact_vertices(const Polytope& P) {
    std::vector<detail::Vec2<Rational>> v;
    v.reserve(P.size());
    for (const auto& p : P.exact_vertices()) v.push_back({p.x, p.y});
    return v;
}

bool numerically_constant(const Polytope& P, const AffineFn& f) {
    return std::hypot(f.k1, f.k2) * std::max(1.0, P.radius()) < 1e-12 * std::abs(f.c0);
}

std::vector<Rational> exact_moments(Region region, const Polytope& P, std::span<const MonomialTerm> terms) {
    std::vector<MonomialTerm> flat(terms.begin(), terms.end());
    for (auto& t : flat) t.k = 0;
    std::vector<ExactKernel::Acc> acc(flat.size());
    const auto V = exact_vertices(P);
    if (region == Region::interior) {
        detail::interior_slabs<ExactKernel>(V, Rational(1), Rational(0), Rational(1), flat, acc, Rational(0));
    } else {
        std::vector<Rational> L;
        for (const auto& e : P.edges()) L.push_back(e.lattice_length);
        detail::boundary_edges<ExactKernel>(V, L, Rational(0), Rational(0), Rational(1), flat, acc);
    }
    std::vector<Rational> out;
    out.reserve(acc.size());
    for (auto& a : acc) out.push_back(a.rational);
    return out;
}

void check_terms(std::span<const MonomialTerm> terms) {
    for (const auto& t : terms)
        if (t.i < 0 || t.j < 0 || t.k < 0) throw DomainError("monomial exponents and powers must be nonnegative");
}

}  // namespace

TermValues integrate_terms(Region region, const Polytope& P, const AffineFn& f, std::span<const MonomialTerm> terms) {
    check_terms(terms);
    require_positive(f, P);
    TermValues result;
    result.values.resize(terms.size());
    if (region == Region::interior && numerically_constant(P, f)) {
        double mx = 0.0, my = 0.0;
        for (const auto& v : P.vertices()) {
            mx += v.x;
            my += v.y;
        }
        const double fbar = f({mx / P.size(), my / P.size()});
        std::vector<MonomialTerm> flat(terms.begin(), terms.end());
        for (auto& t : flat) t.k = 0;
        std::vector<FloatKernel::Acc> moments(flat.size());
        detail::interior_slabs<FloatKernel>(float_vertices(P), 1.0, 0.0, 1.0, flat, moments, 1e-14);
        for (std::size_t n = 0; n < terms.size(); ++n)
            result.values[n] = std::pow(fbar, -terms[n].k) * moments[n].value();
        result.condition_flag = ConditionFlag::near_degenerate_fallback;
        return result;
    }
    std::vector<FloatKernel::Acc> acc(terms.size());
    const auto V = float_vertices(P);
    if (region == Region::interior) {
        detail::interior_slabs<FloatKernel>(V, f.k1, f.k2, f.c0, terms, acc, 1e-14);
    } else {
        std::vector<double> L;
        for (const auto& e : P.edges()) L.push_back(e.length);
        detail::boundary_edges<FloatKernel>(V, L, f.k1, f.k2, f.c0, terms, acc);
    }
    for (std::size_t n = 0; n < terms.size(); ++n) result.values[n] = acc[n].value();
    return result;
}

Rational polytope_moment(Region region, const Polytope& P, Moment moment) {
    const MonomialTerm t{moment.i, moment.j, 0};
    check_terms({&t, 1});
    return exact_moments(region, P, {&t, 1})[0];
}

namespace {

void check_public(int k, Moment m) {
    if (k < 1) throw DomainError("power k must be a positive integer");
    if (m.i < 0 || m.j < 0 || m.i + m.j > 2) throw DomainError("moment (i, j) must satisfy i, j >= 0 and i + j <= 2");
}

}  // namespace

IntegralReport power_integral(Region region, const Polytope& P, const AffineFn& f, int k, Moment m,
                              Derivatives derivatives) {
    check_public(k, m);
    // term layout: value; d/dk1, d/dk2, d/dc0; then the Hessian pairs (a <= b) over x = (mu1, mu2, 1)
    std::vector<MonomialTerm> terms{{m.i, m.j, k}};
    const int ex[3][2] = {{1, 0}, {0, 1}, {0, 0}};
    if (derivatives != Derivatives::none)
        for (const auto& e : ex) terms.push_back({m.i + e[0], m.j + e[1], k + 1});
    if (derivatives == Derivatives::hessian)
        for (int a = 0; a < 3; ++a)
            for (int b = a; b < 3; ++b)
                terms.push_back({m.i + ex[a][0] + ex[b][0], m.j + ex[a][1] + ex[b][1], k + 2});
    const TermValues tv = integrate_terms(region, P, f, terms);
    IntegralReport rep;
    rep.value = tv.values[0];
    rep.condition_flag = tv.condition_flag;
    if (derivatives != Derivatives::none)
        for (int a = 0; a < 3; ++a) rep.grad[a] = -k * tv.values[1 + a];
    if (derivatives == Derivatives::hessian) {
        Mat3 H{};
        std::size_t idx = 4;
        for (int a = 0; a < 3; ++a)
            for (int b = a; b < 3; ++b) {
                H[a][b] = H[b][a] = static_cast<double>(k) * (k + 1) * tv.values[idx];
                ++idx;
            }
        rep.hessian = H;
    }
    return rep;
}

IntegralReport boundary_power_integral(const Polytope& P, const AffineFn& f, int k, Moment moment,
                                       Derivatives derivatives) {
    return power_integral(Region::boundary, P, f, k, moment, derivatives);
}

IntegralReport interior_power_integral(const Polytope& P, const AffineFn& f, int k, Moment moment,
                                       Derivatives derivatives) {
    return power_integral(Region::interior, P, f, k, moment, derivatives);
}

namespace {

ExactIntegral exact_integral(Region region, const Polytope& P, const ExactAffineFn& f, int k, Moment m) {
    check_public(k, m);
    require_positive(f, P);
    const std::vector<MonomialTerm> terms{{m.i, m.j, k}};
    ExactIntegral out;
    if (region == Region::interior && f.k1 == 0 && f.k2 == 0) {
        out.rational_part = exact_moments(region, P, terms)[0] / rpow(f.c0, k);
        return out;
    }
    std::vector<ExactKernel::Acc> acc(1);
    const auto V = exact_vertices(P);
    if (region == Region::interior) {
        detail::interior_slabs<ExactKernel>(V, f.k1, f.k2, f.c0, terms, acc, Rational(0));
    } else {
        std::vector<Rational> L;
        for (const auto& e : P.edges()) L.push_back(e.lattice_length);
        detail::boundary_edges<ExactKernel>(V, L, f.k1, f.k2, f.c0, terms, acc);
    }
    out.rational_part = acc[0].rational;
    out.log_part = acc[0].log.value();
    out.hybrid = acc[0].hybrid;
    return out;
}

}  // namespace

ExactIntegral boundary_power_integral_exact(const Polytope& P, const ExactAffineFn& f, int k, Moment moment) {
    return exact_integral(Region::boundary, P, f, k, moment);
}

ExactIntegral interior_power_integral_exact(const Polytope& P, const ExactAffineFn& f, int k, Moment moment) {
    return exact_integral(Region::interior, P, f, k, moment);
}

}  // namespace ckem
