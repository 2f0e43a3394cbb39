#include <cmath>
#include <limits>

#include "ckem/critical.hpp"

namespace ckem {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double rsqrt(double x) { return x >= 0.0 ? std::sqrt(x) : kNaN; }

struct Table {
    const Family& family;
    Polytope P;
    SliceConstraint slice;
    std::vector<CaseEntry> entries;

    explicit Table(const Family& fam) : family(fam), P(make_family(fam)), slice(family_slice(fam, P)) {}

    double margin_at(double a, double b) const { return margin(slice.at(a, b), P); }

    void point(int n, double a, double b) {
        CaseEntry e;
        e.tag = "case-" + std::to_string(n);
        e.real = std::isfinite(a) && std::isfinite(b);
        e.a = a;
        e.b = b;
        if (e.real) {
            e.margin = margin_at(a, b);
            e.in_cone = e.margin > 0.0;
        } else {
            e.margin = kNaN;
        }
        entries.push_back(std::move(e));
    }

    void curve(int n, std::function<std::optional<double>(double)> a_of_b) {
        CaseEntry e;
        e.tag = "case-" + std::to_string(n);
        e.curve = true;
        e.margin = -std::numeric_limits<double>::infinity();
        constexpr int samples = 4001;
        for (int i = 0; i < samples; ++i) {
            const double b = -10.0 + 20.0 * i / (samples - 1);
            const auto a = a_of_b(b);
            if (!a) continue;
            e.real = true;
            const double m = margin_at(*a, b);
            if (m > e.margin) {
                e.margin = m;
                e.a = *a;
                e.b = b;
            }
        }
        if (!e.real) e.margin = kNaN;
        e.in_cone = e.real && e.margin > 0.0;
        e.a_of_b = std::move(a_of_b);
        entries.push_back(std::move(e));
    }
};

std::optional<double> finite(double x) {
    if (std::isfinite(x)) return x;
    return std::nullopt;
}

void cp2_cases(Table& t) { t.point(1, 0.0, 0.0); }

void p1xp1_cases(Table& t, double p) {
    t.curve(1, [p](double b) { return finite(rsqrt(b * b + (p + 1.0) / (p - 1.0)) / p); });
    t.curve(2, [p](double b) { return finite(-rsqrt(b * b + (p + 1.0) / (p - 1.0)) / p); });
    t.point(3, 0.0, 0.0);
    const double s12p = rsqrt(1.0 - 2.0 * p);
    t.point(4, 0.0, -s12p);
    t.point(5, 0.0, s12p);
    const double r = rsqrt(-p / (p - 1.0) - 1.0 / (p - 1.0));
    t.point(6, 0.0, -r);
    t.point(7, 0.0, r);
    const double w = rsqrt(p - 2.0) / std::pow(p, 1.5);
    t.point(8, -w, 0.0);
    t.point(9, w, 0.0);
    const double u = rsqrt(1.0 - 2.0 / p) / (p - 1.0);
    const double v = s12p / (p - 1.0);
    t.point(10, -u, -v);
    t.point(11, u, -v);
    t.point(12, -u, v);
    t.point(13, u, v);
}

void blowup_cases(Table& t, double p) {
    auto disc = [p](double b) {
        return -9 * b * b * p * p * p + (21 * b * b + 1) * p * p + (1 - 16 * b * b) * p + 4 * b * b - 1;
    };
    const double den12 = 6 * p * p - 4 * p;
    t.curve(1, [=](double b) { return finite((2 * rsqrt(disc(b)) + 3 * b * p * p + (1 - 2 * b) * p) / den12); });
    t.curve(2, [=](double b) { return finite(-(2 * rsqrt(disc(b)) - 3 * b * p * p + (2 * b - 1) * p) / den12); });

    const double A = rsqrt((p * p * p - 6 * p * p + 4 * p) / (p - 2));
    const double B = rsqrt((5 * p - 2) / (p - 2));
    const double d1 = 3 * p * p - 2 * p, d2 = 6 * p - 4, d3 = 3 * p - 2;
    t.point(3, -A / d1 - B / d2 + 1 / d2, -B / d3);
    t.point(4, A / d1 - B / d2 + 1 / d2, -B / d3);
    t.point(5, -A / d1 + B / d2 + 1 / d2, B / d3);
    t.point(6, A / d1 + B / d2 + 1 / d2, B / d3);
    t.point(7, (p - 1) / (p * p), 1 / p);
    t.point(8, -1 / (p * p), -1 / p);
    const double s9 = rsqrt(9 * p * p - 8 * p);
    t.point(9, -(s9 + p) / (4 * p * p), 0.0);
    t.point(10, (s9 - p) / (4 * p * p), 0.0);
    const double r = rsqrt((p * p + p - 1) / (p - 1));
    t.point(11, -r / d2 + 1 / d2, -r / d3);
    t.point(12, r / d2 + 1 / d2, r / d3);
    const double Q = rsqrt(p * p * p * p - 4 * p * p * p + 16 * p * p - 16 * p + 4);
    const double d13 = 2 * p * p * p - 4 * p * p + 12 * p - 8;
    const double e13 = p * p * p - 2 * p * p + 6 * p - 4;
    t.point(13, -(Q - p * p + 4 * p - 2) / d13, -Q / e13);
    t.point(14, (Q + p * p - 4 * p + 2) / d13, Q / e13);
    const double s1p = rsqrt(1 - p);
    t.point(15, -(-p + 2 * s1p + 2) / (2 * p * p), 0.0);
    t.point(16, (p + 2 * s1p - 2) / (2 * p * p), 0.0);
}

void hirzebruch_cases(Table& t, double p, double q) {
    t.point(1, (p + 2 * rsqrt(1 - p) - 2) / (2 * p * p), 0.0);
    const double s2 = rsqrt(p * (p * q * q + 4 * q * (p - 2) - 4 * p));
    t.point(2, (s2 - p * q) / (4 * p * p), 0.0);
    t.point(2, (-s2 - p * q) / (4 * p * p), 0.0);
    const double D = rsqrt(4 * (1 - p) * (1 - p) * q * q - 4 * (p - 1) * (p - 2) * p * q + p * p * p * p);
    const double den = 2 * (p - 1) * (p - 2) * q - p * p * p;
    t.point(3, -(D - 2 * (p - 1) * q + p * (p - 2)) / (2 * den), -D / (q * den));
    t.point(4, (D + 2 * (p - 1) * q - p * (p - 2)) / (2 * den), D / (q * den));
}

}  // namespace

std::vector<CaseEntry> family_cases(const Family& family) {
    Table t(family);
    const double p = family.p_value();
    switch (family.kind) {
        case FamilyKind::cp2: cp2_cases(t); break;
        case FamilyKind::p1xp1: p1xp1_cases(t, p); break;
        case FamilyKind::blowup: blowup_cases(t, p); break;
        case FamilyKind::hirzebruch: hirzebruch_cases(t, p, family.q); break;
    }
    return std::move(t.entries);
}

std::optional<std::string> classify_against_family(const CriticalPoint& pt, const Family& family) {
    const Polytope P = make_family(family);
    const SliceConstraint slice = family_slice(family, P);
    const auto on_slice = slice.project(pt.f());
    if (!on_slice) return std::nullopt;
    const double a = on_slice->k1, b = on_slice->k2;
    constexpr double tol = 1e-7;
    const CaseEntry* best = nullptr;
    double best_dist = tol;
    const auto cases = family_cases(family);
    for (const auto& e : cases) {
        if (!e.real || e.curve) continue;
        const double dist = std::hypot(a - e.a, b - e.b);
        if (dist < best_dist) {
            best_dist = dist;
            best = &e;
        }
    }
    if (best) return best->tag;
    for (const auto& e : cases) {
        if (!e.curve) continue;
        const auto ac = e.a_of_b(b);
        if (ac && std::abs(a - *ac) < tol) return e.tag;
    }
    return std::nullopt;
}

}  // namespace ckem
