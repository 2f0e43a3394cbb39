#include "ckem/critical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "ckem/parallel.hpp"

namespace ckem {

std::string to_string(const HessianSignature& s) {
    return std::to_string(s.positive) + "/" + std::to_string(s.negative) + "/" + std::to_string(s.zero);
}

namespace {

constexpr double kMarginGuard = 1e-10;
constexpr double kEscapeRatio = 1e-6;

struct Box {
    double lo1, hi1, lo2, hi2;
    double diagonal() const { return std::hypot(hi1 - lo1, hi2 - lo2); }
};

// Bounding box in (k1, k2) of {f : f > 0 on P, sum of vertex values = 1}, from the pairwise
// intersections of the vertex-value planes.
Box vertex_sum_domain(const Polytope& P, const SliceConstraint& vs) {
    const auto V = P.vertices();
    const std::size_t n = V.size();
    Box box{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            // rows: f(v_i) = 0, f(v_j) = 0, s . f = 1
            const double M[3][3] = {{V[i].x, V[i].y, 1.0}, {V[j].x, V[j].y, 1.0}, {vs.s1(), vs.s2(), vs.s0()}};
            const double det = M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
                             - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
                             + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
            if (std::abs(det) < 1e-14) continue;
            // Cramer with right-hand side (0, 0, 1)
            const double k1 = (M[0][1] * M[1][2] - M[0][2] * M[1][1]) / det;
            const double k2 = -(M[0][0] * M[1][2] - M[0][2] * M[1][0]) / det;
            const double c0 = (M[0][0] * M[1][1] - M[0][1] * M[1][0]) / det;
            const AffineFn f{k1, k2, c0};
            bool feasible = true;
            for (const auto& v : V)
                if (f(v) < -1e-12) feasible = false;
            if (!feasible) continue;
            box.lo1 = std::min(box.lo1, k1);
            box.hi1 = std::max(box.hi1, k1);
            box.lo2 = std::min(box.lo2, k2);
            box.hi2 = std::max(box.hi2, k2);
        }
    if (!(box.lo1 <= box.hi1)) throw DomainError("could not bound the slice domain");
    return box;
}

struct Seed {
    double k1, k2;
};

std::vector<Seed> grid_seeds(const Polytope& P, const SliceConstraint& slice, int grid,
                             const std::optional<std::uint64_t>& jitter, Box& target_box) {
    const SliceConstraint vs = SliceConstraint::vertex_sum(P);
    const Box box = vertex_sum_domain(P, vs);
    std::mt19937_64 rng(jitter.value_or(0));
    std::uniform_real_distribution<double> unit(-0.5, 0.5);
    std::vector<std::pair<AffineFn, double>> cand;
    double best = 0.0;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            double u = i + 0.5, w = j + 0.5;
            if (jitter) {
                u += unit(rng);
                w += unit(rng);
            }
            const double k1 = box.lo1 + (box.hi1 - box.lo1) * u / grid;
            const double k2 = box.lo2 + (box.hi2 - box.lo2) * w / grid;
            const AffineFn f = vs.at(k1, k2);
            const double m = margin(f, P);
            if (m > 0.0) {
                cand.push_back({f, m});
                best = std::max(best, m);
            }
        }
    std::vector<Seed> seeds;
    target_box = {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& [f, m] : cand) {
        if (m < 0.005 * best) continue;
        const auto g = slice.project(f);
        if (!g || !(margin(*g, P) > kMarginGuard)) continue;
        seeds.push_back({g->k1, g->k2});
        target_box.lo1 = std::min(target_box.lo1, g->k1);
        target_box.hi1 = std::max(target_box.hi1, g->k1);
        target_box.lo2 = std::min(target_box.lo2, g->k2);
        target_box.hi2 = std::max(target_box.hi2, g->k2);
    }
    return seeds;
}

struct NewtonResult {
    double k1 = 0.0, k2 = 0.0;
    bool converged = false;
    int iterations = 0;
    double objective = std::numeric_limits<double>::infinity();
};

double norm2(const Vec2d& g) { return g[0] * g[0] + g[1] * g[1]; }

// Smallest vertex value over the largest. V is scale invariant, so on a slice where the cone is
// unbounded Newton can creep off to infinity while the gradient decays; those iterates approach
// the cone boundary projectively and this ratio goes to zero.
double relative_margin(const AffineFn& f, const Polytope& P) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& v : P.vertices()) {
        lo = std::min(lo, f(v));
        hi = std::max(hi, f(v));
    }
    return hi > 0.0 ? lo / hi : 0.0;
}

NewtonResult newton(const Polytope& P, const SliceConstraint& slice, Seed seed, double tol, int max_iterations) {
    NewtonResult r;
    double x1 = seed.k1, x2 = seed.k2;
    SliceModel m = slice_model(P, slice.at(x1, x2), slice);
    double phi = norm2(m.grad);
    for (int it = 1; it <= max_iterations; ++it) {
        r.iterations = it;
        const auto& H = m.hessian;
        const auto& g = m.grad;
        const double det = H[0][0] * H[1][1] - H[0][1] * H[1][0];
        const double scale = H[0][0] * H[0][0] + 2 * H[0][1] * H[0][1] + H[1][1] * H[1][1];
        double d1, d2;
        bool newton_dir = std::abs(det) >= 1e-14 * scale && scale > 0.0;
        if (newton_dir) {
            d1 = -(H[1][1] * g[0] - H[0][1] * g[1]) / det;
            d2 = -(-H[1][0] * g[0] + H[0][0] * g[1]) / det;
        } else {
            // steepest descent on |g|^2, whose gradient is 2 H g
            const double h1 = H[0][0] * g[0] + H[0][1] * g[1];
            const double h2 = H[1][0] * g[0] + H[1][1] * g[1];
            const double hh = h1 * h1 + h2 * h2;
            if (!(hh > 0.0)) break;
            d1 = -phi / hh * h1;
            d2 = -phi / hh * h2;
        }
        double t = 1.0;
        while (t > 1e-12 && !(margin(slice.at(x1 + t * d1, x2 + t * d2), P) >= kMarginGuard)) t *= 0.5;
        bool accepted = false;
        SliceModel trial;
        while (t > 1e-12) {
            trial = slice_model(P, slice.at(x1 + t * d1, x2 + t * d2), slice);
            const double phi_t = norm2(trial.grad);
            // Armijo on |g|^2: the Newton direction has directional derivative -2 |g|^2
            if (phi_t <= (1.0 - 1e-4 * t) * phi || (newton_dir && phi_t <= 1e-300)) {
                accepted = true;
                phi = phi_t;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;
        x1 += t * d1;
        x2 += t * d2;
        m = trial;
        const double step = t * std::hypot(d1, d2);
        if (newton_dir && t == 1.0 && step <= tol * std::max(1.0, std::hypot(x1, x2))) {
            r.converged = true;
            break;
        }
        if (phi == 0.0) {
            r.converged = true;
            break;
        }
    }
    r.k1 = x1;
    r.k2 = x2;
    r.objective = phi;
    return r;
}

HessianSignature signature(const Mat2& H, bool& curve_family) {
    const double tr = H[0][0] + H[1][1];
    const double diff = H[0][0] - H[1][1];
    const double disc = std::sqrt(diff * diff + 4.0 * H[0][1] * H[1][0]);
    const double l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
    const double norm = std::max(std::abs(l1), std::abs(l2));
    HessianSignature s;
    curve_family = false;
    for (double l : {l1, l2}) {
        if (std::abs(l) < 1e-6 * norm || norm == 0.0) {
            ++s.zero;
            curve_family = true;
        } else if (l > 0.0) {
            ++s.positive;
        } else {
            ++s.negative;
        }
    }
    return s;
}

}  // namespace

CriticalPoint describe_point(const Polytope& P, const SliceConstraint& slice, double k1, double k2) {
    CriticalPoint pt;
    const AffineFn f = slice.at(k1, k2);
    pt.k1 = f.k1;
    pt.k2 = f.k2;
    pt.c0 = f.c0;
    pt.margin = margin(f, P);
    pt.in_cone = pt.margin > 0.0;
    if (!pt.in_cone) return pt;
    const SliceModel m = slice_model(P, f, slice);
    pt.grad_norm = std::sqrt(norm2(m.grad)) / m.V2;
    pt.hessian_signature = signature(m.hessian, pt.curve_family);
    const FunctionalValue tilde = volume_functional(P, normalize_to_tilde(P, f));
    pt.V = tilde.V;
    pt.d_const = tilde.d_const;
    pt.c_const = tilde.c_const;
    pt.futaki_norm = std::sqrt(tilde.futaki[0] * tilde.futaki[0] + tilde.futaki[1] * tilde.futaki[1]
                               + tilde.futaki[2] * tilde.futaki[2]);
    return pt;
}

std::vector<CriticalPoint> find_critical_points(const Polytope& P, const SliceConstraint& slice, int grid, double tol,
                                                const Family* family, const CriticalSearchOptions& options) {
    if (grid < 4) throw DomainError("grid must be at least 4");
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    Box box{};
    std::vector<Seed> seeds = grid_seeds(P, slice, grid, options.jitter_seed, box);
    if (seeds.empty()) throw DomainError("no seeds inside the positivity cone on this slice");
    const unsigned threads = thread_count(options.threads);

    std::vector<NewtonResult> found;
    auto run = [&](const std::vector<Seed>& batch) {
        std::vector<NewtonResult> res(batch.size());
        parallel_for(batch.size(), threads,
                     [&](std::size_t i) { res[i] = newton(P, slice, batch[i], tol, options.max_iterations); });
        return res;
    };
    const double merge = 100.0 * tol;
    const double flat_tol = 10.0 * tol;
    const double flat_reach = 1e-2 * std::max(box.diagonal(), 1e-12);
    auto relative_grad = [&](double k1, double k2) {
        const SliceModel m = slice_model(P, slice.at(k1, k2), slice);
        return std::sqrt(norm2(m.grad)) / m.V2;
    };
    // Degenerate critical points stall Newton at the gradient noise floor, leaving a scatter of
    // converged iterates; two iterates are one point when the gradient is flat between them.
    auto flat_between = [&](const NewtonResult& a, const NewtonResult& b) {
        if (std::hypot(a.k1 - b.k1, a.k2 - b.k2) > flat_reach) return false;
        for (double t : {0.25, 0.5, 0.75})
            if (!(relative_grad(a.k1 + t * (b.k1 - a.k1), a.k2 + t * (b.k2 - a.k2)) < flat_tol)) return false;
        return true;
    };
    auto distinct = [&](std::vector<NewtonResult> all) {
        std::vector<NewtonResult> conv;
        for (auto& r : all)
            if (r.converged && relative_margin(slice.at(r.k1, r.k2), P) > kEscapeRatio) conv.push_back(r);
        auto key = [](double v) { return std::round(v * 1e9) / 1e9; };
        std::sort(conv.begin(), conv.end(), [&](const NewtonResult& a, const NewtonResult& b) {
            const double a1 = key(a.k1), b1 = key(b.k1);
            if (a1 != b1) return a1 < b1;
            const double a2 = key(a.k2), b2 = key(b.k2);
            if (a2 != b2) return a2 < b2;
            return a.objective < b.objective;
        });
        std::vector<NewtonResult> kept;
        for (const auto& r : conv) {
            bool dup = false;
            for (const auto& k : kept)
                if (std::hypot(r.k1 - k.k1, r.k2 - k.k2) < merge * std::max(1.0, std::hypot(r.k1, r.k2))) dup = true;
            if (!dup) kept.push_back(r);
        }
        struct Cluster {
            NewtonResult first;
            double s1 = 0.0, s2 = 0.0;
            int n = 0, iterations = 0;
        };
        std::vector<Cluster> clusters;
        for (const auto& r : kept) {
            Cluster* home = nullptr;
            for (auto& c : clusters)
                if (flat_between(c.first, r)) {
                    home = &c;
                    break;
                }
            if (!home) {
                clusters.push_back({r});
                home = &clusters.back();
            }
            home->s1 += r.k1;
            home->s2 += r.k2;
            home->iterations = std::max(home->iterations, r.iterations);
            ++home->n;
        }
        std::vector<NewtonResult> out;
        for (const auto& c : clusters) {
            NewtonResult r = c.first;
            if (c.n > 1) {
                r.k1 = c.s1 / c.n;
                r.k2 = c.s2 / c.n;
                r.iterations = c.iterations;
            }
            out.push_back(r);
        }
        std::sort(out.begin(), out.end(), [&](const NewtonResult& a, const NewtonResult& b) {
            const double a1 = key(a.k1), b1 = key(b.k1);
            return a1 != b1 ? a1 < b1 : key(a.k2) < key(b.k2);
        });
        return out;
    };

    std::vector<NewtonResult> first = run(seeds);
    found = distinct(first);
    if (found.empty()) {
        const auto best = std::min_element(first.begin(), first.end(), [](const auto& a, const auto& b) {
            return a.objective < b.objective;
        });
        std::ostringstream os;
        os.precision(17);
        os << "no multistart seed converged; best iterate k1=" << best->k1 << " k2=" << best->k2
           << " c0=" << slice.c0_for(best->k1, best->k2) << " |grad V^2|^2=" << best->objective;
        throw ConvergenceError(os.str());
    }
    if (options.ring_seeds) {
        const double L = std::max(box.diagonal(), 1e-12);
        std::vector<Seed> ring;
        for (const auto& r : found)
            for (double rad : {1e-1, 1e-2, 1e-3, 1e-4})
                for (int a = 0; a < 8; ++a) {
                    const double th = 2.0 * std::numbers::pi * (a + 0.5) / 8.0;
                    const Seed s{r.k1 + rad * L * std::cos(th), r.k2 + rad * L * std::sin(th)};
                    if (margin(slice.at(s.k1, s.k2), P) > kMarginGuard) ring.push_back(s);
                }
        std::vector<NewtonResult> all = first;
        for (auto& r : run(ring)) all.push_back(r);
        found = distinct(std::move(all));
    }

    std::vector<CriticalPoint> out;
    out.reserve(found.size());
    for (const auto& r : found) {
        CriticalPoint pt = describe_point(P, slice, r.k1, r.k2);
        pt.iterations = r.iterations;
        if (family) pt.classification = classify_against_family(pt, *family);
        out.push_back(std::move(pt));
    }
    return out;
}

SolutionComparison compare_solutions(const CriticalPoint& a, const CriticalPoint& b) {
    SolutionComparison c;
    c.relative_gap = std::abs(a.V - b.V) / std::abs(a.V);
    c.V_equal = c.relative_gap < 1e-8;
    c.homothetic = c.V_equal;
    return c;
}

}  // namespace ckem
