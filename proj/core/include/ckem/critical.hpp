#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ckem/functional.hpp"
#include "ckem/geometry.hpp"

namespace ckem {

struct HessianSignature {
    int positive = 0;
    int negative = 0;
    int zero = 0;
    friend bool operator==(const HessianSignature&, const HessianSignature&) = default;
};

// "p/n/z"
std::string to_string(const HessianSignature& s);

struct CriticalPoint {
    double k1 = 0.0, k2 = 0.0, c0 = 0.0;  // on the search slice
    double grad_norm = 0.0;               // |slice gradient of V^2| at the point
    bool in_cone = false;
    double margin = 0.0;                  // smallest vertex value of f
    double V = 0.0;
    // d, c and the Futaki norm are evaluated on the normalized representative (d = 1).
    double d_const = 0.0;
    double c_const = 0.0;
    double futaki_norm = 0.0;
    std::optional<std::string> classification;
    HessianSignature hessian_signature;
    bool curve_family = false;            // slice Hessian has a near-zero eigenvalue
    int iterations = 0;

    AffineFn f() const { return {k1, k2, c0}; }
};

struct CriticalSearchOptions {
    int max_iterations = 100;
    // Random jitter of the grid seeds within their cells; none means the plain grid.
    std::optional<std::uint64_t> jitter_seed;
    unsigned threads = 0;  // 0: CKEM_THREADS or hardware concurrency
    // Extra seeds on small circles around every point found, to separate nearby pitchfork branches.
    bool ring_seeds = true;
};

// Multistart damped Newton on the slice gradient of V^2 from a grid x grid set of cone-interior
// seeds. Points are deduplicated at 100 * tol and sorted by (k1, k2). With a family the points are
// classified against its case table. Throws DomainError if grid < 4 or tol <= 0, or if no seed lies
// inside the cone.
std::vector<CriticalPoint> find_critical_points(const Polytope& P, const SliceConstraint& slice, int grid, double tol,
                                                const Family* family = nullptr,
                                                const CriticalSearchOptions& options = {});

// Fills V, d, c, Futaki norm, margin, signature and gradient norm for a point on the slice.
CriticalPoint describe_point(const Polytope& P, const SliceConstraint& slice, double k1, double k2);

// ---- family case tables ----

// One closed-form solution of grad V^2 = 0 on the family's standard slice: an isolated point, or a curve
// a = a(b) traced by b.
struct CaseEntry {
    std::string tag;  // "case-N"
    bool curve = false;
    bool real = false;     // the closed form is real (and finite) at this parameter
    double a = 0.0, b = 0.0;
    double margin = 0.0;   // smallest vertex value on the standard slice; best along b for curves
    bool in_cone = false;
    std::function<std::optional<double>(double b)> a_of_b;  // curves only
};

std::vector<CaseEntry> family_cases(const Family& family);

// Case whose closed-form (a, b) lies within 1e-7 of the point after ray projection to the standard
// slice.
std::optional<std::string> classify_against_family(const CriticalPoint& pt, const Family& family);

struct SolutionComparison {
    bool V_equal = false;
    bool homothetic = false;
    double relative_gap = 0.0;
};

SolutionComparison compare_solutions(const CriticalPoint& a, const CriticalPoint& b);

}  // namespace ckem
