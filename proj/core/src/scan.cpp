#include "ckem/scan.hpp"

#include <algorithm>
#include <sstream>

#include "ckem/format.hpp"
#include "ckem/parallel.hpp"

namespace ckem {

std::string_view to_string(CountKind kind) noexcept {
    switch (kind) {
        case CountKind::solver_in_cone: return "solver_in_cone";
        case CountKind::table_in_cone: return "table_in_cone";
        case CountKind::table_real: return "table_real";
    }
    return "unknown";
}

namespace {

Family family_at(FamilyKind kind, int q, double p) { return {kind, to_rational(p), q}; }

void table_counts(const Family& fam, ScanSample& s) {
    s.table_real = 0;
    s.table_in_cone = 0;
    for (const auto& e : family_cases(fam)) {
        if (e.curve || !e.real) continue;
        ++s.table_real;
        if (e.in_cone) ++s.table_in_cone;
    }
}

int count_of(CountKind kind, const ScanSample& s) {
    switch (kind) {
        case CountKind::solver_in_cone: return s.solver_in_cone;
        case CountKind::table_in_cone: return s.table_in_cone;
        case CountKind::table_real: return s.table_real;
    }
    return 0;
}

ScanSample sample(FamilyKind kind, int q, double p, const ScanOptions& options, unsigned threads, bool with_solver) {
    const Family fam = family_at(kind, q, p);
    ScanSample s;
    s.param = p;
    table_counts(fam, s);
    if (with_solver) {
        const Polytope P = make_family(fam);
        CriticalSearchOptions copt;
        copt.threads = threads;
        copt.jitter_seed = options.jitter_seed;
        s.points = find_critical_points(P, family_slice(fam, P), options.grid, options.tol, &fam, copt);
        s.solver_in_cone = static_cast<int>(std::count_if(s.points.begin(), s.points.end(),
                                                          [](const CriticalPoint& c) { return c.in_cone; }));
    }
    return s;
}

}  // namespace

ScanSample scan_sample(FamilyKind family, int q, double p, const ScanOptions& options) {
    return sample(family, q, p, options, thread_count(options.threads), true);
}

ScanResult family_scan(FamilyKind family, int q, double p_min, double p_max, int steps, const ScanOptions& options) {
    if (steps < 2) throw DomainError("a scan needs at least 2 steps");
    if (!(p_min < p_max)) throw DomainError("scan range must satisfy p_min < p_max");
    if (!(options.bisect_tol > 0.0)) throw DomainError("bisection tolerance must be positive");
    family_at(family, q, p_min).validate();
    family_at(family, q, p_max).validate();

    ScanResult result;
    result.family = family;
    result.q = q;
    result.samples.resize(static_cast<std::size_t>(steps));
    const unsigned threads = thread_count(options.threads);
    parallel_for(result.samples.size(), threads, [&](std::size_t i) {
        const double p = i + 1 == result.samples.size()
                             ? p_max
                             : p_min + (p_max - p_min) * static_cast<double>(i) / (steps - 1);
        result.samples[i] = sample(family, q, p, options, 1, true);
    });

    for (CountKind kind : {CountKind::solver_in_cone, CountKind::table_in_cone, CountKind::table_real}) {
        const bool solver = kind == CountKind::solver_in_cone;
        for (std::size_t i = 0; i + 1 < result.samples.size(); ++i) {
            const int below = count_of(kind, result.samples[i]);
            const int above = count_of(kind, result.samples[i + 1]);
            if (below == above) continue;
            double lo = result.samples[i].param, hi = result.samples[i + 1].param;
            while (hi - lo > options.bisect_tol) {
                const double mid = 0.5 * (lo + hi);
                const ScanSample s = sample(family, q, mid, options, threads, solver);
                // a middle count equal to neither end moves the upper end, keeping the lower change
                if (count_of(kind, s) == below)
                    lo = mid;
                else
                    hi = mid;
            }
            result.thresholds.push_back({kind, 0.5 * (lo + hi), lo, hi, below, above});
        }
    }
    return result;
}

std::string scan_csv(const ScanResult& result) {
    std::ostringstream os;
    os << "# ckem-csv v1\n";
    os << "param,case_tag,k1,k2,c0,margin,V,d,c,futaki_norm,hessian_sig\n";
    for (const auto& s : result.samples)
        for (const auto& p : s.points) {
            if (!p.in_cone) continue;
            os << format_double(s.param) << ',' << p.classification.value_or("") << ',' << format_double(p.k1) << ','
               << format_double(p.k2) << ',' << format_double(p.c0) << ',' << format_double(p.margin) << ','
               << format_double(p.V) << ',' << format_double(p.d_const) << ',' << format_double(p.c_const) << ','
               << format_double(p.futaki_norm) << ',' << to_string(p.hessian_signature) << '\n';
        }
    for (const auto& t : result.thresholds)
        os << "# threshold kind=" << to_string(t.kind) << " param=" << format_double(t.param)
           << " lower=" << format_double(t.lower) << " upper=" << format_double(t.upper)
           << " count=" << t.count_below << "->" << t.count_above << '\n';
    return os.str();
}

}  // namespace ckem
