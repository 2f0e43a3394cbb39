#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ckem/critical.hpp"

namespace ckem {

struct ScanOptions {
    int grid = 24;
    double tol = 1e-10;
    double bisect_tol = 1e-6;
    unsigned threads = 0;
    std::optional<std::uint64_t> jitter_seed;
};

struct ScanSample {
    double param = 0.0;
    std::vector<CriticalPoint> points;  // solver output on the standard slice
    int solver_in_cone = 0;
    int table_real = 0;                 // real isolated entries of the case table
    int table_in_cone = 0;              // ... of which lie in the positivity cone
};

// Which count changed at a threshold.
enum class CountKind { solver_in_cone, table_in_cone, table_real };

std::string_view to_string(CountKind kind) noexcept;

struct Threshold {
    CountKind kind = CountKind::solver_in_cone;
    double param = 0.0;  // midpoint of the final bracket
    double lower = 0.0, upper = 0.0;
    int count_below = 0, count_above = 0;
};

struct ScanResult {
    FamilyKind family = FamilyKind::cp2;
    int q = 1;
    std::vector<ScanSample> samples;
    std::vector<Threshold> thresholds;  // sorted by (kind, param)
};

// Samples p uniformly on [p_min, p_max] (steps >= 2), runs the multistart solver on the standard slice at
// each sample, and bisects every change of a count between adjacent samples to bisect_tol.
ScanResult family_scan(FamilyKind family, int q, double p_min, double p_max, int steps,
                       const ScanOptions& options = {});

// In-cone critical point counts at one parameter value (solver and table).
ScanSample scan_sample(FamilyKind family, int q, double p, const ScanOptions& options);

// "# ckem-csv v1" header, column row, one row per in-cone point, then "# threshold ..." lines.
std::string scan_csv(const ScanResult& result);

}  // namespace ckem
