#pragma once

#include <array>
#include <span>
#include <vector>

namespace ckem {

// Real roots of c[0] x^n + c[1] x^(n-1) + ... + c[n], ascending. Companion-matrix eigenvalues,
// each real one polished by a Newton step. Throws DomainError when c[0] == 0.
std::vector<double> polynomial_real_roots(std::span<const double> coeffs);

std::vector<double> quartic_roots(const std::array<double, 5>& coeffs);

double polynomial_value(std::span<const double> coeffs, double x);

}  // namespace ckem
