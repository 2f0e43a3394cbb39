#include "ckem/quartic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

#include "ckem/errors.hpp"

namespace ckem {

double polynomial_value(std::span<const double> c, double x) {
    double v = 0.0;
    for (double a : c) v = v * x + a;
    return v;
}

namespace {

double derivative_value(std::span<const double> c, double x) {
    const std::size_t n = c.size() - 1;
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) v = v * x + c[i] * static_cast<double>(n - i);
    return v;
}

}  // namespace

std::vector<double> polynomial_real_roots(std::span<const double> c) {
    if (c.empty() || c[0] == 0.0) throw DomainError("leading coefficient must be nonzero");
    const std::size_t n = c.size() - 1;
    std::vector<double> roots;
    if (n == 0) return roots;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) C(0, static_cast<Eigen::Index>(j)) = -c[j + 1] / c[0];
    for (std::size_t i = 1; i < n; ++i) C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
    const auto& ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const std::complex<double> z = ev[i];
        if (std::abs(z.imag()) > 1e-9 * std::max(1.0, std::abs(z))) continue;
        double x = z.real();
        const double d = derivative_value(c, x);
        if (d != 0.0) x -= polynomial_value(c, x) / d;
        roots.push_back(x);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::vector<double> quartic_roots(const std::array<double, 5>& coeffs) { return polynomial_real_roots(coeffs); }

}  // namespace ckem
