#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace peakon::quadrature {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Nodes/weights for an n-point Gauss-Legendre rule (cached per n).
const GaussRule& gauss_legendre(std::size_t n);

/// n-point Gauss-Legendre integral of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b, std::size_t n);

/**
 * Composite Gauss-Legendre integral over [a, b] with mandatory breakpoints
 * (integrand kinks). Breakpoints outside (a, b) are ignored. Each smooth
 * piece is further subdivided so no panel exceeds max_panel_width.
 */
double integrate_with_breakpoints(const std::function<double(double)>& f, double a, double b,
                                  const std::vector<double>& breakpoints, std::size_t points_per_panel,
                                  double max_panel_width);

/// Panel edges for the composite rule above (sorted, deduplicated).
std::vector<double> panel_edges(double a, double b, const std::vector<double>& breakpoints,
                                double max_panel_width);

} // namespace peakon::quadrature
