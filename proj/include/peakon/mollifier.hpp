#pragma once

#include <string>
#include <vector>

#include "peakon/state.hpp"

namespace peakon::mollifier {

/// Unit-width bump profiles: even, nonnegative, supported in (-1, 1),
/// unit mass, nondecreasing on (-1, 0). Scaled as rho_eps(s) = rho(s/eps)/eps.
enum class BumpFamily { cosine_bump, quadratic_bump, smooth_exp_bump };

BumpFamily family_from_string(const std::string& name);
std::string to_string(BumpFamily family);

struct MollifierSpec {
    BumpFamily family = BumpFamily::cosine_bump;
    double eps = 0.1;
};

/// Throws ConfigError unless eps > 0 and finite.
void validate(const MollifierSpec& spec);

/// Density rho_eps(s).
double density(const MollifierSpec& spec, double s);

/// Antiderivative Phi_eps(s) = integral of rho_eps over (-inf, s];
/// 0 below -eps, 1 above +eps, exactly 1/2 at 0.
double cdf(const MollifierSpec& spec, double s);

/**
 * Exact convolution of rho_eps with the piecewise-constant field u^2 - u_x^2
 * of the given configuration, evaluated at x:
 *   sum_k C_k [Phi_eps(x - x_k) - Phi_eps(x - x_{k+1})].
 * Bounded by m0^2 / 2.
 */
double regularized_field(const PeakonState& state, const MollifierSpec& spec, double x);

/// Velocities of the dispersive regularization: regularized_field at each x_i.
std::vector<double> regularized_rhs(const PeakonState& state, const MollifierSpec& spec);

/**
 * |(rho_eps * f)(0) - (f(0-) + f(0+)) / 2| for the step function with the
 * given one-sided values. Zero exactly: the convolution weights each side
 * by exactly 1/2.
 */
double midpoint_property_residual(const MollifierSpec& spec, double left_value, double right_value);

/**
 * Integral of rho_eps over [a, a + width], width >= 0. Evaluated as a CDF
 * difference for wide windows and by a Simpson rule on the density for
 * width << eps, which keeps full relative precision for windows far below
 * the CDF's cancellation floor (the regularized gap dynamics needs this).
 */
double window_integral(const MollifierSpec& spec, double a, double width);

} // namespace peakon::mollifier
