#pragma once

#include "peakon/state.hpp"

namespace peakon::kernel {

/// Field sample with one-sided derivatives; ux_left == ux_right away from
/// peakon positions, and ux_left - ux_right == p_i exactly at x == x_i.
struct FieldSample {
    double x;
    double u;
    double ux_left;
    double ux_right;
};

/// Fundamental solution G(x) = e^{-|x|} / 2 of the 1 - d^2/dx^2 operator.
double green(double x);

/// u(x) = sum_i p_i G(x - x_i) with both one-sided derivatives.
FieldSample eval_field(const PeakonState& state, double x);

/// Average of the squared one-sided derivatives, (ux_left^2 + ux_right^2) / 2.
double avg_ux_sq(const PeakonState& state, double x);

/// Energy H = sum_{i,j} p_i p_j G(x_i - x_j) = integral of u^2 + u_x^2.
double energy(const PeakonState& state);

/// L2 inner product of the two reconstructed fields, closed form.
double field_inner_product(const PeakonState& a, const PeakonState& b);

/// ||u_a - u_b||_{L2}, closed form via pairwise Green overlaps.
double field_l2_distance(const PeakonState& a, const PeakonState& b);

} // namespace peakon::kernel
