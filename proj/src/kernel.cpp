#include "peakon/kernel.hpp"

#include <cmath>

namespace peakon::kernel {

double green(double x) {
    return 0.5 * std::exp(-std::abs(x));
}

FieldSample eval_field(const PeakonState& state, double x) {
    const auto& xs = state.positions();
    const auto& ps = state.momenta();
    double u = 0.0, ux_left = 0.0, ux_right = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double g = green(x - xs[i]);
        u += ps[i] * g;
        // d/dx G(x - x_i) = -sgn(x - x_i) G(x - x_i); at x == x_i the
        // one-sided slopes are +- p_i G(0).
        if (xs[i] >= x)
            ux_left += ps[i] * g;
        else
            ux_left -= ps[i] * g;
        if (xs[i] > x)
            ux_right += ps[i] * g;
        else
            ux_right -= ps[i] * g;
    }
    return {x, u, ux_left, ux_right};
}

double avg_ux_sq(const PeakonState& state, double x) {
    FieldSample s = eval_field(state, x);
    return 0.5 * (s.ux_left * s.ux_left + s.ux_right * s.ux_right);
}

double energy(const PeakonState& state) {
    const auto& xs = state.positions();
    const auto& ps = state.momenta();
    const std::size_t n = xs.size();
    double h = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        h += 0.5 * ps[i] * ps[i];
        for (std::size_t j = i + 1; j < n; ++j)
            h += ps[i] * ps[j] * std::exp(xs[i] - xs[j]); // 2 p_i p_j G(x_i - x_j), i < j
    }
    return h;
}

namespace {

// integral of G(x - a) G(x - b) dx = (1 + d) e^{-d} / 4 with d = |a - b|.
double green_overlap(double a, double b) {
    const double d = std::abs(a - b);
    return 0.25 * (1.0 + d) * std::exp(-d);
}

} // namespace

double field_inner_product(const PeakonState& a, const PeakonState& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            s += a.momentum(i) * b.momentum(j) * green_overlap(a.position(i), b.position(j));
    return s;
}

double field_l2_distance(const PeakonState& a, const PeakonState& b) {
    const double d2 = field_inner_product(a, a) - 2.0 * field_inner_product(a, b) +
                      field_inner_product(b, b);
    return std::sqrt(std::max(d2, 0.0));
}

} // namespace peakon::kernel
