#include "peakon/mollifier.hpp"

#include <array>
#include <cmath>
#include <cstddef>

#include "peakon/dynamics.hpp"
#include "peakon/quadrature.hpp"

namespace peakon::mollifier {

namespace {

double unit_density_raw_exp(double s) {
    const double w = 1.0 - s * s;
    if (w <= 0.0) return 0.0;
    return std::exp(-1.0 / w);
}

// CDF table for the C_c^inf exponential bump on the left half [-1, 0]:
// uniform knots with values and exact (normalized) density derivatives,
// evaluated by monotone cubic Hermite interpolation. The right half is the
// mirror 1 - Phi(-s).
class ExpBumpTable {
public:
    static constexpr std::size_t kKnots = 5001; // 10,001 over the full support
    static constexpr double kStep = 1.0 / static_cast<double>(kKnots - 1);

    ExpBumpTable() {
        std::array<double, kKnots> raw{};
        raw[0] = 0.0;
        double carry = 0.0; // Kahan compensation for the running sum
        for (std::size_t i = 1; i < kKnots; ++i) {
            const double a = -1.0 + kStep * static_cast<double>(i - 1);
            const double b = -1.0 + kStep * static_cast<double>(i);
            const double cell = quadrature::integrate(unit_density_raw_exp, a, b, 16);
            const double y = cell - carry;
            const double t = raw[i - 1] + y;
            carry = (t - raw[i - 1]) - y;
            raw[i] = t;
        }
        norm_ = 0.5 / raw[kKnots - 1]; // mass 1/2 on each half by evenness
        for (std::size_t i = 0; i < kKnots; ++i) {
            const double s = -1.0 + kStep * static_cast<double>(i);
            phi_[i] = norm_ * raw[i];
            rho_[i] = norm_ * unit_density_raw_exp(s);
        }
        phi_[kKnots - 1] = 0.5;
    }

    double normalization() const { return norm_; }

    // Phi on [-1, 0]; caller handles s outside.
    double phi_left(double s) const {
        const double u = (s + 1.0) / kStep;
        auto cell = static_cast<std::size_t>(u);
        if (cell >= kKnots - 1) cell = kKnots - 2;
        const double t = u - static_cast<double>(cell);
        const double pa = phi_[cell], pb = phi_[cell + 1];
        double da = rho_[cell] * kStep, db = rho_[cell + 1] * kStep;
        // Fritsch-Carlson clamp; a no-op on this grid but keeps the
        // interpolant monotone unconditionally.
        const double delta = pb - pa;
        if (delta > 0.0) {
            da = std::min(da, 3.0 * delta);
            db = std::min(db, 3.0 * delta);
        } else {
            da = db = 0.0;
        }
        const double t2 = t * t, t3 = t2 * t;
        return (2.0 * t3 - 3.0 * t2 + 1.0) * pa + (t3 - 2.0 * t2 + t) * da +
               (-2.0 * t3 + 3.0 * t2) * pb + (t3 - t2) * db;
    }

private:
    std::array<double, kKnots> phi_{};
    std::array<double, kKnots> rho_{};
    double norm_ = 0.0;
};

const ExpBumpTable& exp_bump_table() {
    static const ExpBumpTable table;
    return table;
}

// Unit-profile CDF on the closed support; exact closed forms where they exist.
double unit_cdf(BumpFamily family, double s) {
    if (s <= -1.0) return 0.0;
    if (s >= 1.0) return 1.0;
    if (s == 0.0) return 0.5;
    switch (family) {
    case BumpFamily::cosine_bump:
        return 0.5 * (s + 1.0) + std::sin(M_PI * s) / (2.0 * M_PI);
    case BumpFamily::quadratic_bump:
        return 0.5 + 0.25 * (3.0 * s - s * s * s);
    case BumpFamily::smooth_exp_bump:
        if (s < 0.0) return exp_bump_table().phi_left(s);
        return 1.0 - exp_bump_table().phi_left(-s);
    }
    return 0.0;
}

double unit_density(BumpFamily family, double s) {
    if (std::abs(s) >= 1.0) return 0.0;
    switch (family) {
    case BumpFamily::cosine_bump:
        return 0.5 * (1.0 + std::cos(M_PI * s));
    case BumpFamily::quadratic_bump:
        return 0.75 * (1.0 - s * s);
    case BumpFamily::smooth_exp_bump:
        return exp_bump_table().normalization() * unit_density_raw_exp(s);
    }
    return 0.0;
}

} // namespace

BumpFamily family_from_string(const std::string& name) {
    if (name == "cosine_bump") return BumpFamily::cosine_bump;
    if (name == "quadratic_bump") return BumpFamily::quadratic_bump;
    if (name == "smooth_exp_bump") return BumpFamily::smooth_exp_bump;
    throw ConfigError("unknown mollifier family: " + name);
}

std::string to_string(BumpFamily family) {
    switch (family) {
    case BumpFamily::cosine_bump: return "cosine_bump";
    case BumpFamily::quadratic_bump: return "quadratic_bump";
    case BumpFamily::smooth_exp_bump: return "smooth_exp_bump";
    }
    return "?";
}

void validate(const MollifierSpec& spec) {
    if (!(spec.eps > 0.0) || !std::isfinite(spec.eps))
        throw ConfigError("MollifierSpec: eps must be positive and finite");
}

double density(const MollifierSpec& spec, double s) {
    validate(spec);
    return unit_density(spec.family, s / spec.eps) / spec.eps;
}

double cdf(const MollifierSpec& spec, double s) {
    validate(spec);
    return unit_cdf(spec.family, s / spec.eps);
}

double regularized_field(const PeakonState& state, const MollifierSpec& spec, double x) {
    validate(spec);
    const dynamics::IntervalConstants c = dynamics::interval_constants(state);
    const auto& xs = state.positions();
    const std::size_t n = xs.size();
    double field = 0.0;
    for (std::size_t k = 1; k < n; ++k) { // interior intervals only; C_0 = C_N = 0
        if (c.values[k] == 0.0) continue;
        const double w = unit_cdf(spec.family, (x - xs[k - 1]) / spec.eps) -
                         unit_cdf(spec.family, (x - xs[k]) / spec.eps);
        field += c.values[k] * w;
    }
    return field;
}

std::vector<double> regularized_rhs(const PeakonState& state, const MollifierSpec& spec) {
    validate(spec);
    const dynamics::IntervalConstants c = dynamics::interval_constants(state);
    const auto& xs = state.positions();
    const std::size_t n = xs.size();
    std::vector<double> v(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double field = 0.0;
        for (std::size_t k = 1; k < n; ++k) {
            if (c.values[k] == 0.0) continue;
            const double w = unit_cdf(spec.family, (xs[i] - xs[k - 1]) / spec.eps) -
                             unit_cdf(spec.family, (xs[i] - xs[k]) / spec.eps);
            field += c.values[k] * w;
        }
        v[i] = field;
    }
    return v;
}

double midpoint_property_residual(const MollifierSpec& spec, double left_value, double right_value) {
    validate(spec);
    const double phi0 = cdf(spec, 0.0);
    const double convolved = left_value * phi0 + right_value * (1.0 - phi0);
    return std::abs(convolved - 0.5 * (left_value + right_value));
}

double window_integral(const MollifierSpec& spec, double a, double width) {
    validate(spec);
    if (!(width > 0.0)) return 0.0;
    if (a >= spec.eps || a + width <= -spec.eps) return 0.0;
    if (width <= 1e-3 * spec.eps) {
        const double f0 = density(spec, a);
        const double fm = density(spec, a + 0.5 * width);
        const double f1 = density(spec, a + width);
        return width / 6.0 * (f0 + 4.0 * fm + f1);
    }
    return cdf(spec, a + width) - cdf(spec, a);
}

} // namespace peakon::mollifier
