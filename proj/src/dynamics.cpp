#include "peakon/dynamics.hpp"

#include <cmath>

#include "peakon/kernel.hpp"

namespace peakon::dynamics {

PairCouplings::PairCouplings(const PeakonState& state) : n_(state.size()), a_(n_ * n_) {
    const auto& xs = state.positions();
    const auto& ps = state.momenta();
    for (std::size_t i = 0; i < n_; ++i) {
        a_[i * n_ + i] = 0.5 * ps[i] * ps[i];
        for (std::size_t j = i + 1; j < n_; ++j) {
            const double v = 0.5 * ps[i] * ps[j] * std::exp(xs[i] - xs[j]);
            a_[i * n_ + j] = v;
            a_[j * n_ + i] = v;
        }
    }
}

std::vector<double> PairCouplings::speeds() const {
    std::vector<double> speed(n_, 0.0);
    // middle[k] = sum_{m < k < n} a_mn, updated incrementally in O(N) per k.
    double middle = 0.0;
    for (std::size_t k = 0; k < n_; ++k) {
        if (k > 0) {
            for (std::size_t m = 0; m + 1 < k; ++m) middle -= at(m, k);
            for (std::size_t n = k + 1; n < n_; ++n) middle += at(k - 1, n);
        }
        double near = 0.0;
        for (std::size_t j = 0; j < n_; ++j)
            if (j != k) near += at(j, k);
        speed[k] = near + 2.0 * middle;
    }
    return speed;
}

IntervalConstants interval_constants(const PeakonState& state) {
    const auto& xs = state.positions();
    const auto& ps = state.momenta();
    const std::size_t n = xs.size();
    // Each pair i < j contributes p_i p_j e^{x_i - x_j} to every interval
    // strictly between them; accumulate as range updates on a difference
    // array, then prefix-sum. All exponents are non-positive.
    std::vector<double> diff(n + 2, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double c = ps[i] * ps[j] * std::exp(xs[i] - xs[j]);
            diff[i + 1] += c;
            diff[j + 1] -= c;
        }
    }
    IntervalConstants out;
    out.values.assign(n + 1, 0.0);
    double run = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        run += diff[k];
        out.values[k] = run;
    }
    out.values.front() = 0.0;
    out.values.back() = 0.0;
    return out;
}

IntervalConstants interval_constants_fast(const PeakonState& state) {
    const auto& xs = state.positions();
    const auto& ps = state.momenta();
    const std::size_t n = xs.size();
    IntervalConstants out;
    out.values.assign(n + 1, 0.0);
    if (n < 2) return out;

    // prefix[k] = sum_{i <= k} p_i e^{x_i - x_k}, renormalized to the current
    // peakon so every exponent stays non-positive.
    std::vector<double> prefix(n), suffix(n);
    prefix[0] = ps[0];
    for (std::size_t k = 1; k < n; ++k)
        prefix[k] = prefix[k - 1] * std::exp(xs[k - 1] - xs[k]) + ps[k];
    suffix[n - 1] = 0.0;
    for (std::size_t k = n - 1; k-- > 0;)
        suffix[k] = std::exp(xs[k] - xs[k + 1]) * (ps[k + 1] + suffix[k + 1]);

    for (std::size_t k = 0; k + 1 < n; ++k)
        out.values[k + 1] = prefix[k] * suffix[k];
    return out;
}

std::vector<double> mch_conservative_rhs(const PeakonState& state) {
    const IntervalConstants c = interval_constants(state);
    std::vector<double> v(state.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = 0.5 * (c.values[i] + c.values[i + 1]);
    return v;
}

std::vector<double> mch_nonconservative_rhs(const PeakonState& state) {
    std::vector<double> v = mch_conservative_rhs(state);
    const auto& ps = state.momenta();
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] += ps[i] * ps[i] / 6.0;
    return v;
}

double alternating_identity_residual(const PeakonState& state) {
    if (state.size() < 2)
        throw ConfigError("alternating_identity_residual: need N >= 2");
    const std::vector<double> a = PairCouplings(state).speeds();
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j)
        s += (j % 2 == 0 ? a[j] : -a[j]);
    return s;
}

double energy_identity_residual(const PeakonState& state) {
    if (state.size() < 2)
        throw ConfigError("energy_identity_residual: need N >= 2");
    const PairCouplings couplings(state);
    const std::vector<double> a = couplings.speeds();
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            s += couplings.at(i, j) * (a[i] - a[j]);
    return s;
}

ChRhs ch_rhs(std::span<const double> positions, std::span<const double> momenta) {
    const std::size_t n = positions.size();
    ChRhs out;
    out.position_velocities.assign(n, 0.0);
    out.momentum_velocities.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double d = positions[i] - positions[j];
            const double e = std::exp(-std::abs(d));
            const double sgn = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
            out.position_velocities[i] += momenta[j] * e;
            out.momentum_velocities[i] += momenta[i] * momenta[j] * sgn * e;
        }
    }
    return out;
}

double ch_hamiltonian(const ChState& state) {
    const std::size_t n = state.positions.size();
    double h = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            h += state.momenta[i] * state.momenta[j] *
                 kernel::green(state.positions[i] - state.positions[j]);
    return h;
}

} // namespace peakon::dynamics
