#include "peakon/dispersive.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <string>

#include "peakon/mollifier.hpp"

namespace peakon::dispersive {

namespace {

// Gap-coordinate phase point of the regularized system: y = (x_1, G_0..G_{N-2}).
struct GapVector {
    double x1 = 0.0;
    std::vector<double> gaps;
};

// Prefix offsets s_j = x_j - x_1 (nonnegative, exact in the gap scale).
std::vector<double> offsets(const GapVector& y) {
    std::vector<double> s(y.gaps.size() + 1);
    s[0] = 0.0;
    for (std::size_t j = 0; j < y.gaps.size(); ++j) s[j + 1] = s[j] + y.gaps[j];
    return s;
}

// Interval constants from gap offsets: values[m] = sum_{i<m<=j} p_i p_j e^{s_i - s_j}.
std::vector<double> interval_constants_from_offsets(const std::vector<double>& s,
                                                    const std::vector<double>& p) {
    const std::size_t n = s.size();
    std::vector<double> diff(n + 2, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double c = p[i] * p[j] * std::exp(s[i] - s[j]);
            diff[i + 1] += c;
            diff[j + 1] -= c;
        }
    std::vector<double> values(n + 1, 0.0);
    double run = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        run += diff[k];
        values[k] = run;
    }
    values.front() = 0.0;
    values.back() = 0.0;
    return values;
}

/*
 * Velocity of the leftmost peakon and the gap derivatives, everything
 * expressed through integrals of rho_eps over windows whose width is one of
 * the current gaps:
 *   v(x_0)    = sum_m C_m W(-s_m, G_{m-1})
 *   dG_k/dt   = sum_m C_m [W(s_k - s_{m-1}, G_k) - W(s_k - s_m, G_k)]
 * so the computed contraction rate of G_k scales with G_k itself and tiny
 * gaps never pass through a catastrophic CDF cancellation.
 */
struct GapRhs {
    const std::vector<double>& momenta;
    const mollifier::MollifierSpec& spec;

    GapVector operator()(const GapVector& y) const {
        const std::vector<double> s = offsets(y);
        const std::vector<double> c = interval_constants_from_offsets(s, momenta);
        const std::size_t n = s.size();

        GapVector dy;
        dy.gaps.assign(y.gaps.size(), 0.0);
        double v1 = 0.0;
        for (std::size_t m = 1; m < n; ++m) {
            if (c[m] == 0.0) continue;
            v1 += c[m] * mollifier::window_integral(spec, -s[m], y.gaps[m - 1]);
        }
        dy.x1 = v1;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            double slope = 0.0;
            for (std::size_t m = 1; m < n; ++m) {
                if (c[m] == 0.0) continue;
                slope += c[m] * (mollifier::window_integral(spec, s[k] - s[m - 1], y.gaps[k]) -
                                 mollifier::window_integral(spec, s[k] - s[m], y.gaps[k]));
            }
            dy.gaps[k] = slope;
        }
        return dy;
    }
};

GapVector advanced(const GapVector& y, const GapVector& slope, double h, double t_hint, double eps) {
    GapVector out = y;
    out.x1 += h * slope.x1;
    for (std::size_t k = 0; k < y.gaps.size(); ++k) {
        out.gaps[k] += h * slope.gaps[k];
        if (!(out.gaps[k] > 0.0))
            throw IntegratorError("evolve_regularized: gap " + std::to_string(k) +
                                  " lost positivity at t approx " + std::to_string(t_hint) +
                                  "; dt too large for eps = " + std::to_string(eps));
    }
    return out;
}

GapVector rk4_gap_step(const GapRhs& rhs, const GapVector& y, double h, double t_hint, double eps) {
    const GapVector k1 = rhs(y);
    const GapVector k2 = rhs(advanced(y, k1, 0.5 * h, t_hint, eps));
    const GapVector k3 = rhs(advanced(y, k2, 0.5 * h, t_hint, eps));
    const GapVector k4 = rhs(advanced(y, k3, h, t_hint, eps));
    GapVector out = y;
    out.x1 += h / 6.0 * (k1.x1 + 2.0 * k2.x1 + 2.0 * k3.x1 + k4.x1);
    for (std::size_t k = 0; k < y.gaps.size(); ++k) {
        out.gaps[k] +=
            h / 6.0 * (k1.gaps[k] + 2.0 * k2.gaps[k] + 2.0 * k3.gaps[k] + k4.gaps[k]);
        if (!(out.gaps[k] > 0.0))
            throw IntegratorError("evolve_regularized: gap " + std::to_string(k) +
                                  " lost positivity at t approx " + std::to_string(t_hint) +
                                  "; dt too large for eps = " + std::to_string(eps));
    }
    return out;
}

// Absolute positions; a gap below the local position resolution advances to
// the next representable double so stored states stay strictly ordered.
std::vector<double> reconstruct_positions(const GapVector& y) {
    std::vector<double> x(y.gaps.size() + 1);
    x[0] = y.x1;
    for (std::size_t j = 0; j < y.gaps.size(); ++j) {
        double next = x[j] + y.gaps[j];
        if (!(next > x[j])) next = std::nextafter(x[j], std::numeric_limits<double>::infinity());
        x[j + 1] = next;
    }
    return x;
}

} // namespace

RegularizedRun evolve_regularized(const PeakonState& initial, const mollifier::MollifierSpec& spec,
                                  const integrate::SimConfig& config) {
    mollifier::validate(spec);
    config.validate_for(initial);

    const auto sample_rhs = [&spec](const PeakonState& s) {
        return mollifier::regularized_rhs(s, spec);
    };
    GapVector y;
    y.x1 = initial.position(0);
    y.gaps.resize(initial.size() - 1);
    for (std::size_t k = 0; k + 1 < initial.size(); ++k)
        y.gaps[k] = initial.position(k + 1) - initial.position(k);
    const GapRhs rhs{initial.momenta(), spec};

    RegularizedRun run;
    run.min_gap = initial.size() > 1 ? *std::min_element(y.gaps.begin(), y.gaps.end())
                                     : std::numeric_limits<double>::infinity();

    std::vector<integrate::Sample> samples;
    auto emit = [&](double t) {
        PeakonState state(t, reconstruct_positions(y), initial.momenta());
        samples.push_back({t, state, sample_rhs(state)});
        run.sample_gaps.push_back(y.gaps);
    };
    emit(initial.t());

    const double t0 = initial.t();
    const double dt = config.dt;
    double t = t0;
    long long k = 1;
    while (t < config.t_end) {
        double target = t0 + static_cast<double>(k) * dt;
        const bool final_step = target > config.t_end - dt * 1e-9;
        if (final_step) target = config.t_end;
        y = rk4_gap_step(rhs, y, target - t, t, spec.eps);
        t = target;
        if (!y.gaps.empty())
            run.min_gap = std::min(run.min_gap, *std::min_element(y.gaps.begin(), y.gaps.end()));
        if (final_step || k % static_cast<long long>(config.sample_every) == 0) emit(t);
        if (final_step) break;
        ++k;
    }
    run.trajectory = sticky::single_epoch_trajectory(std::move(samples), initial.size());
    return run;
}

std::pair<double, std::size_t> regularized_step(const integrate::SimConfig& config, double eps,
                                                double m0) {
    const double dt_out = config.dt * static_cast<double>(config.sample_every);
    const double m0sq = std::max(m0 * m0, 1e-12);
    const double dt_target = std::min(config.dt, eps / (10.0 * m0sq));
    auto substeps = static_cast<std::size_t>(std::ceil(dt_out / dt_target - 1e-12));
    substeps = std::max<std::size_t>(substeps, 1);
    return {dt_out / static_cast<double>(substeps), substeps};
}

namespace {

long long grid_key(double t, double dt_out) {
    return std::llround(t / dt_out);
}

bool on_grid(double t, double dt_out) {
    const double k = t / dt_out;
    return std::abs(k - std::round(k)) < 1e-6;
}

} // namespace

ConvergenceReport convergence_study(const PeakonState& initial, const std::vector<double>& eps_list,
                                    const integrate::SimConfig& config, mollifier::BumpFamily family,
                                    double probe_offset) {
    if (eps_list.empty()) throw ConfigError("convergence_study: empty eps list");
    for (std::size_t i = 0; i + 1 < eps_list.size(); ++i)
        if (!(eps_list[i] > eps_list[i + 1]))
            throw ConfigError("convergence_study: eps values must be strictly decreasing");

    const sticky::Trajectory reference = sticky::evolve_sticky(initial, config);
    const double dt_out = config.dt * static_cast<double>(config.sample_every);

    // Lineage-resolved reference positions keyed by output-grid index.
    std::map<long long, std::vector<double>> ref_positions;
    for (std::size_t s = 0; s < reference.samples.size(); ++s) {
        const double t = reference.samples[s].t - initial.t();
        if (!on_grid(t, dt_out)) continue;
        std::vector<double> xs(reference.original_count);
        for (std::size_t i = 0; i < reference.original_count; ++i)
            xs[i] = reference.position_of_original(i, s);
        ref_positions[grid_key(t, dt_out)] = std::move(xs);
    }

    ConvergenceReport report;
    report.eps_values = eps_list;
    report.has_collision = !reference.events.empty();
    std::vector<std::pair<std::size_t, std::size_t>> probe_pairs;
    if (report.has_collision) {
        report.probe_time = reference.events.front().t + probe_offset;
        for (const auto& group : reference.events.front().partition.groups)
            for (std::size_t j = 0; j + 1 < group.size(); ++j)
                probe_pairs.emplace_back(group[j], group[j] + 1);
    }

    struct PerEps {
        double dt = 0.0;
        double min_gap = 0.0;
        double sup = 0.0;
        double scaled_gap = 0.0;
    };
    auto run_one = [&](double eps) {
        const auto [dt_eps, substeps] = regularized_step(config, eps, initial.m0());
        integrate::SimConfig cfg = config;
        cfg.dt = dt_eps;
        cfg.sample_every = substeps;
        cfg.bisect_tol = std::min(config.bisect_tol, 0.5 * dt_eps);
        const mollifier::MollifierSpec spec{family, eps};
        const RegularizedRun run = evolve_regularized(initial, spec, cfg);

        PerEps out;
        out.dt = dt_eps;
        out.min_gap = run.min_gap;
        double best_probe_distance = std::numeric_limits<double>::infinity();
        for (std::size_t si = 0; si < run.trajectory.samples.size(); ++si) {
            const auto& sample = run.trajectory.samples[si];
            const double t = sample.t - initial.t();
            if (on_grid(t, dt_out)) {
                auto it = ref_positions.find(grid_key(t, dt_out));
                if (it != ref_positions.end()) {
                    for (std::size_t i = 0; i < run.trajectory.original_count; ++i)
                        out.sup = std::max(out.sup,
                                           std::abs(sample.state.position(i) - it->second[i]));
                }
            }
            if (report.has_collision && sample.t >= reference.events.front().t) {
                const double d = std::abs(sample.t - report.probe_time);
                if (d < best_probe_distance) {
                    best_probe_distance = d;
                    double g = 0.0;
                    for (const auto& [a, b] : probe_pairs) {
                        (void)b;
                        g = std::max(g, run.sample_gaps[si][a]);
                    }
                    out.scaled_gap = g / eps;
                }
            }
        }
        return out;
    };

    // Per-eps runs are independent pure computations: fan out, join in order.
    std::vector<std::future<PerEps>> futures;
    futures.reserve(eps_list.size());
    for (double eps : eps_list)
        futures.push_back(std::async(std::launch::async, run_one, eps));
    for (auto& f : futures) {
        const PerEps out = f.get();
        report.dt_used.push_back(out.dt);
        report.min_gaps.push_back(out.min_gap);
        report.sup_distances.push_back(out.sup);
        if (report.has_collision) report.scaled_gaps.push_back(out.scaled_gap);
    }
    return report;
}

} // namespace peakon::dispersive
