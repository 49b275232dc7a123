#include "peakon/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace peakon::integrate {

void SimConfig::validate_for(const PeakonState& initial) const {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw ConfigError("SimConfig: dt must be positive");
    if (!(t_end > initial.t()))
        throw ConfigError("SimConfig: t_end must exceed the start time");
    if (dt > t_end - initial.t() + 1e-15)
        throw ConfigError("SimConfig: dt exceeds the integration horizon");
    double scale = 1.0;
    for (double x : initial.positions()) scale = std::max(scale, std::abs(x));
    if (merge_gap_tol < 1e2 * std::numeric_limits<double>::epsilon() * scale)
        throw ConfigError("SimConfig: merge_gap_tol below 100 eps at this position scale");
    if (!(bisect_tol > 0.0) || bisect_tol >= dt)
        throw ConfigError("SimConfig: bisect_tol must lie in (0, dt)");
    if (sample_every < 1)
        throw ConfigError("SimConfig: sample_every must be >= 1");
}

namespace {

std::vector<double> rk4_positions(const PositionRhs& rhs, const PeakonState& s, double dt) {
    const auto& x0 = s.positions();
    const std::size_t n = x0.size();
    auto stage = [&](const std::vector<double>& slope, double c) {
        std::vector<double> x(x0);
        for (std::size_t i = 0; i < n; ++i) x[i] += c * dt * slope[i];
        return PeakonState(s.t() + c * dt, std::move(x), s.momenta());
    };
    const std::vector<double> k1 = rhs(s);
    const std::vector<double> k2 = rhs(stage(k1, 0.5));
    const std::vector<double> k3 = rhs(stage(k2, 0.5));
    const std::vector<double> k4 = rhs(stage(k3, 1.0));
    std::vector<double> x(x0);
    for (std::size_t i = 0; i < n; ++i)
        x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return x;
}

struct TrialAnalysis {
    bool event = false;
    bool breach = false;
    bool stage_breach = false;
    bool has_positions = false;
    std::vector<double> positions;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

TrialAnalysis analyze_trial(const PositionRhs& rhs, const PeakonState& from, double h, double tol) {
    TrialAnalysis a;
    try {
        a.positions = rk4_positions(rhs, from, h);
        a.has_positions = true;
    } catch (const OrderingError&) {
        a.stage_breach = true;
        a.event = a.breach = true;
        return a;
    }
    const auto& before = from.positions();
    for (std::size_t i = 0; i + 1 < a.positions.size(); ++i) {
        const double gap = a.positions[i + 1] - a.positions[i];
        const double gap_before = before[i + 1] - before[i];
        if (gap <= 0.0) {
            a.breach = true;
            a.pairs.emplace_back(i, i + 1);
        } else if (gap <= tol && gap < gap_before) {
            a.pairs.emplace_back(i, i + 1);
        }
    }
    a.event = a.breach || !a.pairs.empty();
    return a;
}

// Clamp the colliding gaps into (0, tol] and rebuild positions left to right.
std::vector<double> clamp_event_positions(const std::vector<double>& positions,
                                          const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                          double tol) {
    std::vector<bool> colliding(positions.size(), false);
    for (const auto& [i, j] : pairs) colliding[i] = true;
    std::vector<double> out(positions.size());
    out[0] = positions[0];
    for (std::size_t i = 0; i + 1 < positions.size(); ++i) {
        double gap = positions[i + 1] - positions[i];
        if (colliding[i]) gap = std::min(std::max(gap, 0.5 * tol), tol);
        out[i + 1] = out[i] + gap;
    }
    return out;
}

} // namespace

PeakonState rk4_step(const PositionRhs& rhs, const PeakonState& state, double dt) {
    std::vector<double> x = rk4_positions(rhs, state, dt);
    return PeakonState(state.t() + dt, std::move(x), state.momenta());
}

Segment evolve_until_event(const PositionRhs& rhs, const PeakonState& initial,
                           const SimConfig& config, std::optional<double> grid_origin) {
    config.validate_for(initial);
    const double origin = grid_origin.value_or(initial.t());
    const double dt = config.dt;
    const double tol = config.merge_gap_tol;

    Segment seg;
    PeakonState s = initial;
    seg.samples.push_back({s.t(), s, rhs(s)});

    long long k = static_cast<long long>(std::floor((s.t() - origin) / dt)) + 1;
    while (origin + static_cast<double>(k) * dt <= s.t() + dt * 1e-9) ++k;

    auto finish_event = [&](const std::vector<double>& positions,
                            std::vector<std::pair<std::size_t, std::size_t>> pairs, double t_event,
                            bool breach) {
        for (std::size_t i = 0; i + 1 < positions.size(); ++i) {
            if (positions[i + 1] - positions[i] < -10.0 * tol)
                throw IntegratorError("evolve_until_event: step jumped deep past an ordering "
                                      "breach; reduce dt (at t approx " +
                                      std::to_string(t_event) + ")");
        }
        PeakonState event_state(t_event, clamp_event_positions(positions, pairs, tol),
                                s.momenta());
        seg.samples.push_back({t_event, event_state, rhs(event_state)});
        EventReport report;
        report.kind = breach ? EventKind::ordering_breach : EventKind::gap_below_tol;
        report.t_event = t_event;
        report.pairs = std::move(pairs);
        seg.event = report;
    };

    int localization_rounds = 0;
    while (s.t() < config.t_end) {
        double target = origin + static_cast<double>(k) * dt;
        const bool final_step = target > config.t_end - dt * 1e-9;
        if (final_step) target = config.t_end;
        const double h = target - s.t();

        TrialAnalysis full = analyze_trial(rhs, s, h, tol);
        if (!full.event) {
            s = PeakonState(target, std::move(full.positions), s.momenta());
            if (final_step || k % static_cast<long long>(config.sample_every) == 0)
                seg.samples.push_back({s.t(), s, rhs(s)});
            if (final_step) break;
            ++k;
            localization_rounds = 0;
            continue;
        }

        // Event inside (s.t, target]. Find the largest event-free prefix by
        // re-integrating from s with bisected step sizes.
        if (++localization_rounds > 1000)
            throw IntegratorError("evolve_until_event: event localization failed to converge "
                                  "(at t approx " + std::to_string(s.t()) + ")");
        double lo = 0.0, hi = h;
        TrialAnalysis at_hi = std::move(full);
        while (hi - lo > config.bisect_tol) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            TrialAnalysis a = analyze_trial(rhs, s, mid, tol);
            if (a.event) {
                hi = mid;
                at_hi = std::move(a);
            } else {
                lo = mid;
            }
        }

        if (at_hi.has_positions) {
            // The localized trial itself exhibits the event: its state is the
            // pre-event state (breached gaps get clamped into (0, tol]).
            finish_event(at_hi.positions, std::move(at_hi.pairs), s.t() + hi, at_hi.breach);
            return seg;
        }

        // The localized trial breaks ordering inside its own stages, so no
        // event state exists at hi. Advance to the largest ordered state and
        // either declare the event there (colliding gaps already at the
        // tolerance) or repeat the localization from it with the smaller
        // remaining window.
        std::vector<double> positions = lo > 0.0 ? rk4_positions(rhs, s, lo) : s.positions();
        std::vector<std::pair<std::size_t, std::size_t>> tight;
        const double closing_bound = std::max(tol, 2.0 * s.m0() * s.m0() * config.bisect_tol);
        for (std::size_t i = 0; i + 1 < positions.size(); ++i)
            if (positions[i + 1] - positions[i] <= closing_bound) tight.emplace_back(i, i + 1);
        if (!tight.empty()) {
            finish_event(positions, std::move(tight), s.t() + lo, true);
            return seg;
        }
        if (lo <= 0.0)
            throw IntegratorError("evolve_until_event: cannot bracket ordering breach; "
                                  "reduce dt (at t approx " + std::to_string(s.t()) + ")");
        s = PeakonState(s.t() + lo, std::move(positions), s.momenta());
    }
    return seg;
}

std::vector<ChSample> evolve_ch(const dynamics::ChState& initial, double dt, double t_end,
                                std::size_t sample_every) {
    if (!(dt > 0.0)) throw ConfigError("evolve_ch: dt must be positive");
    if (sample_every < 1) throw ConfigError("evolve_ch: sample_every must be >= 1");
    const std::size_t n = initial.positions.size();
    if (n == 0 || initial.momenta.size() != n)
        throw ConfigError("evolve_ch: positions/momenta size mismatch");

    std::vector<ChSample> samples;
    dynamics::ChState s = initial;
    samples.push_back({s.t, s});

    auto step = [n](const dynamics::ChState& from, double h) {
        auto eval = [](const dynamics::ChState& st) { return dynamics::ch_rhs(st.positions, st.momenta); };
        auto advanced = [n](const dynamics::ChState& st, const dynamics::ChRhs& slope, double c) {
            dynamics::ChState out = st;
            for (std::size_t i = 0; i < n; ++i) {
                out.positions[i] += c * slope.position_velocities[i];
                out.momenta[i] += c * slope.momentum_velocities[i];
            }
            return out;
        };
        const dynamics::ChRhs k1 = eval(from);
        const dynamics::ChRhs k2 = eval(advanced(from, k1, 0.5 * h));
        const dynamics::ChRhs k3 = eval(advanced(from, k2, 0.5 * h));
        const dynamics::ChRhs k4 = eval(advanced(from, k3, h));
        dynamics::ChState out = from;
        for (std::size_t i = 0; i < n; ++i) {
            out.positions[i] += h / 6.0 * (k1.position_velocities[i] + 2.0 * k2.position_velocities[i] +
                                           2.0 * k3.position_velocities[i] + k4.position_velocities[i]);
            out.momenta[i] += h / 6.0 * (k1.momentum_velocities[i] + 2.0 * k2.momentum_velocities[i] +
                                         2.0 * k3.momentum_velocities[i] + k4.momentum_velocities[i]);
        }
        out.t = from.t + h;
        return out;
    };

    const double t0 = initial.t;
    long long k = 1;
    while (s.t < t_end) {
        double target = t0 + static_cast<double>(k) * dt;
        const bool final_step = target > t_end - dt * 1e-9;
        if (final_step) target = t_end;
        s = step(s, target - s.t);
        s.t = target;
        if (final_step || k % static_cast<long long>(sample_every) == 0)
            samples.push_back({s.t, s});
        if (final_step) break;
        ++k;
    }
    return samples;
}

} // namespace peakon::integrate
