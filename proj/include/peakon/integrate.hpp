#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "peakon/dynamics.hpp"
#include "peakon/state.hpp"

namespace peakon::integrate {

/// Fixed-step integration parameters. t_end is an absolute time.
struct SimConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    double merge_gap_tol = 1e-9; ///< gap threshold declaring a collision
    double bisect_tol = 1e-12;   ///< event time localization window
    std::size_t sample_every = 1;

    /// Throws ConfigError on inconsistent settings for the given start state.
    void validate_for(const PeakonState& initial) const;
};

enum class EventKind { ordering_breach, gap_below_tol };

struct EventReport {
    EventKind kind = EventKind::gap_below_tol;
    double t_event = 0.0;
    /// Adjacent colliding pairs (i, i+1), by index into the evolving state.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// Velocity field of a position-only system (momenta constant in time).
using PositionRhs = std::function<std::vector<double>(const PeakonState&)>;

/// Classical 4th-order step; momenta carried unchanged, t advanced by dt.
/// Propagates OrderingError if a stage or the result breaks strict ordering.
PeakonState rk4_step(const PositionRhs& rhs, const PeakonState& state, double dt);

struct Sample {
    double t = 0.0;
    PeakonState state;
    std::vector<double> velocities; ///< rhs at the sample (cubic interpolation anchor)
};

struct Segment {
    std::vector<Sample> samples; ///< first at the start state, last at t_end or t_event
    std::optional<EventReport> event;
};

/**
 * Step with fixed dt until t_end, an ordering breach, or a gap falling below
 * merge_gap_tol while closing. On an event the offending step is re-integrated
 * from the last accepted state with bisected step sizes until the event time
 * is localized within bisect_tol; the returned final sample is the pre-event
 * state at t_event with every colliding gap clamped into (0, merge_gap_tol].
 *
 * Samples are emitted on the time grid grid_origin + k*dt (every
 * sample_every-th k), so epochs started off-grid realign with a fractional
 * first step. Throws IntegratorError when a step jumps so far past a breach
 * that bisection cannot produce a usable event state.
 */
Segment evolve_until_event(const PositionRhs& rhs, const PeakonState& initial,
                           const SimConfig& config,
                           std::optional<double> grid_origin = std::nullopt);

struct ChSample {
    double t = 0.0;
    dynamics::ChState state;
};

/// RK4 evolution of the CH peakon system (positions and momenta jointly);
/// no ordering constraint, no events.
std::vector<ChSample> evolve_ch(const dynamics::ChState& initial, double dt, double t_end,
                                std::size_t sample_every = 1);

} // namespace peakon::integrate
