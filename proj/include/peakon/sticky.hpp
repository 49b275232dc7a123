#pragma once

#include <cstddef>
#include <vector>

#include "peakon/integrate.hpp"
#include "peakon/state.hpp"

namespace peakon::sticky {

/**
 * Partition of the peakon indices into maximal groups of coinciding
 * positions (within tol). Groups are ordered by position; each group is a
 * contiguous ascending index run and its representative is its first index.
 */
struct MergePartition {
    std::vector<std::vector<std::size_t>> groups;
    double tol = 0.0;

    bool trivial() const {
        for (const auto& g : groups)
            if (g.size() > 1) return false;
        return true;
    }
};

/// Transitive closure of adjacent gaps <= tol into contiguous groups.
MergePartition detect_groups(const PeakonState& state, double tol);

/**
 * Sticky merge: one peakon per group with momentum q_k = sum of the group's
 * momenta and position of the group representative. Total momentum is
 * preserved exactly; zero-momentum results are flagged and retained.
 * Throws ConfigError if the partition is inconsistent with the state's gaps.
 */
PeakonState merge(const PeakonState& state, const MergePartition& partition);

struct MergeEvent {
    double t = 0.0;
    MergePartition partition;
    PeakonState pre_state;
    PeakonState post_state;
    std::vector<double> post_velocities; ///< rhs at post_state (interpolation anchor)
    integrate::EventKind kind = integrate::EventKind::gap_below_tol;
};

/**
 * Time-sampled evolution with merge events. Between consecutive events the
 * peakon count is constant; lineage[e][i] maps original index i to its live
 * (representative) index during epoch e, so every original trajectory is
 * resolvable at every sampled time.
 */
struct Trajectory {
    std::vector<integrate::Sample> samples;      ///< strictly increasing times
    std::vector<std::size_t> sample_epoch;       ///< epoch of each sample
    std::vector<MergeEvent> events;
    std::vector<std::vector<std::size_t>> lineage;
    std::size_t original_count = 0;
    double m0_initial = 0.0;

    std::size_t epoch_count() const { return events.size() + 1; }

    /// Epoch whose half-open time interval [t_event_{e-1}, t_event_e) holds t.
    std::size_t epoch_at_time(double t) const;

    /// Lineage-resolved position of an original peakon at a stored sample.
    double position_of_original(std::size_t original, std::size_t sample_index) const;

    /// Cubic Hermite reconstruction of the live state at time t
    /// (right-continuous at event times).
    PeakonState state_at(double t) const;
};

/**
 * Alternate conservative evolution and sticky merges until t_end. At most
 * N-1 events occur; energy is conserved across the whole trajectory up to
 * integrator tolerance.
 */
Trajectory evolve_sticky(const PeakonState& initial, const integrate::SimConfig& config);

/// Regularized/plain runs reuse Trajectory with a single epoch and no events.
Trajectory single_epoch_trajectory(std::vector<integrate::Sample> samples, std::size_t n);

/**
 * Max over sampled interior times and peakons of
 * |finite-difference dx_i/dt - (u^2 - avg(u_x^2))(x_i)|,
 * using centered differences on uniformly spaced sample triples away from
 * event times; checks that the trajectory moves with the weak-solution speed.
 */
double speed_consistency(const Trajectory& traj, std::size_t probes_per_epoch);

} // namespace peakon::sticky
