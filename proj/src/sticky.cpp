#include "peakon/sticky.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "peakon/kernel.hpp"

namespace peakon::sticky {

MergePartition detect_groups(const PeakonState& state, double tol) {
    MergePartition p;
    p.tol = tol;
    const auto& xs = state.positions();
    std::vector<std::size_t> current{0};
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (xs[i] - xs[i - 1] <= tol) {
            current.push_back(i);
        } else {
            p.groups.push_back(std::move(current));
            current = {i};
        }
    }
    p.groups.push_back(std::move(current));
    return p;
}

PeakonState merge(const PeakonState& state, const MergePartition& partition) {
    const auto& xs = state.positions();
    const auto& ps = state.momenta();

    std::size_t expected = 0;
    for (const auto& group : partition.groups) {
        if (group.empty())
            throw ConfigError("merge: empty group in partition");
        for (std::size_t j = 0; j < group.size(); ++j) {
            if (group[j] != expected + j)
                throw ConfigError("merge: partition groups must be contiguous ascending index runs");
            if (j > 0 && xs[group[j]] - xs[group[j] - 1] > partition.tol)
                throw ConfigError("merge: group spans a gap above tol at index " +
                                  std::to_string(group[j]));
        }
        expected += group.size();
    }
    if (expected != state.size())
        throw ConfigError("merge: partition does not cover all peakons");

    std::vector<double> q, y;
    q.reserve(partition.groups.size());
    y.reserve(partition.groups.size());
    for (const auto& group : partition.groups) {
        double momentum = 0.0;
        for (std::size_t idx : group) momentum += ps[idx];
        q.push_back(momentum);
        y.push_back(xs[group.front()]); // representative = minimal index
    }
    return PeakonState(state.t(), std::move(y), std::move(q));
}

std::size_t Trajectory::epoch_at_time(double t) const {
    std::size_t e = 0;
    while (e < events.size() && t >= events[e].t) ++e;
    return e;
}

double Trajectory::position_of_original(std::size_t original, std::size_t sample_index) const {
    const std::size_t e = sample_epoch[sample_index];
    return samples[sample_index].state.position(lineage[e][original]);
}

namespace {

PeakonState hermite_state(double t, double t0, const PeakonState& s0, const std::vector<double>& v0,
                          double t1, const PeakonState& s1, const std::vector<double>& v1) {
    const double h = t1 - t0;
    const double u = (t - t0) / h;
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    const double h10 = u3 - 2.0 * u2 + u;
    const double h01 = -2.0 * u3 + 3.0 * u2;
    const double h11 = u3 - u2;
    std::vector<double> x(s0.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = h00 * s0.position(i) + h10 * h * v0[i] + h01 * s1.position(i) + h11 * h * v1[i];
    return PeakonState(t, std::move(x), s0.momenta());
}

} // namespace

PeakonState Trajectory::state_at(double t) const {
    if (samples.empty()) throw ConfigError("state_at: empty trajectory");
    if (t <= samples.front().t) return samples.front().state;
    if (t >= samples.back().t) return samples.back().state;

    // First sample with time > t.
    auto it = std::upper_bound(samples.begin(), samples.end(), t,
                               [](double value, const integrate::Sample& s) { return value < s.t; });
    const auto hi = static_cast<std::size_t>(it - samples.begin());
    const auto lo = hi - 1;

    if (sample_epoch[lo] == sample_epoch[hi])
        return hermite_state(t, samples[lo].t, samples[lo].state, samples[lo].velocities,
                             samples[hi].t, samples[hi].state, samples[hi].velocities);

    // t lies between an event sample and the next epoch's first grid sample;
    // anchor on the post-merge state (right-continuous at the event).
    const MergeEvent& ev = events[sample_epoch[lo]];
    if (t < ev.t) return samples[lo].state;
    return hermite_state(t, ev.t, ev.post_state, ev.post_velocities, samples[hi].t,
                         samples[hi].state, samples[hi].velocities);
}

Trajectory single_epoch_trajectory(std::vector<integrate::Sample> samples, std::size_t n) {
    Trajectory traj;
    traj.samples = std::move(samples);
    traj.sample_epoch.assign(traj.samples.size(), 0);
    traj.original_count = n;
    traj.m0_initial = traj.samples.empty() ? 0.0 : traj.samples.front().state.m0();
    std::vector<std::size_t> identity(n);
    for (std::size_t i = 0; i < n; ++i) identity[i] = i;
    traj.lineage.push_back(std::move(identity));
    return traj;
}

Trajectory evolve_sticky(const PeakonState& initial, const integrate::SimConfig& config) {
    config.validate_for(initial);
    const auto rhs = [](const PeakonState& s) { return dynamics::mch_conservative_rhs(s); };

    Trajectory traj;
    traj.original_count = initial.size();
    traj.m0_initial = initial.m0();
    {
        std::vector<std::size_t> identity(initial.size());
        for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = i;
        traj.lineage.push_back(std::move(identity));
    }

    PeakonState current = initial;
    std::size_t epoch = 0;
    const double grid_origin = initial.t();

    while (true) {
        integrate::Segment seg = integrate::evolve_until_event(rhs, current, config, grid_origin);
        const std::size_t skip = epoch == 0 ? 0 : 1; // epoch start equals the merge state
        for (std::size_t i = skip; i < seg.samples.size(); ++i) {
            traj.samples.push_back(std::move(seg.samples[i]));
            traj.sample_epoch.push_back(epoch);
        }
        if (!seg.event) break;

        if (traj.events.size() >= initial.size() - 1)
            throw IntegratorError("evolve_sticky: more merge events than N-1; "
                                  "merge tolerance is inconsistent");

        const PeakonState& pre = traj.samples.back().state;
        MergePartition partition = detect_groups(pre, config.merge_gap_tol);
        if (partition.trivial())
            throw IntegratorError("evolve_sticky: event reported but no coinciding group found");
        PeakonState post = merge(pre, partition);

        // lineage for the new epoch: original -> enclosing group index.
        std::vector<std::size_t> live_to_group(pre.size());
        for (std::size_t g = 0; g < partition.groups.size(); ++g)
            for (std::size_t idx : partition.groups[g]) live_to_group[idx] = g;
        const std::vector<std::size_t>& prev = traj.lineage[epoch];
        std::vector<std::size_t> next(traj.original_count);
        for (std::size_t i = 0; i < traj.original_count; ++i) next[i] = live_to_group[prev[i]];
        traj.lineage.push_back(std::move(next));

        std::vector<double> post_velocities = rhs(post);
        traj.events.push_back(MergeEvent{seg.event->t_event, std::move(partition), pre, post,
                                         std::move(post_velocities), seg.event->kind});

        ++epoch;
        current = std::move(post);
        if (current.t() >= config.t_end || current.size() == 1) {
            if (current.t() < config.t_end) {
                // A single peakon cannot produce further events; finish the run.
                integrate::Segment tail =
                    integrate::evolve_until_event(rhs, current, config, grid_origin);
                for (std::size_t i = 1; i < tail.samples.size(); ++i) {
                    traj.samples.push_back(std::move(tail.samples[i]));
                    traj.sample_epoch.push_back(epoch);
                }
            }
            break;
        }
    }
    return traj;
}

double speed_consistency(const Trajectory& traj, std::size_t probes_per_epoch) {
    double worst = 0.0;
    for (std::size_t e = 0; e < traj.epoch_count(); ++e) {
        // Indices of this epoch's samples.
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < traj.samples.size(); ++i)
            if (traj.sample_epoch[i] == e) idx.push_back(i);
        if (idx.size() < 3) continue;

        // Uniformly spaced interior triples only (event/realignment samples
        // break the spacing).
        std::vector<std::size_t> centers;
        for (std::size_t j = 1; j + 1 < idx.size(); ++j) {
            const double hl = traj.samples[idx[j]].t - traj.samples[idx[j - 1]].t;
            const double hr = traj.samples[idx[j + 1]].t - traj.samples[idx[j]].t;
            if (std::abs(hl - hr) < 1e-9 * std::max(hl, hr)) centers.push_back(j);
        }
        if (centers.empty()) continue;

        const std::size_t stride = std::max<std::size_t>(1, centers.size() / std::max<std::size_t>(probes_per_epoch, 1));
        for (std::size_t c = 0; c < centers.size(); c += stride) {
            const std::size_t j = centers[c];
            const integrate::Sample& left = traj.samples[idx[j - 1]];
            const integrate::Sample& mid = traj.samples[idx[j]];
            const integrate::Sample& right = traj.samples[idx[j + 1]];
            const double span = right.t - left.t;
            for (std::size_t i = 0; i < mid.state.size(); ++i) {
                const double fd = (right.state.position(i) - left.state.position(i)) / span;
                const kernel::FieldSample f = kernel::eval_field(mid.state, mid.state.position(i));
                const double reference = f.u * f.u - kernel::avg_ux_sq(mid.state, mid.state.position(i));
                worst = std::max(worst, std::abs(fd - reference));
            }
        }
    }
    return worst;
}

} // namespace peakon::sticky
