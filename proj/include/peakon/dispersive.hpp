#pragma once

#include <utility>
#include <vector>

#include "peakon/integrate.hpp"
#include "peakon/mollifier.hpp"
#include "peakon/sticky.hpp"
#include "peakon/state.hpp"

namespace peakon::dispersive {

/**
 * Regularized (eps > 0) evolution. The integrator works in gap coordinates
 * (x_1 plus the N-1 positive gaps) with convolution windows differenced
 * analytically: post-collision gaps contract exponentially without bound,
 * and in absolute coordinates they would collapse onto the position ulp
 * grid. sample_gaps carries the exact gap vectors; trajectory states
 * reconstruct absolute positions (nudged up to the next representable
 * double where a gap is below the position resolution).
 */
struct RegularizedRun {
    sticky::Trajectory trajectory;
    std::vector<std::vector<double>> sample_gaps;
    double min_gap = 0.0; ///< over every accepted step, not just samples
};

/**
 * RK4 evolution of dx_i/dt = (rho_eps * (u^2 - u_x^2))(x_i). No merge
 * events exist for eps > 0; a non-positive gap in any stage raises
 * IntegratorError (dt too large for the given eps).
 */
RegularizedRun evolve_regularized(const PeakonState& initial, const mollifier::MollifierSpec& spec,
                                  const integrate::SimConfig& config);

/// Step size for a regularized run: dt shrunk to eps/(10 m0^2) and snapped
/// so samples align with the reference output grid.
std::pair<double, std::size_t> regularized_step(const integrate::SimConfig& config, double eps,
                                                double m0);

/**
 * Convergence data of the regularized runs against the sticky reference.
 * sup_distances[k] = sup over common sample times and original indices of
 * |x_i^eps(t) - x_i^sticky(t)| with merged sticky indices resolved through
 * lineage. scaled_gaps[k] = max within-merged-group adjacent gap divided by
 * eps, probed at probe_time (first collision time + offset); empty when the
 * reference run has no collision.
 */
struct ConvergenceReport {
    std::vector<double> eps_values;
    std::vector<double> sup_distances;
    std::vector<double> scaled_gaps;
    std::vector<double> min_gaps;
    std::vector<double> dt_used;
    double probe_time = 0.0;
    bool has_collision = false;
};

/**
 * Runs the sticky reference once and one regularized run per eps (strictly
 * decreasing eps_list), comparing trajectories at the shared output grid.
 */
ConvergenceReport convergence_study(const PeakonState& initial, const std::vector<double>& eps_list,
                                    const integrate::SimConfig& config,
                                    mollifier::BumpFamily family = mollifier::BumpFamily::cosine_bump,
                                    double probe_offset = 0.5);

} // namespace peakon::dispersive
