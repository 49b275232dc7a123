#pragma once

#include <cstddef>
#include <vector>

#include "peakon/integrate.hpp"
#include "peakon/sticky.hpp"
#include "peakon/state.hpp"

namespace peakon::verify {

/**
 * Separable test function phi(x, t) = chi(t) psi(x) built from polynomial
 * bumps (1 - s^2)^order: compactly supported, with exact derivatives up to
 * the third in x and first in t. chi is supported in [0, t_cut) and psi in
 * (x_center - x_halfwidth, x_center + x_halfwidth).
 */
struct TestFunction {
    double t_cut = 1.0;
    double x_center = 0.0;
    double x_halfwidth = 10.0;
    int order = 5; ///< >= 4 so psi''' is continuous
    double amplitude = 1.0;

    double chi(double t) const;
    double chi_dot(double t) const;
    double psi(double x) const;
    double psi_x(double x) const;
    double psi_xx(double x) const;
    double psi_xxx(double x) const;
    double phi(double x, double t) const { return chi(t) * psi(x); }
};

struct QuadratureConfig {
    std::size_t gl_points = 12;
    std::size_t time_panels = 32;   ///< target panel count over the time range
    double max_space_panel = 0.5;   ///< spatial panel width cap
    bool refine_estimate = true;    ///< re-run at doubled resolution for the error estimate
};

/// Value and per-term breakdown of the weak-solution functional.
struct ResidualReport {
    double value = 0.0;         ///< |L(u, phi) + sum_i p_i phi(c_i, 0)|
    double term_time = 0.0;     ///< integral of u (phi_t - phi_txx)
    double term_flux = 0.0;     ///< integral of (u^3 + 2 u u_x^2) phi_x
    double term_cubic = 0.0;    ///< -(1/3) integral of u^3 phi_xxx
    double term_singular = 0.0; ///< -integral of sum_k q_k avg(u_x^2) phi_x along trajectories
    double term_initial = 0.0;  ///< sum_i p_i phi(c_i, 0)
    double quad_error_estimate = 0.0;
};

/**
 * Evaluates the weak-solution functional along a trajectory with composite
 * Gauss-Legendre quadrature: spatial breakpoints at every live peakon
 * position (u_x kinks) and temporal breakpoints at merge events. The
 * singular product collapses onto the peakon trajectories and is integrated
 * in time only. Vanishes (up to quadrature and integrator error) exactly
 * when the trajectory is a weak solution.
 */
ResidualReport weak_residual(const sticky::Trajectory& traj, const TestFunction& tf,
                             const QuadratureConfig& quad = {});

struct EnergyAudit {
    double initial_energy = 0.0;
    double max_rel_drift = 0.0;
    std::vector<double> event_jumps; ///< |H(t+) - H(t-)| per merge event
};

/// Samples H(t) over a trajectory; reporting only, no conservation asserted.
EnergyAudit energy_audit(const sticky::Trajectory& traj);

/**
 * Runs the stationary single peakon p = 4 and the split triple (5, -4, 3)
 * released from the same initial measure, and tabulates the L2 distance of
 * the two fields plus both energies over time. The t = 0 row carries the
 * exact coincident values (distance 0, energy 8). Non-uniqueness shows as a
 * strictly positive distance at t > 0 with both energies conserved.
 */
struct SplittingReport {
    std::vector<double> times;
    std::vector<double> field_distance;
    std::vector<double> energy_single;
    std::vector<double> energy_split;
    std::vector<double> split_initial_velocities;
    double seed_gap = 0.0;
};

SplittingReport splitting_demo(double t_end = 0.5, double dt = 1e-3, std::size_t sample_every = 10);

/**
 * Splits a CH peakon of total momentum c into two coincident peakons and
 * integrates the CH system: the pair must travel together as the single
 * peakon c e^{-|x - c t - x0|} (splitting creates no new CH solution).
 */
struct ChSplittingReport {
    double c = 0.0;
    double x0 = 0.0;
    double p1 = 0.0;
    double max_pair_gap = 0.0;
    double final_position_error = 0.0;
    double max_momentum_sum_error = 0.0;
    double hamiltonian_drift = 0.0;
    bool passed = false;
};

ChSplittingReport ch_splitting_demo(double c, double p1, double x0, double t_end = 2.0,
                                    double dt = 1e-3);

} // namespace peakon::verify
