#include "peakon/verify.hpp"

#include <algorithm>
#include <cmath>

#include "peakon/dynamics.hpp"
#include "peakon/kernel.hpp"
#include "peakon/quadrature.hpp"

namespace peakon::verify {

namespace {

double bump(int m, double s) {
    const double w = 1.0 - s * s;
    if (w <= 0.0) return 0.0;
    return std::pow(w, m);
}

double bump_d1(int m, double s) {
    const double w = 1.0 - s * s;
    if (w <= 0.0) return 0.0;
    return -2.0 * m * s * std::pow(w, m - 1);
}

double bump_d2(int m, double s) {
    const double w = 1.0 - s * s;
    if (w <= 0.0) return 0.0;
    return -2.0 * m * std::pow(w, m - 1) + 4.0 * m * (m - 1) * s * s * std::pow(w, m - 2);
}

double bump_d3(int m, double s) {
    const double w = 1.0 - s * s;
    if (w <= 0.0) return 0.0;
    return 12.0 * m * (m - 1) * s * std::pow(w, m - 2) -
           8.0 * m * (m - 1) * (m - 2) * s * s * s * std::pow(w, m - 3);
}

} // namespace

double TestFunction::chi(double t) const {
    if (t < 0.0 || t >= t_cut) return 0.0;
    return bump(order, t / t_cut);
}

double TestFunction::chi_dot(double t) const {
    if (t < 0.0 || t >= t_cut) return 0.0;
    return bump_d1(order, t / t_cut) / t_cut;
}

double TestFunction::psi(double x) const {
    return amplitude * bump(order, (x - x_center) / x_halfwidth);
}

double TestFunction::psi_x(double x) const {
    return amplitude * bump_d1(order, (x - x_center) / x_halfwidth) / x_halfwidth;
}

double TestFunction::psi_xx(double x) const {
    return amplitude * bump_d2(order, (x - x_center) / x_halfwidth) /
           (x_halfwidth * x_halfwidth);
}

double TestFunction::psi_xxx(double x) const {
    return amplitude * bump_d3(order, (x - x_center) / x_halfwidth) /
           (x_halfwidth * x_halfwidth * x_halfwidth);
}

namespace {

struct FunctionalTerms {
    double time = 0.0;
    double flux = 0.0;
    double cubic = 0.0;
    double singular = 0.0;
};

FunctionalTerms evaluate_functional(const sticky::Trajectory& traj, const TestFunction& tf,
                                    std::size_t gl_points, std::size_t time_panels,
                                    double max_space_panel) {
    const double t_begin = traj.samples.front().t;
    const double t_final = std::min(traj.samples.back().t, t_begin + tf.t_cut);
    FunctionalTerms terms;
    if (!(t_final > t_begin)) return terms;

    std::vector<double> time_breaks;
    for (const auto& ev : traj.events)
        if (ev.t > t_begin && ev.t < t_final) time_breaks.push_back(ev.t);

    const double x_lo = tf.x_center - tf.x_halfwidth;
    const double x_hi = tf.x_center + tf.x_halfwidth;

    const auto time_edges = quadrature::panel_edges(
        t_begin, t_final, time_breaks, (t_final - t_begin) / static_cast<double>(time_panels));
    const quadrature::GaussRule& rule = quadrature::gauss_legendre(gl_points);

    for (std::size_t p = 0; p + 1 < time_edges.size(); ++p) {
        const double mid_t = 0.5 * (time_edges[p] + time_edges[p + 1]);
        const double half_t = 0.5 * (time_edges[p + 1] - time_edges[p]);
        for (std::size_t qi = 0; qi < gl_points; ++qi) {
            const double t = mid_t + half_t * rule.nodes[qi];
            const double wt = half_t * rule.weights[qi];
            const PeakonState state = traj.state_at(t);
            const double rel_t = t - t_begin; // chi acts on time since release
            const double chi = tf.chi(rel_t);
            const double chi_dot = tf.chi_dot(rel_t);

            const auto x_edges =
                quadrature::panel_edges(x_lo, x_hi, state.positions(), max_space_panel);
            double inner_time = 0.0, inner_flux = 0.0, inner_cubic = 0.0;
            for (std::size_t xp = 0; xp + 1 < x_edges.size(); ++xp) {
                const double mid_x = 0.5 * (x_edges[xp] + x_edges[xp + 1]);
                const double half_x = 0.5 * (x_edges[xp + 1] - x_edges[xp]);
                for (std::size_t qj = 0; qj < gl_points; ++qj) {
                    const double x = mid_x + half_x * rule.nodes[qj];
                    const double wx = half_x * rule.weights[qj];
                    const kernel::FieldSample f = kernel::eval_field(state, x);
                    const double ux = f.ux_right; // == ux_left off the kinks
                    inner_time += wx * f.u * (tf.psi(x) - tf.psi_xx(x));
                    inner_flux += wx * (f.u * f.u * f.u + 2.0 * f.u * ux * ux) * tf.psi_x(x);
                    inner_cubic += wx * f.u * f.u * f.u * tf.psi_xxx(x);
                }
            }
            terms.time += wt * chi_dot * inner_time;
            terms.flux += wt * chi * inner_flux;
            terms.cubic += wt * chi * (-inner_cubic / 3.0);

            double singular = 0.0;
            for (std::size_t i = 0; i < state.size(); ++i) {
                const double xi = state.position(i);
                singular += state.momentum(i) * kernel::avg_ux_sq(state, xi) * tf.psi_x(xi);
            }
            terms.singular -= wt * chi * singular;
        }
    }
    return terms;
}

} // namespace

ResidualReport weak_residual(const sticky::Trajectory& traj, const TestFunction& tf,
                             const QuadratureConfig& quad) {
    if (traj.samples.empty()) throw ConfigError("weak_residual: empty trajectory");

    FunctionalTerms coarse = evaluate_functional(traj, tf, quad.gl_points, quad.time_panels,
                                                 quad.max_space_panel);
    FunctionalTerms fine = coarse;
    if (quad.refine_estimate)
        fine = evaluate_functional(traj, tf, quad.gl_points, 2 * quad.time_panels,
                                   0.5 * quad.max_space_panel);

    const PeakonState& initial = traj.samples.front().state;
    double term_initial = 0.0;
    for (std::size_t i = 0; i < initial.size(); ++i)
        term_initial += initial.momentum(i) * tf.chi(0.0) * tf.psi(initial.position(i));

    ResidualReport report;
    report.term_time = fine.time;
    report.term_flux = fine.flux;
    report.term_cubic = fine.cubic;
    report.term_singular = fine.singular;
    report.term_initial = term_initial;
    report.value = std::abs(fine.time + fine.flux + fine.cubic + fine.singular + term_initial);
    const double coarse_value =
        std::abs(coarse.time + coarse.flux + coarse.cubic + coarse.singular + term_initial);
    report.quad_error_estimate = std::abs(report.value - coarse_value);
    return report;
}

EnergyAudit energy_audit(const sticky::Trajectory& traj) {
    EnergyAudit audit;
    if (traj.samples.empty()) return audit;
    audit.initial_energy = kernel::energy(traj.samples.front().state);
    const double denom = std::max(std::abs(audit.initial_energy), 1e-300);
    for (const auto& sample : traj.samples) {
        const double h = kernel::energy(sample.state);
        audit.max_rel_drift = std::max(audit.max_rel_drift,
                                       std::abs(h - audit.initial_energy) / denom);
    }
    for (const auto& ev : traj.events)
        audit.event_jumps.push_back(std::abs(kernel::energy(ev.post_state) -
                                             kernel::energy(ev.pre_state)));
    return audit;
}

SplittingReport splitting_demo(double t_end, double dt, std::size_t sample_every) {
    integrate::SimConfig cfg;
    cfg.dt = dt;
    cfg.t_end = t_end;
    cfg.sample_every = sample_every;

    const PeakonState single(0.0, {0.0}, {4.0});
    const double gap = 10.0 * cfg.merge_gap_tol;
    const PeakonState split(0.0, {-gap, 0.0, gap}, {5.0, -4.0, 3.0});

    const sticky::Trajectory run_single = sticky::evolve_sticky(single, cfg);
    const sticky::Trajectory run_split = sticky::evolve_sticky(split, cfg);

    SplittingReport report;
    report.seed_gap = gap;
    report.split_initial_velocities = dynamics::mch_conservative_rhs(split);

    // t = 0: the three coincident peakons collapse to the single one exactly.
    report.times.push_back(0.0);
    report.field_distance.push_back(0.0);
    const PeakonState collapsed(0.0, {0.0}, {5.0 - 4.0 + 3.0});
    report.energy_single.push_back(kernel::energy(single));
    report.energy_split.push_back(kernel::energy(collapsed));

    for (const auto& sample : run_single.samples) {
        if (sample.t <= 0.0) continue;
        const PeakonState a = sample.state;
        const PeakonState b = run_split.state_at(sample.t);
        report.times.push_back(sample.t);
        report.field_distance.push_back(kernel::field_l2_distance(a, b));
        report.energy_single.push_back(kernel::energy(a));
        report.energy_split.push_back(kernel::energy(b));
    }
    return report;
}

ChSplittingReport ch_splitting_demo(double c, double p1, double x0, double t_end, double dt) {
    dynamics::ChState initial;
    initial.t = 0.0;
    initial.positions = {x0, x0};
    initial.momenta = {p1, c - p1};

    const std::vector<integrate::ChSample> run = integrate::evolve_ch(initial, dt, t_end);
    const double h0 = dynamics::ch_hamiltonian(initial);

    ChSplittingReport report;
    report.c = c;
    report.x0 = x0;
    report.p1 = p1;
    for (const auto& sample : run) {
        const auto& st = sample.state;
        report.max_pair_gap = std::max(report.max_pair_gap,
                                       std::abs(st.positions[0] - st.positions[1]));
        report.max_momentum_sum_error =
            std::max(report.max_momentum_sum_error, std::abs(st.momenta[0] + st.momenta[1] - c));
        report.hamiltonian_drift =
            std::max(report.hamiltonian_drift, std::abs(dynamics::ch_hamiltonian(st) - h0));
    }
    const auto& last = run.back().state;
    report.final_position_error = std::abs(last.positions[0] - (c * t_end + x0));
    report.passed = report.max_pair_gap <= 1e-8 && report.final_position_error <= 1e-6 &&
                    report.hamiltonian_drift <= 1e-8;
    return report;
}

} // namespace peakon::verify
