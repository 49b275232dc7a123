#pragma once

#include <span>
#include <vector>

#include "peakon/state.hpp"

namespace peakon::dynamics {

/**
 * Constant values of u^2 - u_x^2 on the N+1 open intervals between adjacent
 * peakons. values[k] is the constant on (x_{k-1}, x_k) in 0-based position
 * indexing, with x_{-1} = -inf and x_N = +inf, so values.front() ==
 * values.back() == 0 and the conservative velocity of peakon i is
 * (values[i] + values[i+1]) / 2.
 */
struct IntervalConstants {
    std::vector<double> values;
};

/// Symmetric pair couplings a_ij = p_i p_j e^{-|x_i - x_j|} / 2.
class PairCouplings {
public:
    explicit PairCouplings(const PeakonState& state);

    std::size_t size() const { return n_; }
    double at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    /// Speeds A_k = sum_{j != k} a_jk + 2 sum_{m < k < n} a_mn of the
    /// conservative system, derived from the coupling table.
    std::vector<double> speeds() const;

private:
    std::size_t n_;
    std::vector<double> a_;
};

/// O(N^2) evaluation with non-positive exponents only.
IntervalConstants interval_constants(const PeakonState& state);

/// O(N) prefix/suffix recurrence with a running renormalization point;
/// cross-checked against interval_constants in tests.
IntervalConstants interval_constants_fast(const PeakonState& state);

/// Conservative mCH velocities, (values[k] + values[k+1]) / 2 per peakon.
std::vector<double> mch_conservative_rhs(const PeakonState& state);

/// Non-conservative mCH velocities: p_k^2 / 6 plus the conservative value.
std::vector<double> mch_nonconservative_rhs(const PeakonState& state);

/// sum_j (-1)^{j+1} A_j; vanishes identically for every ordered state (N >= 2).
double alternating_identity_residual(const PeakonState& state);

/// sum_{i<j} a_ij (A_i - A_j); vanishes identically (N >= 2). This is
/// d/dt of the energy along the conservative flow.
double energy_identity_residual(const PeakonState& state);

/// Phase point of the Camassa-Holm N-peakon system u = sum p_i e^{-|x - x_i|}.
/// Positions need not be ordered and momenta evolve in time.
struct ChState {
    double t = 0.0;
    std::vector<double> positions;
    std::vector<double> momenta;
};

struct ChRhs {
    std::vector<double> position_velocities;
    std::vector<double> momentum_velocities;
};

/// CH peakon system with the sgn(0) = 0 convention:
///   dx_i/dt = sum_j p_j e^{-|x_i - x_j|}
///   dp_i/dt = sum_j p_i p_j sgn(x_i - x_j) e^{-|x_i - x_j|}
ChRhs ch_rhs(std::span<const double> positions, std::span<const double> momenta);

/// Conserved Hamiltonian H0 = sum_{i,j} p_i p_j G(x_i - x_j) of ch_rhs.
double ch_hamiltonian(const ChState& state);

} // namespace peakon::dynamics
