#pragma once

#include <cstddef>
#include <vector>

#include "peakon/errors.hpp"

namespace peakon {

/// Per-peakon marker. Zero-momentum peakons (e.g. after a cancelling merge)
/// stay in the state and keep their ordering slot.
enum class PeakonFlag : unsigned char { active, zero_momentum };

/**
 * Discrete phase point of an N-peakon configuration: strictly increasing
 * positions, signed momenta, and the time stamp.
 *
 * Invariants enforced at construction:
 *   - N >= 1, positions.size() == momenta.size()
 *   - x_1 < x_2 < ... < x_N (coincident positions are never stored)
 *   - all entries finite
 *
 * m0() = sum |p_i| is recorded once at construction; it bounds every
 * trajectory speed by m0^2 / 2.
 */
class PeakonState {
public:
    PeakonState(double t, std::vector<double> positions, std::vector<double> momenta);

    double t() const { return t_; }
    std::size_t size() const { return positions_.size(); }
    const std::vector<double>& positions() const { return positions_; }
    const std::vector<double>& momenta() const { return momenta_; }
    const std::vector<PeakonFlag>& flags() const { return flags_; }
    double m0() const { return m0_; }

    double position(std::size_t i) const { return positions_[i]; }
    double momentum(std::size_t i) const { return momenta_[i]; }

    /// Smallest gap x_{i+1} - x_i; +inf for a single peakon.
    double min_gap() const;

    /// Same configuration stamped with a different time.
    PeakonState with_time(double t) const;

private:
    double t_;
    std::vector<double> positions_;
    std::vector<double> momenta_;
    std::vector<PeakonFlag> flags_;
    double m0_;
};

} // namespace peakon
