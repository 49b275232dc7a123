#include "peakon/state.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace peakon {

PeakonState::PeakonState(double t, std::vector<double> positions, std::vector<double> momenta)
    : t_(t), positions_(std::move(positions)), momenta_(std::move(momenta)) {
    if (positions_.empty())
        throw ConfigError("PeakonState: need at least one peakon");
    if (positions_.size() != momenta_.size())
        throw ConfigError("PeakonState: positions/momenta size mismatch (" +
                          std::to_string(positions_.size()) + " vs " +
                          std::to_string(momenta_.size()) + ")");
    if (!std::isfinite(t_))
        throw ConfigError("PeakonState: non-finite time");
    for (std::size_t i = 0; i < positions_.size(); ++i) {
        if (!std::isfinite(positions_[i]) || !std::isfinite(momenta_[i]))
            throw ConfigError("PeakonState: non-finite entry at index " + std::to_string(i));
    }
    for (std::size_t i = 0; i + 1 < positions_.size(); ++i) {
        if (!(positions_[i] < positions_[i + 1]))
            throw OrderingError("PeakonState: positions not strictly increasing at index " +
                                std::to_string(i) + " (x=" + std::to_string(positions_[i]) +
                                " vs " + std::to_string(positions_[i + 1]) + ")");
    }
    m0_ = 0.0;
    flags_.resize(positions_.size());
    for (std::size_t i = 0; i < momenta_.size(); ++i) {
        m0_ += std::abs(momenta_[i]);
        flags_[i] = momenta_[i] == 0.0 ? PeakonFlag::zero_momentum : PeakonFlag::active;
    }
}

double PeakonState::min_gap() const {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < positions_.size(); ++i)
        g = std::min(g, positions_[i + 1] - positions_[i]);
    return g;
}

PeakonState PeakonState::with_time(double t) const {
    PeakonState s = *this;
    s.t_ = t;
    return s;
}

} // namespace peakon
