#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "peakon/dynamics.hpp"
#include "peakon/integrate.hpp"
#include "peakon/kernel.hpp"
#include "support/oracles.hpp"

using peakon::PeakonState;
namespace dyn = peakon::dynamics;

TEST_CASE("interval constants: closed cases") {
    const dyn::IntervalConstants single = dyn::interval_constants(PeakonState(0.0, {1.3}, {2.0}));
    REQUIRE(single.values.size() == 2);
    CHECK(single.values[0] == 0.0);
    CHECK(single.values[1] == 0.0);

    const dyn::IntervalConstants pair =
        dyn::interval_constants(PeakonState(0.0, {0.0, std::log(2.0)}, {1.0, 1.0}));
    REQUIRE(pair.values.size() == 3);
    CHECK(pair.values[0] == 0.0);
    CHECK(pair.values[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(pair.values[2] == 0.0);
}

TEST_CASE("velocities equal the literal triple-sum expansion") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        const PeakonState state = oracle::random_state(rng);
        const std::vector<double> fast = dyn::mch_conservative_rhs(state);
        const std::vector<double> literal = oracle::conservative_rhs_literal(state);
        const double scale = 0.5 * state.m0() * state.m0();
        for (std::size_t i = 0; i < fast.size(); ++i)
            CHECK(std::abs(fast[i] - literal[i]) <= 1e-14 * scale);
    }
}

TEST_CASE("velocities equal the coupling-table route") {
    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 200; ++trial) {
        const PeakonState state = oracle::random_state(rng);
        const std::vector<double> via_intervals = dyn::mch_conservative_rhs(state);
        const std::vector<double> via_couplings = dyn::PairCouplings(state).speeds();
        const double scale = 0.5 * state.m0() * state.m0();
        for (std::size_t i = 0; i < via_intervals.size(); ++i)
            CHECK(std::abs(via_intervals[i] - via_couplings[i]) <= 1e-14 * scale);
    }
}

TEST_CASE("fast interval constants match the robust path") {
    std::mt19937_64 rng(107);
    for (int trial = 0; trial < 200; ++trial) {
        const PeakonState state = oracle::random_state(rng);
        const auto robust = dyn::interval_constants(state);
        const auto fast = dyn::interval_constants_fast(state);
        const double scale = std::max(0.5 * state.m0() * state.m0(), 1.0);
        REQUIRE(fast.values.size() == robust.values.size());
        for (std::size_t k = 0; k < fast.values.size(); ++k)
            CHECK(std::abs(fast.values[k] - robust.values[k]) <= 1e-13 * scale);
    }
}

TEST_CASE("fast interval constants survive large position magnitudes") {
    // A naive prefix factorization p_i e^{x_i} would overflow here.
    const PeakonState far(0.0, {-700.0, -699.5, 698.0, 700.0}, {2.0, -1.0, 3.0, 1.5});
    const auto robust = dyn::interval_constants(far);
    const auto fast = dyn::interval_constants_fast(far);
    for (std::size_t k = 0; k < fast.values.size(); ++k) {
        CHECK(std::isfinite(fast.values[k]));
        CHECK(fast.values[k] == doctest::Approx(robust.values[k]).epsilon(1e-12));
    }
}

TEST_CASE("pair couplings: diagonal and symmetry") {
    std::mt19937_64 rng(109);
    const PeakonState state = oracle::random_state(rng);
    const dyn::PairCouplings a(state);
    for (std::size_t i = 0; i < state.size(); ++i) {
        CHECK(a.at(i, i) ==
              doctest::Approx(0.5 * state.momentum(i) * state.momentum(i)).epsilon(1e-15));
        for (std::size_t j = 0; j < state.size(); ++j) CHECK(a.at(i, j) == a.at(j, i));
    }
}

TEST_CASE("single peakon: conservative velocity 0, non-conservative p^2/6") {
    const PeakonState state(0.0, {0.4}, {3.0});
    CHECK(dyn::mch_conservative_rhs(state)[0] == 0.0);
    CHECK(dyn::mch_nonconservative_rhs(state)[0] == doctest::Approx(9.0 / 6.0).epsilon(1e-15));

    // u = p e^{-|x - 2 p^2 t / 3|} has momentum 2p in this normalization.
    const double p = 1.3;
    const PeakonState doubled(0.0, {0.0}, {2.0 * p});
    CHECK(dyn::mch_nonconservative_rhs(doubled)[0] ==
          doctest::Approx(2.0 * p * p / 3.0).epsilon(1e-15));
}

TEST_CASE("non-conservative minus conservative is exactly p^2/6") {
    std::mt19937_64 rng(113);
    for (int trial = 0; trial < 100; ++trial) {
        const PeakonState state = oracle::random_state(rng);
        const auto cons = dyn::mch_conservative_rhs(state);
        const auto noncons = dyn::mch_nonconservative_rhs(state);
        for (std::size_t i = 0; i < cons.size(); ++i)
            CHECK(noncons[i] - cons[i] ==
                  doctest::Approx(state.momentum(i) * state.momentum(i) / 6.0).epsilon(1e-15));
    }
}

TEST_CASE("split triple at the coincident limit moves apart") {
    const double g = 1e-10;
    const PeakonState state(0.0, {-g, 0.0, g}, {5.0, -4.0, 3.0});
    const auto v = dyn::mch_conservative_rhs(state);
    CHECK(v[0] == doctest::Approx(-2.5).epsilon(1e-8));
    CHECK(v[1] == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(v[2] == doctest::Approx(1.5).epsilon(1e-8));
}

TEST_CASE("equal pair has equal velocities (constant gap)") {
    const PeakonState state(0.0, {0.0, std::log(2.0)}, {1.0, 1.0});
    const auto v = dyn::mch_conservative_rhs(state);
    CHECK(v[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(v[1] == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("speed bound M0^2/2 for both mCH systems") {
    std::mt19937_64 rng(127);
    for (int trial = 0; trial < 200; ++trial) {
        const PeakonState state = oracle::random_state(rng);
        const double bound = 0.5 * state.m0() * state.m0() * (1.0 + 1e-12);
        for (double v : dyn::mch_conservative_rhs(state)) CHECK(std::abs(v) <= bound);
        for (double v : dyn::mch_nonconservative_rhs(state)) CHECK(std::abs(v) <= bound);
    }
}

TEST_CASE("velocities are translation invariant") {
    std::mt19937_64 rng(131);
    std::uniform_real_distribution<double> shift_dist(-50.0, 50.0);
    for (int trial = 0; trial < 50; ++trial) {
        const PeakonState state = oracle::random_state(rng);
        const double c = shift_dist(rng);
        std::vector<double> xs = state.positions();
        for (auto& x : xs) x += c;
        const PeakonState moved(0.0, xs, state.momenta());
        const auto v0 = dyn::mch_conservative_rhs(state);
        const auto v1 = dyn::mch_conservative_rhs(moved);
        for (std::size_t i = 0; i < v0.size(); ++i)
            CHECK(v0[i] == doctest::Approx(v1[i]).epsilon(1e-12));
    }
}

TEST_CASE("alternating identity") {
    CHECK_THROWS_AS(dyn::alternating_identity_residual(PeakonState(0.0, {0.0}, {1.0})),
                    peakon::ConfigError);

    // N = 2: A_1 - A_2 = a_21 - a_12 = 0 exactly.
    const PeakonState pair(0.0, {-0.3, 1.1}, {2.0, -3.0});
    CHECK(dyn::alternating_identity_residual(pair) == 0.0);

    const PeakonState triple(0.0, {-1e-10, 0.0, 1e-10}, {5.0, -4.0, 3.0});
    CHECK(std::abs(dyn::alternating_identity_residual(triple)) <= 1e-12 * 144.0);

    std::mt19937_64 rng(137);
    for (int trial = 0; trial < 1000; ++trial) {
        const PeakonState state = oracle::random_state(rng);
        const double m0 = state.m0();
        CHECK(std::abs(dyn::alternating_identity_residual(state)) <= 1e-12 * m0 * m0);
    }
}

TEST_CASE("energy identity") {
    CHECK_THROWS_AS(dyn::energy_identity_residual(PeakonState(0.0, {0.0}, {1.0})),
                    peakon::ConfigError);

    const PeakonState pair(0.0, {-0.3, 1.1}, {2.0, -3.0});
    CHECK(dyn::energy_identity_residual(pair) == 0.0);

    std::mt19937_64 rng(139);
    for (int trial = 0; trial < 1000; ++trial) {
        const PeakonState state = oracle::random_state(rng);
        const double m0 = state.m0();
        CHECK(std::abs(dyn::energy_identity_residual(state)) <= 1e-12 * m0 * m0 * m0 * m0);
    }
}

TEST_CASE("energy identity is dH/dt: finite difference along an RK4 micro-step") {
    std::mt19937_64 rng(149);
    const auto rhs = [](const PeakonState& s) { return dyn::mch_conservative_rhs(s); };
    for (int trial = 0; trial < 20; ++trial) {
        const PeakonState state = oracle::random_state(rng, 2, 6);
        const double h = 1e-5;
        const PeakonState fwd = peakon::integrate::rk4_step(rhs, state, h);
        const PeakonState bwd = peakon::integrate::rk4_step(rhs, state, -h);
        const double dh_dt =
            (peakon::kernel::energy(fwd) - peakon::kernel::energy(bwd)) / (2.0 * h);
        const double m0 = state.m0();
        CHECK(std::abs(dh_dt) <= 1e-8 * std::max(1.0, m0 * m0 * m0 * m0));
    }
}

TEST_CASE("ch_rhs: single peakon travels with speed p") {
    const dyn::ChRhs r = dyn::ch_rhs(std::vector<double>{0.5}, std::vector<double>{3.0});
    CHECK(r.position_velocities[0] == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(r.momentum_velocities[0] == 0.0);
}

TEST_CASE("ch_rhs: coincident pair moves together, total momentum frozen") {
    const std::vector<double> xs{1.0, 1.0};
    const std::vector<double> ps{3.0, 1.0};
    const dyn::ChRhs r = dyn::ch_rhs(xs, ps);
    CHECK(r.position_velocities[0] == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(r.position_velocities[1] == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(r.momentum_velocities[0] + r.momentum_velocities[1] == 0.0);
}

TEST_CASE("ch_rhs: total momentum derivative vanishes by antisymmetry") {
    std::mt19937_64 rng(151);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> xs(6), ps(6);
        for (auto& x : xs) x = dist(rng);
        for (auto& p : ps) p = dist(rng);
        const dyn::ChRhs r = dyn::ch_rhs(xs, ps);
        double total = 0.0, magnitude = 0.0;
        for (double dp : r.momentum_velocities) {
            total += dp;
            magnitude += std::abs(dp);
        }
        CHECK(std::abs(total) <= 1e-13 * std::max(1.0, magnitude));
    }
}
