#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "peakon/kernel.hpp"
#include "support/oracles.hpp"

using peakon::PeakonState;
namespace kernel = peakon::kernel;

TEST_CASE("green closed-form values") {
    CHECK(kernel::green(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(kernel::green(std::log(2.0)) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(kernel::green(-std::log(2.0)) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("green is even and bounded by 1/2") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> xs(-30.0, 30.0);
    for (int i = 0; i < 200; ++i) {
        const double x = xs(rng);
        CHECK(kernel::green(x) == kernel::green(-x));
        CHECK(kernel::green(x) <= 0.5);
        CHECK(kernel::green(x) > 0.0);
    }
}

TEST_CASE("eval_field single peakon at the crest") {
    const PeakonState state(0.0, {0.0}, {2.0});
    const kernel::FieldSample at_peak = kernel::eval_field(state, 0.0);
    CHECK(at_peak.u == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(at_peak.ux_left == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(at_peak.ux_right == doctest::Approx(-1.0).epsilon(1e-15));

    const kernel::FieldSample away = kernel::eval_field(state, 1.0);
    CHECK(away.u == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(away.ux_left == doctest::Approx(-std::exp(-1.0)).epsilon(1e-15));
    CHECK(away.ux_right == away.ux_left);
}

TEST_CASE("eval_field two peakons by direct summation") {
    const PeakonState state(0.0, {0.0, std::log(2.0)}, {1.0, 1.0});
    const kernel::FieldSample f = kernel::eval_field(state, 0.0);
    // G(0) + G(-ln 2) = 0.5 + 0.25
    CHECK(f.u == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(f.ux_left == doctest::Approx(0.5 + 0.25).epsilon(1e-15));
    CHECK(f.ux_right == doctest::Approx(-0.5 + 0.25).epsilon(1e-15));
}

TEST_CASE("derivative jump at each peakon equals its momentum") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const PeakonState state = oracle::random_state(rng);
        for (std::size_t i = 0; i < state.size(); ++i) {
            const kernel::FieldSample f = kernel::eval_field(state, state.position(i));
            CHECK(f.ux_left - f.ux_right == doctest::Approx(state.momentum(i)).epsilon(1e-14));
        }
    }
}

TEST_CASE("avg_ux_sq closed values and finite-difference oracle") {
    const PeakonState single(0.0, {0.0}, {2.0});
    CHECK(kernel::avg_ux_sq(single, 0.0) == doctest::Approx(1.0).epsilon(1e-15));

    // Continuity away from the crest: equals u_x^2.
    const kernel::FieldSample f = kernel::eval_field(single, 0.7);
    CHECK(kernel::avg_ux_sq(single, 0.7) ==
          doctest::Approx(f.ux_right * f.ux_right).epsilon(1e-15));

    // Slightly separated triple probed at the middle crest.
    const PeakonState triple(0.0, {-1e-4, 0.0, 1e-4}, {5.0, -4.0, 3.0});
    const double left = oracle::one_sided_slope(triple, 0.0, -1);
    const double right = oracle::one_sided_slope(triple, 0.0, +1);
    const double expected = 0.5 * (left * left + right * right);
    CHECK(kernel::avg_ux_sq(triple, 0.0) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("energy closed-form values") {
    CHECK(kernel::energy(PeakonState(0.0, {0.0}, {4.0})) == doctest::Approx(8.0).epsilon(1e-15));
    // The collapsed split triple carries the same energy as its merged peakon.
    CHECK(kernel::energy(PeakonState(0.0, {0.0}, {5.0 - 4.0 + 3.0})) ==
          doctest::Approx(8.0).epsilon(1e-15));
    const PeakonState nearly(0.0, {-1e-9, 0.0, 1e-9}, {5.0, -4.0, 3.0});
    CHECK(kernel::energy(nearly) == doctest::Approx(8.0).epsilon(1e-7));

    const PeakonState pair(0.0, {0.0, std::log(2.0)}, {1.0, 1.0});
    CHECK(kernel::energy(pair) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("energy matches quadrature of u^2 + u_x^2") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        const PeakonState state = oracle::random_state(rng);
        const double direct = kernel::energy(state);
        const double quad = oracle::energy_by_quadrature(state);
        CHECK(direct == doctest::Approx(quad).epsilon(1e-8));
    }
}

TEST_CASE("eval_field is translation covariant") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> shift_dist(-20.0, 20.0);
    for (int trial = 0; trial < 50; ++trial) {
        const PeakonState state = oracle::random_state(rng);
        const double c = shift_dist(rng);
        std::vector<double> shifted = state.positions();
        for (auto& x : shifted) x += c;
        const PeakonState moved(0.0, shifted, state.momenta());
        const double q = shift_dist(rng);
        const kernel::FieldSample a = kernel::eval_field(state, q);
        const kernel::FieldSample b = kernel::eval_field(moved, q + c);
        CHECK(a.u == doctest::Approx(b.u).epsilon(1e-12));
        CHECK(a.ux_left == doctest::Approx(b.ux_left).epsilon(1e-12));
        CHECK(a.ux_right == doctest::Approx(b.ux_right).epsilon(1e-12));
    }
}

TEST_CASE("field_l2_distance closed form agrees with quadrature") {
    std::mt19937_64 rng(41);
    const PeakonState a = oracle::random_state(rng, 2, 5);
    const PeakonState b = oracle::random_state(rng, 2, 5);
    auto integrand = [&](double x) {
        const double d = kernel::eval_field(a, x).u - kernel::eval_field(b, x).u;
        return d * d;
    };
    std::vector<double> breaks = a.positions();
    breaks.insert(breaks.end(), b.positions().begin(), b.positions().end());
    const double quad = peakon::quadrature::integrate_with_breakpoints(
        integrand, -45.0, 45.0, breaks, 32, 1.0);
    CHECK(kernel::field_l2_distance(a, b) == doctest::Approx(std::sqrt(quad)).epsilon(1e-8));
    CHECK(kernel::field_l2_distance(a, a) == doctest::Approx(0.0));
}

TEST_CASE("state invariants are enforced") {
    CHECK_THROWS_AS(PeakonState(0.0, {1.0, 0.0}, {1.0, 1.0}), peakon::OrderingError);
    CHECK_THROWS_AS(PeakonState(0.0, {0.0, 0.0}, {1.0, 1.0}), peakon::OrderingError);
    CHECK_THROWS_AS(PeakonState(0.0, {}, {}), peakon::ConfigError);
    CHECK_THROWS_AS(PeakonState(0.0, {0.0}, {1.0, 2.0}), peakon::ConfigError);

    const PeakonState flagged(0.0, {0.0, 1.0}, {0.0, 2.0});
    CHECK(flagged.flags()[0] == peakon::PeakonFlag::zero_momentum);
    CHECK(flagged.flags()[1] == peakon::PeakonFlag::active);
    CHECK(flagged.m0() == doctest::Approx(2.0));
}
