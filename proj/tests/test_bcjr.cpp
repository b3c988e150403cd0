#include <doctest.h>

#include <cmath>
#include <random>

#include "eqnet/ber.hpp"
#include "eqnet/bcjr.hpp"
#include "eqnet/channel_estimate.hpp"
#include "eqnet/rng.hpp"
#include "oracles.hpp"

using namespace eqnet;

TEST_SUITE_BEGIN("bcjr");

TEST_CASE("memoryless channel gives the analytic posterior") {
    Trellis trellis({1.0}, Nonlinearity::identity);
    double sigma = std::sqrt(0.5);
    auto post = bcjr_equalize(trellis, {1.0}, sigma);
    CHECK(post[0] == doctest::Approx(0.98201).epsilon(1e-4));

    auto p2 = bcjr_equalize(trellis, {0.3, -0.8, 2.0}, sigma);
    for (std::size_t i = 0; i < 3; ++i) {
        double r = std::vector<double>{0.3, -0.8, 2.0}[i];
        double expect = 1.0 / (1.0 + std::exp(-2.0 * r / (sigma * sigma)));
        CHECK(p2[i] == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("large noise washes out the posterior") {
    Trellis trellis(dispersive_test_taps(), Nonlinearity::identity);
    auto post = bcjr_equalize(trellis, {0.5, -0.2, 0.1, 0.9}, 1e4);
    for (double p : post) CHECK(p == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("posterior complement sums to one") {
    // P(+1) comes out of a normalized ratio; check it is a probability and
    // that flipping the received sign flips the posterior.
    Trellis trellis(dispersive_test_taps(), Nonlinearity::identity);
    std::mt19937_64 rng(8);
    std::normal_distribution<double> noise(0.0, 0.5);
    std::vector<double> r(16);
    for (double& v : r) v = noise(rng);
    auto post = bcjr_equalize(trellis, r, 0.5);
    for (double p : post) {
        CHECK(p > 0.0);
        CHECK(p < 1.0);
    }
    std::vector<double> neg(r);
    for (double& v : neg) v = -v;
    auto post_neg = bcjr_equalize(trellis, neg, 0.5);
    for (std::size_t i = 0; i < post.size(); ++i)
        CHECK(post[i] + post_neg[i] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("n=4 L=2 random channel matches the exhaustive oracle") {
    std::mt19937_64 rng(101);
    std::normal_distribution<double> dist;
    std::vector<double> taps{dist(rng), dist(rng)};
    double sigma = 0.6;
    Trellis trellis(taps, Nonlinearity::identity);
    std::vector<double> r{dist(rng), dist(rng), dist(rng), dist(rng)};
    auto post = bcjr_equalize(trellis, r, sigma);
    auto expect = oracle::exhaustive_posteriors(r, taps, Nonlinearity::identity, sigma);
    for (std::size_t i = 0; i < post.size(); ++i)
        CHECK(std::fabs(post[i] - expect[i]) < 1e-10);
}

TEST_CASE("exhaustive equivalence across n <= 8, L <= 3, with nonlinearity") {
    std::mt19937_64 rng(2027);
    std::normal_distribution<double> dist;
    for (int trial = 0; trial < 60; ++trial) {
        int L = 1 + trial % 3;
        int n = 1 + static_cast<int>(rng() % 8);
        Nonlinearity nl = trial % 4 == 3 ? Nonlinearity::poly_cos : Nonlinearity::identity;
        std::vector<double> taps(L);
        for (double& t : taps) t = dist(rng);
        double sigma = 0.3 + 0.2 * static_cast<double>(trial % 5);

        std::vector<double> r(n);
        for (double& v : r) v = dist(rng);

        Trellis trellis(taps, nl);
        auto post = bcjr_equalize(trellis, r, sigma);
        auto expect = oracle::exhaustive_posteriors(r, taps, nl, sigma);
        for (int i = 0; i < n; ++i) CHECK(std::fabs(post[i] - expect[i]) < 1e-9);
    }
}

TEST_CASE("sigma must be positive") {
    Trellis trellis({1.0}, Nonlinearity::identity);
    CHECK_THROWS_AS(bcjr_equalize(trellis, {1.0}, 0.0), ShapeError);
}

TEST_CASE("perfect-csi ber is non-increasing in snr") {
    ChannelSpec chan;
    chan.taps = dispersive_test_taps();
    PolarCode code = PolarCode::construct(16, 8);
    EvalOptions opt;
    opt.frames_per_snr = 50000;
    opt.seed = 404;
    opt.threads = 2;
    auto records = map_ber_baseline(chan, code, {0, 1, 2, 3, 4, 5, 6, 7, 8},
                                    SnrConvention::es_n0, 0.5, 0, opt);
    for (std::size_t i = 1; i < records.size(); ++i)
        CHECK(records[i].ber <= records[i - 1].ber);
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("estimate");

TEST_CASE("noiseless pilot recovers the taps exactly") {
    std::mt19937_64 rng(31);
    PilotRecord pilot;
    pilot.symbols.resize(20);
    for (double& s : pilot.symbols) s = (rng() & 1u) ? -1.0 : 1.0;
    pilot.observed = fir_convolve(pilot.symbols, dispersive_test_taps());
    auto est = ls_channel_estimate(pilot, 3);
    CHECK(std::fabs(est[0] - 0.3482) < 1e-10);
    CHECK(std::fabs(est[1] - 0.8704) < 1e-10);
    CHECK(std::fabs(est[2] - 0.3482) < 1e-10);
}

TEST_CASE("single-tap identity pilot") {
    PilotRecord pilot;
    pilot.symbols = {1, -1, 1, 1};
    pilot.observed = pilot.symbols;
    auto est = ls_channel_estimate(pilot, 1);
    CHECK(est[0] == doctest::Approx(1.0));
}

TEST_CASE("rank-deficient pilot throws") {
    PilotRecord pilot;
    pilot.symbols = {0, 0, 0, 0};
    pilot.observed = {0, 0, 0, 0};
    CHECK_THROWS_AS(ls_channel_estimate(pilot, 2), SingularSystemError);
    PilotRecord small;
    small.symbols = {1.0};
    small.observed = {1.0};
    CHECK_THROWS_AS(ls_channel_estimate(small, 2), ShapeError);
}

TEST_CASE("longer pilots estimate better") {
    auto taps = dispersive_test_taps();
    double sigma = 0.5;
    double mse10 = 0.0, mse20 = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        for (int n : {10, 20}) {
            std::mt19937_64 rng = make_stream_rng(777, static_cast<std::uint64_t>(n), trial);
            std::normal_distribution<double> noise(0.0, sigma);
            PilotRecord pilot;
            pilot.symbols.resize(n);
            for (double& s : pilot.symbols) s = (rng() & 1u) ? -1.0 : 1.0;
            pilot.observed = fir_convolve(pilot.symbols, taps);
            for (double& r : pilot.observed) r += noise(rng);
            std::vector<double> est;
            try {
                est = ls_channel_estimate(pilot, 3);
            } catch (const SingularSystemError&) {
                continue;  // pathological pilot draw
            }
            double err = 0.0;
            for (int k = 0; k < 3; ++k) err += (est[k] - taps[k]) * (est[k] - taps[k]);
            (n == 10 ? mse10 : mse20) += err;
        }
    }
    CHECK(mse20 < mse10);
}

TEST_CASE("estimated-csi ordering: n=20 pilots no worse than n=10") {
    ChannelSpec chan;
    chan.taps = dispersive_test_taps();
    PolarCode code = PolarCode::construct(16, 8);
    EvalOptions opt;
    opt.frames_per_snr = 20000;
    opt.seed = 11;
    opt.threads = 2;
    std::vector<double> grid{2, 4, 6, 8};
    auto n10 = map_ber_baseline(chan, code, grid, SnrConvention::es_n0, 0.5, 10, opt);
    auto n20 = map_ber_baseline(chan, code, grid, SnrConvention::es_n0, 0.5, 20, opt);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(n20[i].ber <= n10[i].ber);
}

TEST_SUITE_END();
