#include <doctest.h>

#include <cmath>

#include "eqnet/channel.hpp"
#include "eqnet/rng.hpp"

using namespace eqnet;

TEST_SUITE_BEGIN("channel");

TEST_CASE("bpsk mapping") {
    auto s = bpsk_modulate({0, 1, 0});
    CHECK(s == std::vector<double>{1.0, -1.0, 1.0});
    CHECK(bpsk_modulate({}).empty());
    CHECK_THROWS_AS(bpsk_modulate({0, 2}), ShapeError);
}

TEST_CASE("bpsk round-trips over all length-8 vectors") {
    for (int mask = 0; mask < 256; ++mask) {
        std::vector<int> bits(8);
        for (int i = 0; i < 8; ++i) bits[i] = (mask >> i) & 1;
        CHECK(bpsk_demodulate(bpsk_modulate(bits)) == bits);
    }
}

TEST_CASE("fir impulse response reproduces the taps") {
    auto taps = dispersive_test_taps();
    auto v = fir_convolve({1, 0, 0}, taps);
    CHECK(v[0] == doctest::Approx(0.3482));
    CHECK(v[1] == doctest::Approx(0.8704));
    CHECK(v[2] == doctest::Approx(0.3482));
}

TEST_CASE("fir direct summation example") {
    auto v = fir_convolve({1, -1, 1}, dispersive_test_taps());
    CHECK(v[0] == doctest::Approx(0.3482));
    CHECK(v[1] == doctest::Approx(0.5222));
    CHECK(v[2] == doctest::Approx(-0.1740));
}

TEST_CASE("fir identity and errors") {
    std::vector<double> s{0.5, -2.0, 3.0};
    CHECK(fir_convolve(s, {1.0}) == s);
    CHECK_THROWS_AS(fir_convolve(s, {}), ShapeError);
}

TEST_CASE("test taps are unit norm") {
    double norm2 = 0.0;
    for (double h : dispersive_test_taps()) norm2 += h * h;
    CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("nonlinearity values") {
    CHECK(apply_nonlinearity(1.0, Nonlinearity::poly_cos) == doctest::Approx(0.6));
    CHECK(apply_nonlinearity(0.5, Nonlinearity::poly_cos) == doctest::Approx(0.5375));
    CHECK(apply_nonlinearity(1.0, Nonlinearity::cubic) == doctest::Approx(0.1));
    CHECK(apply_nonlinearity(-2.5, Nonlinearity::identity) == -2.5);
    // Mirrored variant agrees for v >= 0 and flips the sign of the
    // magnitude for v < 0.
    CHECK(apply_nonlinearity(1.0, Nonlinearity::poly_cos_abs) == doctest::Approx(0.6));
    CHECK(apply_nonlinearity(-1.0, Nonlinearity::poly_cos_abs) == doctest::Approx(-0.6));
    CHECK(apply_nonlinearity(-1.0, Nonlinearity::poly_cos) == doctest::Approx(-1.2));
}

TEST_CASE("nonlinearity name round-trip") {
    for (auto nl : {Nonlinearity::identity, Nonlinearity::poly_cos, Nonlinearity::cubic,
                    Nonlinearity::poly_cos_abs})
        CHECK(nonlinearity_from_name(nonlinearity_name(nl)) == nl);
    CHECK_THROWS_AS(nonlinearity_from_name("tanh"), ConfigError);
}

TEST_CASE("sigma from snr") {
    double s0 = sigma_from_snr({0.0, SnrConvention::es_n0, 1.0});
    CHECK(s0 * s0 == doctest::Approx(0.5));
    double s1 = sigma_from_snr({0.0, SnrConvention::eb_n0, 0.5});
    CHECK(s1 * s1 == doctest::Approx(1.0));
    double s2 = sigma_from_snr({10.0, SnrConvention::es_n0, 1.0});
    CHECK(s2 * s2 == doctest::Approx(0.05));
    CHECK_THROWS_AS(sigma_from_snr({0.0, SnrConvention::eb_n0, 0.0}), ShapeError);
}

TEST_CASE("noiseless transmit composes the pieces") {
    ChannelSpec ident;
    std::mt19937_64 rng(1);
    auto r = transmit({0, 1, 1, 0}, ident, rng);
    CHECK(r == bpsk_modulate({0, 1, 1, 0}));

    ChannelSpec disp;
    disp.taps = dispersive_test_taps();
    auto r2 = transmit({0, 0, 0}, disp, rng);  // impulse-free, all +1 input
    auto expect = apply_nonlinearity(fir_convolve(bpsk_modulate({0, 0, 0}), disp.taps),
                                     Nonlinearity::identity);
    CHECK(r2 == expect);

    auto r3 = transmit({0}, disp, rng);
    CHECK(r3[0] == doctest::Approx(0.3482));
}

TEST_CASE("transmit is deterministic per seed") {
    ChannelSpec spec;
    spec.taps = dispersive_test_taps();
    spec.nonlinearity = Nonlinearity::poly_cos;
    spec.noise_sigma = 0.4;
    std::mt19937_64 a(77), b(77);
    std::vector<int> bits{0, 1, 1, 0, 1, 0, 0, 1};
    CHECK(transmit(bits, spec, a) == transmit(bits, spec, b));
}

TEST_CASE("dispersed power of random symbols is about one") {
    auto taps = dispersive_test_taps();
    std::mt19937_64 rng(2025);
    const int n = 100000;
    std::vector<double> s(n);
    for (double& v : s) v = (rng() & 1u) ? -1.0 : 1.0;
    auto v = fir_convolve(s, taps);
    double power = 0.0;
    for (double x : v) power += x * x;
    power /= n;
    CHECK(power == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("awgn moments") {
    std::mt19937_64 rng = make_stream_rng(9, 1);
    const int n = 100000;
    double sigma = 0.7;
    ChannelSpec spec;
    spec.noise_sigma = sigma;
    std::vector<int> zeros(n, 0);
    auto r = transmit(zeros, spec, rng);
    double mean = 0.0, var = 0.0;
    for (double x : r) mean += x - 1.0;
    mean /= n;
    for (double x : r) var += (x - 1.0 - mean) * (x - 1.0 - mean);
    var /= n;
    // 3-sigma statistical bounds at 1e5 draws.
    CHECK(std::fabs(mean) < 3.0 * sigma / std::sqrt(static_cast<double>(n)));
    CHECK(std::fabs(var - sigma * sigma) <
          3.0 * sigma * sigma * std::sqrt(2.0 / static_cast<double>(n)));
}

TEST_SUITE_END();
