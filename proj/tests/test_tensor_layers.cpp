#include <doctest.h>

#include <random>

#include "eqnet/layers.hpp"
#include "eqnet/tensor.hpp"
#include "oracles.hpp"

using namespace eqnet;

TEST_SUITE_BEGIN("tensor");

TEST_CASE("shape bookkeeping") {
    Tensor t({2, 3});
    CHECK(t.size() == 6);
    CHECK(t.rank() == 2);
    t.at(1, 2) = 5.0;
    CHECK(t[5] == 5.0);

    CHECK_THROWS_AS(Tensor({2, 3}, {1.0, 2.0}), ShapeError);
    CHECK_THROWS_AS(Tensor({0}), ShapeError);
    CHECK_THROWS_AS(Tensor({1, 1, 1, 1}), ShapeError);
}

TEST_CASE("reshape preserves data, rejects bad sizes") {
    Tensor t({2, 3}, {1, 2, 3, 4, 5, 6});
    Tensor r = t.reshaped({6});
    CHECK(r[4] == 5.0);
    CHECK_THROWS_AS(t.reshaped({5}), ShapeError);
}

TEST_CASE("finite check") {
    Tensor t({2}, {1.0, 2.0});
    CHECK(t.all_finite());
    t[1] = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(t.all_finite());
    CHECK_THROWS_AS(require_finite(t, "test"), NumericError);
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("layers");

namespace {

ConvLayer make_conv(std::vector<double> w, double b, bool relu, int c = 1, int m = 1, int k = 3) {
    ConvLayer layer(c, m, k, relu);
    layer.weights().values() = std::move(w);
    layer.bias().values() = {b};
    return layer;
}

}  // namespace

TEST_CASE("conv identity kernel") {
    ConvLayer layer = make_conv({0, 1, 0}, 0.0, false);
    Tensor y = layer.infer(Tensor({1, 3}, {1, -1, 2}));
    CHECK(y[0] == doctest::Approx(1.0));
    CHECK(y[1] == doctest::Approx(-1.0));
    CHECK(y[2] == doctest::Approx(2.0));
}

TEST_CASE("conv box kernel matches direct summation") {
    ConvLayer layer = make_conv({1, 1, 1}, 0.0, false);
    Tensor y = layer.infer(Tensor({1, 3}, {1, 1, 1}));
    std::vector<double> expect = oracle::conv1d_direct({{{1, 1, 1}}}, {0.0}, {{1, 1, 1}}, false, 0);
    REQUIRE(expect == std::vector<double>{2, 3, 2});
    for (int i = 0; i < 3; ++i) CHECK(y[i] == doctest::Approx(expect[i]));
}

TEST_CASE("conv relu with negative bias") {
    ConvLayer layer = make_conv({0, 1, 0}, -2.0, true);
    Tensor y = layer.infer(Tensor({1, 3}, {1, 3, 1}));
    CHECK(y[0] == doctest::Approx(0.0));
    CHECK(y[1] == doctest::Approx(1.0));
    CHECK(y[2] == doctest::Approx(0.0));
}

TEST_CASE("conv rejects bad input") {
    ConvLayer layer(2, 1, 3, false);
    CHECK_THROWS_AS(layer.infer(Tensor({1, 4})), ShapeError);
    CHECK_THROWS_AS(ConvLayer(1, 1, 2, false), ShapeError);

    Tensor bad({2, 3});
    bad[0] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(layer.infer(bad), NumericError);
}

TEST_CASE("conv output length equals input length for odd kernels") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> dist;
    for (int k : {1, 3, 5, 7}) {
        ConvLayer layer(1, 2, k, true);
        for (Tensor* p : layer.params())
            for (std::size_t i = 0; i < p->size(); ++i) (*p)[i] = dist(rng);
        for (std::size_t n = 1; n <= 32; ++n) {
            Tensor x({1, n});
            for (std::size_t i = 0; i < n; ++i) x[i] = dist(rng);
            Tensor y = layer.infer(x);
            CHECK(y.dim(0) == 2);
            CHECK(y.dim(1) == n);
        }
    }
}

TEST_CASE("conv without relu is linear") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> dist;
    ConvLayer layer(2, 3, 3, false);
    layer.bias().fill(0.0);
    for (std::size_t i = 0; i < layer.weights().size(); ++i) layer.weights()[i] = dist(rng);

    for (int trial = 0; trial < 20; ++trial) {
        double a = dist(rng), b = dist(rng);
        Tensor x({2, 9}), y({2, 9}), mix({2, 9});
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = dist(rng);
            y[i] = dist(rng);
            mix[i] = a * x[i] + b * y[i];
        }
        Tensor fx = layer.infer(x);
        Tensor fy = layer.infer(y);
        Tensor fmix = layer.infer(mix);
        for (std::size_t i = 0; i < fmix.size(); ++i) {
            double expect = a * fx[i] + b * fy[i];
            CHECK(fmix[i] == doctest::Approx(expect).epsilon(1e-10));
        }
    }
}

TEST_CASE("conv batched forward equals per-frame forward") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> dist;
    ConvLayer layer(2, 3, 3, true);
    for (Tensor* p : layer.params())
        for (std::size_t i = 0; i < p->size(); ++i) (*p)[i] = dist(rng);

    Tensor batch({4, 2, 5});
    for (std::size_t i = 0; i < batch.size(); ++i) batch[i] = dist(rng);
    Tensor out = layer.infer(batch);
    for (std::size_t b = 0; b < 4; ++b) {
        Tensor frame({2, 5});
        for (std::size_t i = 0; i < frame.size(); ++i) frame[i] = batch[b * 10 + i];
        Tensor single = layer.infer(frame);
        for (std::size_t i = 0; i < single.size(); ++i)
            CHECK(out[b * 15 + i] == doctest::Approx(single[i]).epsilon(1e-14));
    }
}

TEST_CASE("dense identity") {
    DenseLayer layer(2, 2, Activation::none);
    layer.weights().values() = {1, 0, 0, 1};
    layer.bias().fill(0.0);
    Tensor y = layer.infer(Tensor({2}, {3, -1}));
    CHECK(y[0] == doctest::Approx(3.0));
    CHECK(y[1] == doctest::Approx(-1.0));
}

TEST_CASE("dense sigmoid at zero") {
    DenseLayer layer(2, 1, Activation::sigmoid);
    layer.weights().values() = {1, 1};
    layer.bias().fill(0.0);
    Tensor y = layer.infer(Tensor({2}, {0, 0}));
    CHECK(y[0] == doctest::Approx(0.5));
}

TEST_CASE("dense relu clamps") {
    DenseLayer layer(1, 1, Activation::relu);
    layer.weights().values() = {2};
    layer.bias().values() = {1};
    Tensor y = layer.infer(Tensor({1}, {-2}));
    CHECK(y[0] == doctest::Approx(0.0));
}

TEST_CASE("dense width mismatch") {
    DenseLayer layer(3, 2, Activation::none);
    CHECK_THROWS_AS(layer.infer(Tensor({2}, {1, 2})), ShapeError);
}

TEST_CASE("backward before forward is a state error") {
    ConvLayer conv(1, 1, 3, false);
    CHECK_THROWS_AS(conv.backward(Tensor({1, 3})), StateError);
    DenseLayer dense(2, 2, Activation::none);
    CHECK_THROWS_AS(dense.backward(Tensor({2})), StateError);
}

TEST_SUITE_END();
