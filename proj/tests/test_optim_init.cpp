#include <doctest.h>

#include <cmath>

#include "eqnet/models.hpp"
#include "eqnet/network.hpp"
#include "eqnet/optim.hpp"

using namespace eqnet;

TEST_SUITE_BEGIN("optim");

TEST_CASE("zero gradient leaves parameters untouched") {
    Tensor theta({3}, {0.5, -1.0, 2.0});
    Tensor grad({3});
    Adam opt(1e-3);
    opt.step({&theta}, {&grad});
    CHECK(theta[0] == 0.5);
    CHECK(theta[1] == -1.0);
    CHECK(theta[2] == 2.0);
}

TEST_CASE("first step with unit gradient moves by about -lr") {
    Tensor theta({1}, {0.0});
    Tensor grad({1}, {1.0});
    Adam opt(1e-3);
    opt.step({&theta}, {&grad});
    CHECK(std::fabs(theta[0] - (-1e-3)) < 1e-6);
}

TEST_CASE("identical parameters stay identical") {
    Tensor theta({2}, {0.7, 0.7});
    Tensor grad({2}, {0.3, 0.3});
    Adam opt(1e-3);
    for (int i = 0; i < 25; ++i) opt.step({&theta}, {&grad});
    CHECK(theta[0] == theta[1]);
}

TEST_CASE("shape mismatch rejected") {
    Tensor theta({2});
    Tensor grad({3});
    Adam opt;
    CHECK_THROWS_AS(opt.step({&theta}, {&grad}), ShapeError);
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("init");

TEST_CASE("same seed is bit-identical, different seeds differ") {
    Network a = build_cnn_equalizer(NetworkSpec::cnn({6, 12, 1}, 3));
    Network b = build_cnn_equalizer(NetworkSpec::cnn({6, 12, 1}, 3));
    init_weights(a, 42);
    init_weights(b, 42);

    auto pa = a.params();
    auto pb = b.params();
    bool identical = true;
    for (std::size_t p = 0; p < pa.size(); ++p)
        for (std::size_t i = 0; i < pa[p]->size(); ++i)
            if ((*pa[p])[i] != (*pb[p])[i]) identical = false;
    CHECK(identical);

    init_weights(b, 43);
    pb = b.params();
    bool any_diff = false;
    for (std::size_t p = 0; p < pa.size(); ++p)
        for (std::size_t i = 0; i < pa[p]->size(); ++i)
            if ((*pa[p])[i] != (*pb[p])[i]) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("draws look standard normal") {
    // 12776 parameters > 10000 draws; mean within +-0.05, variance within
    // +-0.1 covers > 3 sigma for N(0,1).
    Network net = build_nnd(NetworkSpec::dnn({16, 128, 64, 32, 8}));
    init_weights(net, 7);
    double sum = 0.0, sq = 0.0;
    std::size_t count = 0;
    for (const Tensor* p : static_cast<const Network&>(net).params()) {
        for (std::size_t i = 0; i < p->size(); ++i) {
            sum += (*p)[i];
            sq += (*p)[i] * (*p)[i];
            ++count;
        }
    }
    double mean = sum / static_cast<double>(count);
    double var = sq / static_cast<double>(count) - mean * mean;
    CHECK(count > 10000);
    CHECK(std::fabs(mean) < 0.05);
    CHECK(std::fabs(var - 1.0) < 0.1);
}

TEST_CASE("parameter counts") {
    CHECK(build_cnn_equalizer(NetworkSpec::cnn({6, 12, 24, 12, 6, 1}, 3)).param_count() == 2257);
    CHECK(build_cnn_equalizer(NetworkSpec::cnn({8, 16, 32, 16, 8, 1}, 3)).param_count() == 3969);
    CHECK(build_cnn_equalizer(NetworkSpec::cnn({32, 64, 32, 1}, 3)).param_count() == 12609);
    CHECK(build_nnd(NetworkSpec::dnn({16, 128, 64, 32, 8})).param_count() == 12776);
    CHECK(build_cnn_equalizer(NetworkSpec::cnn({6, 12, 24, 12, 6, 1}, 3)).param_count() +
              build_nnd(NetworkSpec::dnn({16, 128, 64, 32, 8})).param_count() ==
          15033);
}

TEST_CASE("conv stack count formula") {
    // sum_l (C_{l-1} M_l K + M_l)
    std::vector<int> sizes{8, 16, 8, 1};
    int k = 3;
    std::size_t expect = 0;
    int prev = 1;
    for (int m : sizes) {
        expect += static_cast<std::size_t>(prev) * m * k + m;
        prev = m;
    }
    CHECK(expect == 729);
    CHECK(build_cnn_equalizer(NetworkSpec::cnn(sizes, k)).param_count() == expect);
}

TEST_SUITE_END();
