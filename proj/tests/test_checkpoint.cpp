#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "eqnet/checkpoint.hpp"
#include "eqnet/models.hpp"

using namespace eqnet;

namespace {

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_SUITE_BEGIN("checkpoint");

TEST_CASE("cnn round-trips bit-exactly") {
    Network net = build_cnn_equalizer(NetworkSpec::cnn({6, 12, 1}, 3));
    init_weights(net, 12345);
    std::string path = temp_path("eqnet_ckpt_cnn.txt");
    save_model(net, path);
    Network loaded = load_model(path);

    CHECK(loaded.kind() == "cnn");
    CHECK(loaded.structure() == std::vector<int>{6, 12, 1});
    CHECK(loaded.kernel_size() == 3);
    auto pa = static_cast<const Network&>(net).params();
    auto pb = static_cast<const Network&>(loaded).params();
    REQUIRE(pa.size() == pb.size());
    for (std::size_t p = 0; p < pa.size(); ++p) {
        REQUIRE(pa[p]->size() == pb[p]->size());
        for (std::size_t i = 0; i < pa[p]->size(); ++i) CHECK((*pa[p])[i] == (*pb[p])[i]);
    }
    std::remove(path.c_str());
}

TEST_CASE("dnn round-trips bit-exactly") {
    Network net = build_nnd(NetworkSpec::dnn({16, 32, 8}));
    init_weights(net, 98765);
    std::string path = temp_path("eqnet_ckpt_dnn.txt");
    save_model(net, path);
    Network loaded = load_model(path);
    CHECK(loaded.kind() == "dnn");
    auto pa = static_cast<const Network&>(net).params();
    auto pb = static_cast<const Network&>(loaded).params();
    for (std::size_t p = 0; p < pa.size(); ++p)
        for (std::size_t i = 0; i < pa[p]->size(); ++i) CHECK((*pa[p])[i] == (*pb[p])[i]);
    std::remove(path.c_str());
}

TEST_CASE("rejects garbage and wrong versions") {
    std::string path = temp_path("eqnet_ckpt_bad.txt");
    {
        std::ofstream out(path);
        out << "not-a-checkpoint 1 cnn 1 3\n";
    }
    CHECK_THROWS_AS(read_checkpoint_header(path), IoError);
    {
        std::ofstream out(path);
        out << "eqnet-checkpoint 999 cnn 1 3\n";
    }
    CHECK_THROWS_AS(read_checkpoint_header(path), IoError);
    CHECK_THROWS_AS(load_model(temp_path("eqnet_ckpt_missing.txt")), IoError);
    std::remove(path.c_str());
}

TEST_CASE("truncated file detected") {
    Network net = build_cnn_equalizer(NetworkSpec::cnn({2, 1}, 3));
    init_weights(net, 5);
    std::string path = temp_path("eqnet_ckpt_trunc.txt");
    save_model(net, path);
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    {
        std::ofstream out(path);
        out << content.substr(0, content.size() / 2);
    }
    CHECK_THROWS_AS(load_model(path), IoError);
    std::remove(path.c_str());
}

TEST_SUITE_END();
