#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <vector>

#include "widthlab/io/idx.hpp"

using namespace widthlab;

namespace {

void put_be32(std::ofstream& os, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                                static_cast<unsigned char>(v >> 16),
                                static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

// tiny 4x4 idx pair with the given label sequence
void write_pair(const std::string& stem, const std::vector<unsigned char>& labels,
                std::uint32_t image_magic = 0x00000803u, std::uint32_t label_magic = 0x00000801u) {
    {
        std::ofstream os(stem + "-images", std::ios::binary);
        put_be32(os, image_magic);
        put_be32(os, static_cast<std::uint32_t>(labels.size()));
        put_be32(os, 4);
        put_be32(os, 4);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            for (int p = 0; p < 16; ++p) {
                const unsigned char pixel =
                    static_cast<unsigned char>((i * 37 + p * 11 + labels[i]) % 256);
                os.write(reinterpret_cast<const char*>(&pixel), 1);
            }
        }
    }
    {
        std::ofstream os(stem + "-labels", std::ios::binary);
        put_be32(os, label_magic);
        put_be32(os, static_cast<std::uint32_t>(labels.size()));
        os.write(reinterpret_cast<const char*>(labels.data()),
                 static_cast<std::streamsize>(labels.size()));
    }
}

struct Cleanup {
    std::string stem;
    ~Cleanup() {
        std::filesystem::remove(stem + "-images");
        std::filesystem::remove(stem + "-labels");
    }
};

}  // namespace

TEST_CASE("idx loader: selection, scaling, labels") {
    Cleanup c{"idx_ok"};
    write_pair("idx_ok", {0, 1, 1, 0, 2, 0, 1, 1});
    const auto set = io::load_mnist("idx_ok-images", "idx_ok-labels", 0, 1, 2);
    CHECK(set.size() == 4);
    CHECK(set.input_dim() == 16);
    CHECK(set.labels(0) == 1.0);
    CHECK(set.labels(2) == -1.0);
    CHECK(set.inputs.minCoeff() >= 0.0);
    CHECK(set.inputs.maxCoeff() <= 1.0);
    // first class-0 sample in file order is index 0: pixel p = (11 p) % 256 / 255
    CHECK(set.inputs(1, 0) == doctest::Approx(11.0 / 255.0));
}

TEST_CASE("idx loader: bad magic reports the offset") {
    Cleanup c{"idx_magic"};
    write_pair("idx_magic", {0, 1}, 0x12345678u);
    try {
        io::load_mnist("idx_magic-images", "idx_magic-labels", 0, 1, 1);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.offset == 0);
    }
}

TEST_CASE("idx loader: missing class") {
    Cleanup c{"idx_missing"};
    write_pair("idx_missing", {0, 0, 0, 2});
    CHECK_THROWS_AS(io::load_mnist("idx_missing-images", "idx_missing-labels", 0, 1, 1),
                    MissingClass);
    CHECK_THROWS_AS(io::load_mnist("idx_missing-images", "idx_missing-labels", 0, 2, 3),
                    MissingClass);
}

TEST_CASE("idx loader: per-class count shapes the train set") {
    Cleanup c{"idx_count"};
    std::vector<unsigned char> labels;
    for (int i = 0; i < 30; ++i) labels.push_back(i % 2 ? 1 : 0);
    write_pair("idx_count", labels);
    const auto set = io::load_mnist("idx_count-images", "idx_count-labels", 0, 1, 10);
    CHECK(set.size() == 20);
}
