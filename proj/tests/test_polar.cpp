#include <doctest.h>

#include <set>

#include "qrx/polar.hpp"

using namespace qrx;

namespace {

// Independent route: x = u G with G built as the explicit Kronecker power.
Bits transform_via_matrix(const Bits& u) {
    const int n = static_cast<int>(u.size());
    // G[i][j] = 1 iff bits(j) subset of bits(i), zero-based
    Bits x(n, 0);
    for (int j = 0; j < n; ++j) {
        int acc = 0;
        for (int i = 0; i < n; ++i)
            if ((j & ~i) == 0) acc ^= u[i];
        x[j] = static_cast<uint8_t>(acc);
    }
    return x;
}

}  // namespace

TEST_CASE("polar transform quoted values") {
    CHECK(polar_transform(bits_from_string("0000")) == bits_from_string("0000"));
    CHECK(polar_transform(bits_from_string("0001")) == bits_from_string("1111"));
    CHECK(polar_transform(bits_from_string("0010")) == bits_from_string("1010"));
    CHECK(polar_transform(bits_from_string("0011")) == bits_from_string("0101"));
    CHECK(polar_transform(bits_from_string("00000001")) == bits_from_string("11111111"));
    CHECK_THROWS_AS(polar_transform(bits_from_string("010")), std::invalid_argument);
}

TEST_CASE("polar transform matches the matrix route and is an involution") {
    for (int n : {2, 4, 8}) {
        std::set<Bits> images;
        for (uint32_t m = 0; m < (1u << n); ++m) {
            Bits u(n);
            for (int b = 0; b < n; ++b) u[b] = (m >> (n - 1 - b)) & 1;
            const Bits x = polar_transform(u);
            CHECK(x == transform_via_matrix(u));
            CHECK(polar_transform(x) == u);
            images.insert(x);
        }
        CHECK(images.size() == (1u << n));  // bijective
    }
}

TEST_CASE("standard codes and codebooks") {
    SUBCASE("N=4") {
        const auto cb = build_codebook(standard_code(4));
        REQUIRE(cb.entries.size() == 4);
        const char* expect[4][2] = {{"0000", "0000"},
                                    {"0001", "1111"},
                                    {"0010", "1010"},
                                    {"0011", "0101"}};
        for (int i = 0; i < 4; ++i) {
            CHECK(bits_to_string(cb.entries[i].message) == expect[i][0]);
            CHECK(bits_to_string(cb.entries[i].codeword) == expect[i][1]);
        }
    }
    SUBCASE("N=2") {
        const auto cb = build_codebook(standard_code(2));
        REQUIRE(cb.entries.size() == 2);
        CHECK(bits_to_string(cb.entries[0].codeword) == "00");
        CHECK(bits_to_string(cb.entries[1].message) == "01");
        CHECK(bits_to_string(cb.entries[1].codeword) == "11");
    }
    SUBCASE("N=8 message set contains the decodable messages") {
        const auto cb = build_codebook(standard_code(8));
        REQUIRE(cb.entries.size() == 16);
        std::set<std::string> messages;
        for (const auto& e : cb.entries) messages.insert(bits_to_string(e.message));
        for (const char* m : {"00000000", "00000001", "00000010", "00000100", "00000110",
                              "00010000", "00010010", "00010100", "00010110"})
            CHECK(messages.count(m) == 1);
        // distinct codewords
        std::set<std::string> codewords;
        for (const auto& e : cb.entries) codewords.insert(bits_to_string(e.codeword));
        CHECK(codewords.size() == 16);
    }
    SUBCASE("validation") {
        CHECK_THROWS_AS(standard_code(16), std::invalid_argument);
        PolarCode bad{6, 3, {1, 2, 3}};
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
        PolarCode wrong_count{4, 2, {1}};
        CHECK_THROWS_AS(build_codebook(wrong_count), std::invalid_argument);
    }
}
