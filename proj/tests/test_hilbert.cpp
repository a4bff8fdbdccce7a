#include <doctest.h>

#include <cmath>
#include <random>

#include "qrx/hilbert.hpp"

using namespace qrx;

TEST_CASE("truncated basis layout") {
    const auto b1 = make_basis(4, 1);
    CHECK(b1.dim() == 5);
    CHECK(b1.patterns[0].empty());
    CHECK(b1.patterns[3] == std::vector<int>{3});

    const auto b2 = make_basis(4, 2);
    CHECK(b2.dim() == 11);
    CHECK(b2.patterns[5] == std::vector<int>{1, 2});
    CHECK(b2.patterns[10] == std::vector<int>{3, 4});
    CHECK(b2.index_of({2, 4}) == 9);
    CHECK(b2.index_of({4, 4}) == -1);

    CHECK_THROWS_AS(make_basis(4, 3), std::invalid_argument);
    CHECK_THROWS_AS(make_basis(1, 2), std::invalid_argument);
}

TEST_CASE("coherent state amplitudes") {
    SUBCASE("vacuum") {
        const auto v = coherent_truncated(0.0, 1);
        CHECK(v(0).real() == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(std::abs(v(1)) == doctest::Approx(0.0));
    }
    SUBCASE("alpha 0.1, two photons") {
        const auto v = coherent_truncated(0.1, 2);
        CHECK(std::abs(v(0).real() - 0.9950124791926823) < 1e-15);
        CHECK(std::abs(v(1).real() - 0.09950124791926823) < 1e-15);
        CHECK(std::abs(v(2).real() - 0.1 * 0.1 / std::sqrt(2.0) * 0.9950124791926823) < 1e-15);
    }
    SUBCASE("alpha 0.5, one photon") {
        const auto v = coherent_truncated(0.5, 1);
        CHECK(std::abs(v(0).real() - 0.8824969025845954) < 1e-15);
        CHECK(std::abs(v(1).real() - 0.4412484512922977) < 1e-15);
    }
    CHECK_THROWS_AS(coherent_truncated(-0.1, 1), std::invalid_argument);
}

TEST_CASE("bpsk codeword states") {
    SUBCASE("all-zero codeword") {
        const double a = 0.17;
        const auto st = bpsk_codeword_state({0, 0, 0, 0}, a);
        const double norm = std::sqrt(1.0 + 4 * a * a);
        CHECK(std::abs(st.amplitudes(0).real() - 1.0 / norm) < 1e-15);
        for (int i = 1; i <= 4; ++i)
            CHECK(std::abs(st.amplitudes(i).real() - a / norm) < 1e-15);
    }
    SUBCASE("alpha zero erases phases") {
        const auto st = bpsk_codeword_state({1, 1, 1, 1}, 0.0);
        CHECK(st.amplitudes(0).real() == doctest::Approx(1.0));
        for (int i = 1; i <= 4; ++i) CHECK(std::abs(st.amplitudes(i)) < 1e-15);
    }
    SUBCASE("sign pattern 1010") {
        const auto st = bpsk_codeword_state({1, 0, 1, 0}, 0.1);
        const double s = 0.9805806756909202;  // 1/sqrt(1.04)
        CHECK(std::abs(st.amplitudes(0).real() - s) < 1e-14);
        CHECK(std::abs(st.amplitudes(1).real() + 0.1 * s) < 1e-14);
        CHECK(std::abs(st.amplitudes(2).real() - 0.1 * s) < 1e-14);
        CHECK(std::abs(st.amplitudes(3).real() + 0.1 * s) < 1e-14);
        CHECK(std::abs(st.amplitudes(4).real() - 0.1 * s) < 1e-14);
    }
}

TEST_CASE("two photon codeword states") {
    SUBCASE("vacuum only at alpha zero") {
        const auto st = two_photon_codeword_state({0, 0, 0, 0}, 0.0);
        CHECK(st.amplitudes(0).real() == doctest::Approx(1.0));
        CHECK(st.amplitudes.tail(10).cwiseAbs().maxCoeff() < 1e-15);
    }
    SUBCASE("all-plus pairs for 0000") {
        const double a = 0.2;
        const auto st = two_photon_codeword_state({0, 0, 0, 0}, a);
        for (int k = 5; k < 11; ++k)
            CHECK(st.amplitudes(k).real() > 0);
        CHECK(std::abs(st.amplitudes(5).real() / st.amplitudes(0).real() - a * a) < 1e-14);
    }
    SUBCASE("sign algebra for 1100") {
        const double a = 0.2;
        const auto st = two_photon_codeword_state({1, 1, 0, 0}, a);
        const auto& b = st.basis;
        // bins (1,2): both flipped, signs cancel; (1,3): one flip
        CHECK(st.amplitudes(b.index_of({1, 2})).real() > 0);
        CHECK(st.amplitudes(b.index_of({1, 3})).real() < 0);
        CHECK(std::abs(st.amplitudes(b.index_of({1, 3})).real() /
                           st.amplitudes(b.index_of({1, 2})).real() +
                       1.0) < 1e-14);
    }
    CHECK_THROWS_AS(two_photon_codeword_state({0}, 0.1), std::invalid_argument);
}

TEST_CASE("residual multiphoton probability") {
    const Bits c{0, 1, 1, 0};
    CHECK(residual_multiphoton_probability(c, 0.0, 1) == doctest::Approx(0.0));
    SUBCASE("closed form at N a^2 = 0.004") {
        const double alpha = std::sqrt(0.001);
        CHECK(std::abs(residual_multiphoton_probability(c, alpha, 1) -
                       7.978698632561758e-6) < 1e-18);
    }
    SUBCASE("codeword independent") {
        const double alpha = 0.21;
        const double r = residual_multiphoton_probability({0, 0, 0, 0}, alpha, 1);
        CHECK(residual_multiphoton_probability({1, 0, 1, 1}, alpha, 1) ==
              doctest::Approx(r).epsilon(1e-15));
    }
}

TEST_CASE("state invariants") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> dist(0.0, 0.4);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = dist(rng);
        Bits c(4);
        for (auto& b : c) b = rng() & 1;

        // normalization
        const auto s1 = bpsk_codeword_state(c, a);
        CHECK(std::abs(s1.squared_norm() - 1.0) < 1e-12);
        const auto s2 = two_photon_codeword_state(c, a);
        CHECK(std::abs(s2.squared_norm() - 1.0) < 1e-12);

        // sign symmetry under codeword complement
        Bits cc = c;
        for (auto& b : cc) b ^= 1;
        const auto s1c = bpsk_codeword_state(cc, a);
        CHECK(std::abs(s1.amplitudes(0) - s1c.amplitudes(0)) < 1e-14);
        for (int i = 1; i <= 4; ++i)
            CHECK(std::abs(s1.amplitudes(i) + s1c.amplitudes(i)) < 1e-14);

        // truncated mass + residual = 1
        for (int mp : {1, 2}) {
            const double na2 = 4 * a * a;
            double trunc_mass = std::exp(-na2) * (1 + na2);
            if (mp == 2) trunc_mass = std::exp(-na2) * (1 + na2 + 6 * std::pow(a, 4));
            CHECK(std::abs(trunc_mass + residual_multiphoton_probability(c, a, mp) - 1.0) <
                  1e-12);
        }
    }
}
