#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "golden_n4.hpp"
#include "qrx/scdecoder.hpp"

using namespace qrx;

namespace {

double maxdiff(const Mat& a, const Eigen::MatrixXd& b) {
    return (a - b.cast<std::complex<double>>()).cwiseAbs().maxCoeff();
}

double q_formula(double a) { return (2 * a * a + 2 * a + 0.5) / (4 * a * a + 1); }
double k_formula(double a) { return 0.5 / (4 * a * a + 1); }

}  // namespace

TEST_CASE("averaged density basics") {
    const PolarCode code = standard_code(4);
    SUBCASE("full prefix is a pure codeword state") {
        const double a = 0.2;
        const Mat rho = averaged_density(code, bits_from_string("0000"), a);
        const Vec v = bpsk_codeword_state(bits_from_string("0000"), a).amplitudes;
        CHECK((rho - v * v.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(std::abs(rho.trace().real() - 1.0) < 1e-12);
    }
    SUBCASE("prefix 000 is the two-codeword mixture") {
        const double a = 0.13;
        const Mat rho = averaged_density(code, bits_from_string("000"), a);
        const Vec v0 = bpsk_codeword_state(bits_from_string("0000"), a).amplitudes;
        const Vec v1 = bpsk_codeword_state(bits_from_string("1111"), a).amplitudes;
        CHECK((rho - 0.5 * (v0 * v0.adjoint() + v1 * v1.adjoint())).cwiseAbs().maxCoeff() <
              1e-14);
    }
    SUBCASE("alpha zero collapses to vacuum") {
        const Mat rho = averaged_density(code, bits_from_string("00"), 0.0);
        Mat vac = Mat::Zero(5, 5);
        vac(0, 0) = 1.0;
        CHECK((rho - vac).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("frozen violation rejected") {
        CHECK_THROWS_AS(averaged_density(code, bits_from_string("01"), 0.1),
                        std::invalid_argument);
    }
}

TEST_CASE("eigenspace projectors") {
    SUBCASE("diagonal z split") {
        Mat d = Mat::Zero(2, 2);
        d(0, 0) = 1.0;
        d(1, 1) = -1.0;
        const auto [plus, minus] = eigenspace_projectors(d);
        CHECK(std::abs(plus(0, 0).real() - 1.0) < 1e-15);
        CHECK(std::abs(plus(1, 1).real()) < 1e-15);
        CHECK(std::abs(minus(1, 1).real() - 1.0) < 1e-15);
    }
    SUBCASE("zero matrix goes entirely to the non-negative branch") {
        const auto [plus, minus] = eigenspace_projectors(Mat::Zero(3, 3));
        CHECK((plus - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(minus.cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("non-Hermitian rejected") {
        Mat bad = Mat::Zero(2, 2);
        bad(0, 1) = 1.0;
        CHECK_THROWS_AS(eigenspace_projectors(bad), std::invalid_argument);
    }
    SUBCASE("complex Hermitian input") {
        Mat h(2, 2);
        h << 0.0, std::complex<double>(0, -0.5), std::complex<double>(0, 0.5), 0.0;
        const auto [plus, minus] = eigenspace_projectors(h);
        CHECK((plus + minus - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((plus * plus - plus).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("printed projector matrices") {
    const PolarCode code = standard_code(4);
    for (double a : {0.05, 0.1, 0.25}) {
        const Mat d3 = averaged_density(code, bits_from_string("000"), a) -
                       averaged_density(code, bits_from_string("001"), a);
        const auto [p000, p001] = eigenspace_projectors(d3);
        CHECK(maxdiff(p000, golden::pi_000()) < 1e-9);
        CHECK(maxdiff(p001, golden::pi_001()) < 1e-9);

        const Mat d40 = averaged_density(code, bits_from_string("0000"), a) -
                        averaged_density(code, bits_from_string("0001"), a);
        const auto [p0000, p0001] = eigenspace_projectors(d40);
        CHECK(maxdiff(p0000, golden::pi_0000()) < 1e-9);
        CHECK(maxdiff(p0001, golden::pi_0001()) < 1e-9);

        const Mat d41 = averaged_density(code, bits_from_string("0010"), a) -
                        averaged_density(code, bits_from_string("0011"), a);
        const auto [p0010, p0011] = eigenspace_projectors(d41);
        CHECK(maxdiff(p0010, golden::pi_0010()) < 1e-9);
        CHECK(maxdiff(p0011, golden::pi_0011()) < 1e-9);

        // nesting
        CHECK((p000 + p001 - Mat::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("sc povm matches the printed elements and is complete") {
    const PolarCode code = standard_code(4);
    for (double a : {0.05, 0.1, 0.25}) {
        const Povm povm = build_sc_povm(code, a);
        REQUIRE(povm.labels.size() == 4);
        CHECK(povm.labels[0] == "0000");
        CHECK(maxdiff(povm.elements[0], golden::lambda_0000()) < 1e-9);
        CHECK(maxdiff(povm.elements[1], golden::lambda_0001()) < 1e-9);
        CHECK(maxdiff(povm.elements[2], golden::lambda_0010()) < 1e-9);
        CHECK(maxdiff(povm.elements[3], golden::lambda_0010()) < 1e-9);
        CHECK((povm.elements[2] - povm.elements[3]).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((povm.sum() - Mat::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("povm positivity and completeness across sizes") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.02, 0.3);
    for (int n : {2, 4, 8}) {
        const PolarCode code = standard_code(n);
        for (int trial = 0; trial < 3; ++trial) {
            const double a = dist(rng);
            const Povm povm = build_sc_povm(code, a);
            CHECK((povm.sum() - Mat::Identity(povm.dim(), povm.dim())).cwiseAbs().maxCoeff() <
                  1e-9);
            for (const auto& el : povm.elements) {
                Eigen::SelfAdjointEigenSolver<Mat> es(el);
                CHECK(es.eigenvalues().minCoeff() > -1e-9);
            }
        }
    }
}

TEST_CASE("transition matrix reproduces the symbolic table") {
    const PolarCode code = standard_code(4);
    const Codebook cb = build_codebook(code);
    for (double a : {0.02, 0.05, 0.1, 0.2, 0.3}) {
        const TransitionMatrix tm = transition_matrix(build_sc_povm(code, a), cb, a);
        tm.validate();
        const double q = q_formula(a), k = k_formula(a);
        Eigen::MatrixXd expect(4, 4);
        expect << q, 1 - q, 0, 0,
                  1 - q, q, 0, 0,
                  k, k, 0.5 - k, 0.5 - k,
                  k, k, 0.5 - k, 0.5 - k;
        CHECK((tm.p - expect).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("quoted value at alpha 0.1") {
        const TransitionMatrix tm =
            transition_matrix(build_sc_povm(code, 0.1), cb, 0.1);
        CHECK(std::abs(tm.p(0, 0) - 0.72 / 1.04) < 1e-12);
    }
    SUBCASE("main text example: decode 0001 from psi_1111") {
        for (double a : {0.03, 0.1, 0.22}) {
            const Povm povm = build_sc_povm(code, a);
            const Vec v = bpsk_codeword_state(bits_from_string("1111"), a).amplitudes;
            const double p = std::real(v.dot(povm.elements[1] * v));
            CHECK(std::abs(p - q_formula(a)) < 1e-12);
        }
    }
    SUBCASE("alpha zero rows") {
        const TransitionMatrix tm = transition_matrix(build_sc_povm(code, 0.0), cb, 0.0);
        for (int r = 0; r < 4; ++r) {
            CHECK(tm.p(r, 0) == doctest::Approx(0.5).epsilon(1e-12));
            CHECK(tm.p(r, 1) == doctest::Approx(0.5).epsilon(1e-12));
            CHECK(tm.p(r, 2) < 1e-12);
        }
    }
}

TEST_CASE("effective channel blends the residual mass") {
    const PolarCode code = standard_code(4);
    SUBCASE("alpha zero is unchanged") {
        const Povm povm = build_sc_povm(code, 0.0);
        const TransitionMatrix eff = effective_channel(code, 0.0, povm);
        const TransitionMatrix tm =
            transition_matrix(povm, build_codebook(code), 0.0);
        CHECK((eff.p - tm.p).cwiseAbs().maxCoeff() < 1e-15);
    }
    SUBCASE("residual weight at N a^2 = 0.004") {
        const double a = std::sqrt(0.001);
        const Povm povm = build_sc_povm(code, a);
        const TransitionMatrix tm = transition_matrix(povm, build_codebook(code), a);
        const TransitionMatrix eff = effective_channel(code, a, povm);
        const double eps = 7.978698632561758e-6;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                CHECK(std::abs(eff.p(r, c) - ((1 - eps) * tm.p(r, c) + eps * 0.25)) < 1e-15);
        eff.validate();
    }
}

TEST_CASE("json export shapes") {
    const PolarCode code = standard_code(4);
    const Povm povm = build_sc_povm(code, 0.1);
    const std::string pj = povm_to_json(povm);
    CHECK(pj.find("\"0000\"") != std::string::npos);
    const TransitionMatrix tm = transition_matrix(povm, build_codebook(code), 0.1);
    const std::string tj = transition_to_json(tm);
    CHECK(tj.find("\"outputs\"") != std::string::npos);
}
