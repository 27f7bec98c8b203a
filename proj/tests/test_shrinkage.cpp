#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "qwp/shrinkage.hpp"

using namespace qwp;

namespace {

CMat random_cmat(std::size_t side, std::uint64_t seed, double scale) {
    std::mt19937_64 g(seed);
    std::normal_distribution<double> Z(0.0, scale);
    CMat c(side, side);
    for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] = cplx(Z(g), Z(g));
    return c;
}

// direct windowed-average reference, no incremental sums
Image averaged_variance_ref(const CMat& c, int W) {
    const long R = long(c.rows()), C = long(c.cols());
    Image out(c.rows(), c.cols());
    for (long k = 0; k < R; ++k)
        for (long n = 0; n < C; ++n) {
            double acc = 0.0;
            for (long dk = -W; dk < W; ++dk)
                for (long dn = -W; dn < W; ++dn) {
                    long a = ((k + dk) % R + R) % R;
                    long b = ((n + dn) % C + C) % C;
                    acc += std::norm(c(a, b));
                }
            out(k, n) = acc / double(4 * W * W);
        }
    return out;
}

// per-site evaluation of the bivariate rule, written independently
CMat bsa_ref(const CMat& c, const CMat& par, int W, double lambda) {
    Image avg = averaged_variance_ref(c, W);
    CMat out(c.rows(), c.cols());
    for (std::size_t k = 0; k < c.rows(); ++k)
        for (std::size_t n = 0; n < c.cols(); ++n) {
            double ac = std::abs(c(k, n));
            double var = avg(k, n) - lambda * lambda;
            if (ac == 0.0 || var <= 0.0) { out(k, n) = 0.0; continue; }
            double sig = std::sqrt(var);
            double ap = std::abs(par(k / 2, n / 2));
            double thr = std::sqrt(3.0) * lambda * lambda * ac /
                         (sig * std::sqrt(ac * ac + ap * ap));
            out(k, n) = ac > thr ? c(k, n) * ((ac - thr) / ac) : cplx(0.0);
        }
    return out;
}

}  // namespace

TEST_SUITE("shrinkage") {

TEST_CASE("noiseless schedule endpoints") {
    ThresholdSchedule s = make_schedule(0.0, 0.5);
    CHECK(s.lambda_min == 1.0);
    CHECK(s.lambda_mid == 12.0);
    CHECK(std::abs(s.Lambda1[0] - std::sqrt(2.0) * 512.0) <= 1e-12);
    CHECK(std::abs(s.Lambda1[s.R1 - 1] - std::sqrt(2.0) * 12.0) <= 1e-12);
    CHECK(std::abs(s.Lambda2[s.R2 - 1] - std::sqrt(2.0) * 1.0) <= 1e-12);
}

TEST_CASE("noisy half-filled schedule endpoints") {
    ThresholdSchedule s = make_schedule(50.0, 0.5);
    CHECK(std::abs(s.lambda_min - 43.75) <= 1e-12);
    CHECK(s.lambda_mid == 20.0);
    CHECK(std::abs(s.Lambda1[0] - std::sqrt(2.0) * 512.0) <= 1e-12);
    CHECK(std::abs(s.Lambda1[s.R1 - 1] - std::sqrt(2.0) * 20.0) <= 1e-12);
    CHECK(std::abs(s.Lambda2[s.R2 - 1] - std::sqrt(2.0) * 43.75) <= 1e-12);
}

TEST_CASE("ladder thresholds decrease when the floor is below the middle") {
    ThresholdSchedule s = make_schedule(10.0, 0.5);
    REQUIRE(s.lambda_min < s.lambda_mid);
    for (int nu = 1; nu < s.R1 + s.R2; ++nu)
        CHECK(s.lambda_at(nu + 1) < s.lambda_at(nu));
}

TEST_CASE("ladder positions map onto the two phases") {
    ThresholdSchedule s = make_schedule(0.0, 0.5);
    for (int j = 1; j <= s.R1; ++j) CHECK(s.lambda_at(j) == s.Lambda1[j - 1]);
    for (int j = 1; j <= s.R2; ++j) CHECK(s.lambda_at(s.R1 + j) == s.Lambda2[j - 1]);
}

TEST_CASE("out-of-range inputs are clamped, not rejected") {
    ThresholdSchedule a = make_schedule(-1.0, 0.5);
    CHECK(a.sigma == 0.0);
    ThresholdSchedule b = make_schedule(0.0, 1.5);
    CHECK(b.rho == 1.0);
    ThresholdSchedule c = make_schedule(0.0, 0.5, 1, 8);
    CHECK(c.R1 == 2);
    CHECK(c.Lambda1.size() == 2);
}

TEST_CASE("the two ladder phases join continuously") {
    for (double sigma : {0.0, 10.0, 50.0}) {
        ThresholdSchedule s = make_schedule(sigma, 0.5);
        double hyp = std::sqrt(2.0) * std::pow(s.r2, -1.0) * s.lambda_min;
        CHECK(std::abs(s.Lambda1[s.R1 - 1] - std::sqrt(2.0) * s.lambda_mid) <= 1e-10);
        CHECK(std::abs(hyp - std::sqrt(2.0) * s.lambda_mid) <= 1e-10);
    }
}

TEST_CASE("fresh state with a large update keeps the first threshold") {
    ThresholdSchedule s = make_schedule(0.0, 0.5);
    StopState st;
    StepDecision d = select_stop(st, 1e9, s);
    CHECK_FALSE(d.stop);
    CHECK(d.lambda == s.Lambda1[0]);
    CHECK(st.nu == 1);
    CHECK(st.K_nu == 2);
}

TEST_CASE("settled final position stops") {
    ThresholdSchedule s = make_schedule(0.0, 0.5);
    StopState st;
    st.nu = s.R1 + s.R2;
    StepDecision d = select_stop(st, 0.5 * st.tol2, s);
    CHECK(d.stop);
}

TEST_CASE("settling below the first tolerance advances the ladder") {
    ThresholdSchedule s = make_schedule(0.0, 0.5);
    StopState st;
    st.nu = s.R1 - 1;
    st.K_nu = 3;
    StepDecision d = select_stop(st, 0.5 * st.tol1, s);
    CHECK_FALSE(d.stop);
    CHECK(st.nu == s.R1);
    CHECK(st.K_nu == 1);
    CHECK(d.lambda == s.Lambda1[s.R1 - 1]);
}

TEST_CASE("exhausted budget advances even without settling") {
    ThresholdSchedule s = make_schedule(0.0, 0.5);
    StopState st;
    st.L1 = 4;
    st.K_nu = 5;  // budget of 4 spent
    StepDecision d = select_stop(st, 1e9, s);
    CHECK_FALSE(d.stop);
    CHECK(st.nu == 2);
    CHECK(d.lambda == s.Lambda1[1]);
}

TEST_CASE("never-settling run stops within the worst-case budget") {
    ThresholdSchedule s = make_schedule(0.0, 0.5);
    StopState st;
    int count = 0;
    for (;;) {
        ++count;
        REQUIRE(count < 1000);
        if (select_stop(st, 1e18, s).stop) break;
    }
    CHECK(count == 163);
    CHECK(count <= s.R1 * st.L1 + s.R2 * st.L2 + st.L3 + (s.R1 + s.R2));
    CHECK(st.nu == s.R1 + s.R2);
}

TEST_CASE("instantly settling run walks straight down the ladder") {
    ThresholdSchedule s = make_schedule(0.0, 0.5);
    StopState st;
    int count = 0;
    for (;;) {
        ++count;
        REQUIRE(count < 100);
        if (select_stop(st, 0.0, s).stop) break;
    }
    CHECK(count == s.R1 + s.R2);
}

TEST_CASE("constant block averages to its squared magnitude") {
    CMat c(8, 8, cplx(3.0, -4.0));
    Image v = averaged_variance(c, 2);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(v.data()[i] - 25.0) <= 1e-12);
    Image z = averaged_variance(CMat(8, 8, cplx(0.0)), 2);
    for (std::size_t i = 0; i < z.size(); ++i) CHECK(z.data()[i] == 0.0);
}

TEST_CASE("averaged variance matches the direct double loop") {
    CMat c = random_cmat(8, 99, 5.0);
    Image fast = averaged_variance(c, 2);
    Image slow = averaged_variance_ref(c, 2);
    for (std::size_t i = 0; i < fast.size(); ++i)
        CHECK(std::abs(fast.data()[i] - slow.data()[i]) <= 1e-12);
}

TEST_CASE("tiny coefficients and dead sites shrink to zero") {
    // lambda larger than every |c| forces var <= 0 everywhere
    CMat c = random_cmat(8, 5, 1.0);
    CMat par = random_cmat(4, 6, 1.0);
    CMat out = bsa_apply(c, par, 2, 1000.0);
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out.data()[i] == cplx(0.0));
    // an exact zero coefficient stays zero even in a live neighbourhood
    CMat c2 = random_cmat(8, 6, 50.0);
    c2(3, 3) = 0.0;
    CMat out2 = bsa_apply(c2, par, 2, 1.0);
    CHECK(out2(3, 3) == cplx(0.0));
}

TEST_CASE("shrinkage matches the per-site reference") {
    CMat c = random_cmat(16, 42, 20.0);
    CMat par = random_cmat(8, 43, 20.0);
    CMat fast = bsa_apply(c, par, 2, 10.0);
    CMat slow = bsa_ref(c, par, 2, 10.0);
    for (std::size_t i = 0; i < fast.size(); ++i)
        CHECK(std::abs(fast.data()[i] - slow.data()[i]) <= 1e-10);
}

TEST_CASE("shrinkage is a contraction") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        CMat c = random_cmat(16, seed, 30.0);
        CMat par = random_cmat(8, seed + 50, 30.0);
        CMat out = bsa_apply(c, par, 2, 5.0);
        for (std::size_t i = 0; i < out.size(); ++i)
            CHECK(std::abs(out.data()[i]) <= std::abs(c.data()[i]) + 1e-12);
    }
}

TEST_CASE("shrinkage rejects mismatched parents and oversized windows") {
    CMat c(16, 16), good(8, 8), bad(16, 16);
    CHECK_NOTHROW(bsa_apply(c, good, 2, 1.0));
    CHECK_THROWS_AS(bsa_apply(c, bad, 2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(averaged_variance(CMat(4, 4), 3), std::invalid_argument);
}

TEST_CASE("window defaults by level") {
    CHECK(default_window(2) == 3);
    CHECK(default_window(3) == 3);
    CHECK(default_window(4) == 2);
    CHECK(default_window(5) == 2);
}

}  // TEST_SUITE
