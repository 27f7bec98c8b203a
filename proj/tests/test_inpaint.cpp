#include <cmath>
#include <random>

#include "doctest.h"
#include "qwp/imageio_cli.hpp"
#include "qwp/inpaint.hpp"
#include "qwp/metrics.hpp"

using namespace qwp;

namespace {

Image random_image(std::size_t N, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> U(0.0, 255.0);
    Image x(N, N);
    for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] = U(g);
    return x;
}

Image apply_mask(const Image& x, const Image& mask) {
    Image y(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.size(); ++i) y.data()[i] = x.data()[i] * mask.data()[i];
    return y;
}

}  // namespace

TEST_SUITE("inpaint") {

TEST_CASE("extension pads to the next power of two past the margin") {
    CHECK(extended_size(256, 32) == 512);
    CHECK(extended_size(256, 0) == 256);
    CHECK(extended_size(128, -1) == 256);  // default margin N/8
    CHECK(extended_size(100, 0) == 128);
}

TEST_CASE("zero margin on a dyadic image is the identity embedding") {
    Image x = random_image(64, 3);
    Image ones(64, 64, 1.0);
    Extended ex = extend_symmetric({x, ones, 0.0}, 0);
    CHECK(ex.n1 == 64);
    CHECK(ex.offset == 0);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(ex.y.data()[i] == x.data()[i]);
}

TEST_CASE("the extension mirrors across the frame") {
    const std::size_t N = 16;
    Image x = random_image(N, 7);
    Image mask(N, N, 1.0);
    mask(3, 5) = 0.0;
    Extended ex = extend_symmetric({apply_mask(x, mask), mask, 0.0}, 5);
    CHECK(ex.n1 == 32);
    CHECK(ex.offset == 8);
    const std::size_t off = ex.offset;
    for (std::size_t k = 0; k < off; ++k)
        for (std::size_t c = 0; c < N; ++c) {
            // half-sample reflection: row off-1-k mirrors row k of the original
            CHECK(ex.y(off - 1 - k, off + c) == ex.y(off + k, off + c));
            CHECK(ex.theta(off - 1 - k, off + c) == ex.theta(off + k, off + c));
        }
    for (std::size_t k = 0; k < N; ++k)
        for (std::size_t c = 0; c < off; ++c)
            CHECK(ex.y(off + k, off - 1 - c) == ex.y(off + k, off + c));
    // interior window is the input, and the mask hole survives extension
    for (std::size_t k = 0; k < N; ++k)
        for (std::size_t c = 0; c < N; ++c)
            CHECK(ex.y(off + k, off + c) == x(k, c) * mask(k, c));
    CHECK(ex.theta(off + 3, off + 5) == 0.0);
    Image back = crop(ex.y, ex.offset, N);
    for (std::size_t i = 0; i < back.size(); ++i)
        CHECK(back.data()[i] == apply_mask(x, mask).data()[i]);
}

TEST_CASE("extension rejects non-binary masks") {
    Image x(16, 16, 1.0), mask(16, 16, 0.5);
    CHECK_THROWS_AS(extend_symmetric({x, mask, 0.0}, 0), std::invalid_argument);
}

TEST_CASE("data step with a full mask and small weight returns the data") {
    const std::size_t N = 16;
    Image Y = random_image(N, 9), xprev = random_image(N, 10);
    Image ones(N, N, 1.0);
    Image X = solve_data_step(Y, ones, 1e-8, xprev);
    for (std::size_t i = 0; i < X.size(); ++i)
        CHECK(std::abs(X.data()[i] - Y.data()[i]) <= 1e-5);
}

TEST_CASE("data step with an empty mask passes the prior through") {
    const std::size_t N = 16;
    Image zero(N, N, 0.0), xprev = random_image(N, 11);
    Image X = solve_data_step(zero, zero, 0.5, xprev);
    for (std::size_t i = 0; i < X.size(); ++i) CHECK(X.data()[i] == xprev.data()[i]);
    Image X2 = solve_data_step(zero, zero, 0.05, xprev);
    for (std::size_t i = 0; i < X2.size(); ++i)
        CHECK(std::abs(X2.data()[i] - xprev.data()[i]) <= 1e-12 * 255.0);
}

TEST_CASE("conjugate gradient agrees with the closed form") {
    const std::size_t N = 32;
    std::mt19937_64 g(13);
    std::uniform_real_distribution<double> U(0.0, 255.0);
    std::bernoulli_distribution B(0.6);
    for (int rep = 0; rep < 5; ++rep) {
        Image Y(N, N), xprev(N, N), theta(N, N);
        for (std::size_t i = 0; i < Y.size(); ++i) {
            theta.data()[i] = B(g) ? 1.0 : 0.0;
            Y.data()[i] = theta.data()[i] * U(g);
            xprev.data()[i] = U(g);
        }
        Image a = solve_data_step(Y, theta, 0.05, xprev);
        Image b = solve_data_step_cg(Y, theta, 0.05, xprev);
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(std::abs(a.data()[i] - b.data()[i]) <= 1e-10);
    }
}

TEST_CASE("fusion with one level is the identity") {
    Image x = random_image(16, 20);
    Image out = fuse_levels({x}, {2.5});
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(out.data()[i] == x.data()[i]);
}

TEST_CASE("fusion of equal images returns that image") {
    Image x = random_image(16, 21);
    Image out = fuse_levels({x, x}, {1.0, 1.0});
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(std::abs(out.data()[i] - x.data()[i]) <= 1e-13);
}

TEST_CASE("weighted fusion of constants") {
    Image a(8, 8, 0.0), b(8, 8, 4.0);
    Image out = fuse_levels({a, b}, {1.0, 3.0});
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out.data()[i] == 3.0);
}

TEST_CASE("config defaults") {
    InpaintConfig cfg;
    CHECK(cfg.effective_parent_level() == 5);
    CHECK(cfg.weight_for(3) == 1.0);
    CHECK(cfg.window_for(3) == 3);
    CHECK(cfg.window_for(4) == 2);
    cfg.levels = {2, 3, 4};
    cfg.parent_level = 0;
    CHECK(cfg.effective_parent_level() == 5);
    cfg.weights[4] = 3.0;
    cfg.windows[4] = 1;
    CHECK(cfg.weight_for(4) == 3.0);
    CHECK(cfg.window_for(4) == 1);
}

TEST_CASE("bad configurations are rejected") {
    const std::size_t N = 64;
    Image x = random_image(N, 30);
    Image ones(N, N, 1.0);
    MaskedImage mi{x, ones, 0.0};
    FilterBank fb = build_filter_bank(5, extended_size(N, -1), 5);
    InpaintConfig cfg;
    cfg.mu = 0.0;
    CHECK_THROWS_AS(m2_inpaint(mi, cfg, fb), std::invalid_argument);
    InpaintConfig gap;
    gap.levels = {3, 5};
    CHECK_THROWS_AS(m1_inpaint(mi, gap, fb), std::invalid_argument);
    InpaintConfig neg;
    neg.weights[3] = -1.0;
    CHECK_THROWS_AS(m1_inpaint(mi, neg, fb), std::invalid_argument);
}

TEST_CASE("nothing to restore stays zero") {
    const std::size_t N = 64;
    Image zero(N, N, 0.0);
    MaskedImage mi{zero, zero, 0.0};
    FilterBank fb = build_filter_bank(5, extended_size(N, -1), 5);
    InpaintConfig cfg;
    Image o1 = m1_inpaint(mi, cfg, fb);
    Image o2 = m2_inpaint(mi, cfg, fb);
    for (std::size_t i = 0; i < o1.size(); ++i) {
        CHECK(o1.data()[i] == 0.0);
        CHECK(o2.data()[i] == 0.0);
    }
}

TEST_CASE("the first split-Bregman iterate is the bare data step") {
    const std::size_t N = 64;
    Image scene = synthetic_scene(N);
    Image mask = make_random_mask(N, 0.4, 11);
    MaskedImage mi{apply_mask(scene, mask), mask, 0.0};
    InpaintConfig cfg;
    FilterBank fb = build_filter_bank(5, extended_size(N, cfg.T), 5);
    Extended ex = extend_symmetric(mi, cfg.T);
    bool got = false;
    cfg.checkpoint = [&](int k, const Image& x) {
        if (k != 1 || got) return;
        got = true;
        for (std::size_t i = 0; i < x.size(); ++i)
            CHECK(x.data()[i] == ex.y.data()[i] / (ex.theta.data()[i] + cfg.mu));
    };
    cfg.L1 = 1;
    cfg.L2 = 1;
    cfg.L3 = 1;
    m2_inpaint(mi, cfg, fb);
    CHECK(got);
}

TEST_CASE("a fully observed noiseless image is nearly left alone") {
    const std::size_t N = 128;
    Image scene = synthetic_scene(N);
    Image ones(N, N, 1.0);
    MaskedImage mi{scene, ones, 0.0};
    FilterBank fb = build_filter_bank(5, extended_size(N, -1), 5);
    InpaintConfig cfg;
    CHECK(psnr(scene, m1_inpaint(mi, cfg, fb)) >= 40.0);
    CHECK(psnr(scene, m2_inpaint(mi, cfg, fb)) >= 40.0);
}

TEST_CASE("half the pixels missing still restores a smooth scene") {
    const std::size_t N = 128;
    Image scene = synthetic_scene(N);
    Image mask = make_random_mask(N, 0.5, 42);
    Image deg = apply_mask(scene, mask);
    MaskedImage mi{deg, mask, 0.0};
    FilterBank fb = build_filter_bank(5, extended_size(N, -1), 5);
    InpaintConfig cfg;
    int iters = 0;
    cfg.progress = [&](int, int, double, double) { ++iters; };
    Image out = m1_inpaint(mi, cfg, fb);
    CHECK(psnr(scene, out) >= psnr(scene, deg) + 10.0);
    CHECK(iters <= 163);  // never-settling budget of the stop rule at defaults
}

TEST_CASE("split Bregman matches iterative thresholding on noisy texture") {
    const std::size_t N = 128;
    Image tex = synthetic_texture(N);
    Image mask = make_random_mask(N, 0.5, 101);
    Image noisy = add_noise(tex, 10.0, 555);
    MaskedImage mi{apply_mask(noisy, mask), mask, 10.0};
    FilterBank fb = build_filter_bank(5, extended_size(N, -1), 5);
    InpaintConfig cfg;
    Image r1 = m1_inpaint(mi, cfg, fb);
    Image r2 = m2_inpaint(mi, cfg, fb);
    CHECK(psnr(tex, r2) >= psnr(tex, r1) - 0.3);
    CHECK(ssim(tex, r2) >= ssim(tex, r1));
}

}  // TEST_SUITE
