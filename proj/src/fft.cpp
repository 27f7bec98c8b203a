#include "qwp/fft.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <unordered_map>

namespace qwp {

namespace {

struct Twiddles {
    std::vector<cplx> w;  // w[j] = e^{-2pi i j / n}, j < n/2
};

const Twiddles& twiddles_for(std::size_t n) {
    // cache per length; read-mostly after warmup, guarded for concurrent calls
    static std::mutex mu;
    static std::unordered_map<std::size_t, Twiddles> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    Twiddles t;
    t.w.resize(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
        double ang = -2.0 * std::numbers::pi * double(j) / double(n);
        t.w[j] = cplx(std::cos(ang), std::sin(ang));
    }
    return cache.emplace(n, std::move(t)).first->second;
}

}  // namespace

void fft_inplace(cplx* x, std::size_t n, bool inverse) {
    require(is_pow2(n), "fft: length must be a power of two");
    if (n == 1) return;
    const Twiddles& tw = twiddles_for(n);

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                cplx w = tw.w[j * stride];
                if (inverse) w = std::conj(w);
                cplx u = x[i + j];
                cplx t = x[i + j + len / 2] * w;
                x[i + j] = u + t;
                x[i + j + len / 2] = u - t;
            }
        }
    }

    if (inverse) {
        double inv = 1.0 / double(n);
        for (std::size_t i = 0; i < n; ++i) x[i] *= inv;
    }
}

void fft2_inplace(CMat& a, bool inverse) {
    const std::size_t r = a.rows(), c = a.cols();
    for (std::size_t i = 0; i < r; ++i) fft_inplace(a.row(i), c, inverse);
    std::vector<cplx> col(r);
    for (std::size_t j = 0; j < c; ++j) {
        for (std::size_t i = 0; i < r; ++i) col[i] = a(i, j);
        fft_inplace(col.data(), r, inverse);
        for (std::size_t i = 0; i < r; ++i) a(i, j) = col[i];
    }
}

}  // namespace qwp
