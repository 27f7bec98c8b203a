#include "qwp/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

namespace qwp {

double psnr(const Image& x, const Image& y) {
    require(x.same_shape(y), "psnr: image sizes differ");
    require(x.size() > 0, "psnr: empty image");
    double se = 0.0;
    const double* a = x.data();
    const double* b = y.data();
    for (std::size_t i = 0; i < x.size(); ++i) {
        double d = a[i] - b[i];
        se += d * d;
    }
    if (se == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(double(x.size()) * 255.0 * 255.0 / se);
}

namespace {

constexpr int kWin = 11;
constexpr int kHalf = kWin / 2;

std::vector<double> gaussian_taps() {
    std::vector<double> g(kWin);
    double sum = 0.0;
    for (int u = 0; u < kWin; ++u) {
        double t = double(u - kHalf);
        g[std::size_t(u)] = std::exp(-t * t / (2.0 * 1.5 * 1.5));
        sum += g[std::size_t(u)];
    }
    for (auto& v : g) v /= sum;
    return g;
}

// Valid-region separable blur: output (rows-10) x (cols-10) local means.
Image local_mean(const Image& p, const std::vector<double>& g) {
    const std::size_t R = p.rows(), C = p.cols();
    Image h(R, C - kWin + 1);
    for (std::size_t r = 0; r < R; ++r) {
        const double* in = p.row(r);
        double* out = h.row(r);
        for (std::size_t c = 0; c + kWin <= C; ++c) {
            double s = 0.0;
            for (int u = 0; u < kWin; ++u) s += g[std::size_t(u)] * in[c + std::size_t(u)];
            out[c] = s;
        }
    }
    Image v(R - kWin + 1, C - kWin + 1);
    for (std::size_t r = 0; r + kWin <= R; ++r) {
        double* out = v.row(r);
        for (std::size_t c = 0; c < v.cols(); ++c) {
            double s = 0.0;
            for (int u = 0; u < kWin; ++u) s += g[std::size_t(u)] * h(r + std::size_t(u), c);
            out[c] = s;
        }
    }
    return v;
}

}  // namespace

double ssim(const Image& x, const Image& y) {
    require(x.same_shape(y), "ssim: image sizes differ");
    require(x.rows() >= kWin && x.cols() >= kWin, "ssim: image smaller than the window");

    const std::vector<double> g = gaussian_taps();
    const std::size_t R = x.rows(), C = x.cols();

    Image xx(R, C), yy(R, C), xy(R, C);
    for (std::size_t i = 0; i < x.size(); ++i) {
        double a = x.data()[i], b = y.data()[i];
        xx.data()[i] = a * a;
        yy.data()[i] = b * b;
        xy.data()[i] = a * b;
    }

    Image mx = local_mean(x, g);
    Image my = local_mean(y, g);
    Image mxx = local_mean(xx, g);
    Image myy = local_mean(yy, g);
    Image mxy = local_mean(xy, g);

    const double c1 = (0.01 * 255.0) * (0.01 * 255.0);
    const double c2 = (0.03 * 255.0) * (0.03 * 255.0);

    double acc = 0.0;
    for (std::size_t i = 0; i < mx.size(); ++i) {
        double ux = mx.data()[i], uy = my.data()[i];
        double vx = mxx.data()[i] - ux * ux;
        double vy = myy.data()[i] - uy * uy;
        double cov = mxy.data()[i] - ux * uy;
        double num = (2.0 * ux * uy + c1) * (2.0 * cov + c2);
        double den = (ux * ux + uy * uy + c1) * (vx + vy + c2);
        acc += num / den;
    }
    return acc / double(mx.size());
}

QualityReport quality(const Image& x, const Image& y) { return {psnr(x, y), ssim(x, y)}; }

std::string format_report(const QualityReport& r) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "psnr=%.6f ssim=%.6f", r.psnr, r.ssim);
    return buf;
}

}  // namespace qwp
