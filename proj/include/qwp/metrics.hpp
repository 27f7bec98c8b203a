#pragma once

#include <string>

#include "qwp/core.hpp"

namespace qwp {

// Peak signal-to-noise ratio against an 8-bit peak of 255; identical images
// give +infinity.
double psnr(const Image& x, const Image& y);

// Mean local structural similarity: 11x11 Gaussian window (std 1.5),
// stabilizers K1=0.01, K2=0.03, dynamic range 255, averaged over window
// positions that fit entirely inside the image.
double ssim(const Image& x, const Image& y);

struct QualityReport {
    double psnr = 0.0;
    double ssim = 0.0;
};

QualityReport quality(const Image& x, const Image& y);

// One-line key=value rendering, e.g. "psnr=32.415632 ssim=0.941275".
std::string format_report(const QualityReport& r);

}  // namespace qwp
