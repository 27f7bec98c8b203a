#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <vector>

#include "qwp/core.hpp"
#include "qwp/shrinkage.hpp"
#include "qwp/spline_filters.hpp"
#include "qwp/transform2d.hpp"

namespace qwp {

// Observation model: degraded = mask .* (clean + noise), mask entries 0/1.
struct MaskedImage {
    Image degraded;
    Image mask;
    double sigma = 0.0;
};

struct InpaintConfig {
    int p = 5;
    std::vector<int> levels{3, 4};  // fusion levels, consecutive
    int parent_level = 0;           // 0 = deepest fusion level + 1
    std::map<int, double> weights;  // per-level fusion weight, default 1
    std::map<int, int> windows;     // per-level variance window, default default_window(m)
    long T = -1;                    // target margin per side; -1 = N/8
    double mu = 1.0;                // regularization weight of the data step
    int R1 = 5, R2 = 8;
    double tol1 = 0.05, tol2 = 0.01;
    int L1 = 15, L2 = 10, L3 = 10;
    bool delta_normalized = false;  // divide the update norm by the extended side

    // optional hooks; called once per iteration when set
    std::function<void(int k, int nu, double lambda, double delta)> progress;
    std::function<void(int k, const Image& x)> checkpoint;

    int effective_parent_level() const;
    double weight_for(int m) const;
    int window_for(int m) const;
};

// Half-sample mirror extension of image and mask to the next power of two
// that leaves at least the target margin per side; margins beyond the image
// size wrap through the 2N-periodic reflection.
struct Extended {
    Image y;
    Image theta;
    std::size_t n1 = 0;
    std::size_t offset = 0;  // top-left corner of the original window
};

std::size_t extended_size(std::size_t N, long T);
Extended extend_symmetric(const MaskedImage& mi, long T);
Image crop(const Image& big, std::size_t offset, std::size_t n);

// Exact solution of (Theta1 + mu I) X = Y + mu xprev for the 0/1 diagonal
// mask operator, and a conjugate-gradient route kept for cross-checking.
Image solve_data_step(const Image& Y, const Image& theta1, double mu, const Image& xprev);
Image solve_data_step_cg(const Image& Y, const Image& theta1, double mu, const Image& xprev,
                         double tol = 1e-13, int max_iter = 64);

Image fuse_levels(const std::vector<Image>& images, const std::vector<double>& weights);

// Iterative thresholding: re-impose known pixels, transform, shrink the
// fusion levels against their parents, invert each level and fuse.
Image m1_inpaint(const MaskedImage& mi, const InpaintConfig& cfg, const FilterBank& fb);

// Split Bregman iteration with the same shrinkage stage on d = BSA(Z + b).
Image m2_inpaint(const MaskedImage& mi, const InpaintConfig& cfg, const FilterBank& fb);

}  // namespace qwp
