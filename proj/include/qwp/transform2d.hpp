#pragma once

#include <map>
#include <vector>

#include "qwp/core.hpp"
#include "qwp/spline_filters.hpp"
#include "qwp/transform1d.hpp"

namespace qwp {

// Double-tree 2D coefficients at one level. Block (sign, lam, mu) pairs the
// vertical (row-axis) subband lam with the horizontal subband mu; the sign
// picks the horizontal tree. 2 * 4^level blocks of side N/2^level.
struct Tree2D {
    std::size_t N = 0;
    int level = 0;
    std::vector<CMat> blocks;

    Tree2D() = default;
    Tree2D(std::size_t N_, int level_);

    std::size_t bands_per_axis() const { return std::size_t(1) << level; }
    std::size_t block_side() const { return N >> level; }
    CMat& block(Sign s, std::size_t lam, std::size_t mu);
    const CMat& block(Sign s, std::size_t lam, std::size_t mu) const;
};

Tree2D qwp_forward_2d(const Image& X, const FilterBank& fb, int M);

// Runs one cascade and keeps the coefficient trees of every requested level.
std::map<int, Tree2D> qwp_forward_2d_slices(const Image& X, const FilterBank& fb,
                                            const std::vector<int>& levels);

Image qwp_inverse_2d(const Tree2D& tree, const FilterBank& fb);

// Synthesis of one tree alone; the full inverse is Re(plus + minus)/8.
CMat partial_reconstruction(const Tree2D& tree, const FilterBank& fb, Sign sign);

struct DirectionalWaveform {
    int m = 0;
    std::size_t j = 0, l = 0;
    Sign sign = Sign::plus;
    Image values;      // unit l2 norm
    double raw_norm = 0.0;  // norm before scaling (sqrt2 for interior blocks)
};

DirectionalWaveform directional_waveform_2d(const FilterBank& fb, int m, std::size_t j,
                                            std::size_t l, Sign sign);

// Distinct orientation classes of the level-m waveform set: dominant spectral
// peak of each waveform, folded to a half plane, angle quantized to one degree.
std::size_t count_orientation_classes(const FilterBank& fb, int m);

}  // namespace qwp
