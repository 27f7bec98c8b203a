#pragma once

#include <vector>

#include "qwp/core.hpp"
#include "qwp/spline_filters.hpp"

namespace qwp {

using Signal = std::vector<double>;
using CSignal = std::vector<cplx>;

// Periodic discrete Hilbert companion: spectrum multiplied by -i on positive
// bins, +i on negative bins, zeroed at DC and Nyquist.
Signal hilbert_periodic(const Signal& x);

// x_plus = x + i*hilbert(x) (spectrum on [0, N/2]),
// x_minus = x - i*hilbert(x) (spectrum on [N/2, N)).
void analytic_parts(const Signal& x, CSignal& xplus, CSignal& xminus);

enum class Sign { plus, minus };

// Coefficient blocks of the two quasi-analytic trees at a single level.
// Block (sign, l) holds z[k] = <x, atom shifted by 2^level k>; the real part
// is the cosine-branch coefficient y[k], the imaginary part is -+ c[k].
struct Tree1D {
    std::size_t N = 0;
    int level = 0;
    std::vector<CSignal> blocks;  // 2 * 2^level entries, '+' tree first

    Tree1D() = default;
    Tree1D(std::size_t N_, int level_);

    std::size_t blocks_per_sign() const { return std::size_t(1) << level; }
    std::size_t block_length() const { return N >> level; }
    CSignal& block(Sign s, std::size_t l);
    const CSignal& block(Sign s, std::size_t l) const;
};

Tree1D qwp_forward_1d(const Signal& x, const FilterBank& fb, int M);
Signal qwp_inverse_1d(const Tree1D& tree, const FilterBank& fb);

// Synthesis of one tree alone (the complex half-reconstruction); the full
// inverse is Re(plus + minus)/4.
CSignal synthesize_tree_1d(const Tree1D& tree, const FilterBank& fb, Sign sign);

enum class WaveKind { psi, phi, qplus, qminus };

// Waveform from a unit coefficient at shift 0 of block (m, l). psi and phi are
// returned with unit l2 norm; q-kinds are the complex pair psi +- i phi.
CSignal waveform_1d(const FilterBank& fb, int m, std::size_t l, WaveKind kind);

}  // namespace qwp
