#pragma once

#include <array>
#include <vector>

#include "qwp/core.hpp"

namespace qwp {

// Centered cardinal B-spline b^p(t), closed-form piecewise polynomial.
double bspline_value(int p, double t);

// Sampled spectra of the span-two discrete B-spline:
//   u[n] = sum_k w^{-kn} b^p(k)            (integer samples)
//   v[n] = w^{-n/2} sum_k w^{-kn} b^p(k+1/2)  (half-integer samples)
// Both come out real; u is even in n, v extends antiperiodically:
// v(j + N) = -v(j). Stored on [0, N).
struct SplineSpectra {
    int p = 0;
    std::size_t N = 0;
    std::vector<double> u;
    std::vector<double> v;

    // value of v at any integer argument, antiperiodic extension
    double v_at(long j) const;
};

SplineSpectra sample_bspline(int p, std::size_t N);

// First-level filters. beta is the lowpass DFT, alpha the highpass; f0/f1 are
// the Hilbert-companion filter DFTs, and qplus/qminus = h +- i f are the
// quasi-analytic pairs with one-sided spectra.
struct FirstLevelFilters {
    std::size_t N = 0;
    std::vector<cplx> beta, alpha;
    std::vector<cplx> f0, f1;
    std::vector<cplx> qplus0, qplus1, qminus0, qminus1;

    const std::vector<cplx>& h(int s) const { return s == 0 ? beta : alpha; }
    const std::vector<cplx>& f(int s) const { return s == 0 ? f0 : f1; }
    const std::vector<cplx>& qplus(int s) const { return s == 0 ? qplus0 : qplus1; }
    const std::vector<cplx>& qminus(int s) const { return s == 0 ? qminus0 : qminus1; }
};

FirstLevelFilters first_level_filters(const SplineSpectra& s);

// Child block index for the split of block l with filter s. The swap on odd l
// keeps the level-(m+1) blocks ordered by frequency band.
inline std::size_t child_index(std::size_t l, int s) {
    return (l % 2 == 0) ? 2 * l + s : 2 * l + (1 - s);
}

// 2x2 matrices used by the per-level modulation identity.
struct ModulationPair {
    std::array<std::array<cplx, 2>, 2> analysis;   // transpose of synthesis
    std::array<std::array<cplx, 2>, 2> synthesis;  // rows (beta, alpha) at n and n+N/2
};

// Filter bank for transforms up to depth M on length-N signals.
// Level-m stages use the dilated responses h_s[2^{m-1} n mod N].
class FilterBank {
public:
    FilterBank(int p, std::size_t N, int M);

    int p() const { return p_; }
    std::size_t N() const { return N_; }
    int max_level() const { return M_; }
    const FirstLevelFilters& first() const { return first_; }

    // dilated response h_s[(n << m) mod N]; m = 0 gives the first-level filter
    cplx dilated_h(int m, int s, std::size_t n) const {
        return first_.h(s)[(n << m) & (N_ - 1)];
    }

    ModulationPair modulation_matrix(int m, std::size_t n) const;

private:
    int p_;
    std::size_t N_;
    int M_;
    FirstLevelFilters first_;
};

FilterBank build_filter_bank(int p, std::size_t N, int M);

}  // namespace qwp
