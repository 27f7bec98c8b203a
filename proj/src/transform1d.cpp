#include "qwp/transform1d.hpp"

#include <cmath>

#include "qwp/fft.hpp"

namespace qwp {

Signal hilbert_periodic(const Signal& x) {
    const std::size_t N = x.size();
    require(is_pow2(N) && N >= 2, "hilbert_periodic: length must be a power of two");
    CSignal X(N);
    for (std::size_t k = 0; k < N; ++k) X[k] = x[k];
    fft(X);
    X[0] = 0.0;
    X[N / 2] = 0.0;
    for (std::size_t n = 1; n < N / 2; ++n) X[n] *= cplx(0.0, -1.0);
    for (std::size_t n = N / 2 + 1; n < N; ++n) X[n] *= cplx(0.0, 1.0);
    ifft(X);
    Signal t(N);
    for (std::size_t k = 0; k < N; ++k) t[k] = X[k].real();
    return t;
}

void analytic_parts(const Signal& x, CSignal& xplus, CSignal& xminus) {
    Signal t = hilbert_periodic(x);
    const std::size_t N = x.size();
    xplus.resize(N);
    xminus.resize(N);
    for (std::size_t k = 0; k < N; ++k) {
        xplus[k] = cplx(x[k], t[k]);
        xminus[k] = cplx(x[k], -t[k]);
    }
}

Tree1D::Tree1D(std::size_t N_, int level_) : N(N_), level(level_) {
    blocks.assign(2 * blocks_per_sign(), CSignal(block_length(), cplx{}));
}

CSignal& Tree1D::block(Sign s, std::size_t l) {
    return blocks[(s == Sign::plus ? 0 : blocks_per_sign()) + l];
}

const CSignal& Tree1D::block(Sign s, std::size_t l) const {
    return blocks[(s == Sign::plus ? 0 : blocks_per_sign()) + l];
}

namespace {

// One analysis stage in the frequency domain: multiply by the conjugate
// filter and fold the two half-spectra (downsampling by 2).
void fold_block(const CSignal& B, const std::vector<cplx>& filt, std::size_t dil_shift,
                std::size_t Nmask, CSignal& out) {
    const std::size_t L = B.size();
    out.resize(L / 2);
    for (std::size_t n = 0; n < L / 2; ++n) {
        cplx f1 = filt[(n << dil_shift) & Nmask];
        cplx f2 = filt[((n + L / 2) << dil_shift) & Nmask];
        out[n] = 0.5 * (B[n] * std::conj(f1) + B[n + L / 2] * std::conj(f2));
    }
}

// One synthesis stage: periodize the child spectrum and multiply by the filter.
void unfold_block_add(const CSignal& C, const std::vector<cplx>& filt, std::size_t dil_shift,
                      std::size_t Nmask, CSignal& parent) {
    const std::size_t L = parent.size();
    for (std::size_t n = 0; n < L; ++n) {
        cplx f = filt[(n << dil_shift) & Nmask];
        parent[n] += C[n % (L / 2)] * f;
    }
}

void validate_tree(const Tree1D& tree, const FilterBank& fb) {
    require(tree.N == fb.N(), "tree length does not match filter bank");
    require(tree.level >= 1 && tree.level <= fb.max_level(), "tree level out of range");
    require(tree.blocks.size() == 2 * tree.blocks_per_sign(), "tree is missing blocks");
    for (const auto& b : tree.blocks)
        require(b.size() == tree.block_length(), "tree block has wrong length");
}

}  // namespace

Tree1D qwp_forward_1d(const Signal& x, const FilterBank& fb, int M) {
    const std::size_t N = fb.N();
    require(x.size() == N, "qwp_forward_1d: signal length does not match filter bank");
    require(M >= 1 && M <= fb.max_level(), "qwp_forward_1d: level out of range");
    const std::size_t mask = N - 1;

    CSignal X(N);
    for (std::size_t k = 0; k < N; ++k) X[k] = x[k];
    fft(X);

    // level 1: the quasi-analytic pairs
    std::vector<CSignal> freq(4);
    fold_block(X, fb.first().qplus0, 0, mask, freq[0]);
    fold_block(X, fb.first().qplus1, 0, mask, freq[1]);
    fold_block(X, fb.first().qminus0, 0, mask, freq[2]);
    fold_block(X, fb.first().qminus1, 0, mask, freq[3]);

    // deeper levels: dilated spline filters on both trees
    for (int lev = 1; lev < M; ++lev) {
        std::size_t nb = std::size_t(1) << lev;
        std::vector<CSignal> next(2 * 2 * nb);
        for (std::size_t sg = 0; sg < 2; ++sg) {
            for (std::size_t l = 0; l < nb; ++l) {
                const CSignal& B = freq[sg * nb + l];
                for (int s = 0; s < 2; ++s) {
                    std::size_t r = child_index(l, s);
                    fold_block(B, fb.first().h(s), std::size_t(lev), mask, next[sg * 2 * nb + r]);
                }
            }
        }
        freq = std::move(next);
    }

    Tree1D tree(N, M);
    for (std::size_t i = 0; i < freq.size(); ++i) {
        ifft(freq[i]);
        tree.blocks[i] = std::move(freq[i]);
    }
    return tree;
}

CSignal synthesize_tree_1d(const Tree1D& tree, const FilterBank& fb, Sign sign) {
    validate_tree(tree, fb);
    const std::size_t N = fb.N();
    const std::size_t mask = N - 1;
    const std::size_t nb = tree.blocks_per_sign();

    std::vector<CSignal> freq(nb);
    for (std::size_t l = 0; l < nb; ++l) {
        freq[l] = tree.block(sign, l);
        fft(freq[l]);
    }

    for (int lev = tree.level; lev > 1; --lev) {
        std::size_t pnb = std::size_t(1) << (lev - 1);
        std::size_t plen = N >> (lev - 1);
        std::vector<CSignal> parents(pnb);
        for (std::size_t l = 0; l < pnb; ++l) {
            parents[l].assign(plen, cplx{});
            for (int s = 0; s < 2; ++s)
                unfold_block_add(freq[child_index(l, s)], fb.first().h(s),
                                 std::size_t(lev - 1), mask, parents[l]);
        }
        freq = std::move(parents);
    }

    CSignal Xside(N, cplx{});
    const auto& q0 = (sign == Sign::plus) ? fb.first().qplus0 : fb.first().qminus0;
    const auto& q1 = (sign == Sign::plus) ? fb.first().qplus1 : fb.first().qminus1;
    unfold_block_add(freq[0], q0, 0, mask, Xside);
    unfold_block_add(freq[1], q1, 0, mask, Xside);
    ifft(Xside);
    return Xside;
}

Signal qwp_inverse_1d(const Tree1D& tree, const FilterBank& fb) {
    CSignal xp = synthesize_tree_1d(tree, fb, Sign::plus);
    CSignal xm = synthesize_tree_1d(tree, fb, Sign::minus);
    Signal x(tree.N);
    for (std::size_t k = 0; k < tree.N; ++k) x[k] = (xp[k].real() + xm[k].real()) / 4.0;
    return x;
}

CSignal waveform_1d(const FilterBank& fb, int m, std::size_t l, WaveKind kind) {
    require(m >= 1 && m <= fb.max_level(), "waveform_1d: level out of range");
    require(l < (std::size_t(1) << m), "waveform_1d: block index out of range");

    Sign sign = (kind == WaveKind::qminus) ? Sign::minus : Sign::plus;
    Tree1D tree(fb.N(), m);
    tree.block(sign, l)[0] = 1.0;
    CSignal w = synthesize_tree_1d(tree, fb, sign);

    if (kind == WaveKind::qplus || kind == WaveKind::qminus) return w;

    Signal part(fb.N());
    for (std::size_t k = 0; k < w.size(); ++k)
        part[k] = (kind == WaveKind::psi) ? w[k].real() : w[k].imag();
    double nrm = 0.0;
    for (double v : part) nrm += v * v;
    nrm = std::sqrt(nrm);
    require(nrm > 0.0, "waveform_1d: degenerate waveform");
    CSignal out(fb.N());
    for (std::size_t k = 0; k < part.size(); ++k) out[k] = part[k] / nrm;
    return out;
}

}  // namespace qwp
