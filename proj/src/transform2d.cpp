#include "qwp/transform2d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "qwp/fft.hpp"

namespace qwp {

Tree2D::Tree2D(std::size_t N_, int level_) : N(N_), level(level_) {
    std::size_t nb = bands_per_axis();
    blocks.assign(2 * nb * nb, CMat(block_side(), block_side()));
}

CMat& Tree2D::block(Sign s, std::size_t lam, std::size_t mu) {
    std::size_t nb = bands_per_axis();
    return blocks[(s == Sign::plus ? 0 : nb * nb) + lam * nb + mu];
}

const CMat& Tree2D::block(Sign s, std::size_t lam, std::size_t mu) const {
    std::size_t nb = bands_per_axis();
    return blocks[(s == Sign::plus ? 0 : nb * nb) + lam * nb + mu];
}

namespace {

// Frequency-domain analysis folds along each axis (downsample by 2).
CMat fold_cols(const CMat& B, const std::vector<cplx>& filt, std::size_t dil_shift,
               std::size_t mask) {
    const std::size_t R = B.rows(), C = B.cols();
    CMat out(R, C / 2);
    for (std::size_t r = 0; r < R; ++r) {
        const cplx* in = B.row(r);
        cplx* o = out.row(r);
        for (std::size_t n = 0; n < C / 2; ++n) {
            cplx f1 = std::conj(filt[(n << dil_shift) & mask]);
            cplx f2 = std::conj(filt[((n + C / 2) << dil_shift) & mask]);
            o[n] = 0.5 * (in[n] * f1 + in[n + C / 2] * f2);
        }
    }
    return out;
}

CMat fold_rows(const CMat& B, const std::vector<cplx>& filt, std::size_t dil_shift,
               std::size_t mask) {
    const std::size_t R = B.rows(), C = B.cols();
    CMat out(R / 2, C);
    for (std::size_t k = 0; k < R / 2; ++k) {
        cplx f1 = std::conj(filt[(k << dil_shift) & mask]);
        cplx f2 = std::conj(filt[((k + R / 2) << dil_shift) & mask]);
        const cplx* a = B.row(k);
        const cplx* b = B.row(k + R / 2);
        cplx* o = out.row(k);
        for (std::size_t n = 0; n < C; ++n) o[n] = 0.5 * (a[n] * f1 + b[n] * f2);
    }
    return out;
}

// Synthesis: periodize the child spectrum along one axis and weight by the filter.
void unfold_cols_add(const CMat& Ch, const std::vector<cplx>& filt, std::size_t dil_shift,
                     std::size_t mask, CMat& parent) {
    const std::size_t R = parent.rows(), C = parent.cols();
    for (std::size_t r = 0; r < R; ++r) {
        const cplx* in = Ch.row(r);
        cplx* o = parent.row(r);
        for (std::size_t n = 0; n < C; ++n)
            o[n] += in[n % (C / 2)] * filt[(n << dil_shift) & mask];
    }
}

void unfold_rows_add(const CMat& Ch, const std::vector<cplx>& filt, std::size_t dil_shift,
                     std::size_t mask, CMat& parent) {
    const std::size_t R = parent.rows(), C = parent.cols();
    for (std::size_t k = 0; k < R; ++k) {
        const cplx* in = Ch.row(k % (R / 2));
        cplx f = filt[(k << dil_shift) & mask];
        cplx* o = parent.row(k);
        for (std::size_t n = 0; n < C; ++n) o[n] += in[n] * f;
    }
}

void validate_tree(const Tree2D& tree, const FilterBank& fb) {
    require(tree.N == fb.N(), "2D tree size does not match filter bank");
    require(tree.level >= 1 && tree.level <= fb.max_level(), "2D tree level out of range");
    std::size_t nb = tree.bands_per_axis();
    require(tree.blocks.size() == 2 * nb * nb, "2D tree is missing blocks");
    for (const auto& b : tree.blocks)
        require(b.rows() == tree.block_side() && b.cols() == tree.block_side(),
                "2D tree block has wrong shape");
}

struct FreqLevel {
    // frequency-domain blocks of the running cascade, sign-major
    std::vector<CMat> blocks;
    int level = 0;
};

Tree2D to_time_tree(const FreqLevel& fl, std::size_t N) {
    Tree2D t(N, fl.level);
    for (std::size_t i = 0; i < fl.blocks.size(); ++i) {
        CMat b = fl.blocks[i];
        fft2_inplace(b, true);
        t.blocks[i] = std::move(b);
    }
    return t;
}

FreqLevel forward_freq(const Image& X, const FilterBank& fb, int M,
                       const std::vector<int>& keep, std::map<int, Tree2D>* out) {
    const std::size_t N = fb.N();
    require(X.rows() == N && X.cols() == N, "qwp_forward_2d: image size does not match filter bank");
    require(M >= 1 && M <= fb.max_level(), "qwp_forward_2d: level out of range");
    const std::size_t mask = N - 1;

    CMat Xh(N, N);
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) Xh(r, c) = X(r, c);
    fft2_inplace(Xh, false);

    FreqLevel cur;
    cur.level = 1;
    cur.blocks.resize(8);
    const auto& fl1 = fb.first();
    for (int sg = 0; sg < 2; ++sg) {
        for (std::size_t lam = 0; lam < 2; ++lam) {
            for (std::size_t mu = 0; mu < 2; ++mu) {
                const auto& qrow = (sg == 0) ? fl1.qplus(int(mu)) : fl1.qminus(int(mu));
                const auto& qcol = fl1.qplus(int(lam));
                CMat A = fold_cols(Xh, qrow, 0, mask);  // rows: horizontal axis
                A = fold_rows(A, qcol, 0, mask);        // then vertical axis
                cur.blocks[std::size_t(sg) * 4 + lam * 2 + mu] = std::move(A);
            }
        }
    }

    auto wanted = [&keep](int lev) {
        return std::find(keep.begin(), keep.end(), lev) != keep.end();
    };
    if (out && wanted(1)) out->emplace(1, to_time_tree(cur, N));

    for (int lev = 1; lev < M; ++lev) {
        std::size_t nb = std::size_t(1) << lev;
        FreqLevel next;
        next.level = lev + 1;
        next.blocks.assign(2 * 4 * nb * nb, CMat());
        for (std::size_t sg = 0; sg < 2; ++sg) {
            for (std::size_t lam = 0; lam < nb; ++lam) {
                for (std::size_t mu = 0; mu < nb; ++mu) {
                    const CMat& B = cur.blocks[sg * nb * nb + lam * nb + mu];
                    for (int sk = 0; sk < 2; ++sk) {
                        CMat half = fold_rows(B, fb.first().h(sk), std::size_t(lev), mask);
                        for (int sn = 0; sn < 2; ++sn) {
                            CMat C = fold_cols(half, fb.first().h(sn), std::size_t(lev), mask);
                            std::size_t rl = child_index(lam, sk);
                            std::size_t rm = child_index(mu, sn);
                            next.blocks[sg * 4 * nb * nb + rl * 2 * nb + rm] = std::move(C);
                        }
                    }
                }
            }
        }
        cur = std::move(next);
        if (out && wanted(cur.level)) out->emplace(cur.level, to_time_tree(cur, N));
    }
    return cur;
}

}  // namespace

Tree2D qwp_forward_2d(const Image& X, const FilterBank& fb, int M) {
    FreqLevel fl = forward_freq(X, fb, M, {}, nullptr);
    return to_time_tree(fl, fb.N());
}

std::map<int, Tree2D> qwp_forward_2d_slices(const Image& X, const FilterBank& fb,
                                            const std::vector<int>& levels) {
    require(!levels.empty(), "qwp_forward_2d_slices: empty level list");
    int M = *std::max_element(levels.begin(), levels.end());
    std::map<int, Tree2D> out;
    forward_freq(X, fb, M, levels, &out);
    return out;
}

CMat partial_reconstruction(const Tree2D& tree, const FilterBank& fb, Sign sign) {
    validate_tree(tree, fb);
    const std::size_t N = fb.N();
    const std::size_t mask = N - 1;
    std::size_t nb = tree.bands_per_axis();

    std::vector<CMat> freq(nb * nb);
    for (std::size_t lam = 0; lam < nb; ++lam)
        for (std::size_t mu = 0; mu < nb; ++mu) {
            CMat b = tree.block(sign, lam, mu);
            fft2_inplace(b, false);
            freq[lam * nb + mu] = std::move(b);
        }

    for (int lev = tree.level; lev > 1; --lev) {
        std::size_t pnb = std::size_t(1) << (lev - 1);
        std::size_t side = N >> (lev - 1);
        std::vector<CMat> parents(pnb * pnb);
        for (std::size_t lam = 0; lam < pnb; ++lam) {
            for (std::size_t mu = 0; mu < pnb; ++mu) {
                CMat P(side, side, cplx{});
                for (int sk = 0; sk < 2; ++sk) {
                    // combine the two horizontal children first, then lift vertically
                    CMat half(side / 2, side, cplx{});
                    for (int sn = 0; sn < 2; ++sn) {
                        const CMat& C =
                            freq[child_index(lam, sk) * 2 * pnb + child_index(mu, sn)];
                        unfold_cols_add(C, fb.first().h(sn), std::size_t(lev - 1), mask, half);
                    }
                    unfold_rows_add(half, fb.first().h(sk), std::size_t(lev - 1), mask, P);
                }
                parents[lam * pnb + mu] = std::move(P);
            }
        }
        freq = std::move(parents);
    }

    CMat Xside(N, N, cplx{});
    const auto& fl1 = fb.first();
    for (std::size_t lam = 0; lam < 2; ++lam) {
        const auto& qcol = fl1.qplus(int(lam));
        CMat half(N / 2, N, cplx{});
        for (std::size_t mu = 0; mu < 2; ++mu) {
            const auto& qrow = (sign == Sign::plus) ? fl1.qplus(int(mu)) : fl1.qminus(int(mu));
            unfold_cols_add(freq[lam * 2 + mu], qrow, 0, mask, half);
        }
        unfold_rows_add(half, qcol, 0, mask, Xside);
    }
    fft2_inplace(Xside, true);
    return Xside;
}

Image qwp_inverse_2d(const Tree2D& tree, const FilterBank& fb) {
    CMat xp = partial_reconstruction(tree, fb, Sign::plus);
    CMat xm = partial_reconstruction(tree, fb, Sign::minus);
    Image out(tree.N, tree.N);
    for (std::size_t r = 0; r < tree.N; ++r)
        for (std::size_t c = 0; c < tree.N; ++c)
            out(r, c) = (xp(r, c).real() + xm(r, c).real()) / 8.0;
    return out;
}

DirectionalWaveform directional_waveform_2d(const FilterBank& fb, int m, std::size_t j,
                                            std::size_t l, Sign sign) {
    require(m >= 1 && m <= fb.max_level(), "directional_waveform_2d: level out of range");
    require(j < (std::size_t(1) << m) && l < (std::size_t(1) << m),
            "directional_waveform_2d: block index out of range");
    Tree2D tree(fb.N(), m);
    tree.block(sign, j, l)(0, 0) = 1.0;
    CMat side = partial_reconstruction(tree, fb, sign);

    DirectionalWaveform w;
    w.m = m;
    w.j = j;
    w.l = l;
    w.sign = sign;
    w.values = Image(fb.N(), fb.N());
    double nrm = 0.0;
    for (std::size_t r = 0; r < fb.N(); ++r)
        for (std::size_t c = 0; c < fb.N(); ++c) {
            double v = side(r, c).real();
            w.values(r, c) = v;
            nrm += v * v;
        }
    nrm = std::sqrt(nrm);
    require(nrm > 0.0, "directional_waveform_2d: degenerate waveform");
    w.raw_norm = nrm;
    for (std::size_t r = 0; r < fb.N(); ++r)
        for (std::size_t c = 0; c < fb.N(); ++c) w.values(r, c) /= nrm;
    return w;
}

std::size_t count_orientation_classes(const FilterBank& fb, int m) {
    const std::size_t N = fb.N();
    std::set<int> classes;
    for (int sg = 0; sg < 2; ++sg) {
        Sign sign = (sg == 0) ? Sign::plus : Sign::minus;
        for (std::size_t j = 0; j < (std::size_t(1) << m); ++j) {
            for (std::size_t l = 0; l < (std::size_t(1) << m); ++l) {
                DirectionalWaveform w = directional_waveform_2d(fb, m, j, l, sign);
                CMat S(N, N);
                for (std::size_t r = 0; r < N; ++r)
                    for (std::size_t c = 0; c < N; ++c) S(r, c) = w.values(r, c);
                fft2_inplace(S, false);
                double best = -1.0;
                long bk = 0, bn = 0;
                for (std::size_t r = 0; r < N; ++r)
                    for (std::size_t c = 0; c < N; ++c) {
                        double a = std::abs(S(r, c));
                        if (a > best) {
                            best = a;
                            bk = long(r);
                            bn = long(c);
                        }
                    }
                // signed frequencies, folded to a canonical half plane
                if (bk > long(N / 2)) bk -= long(N);
                if (bn > long(N / 2)) bn -= long(N);
                if (bk < 0 || (bk == 0 && bn < 0)) {
                    bk = -bk;
                    bn = -bn;
                }
                double ang = std::atan2(double(bn), double(bk)) * 180.0 / std::numbers::pi;
                if (ang < 0.0) ang += 180.0;
                int cls = int(std::lround(ang)) % 180;
                classes.insert(cls);
            }
        }
    }
    return classes.size();
}

}  // namespace qwp
