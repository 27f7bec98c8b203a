#include "qwp/inpaint.hpp"

#include <algorithm>
#include <cmath>

namespace qwp {

int InpaintConfig::effective_parent_level() const {
    if (parent_level > 0) return parent_level;
    require(!levels.empty(), "inpaint: no fusion levels configured");
    return *std::max_element(levels.begin(), levels.end()) + 1;
}

double InpaintConfig::weight_for(int m) const {
    auto it = weights.find(m);
    return it == weights.end() ? 1.0 : it->second;
}

int InpaintConfig::window_for(int m) const {
    auto it = windows.find(m);
    return it == windows.end() ? default_window(m) : it->second;
}

namespace {

void check_config(const InpaintConfig& cfg) {
    require(!cfg.levels.empty(), "inpaint: no fusion levels configured");
    std::vector<int> lv = cfg.levels;
    std::sort(lv.begin(), lv.end());
    for (std::size_t i = 0; i + 1 < lv.size(); ++i)
        require(lv[i + 1] == lv[i] + 1, "inpaint: fusion levels must be consecutive");
    require(lv.front() >= 1, "inpaint: fusion levels must be positive");
    require(cfg.effective_parent_level() == lv.back() + 1,
            "inpaint: parent level must sit one below the deepest fusion level");
    require(cfg.mu > 0.0, "inpaint: mu must be positive");
    for (int m : lv) require(cfg.weight_for(m) > 0.0, "inpaint: weights must be positive");
}

long fold_index(long t, long n) {
    long m = t % (2 * n);
    if (m < 0) m += 2 * n;
    return m < n ? m : 2 * n - 1 - m;
}

double l2_diff(const Image& a, const Image& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a.data()[i] - b.data()[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// Shrink every block of the child tree against the lowpass-path block of the
// parent tree (same sign, both axis indices descend through s = 0).
Tree2D shrink_tree(const Tree2D& child, const Tree2D& parent, int W, double lambda) {
    require(parent.level == child.level + 1 && parent.N == child.N,
            "shrink_tree: parent tree must be one level deeper");
    Tree2D out(child.N, child.level);
    std::size_t nb = child.bands_per_axis();
    for (int sg = 0; sg < 2; ++sg) {
        Sign s = sg == 0 ? Sign::plus : Sign::minus;
        for (std::size_t lam = 0; lam < nb; ++lam)
            for (std::size_t mu = 0; mu < nb; ++mu)
                out.block(s, lam, mu) =
                    bsa_apply(child.block(s, lam, mu),
                              parent.block(s, child_index(lam, 0), child_index(mu, 0)), W, lambda);
    }
    return out;
}

Tree2D tree_sub(const Tree2D& a, const Tree2D& b) {
    Tree2D out = a;
    for (std::size_t i = 0; i < out.blocks.size(); ++i) {
        auto& dst = out.blocks[i].storage();
        const auto& src = b.blocks[i].storage();
        for (std::size_t j = 0; j < dst.size(); ++j) dst[j] -= src[j];
    }
    return out;
}

Tree2D tree_add(const Tree2D& a, const Tree2D& b) {
    Tree2D out = a;
    for (std::size_t i = 0; i < out.blocks.size(); ++i) {
        auto& dst = out.blocks[i].storage();
        const auto& src = b.blocks[i].storage();
        for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
    }
    return out;
}

struct RunContext {
    Extended ext;
    std::vector<int> levels;  // sorted fusion levels
    int parent = 0;
    std::vector<int> all_levels;  // fusion + parent
    ThresholdSchedule schedule;
    StopState state;
};

RunContext prepare(const MaskedImage& mi, const InpaintConfig& cfg, const FilterBank& fb) {
    check_config(cfg);
    RunContext rc;
    rc.ext = extend_symmetric(mi, cfg.T);
    require(fb.N() == rc.ext.n1, "inpaint: filter bank size must match the extended image");
    rc.levels = cfg.levels;
    std::sort(rc.levels.begin(), rc.levels.end());
    rc.parent = cfg.effective_parent_level();
    require(rc.parent <= fb.max_level(), "inpaint: filter bank depth below the parent level");
    rc.all_levels = rc.levels;
    rc.all_levels.push_back(rc.parent);

    double present = 0.0;
    for (std::size_t i = 0; i < rc.ext.theta.size(); ++i) present += rc.ext.theta.data()[i];
    double rho = present / double(rc.ext.theta.size());
    rc.schedule = make_schedule(mi.sigma, rho, cfg.R1, cfg.R2);
    rc.state = StopState{1, 1, cfg.L1, cfg.L2, cfg.L3, cfg.tol1, cfg.tol2, 0.0};
    return rc;
}

Image fuse_trees(const std::map<int, Tree2D>& trees, const std::vector<int>& levels,
                 const InpaintConfig& cfg, const FilterBank& fb) {
    std::vector<Image> imgs;
    std::vector<double> wts;
    for (int m : levels) {
        imgs.push_back(qwp_inverse_2d(trees.at(m), fb));
        wts.push_back(cfg.weight_for(m));
    }
    return fuse_levels(imgs, wts);
}

}  // namespace

std::size_t extended_size(std::size_t N, long T) {
    require(N >= 8, "extend_symmetric: image too small");
    std::size_t margin = T < 0 ? N / 8 : std::size_t(T);
    return next_pow2(N + 2 * margin);
}

Extended extend_symmetric(const MaskedImage& mi, long T) {
    const std::size_t N = mi.degraded.rows();
    require(N == mi.degraded.cols(), "extend_symmetric: image must be square");
    require(mi.mask.same_shape(mi.degraded), "extend_symmetric: mask size must match image");
    for (std::size_t i = 0; i < mi.mask.size(); ++i) {
        double v = mi.mask.data()[i];
        require(v == 0.0 || v == 1.0, "extend_symmetric: mask entries must be 0 or 1");
    }

    Extended e;
    e.n1 = extended_size(N, T);
    e.offset = (e.n1 - N) / 2;
    e.y = Image(e.n1, e.n1);
    e.theta = Image(e.n1, e.n1);
    for (std::size_t r = 0; r < e.n1; ++r) {
        std::size_t sr = std::size_t(fold_index(long(r) - long(e.offset), long(N)));
        for (std::size_t c = 0; c < e.n1; ++c) {
            std::size_t sc = std::size_t(fold_index(long(c) - long(e.offset), long(N)));
            e.y(r, c) = mi.degraded(sr, sc);
            e.theta(r, c) = mi.mask(sr, sc);
        }
    }
    return e;
}

Image crop(const Image& big, std::size_t offset, std::size_t n) {
    require(offset + n <= big.rows() && offset + n <= big.cols(), "crop: window out of range");
    Image out(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out(r, c) = big(offset + r, offset + c);
    return out;
}

Image solve_data_step(const Image& Y, const Image& theta1, double mu, const Image& xprev) {
    require(mu > 0.0, "solve_data_step: mu must be positive");
    require(Y.same_shape(theta1) && Y.same_shape(xprev), "solve_data_step: size mismatch");
    Image x(Y.rows(), Y.cols());
    for (std::size_t i = 0; i < Y.size(); ++i)
        x.data()[i] = (Y.data()[i] + mu * xprev.data()[i]) / (theta1.data()[i] + mu);
    return x;
}

Image solve_data_step_cg(const Image& Y, const Image& theta1, double mu, const Image& xprev,
                         double tol, int max_iter) {
    require(mu > 0.0, "solve_data_step: mu must be positive");
    require(Y.same_shape(theta1) && Y.same_shape(xprev), "solve_data_step: size mismatch");
    const std::size_t n = Y.size();
    std::vector<double> b(n), x(n, 0.0), r(n), p(n), ap(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = Y.data()[i] + mu * xprev.data()[i];
    double bnorm = 0.0;
    for (double v : b) bnorm += v * v;
    bnorm = std::sqrt(bnorm);
    r = b;
    p = r;
    double rs = 0.0;
    for (double v : r) rs += v * v;
    for (int it = 0; it < max_iter && std::sqrt(rs) > tol * std::max(bnorm, 1.0); ++it) {
        for (std::size_t i = 0; i < n; ++i) ap[i] = (theta1.data()[i] + mu) * p[i];
        double pap = 0.0;
        for (std::size_t i = 0; i < n; ++i) pap += p[i] * ap[i];
        double alpha = rs / pap;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        double rs_new = 0.0;
        for (double v : r) rs_new += v * v;
        double beta = rs_new / rs;
        rs = rs_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    Image out(Y.rows(), Y.cols());
    std::copy(x.begin(), x.end(), out.data());
    return out;
}

Image fuse_levels(const std::vector<Image>& images, const std::vector<double>& weights) {
    require(!images.empty(), "fuse_levels: no images");
    require(images.size() == weights.size(), "fuse_levels: weight count mismatch");
    double wsum = 0.0;
    for (double w : weights) {
        require(w > 0.0, "fuse_levels: weights must be positive");
        wsum += w;
    }
    if (images.size() == 1) return images[0];  // any single weight cancels exactly
    Image out(images[0].rows(), images[0].cols(), 0.0);
    for (std::size_t j = 0; j < images.size(); ++j) {
        require(images[j].same_shape(out), "fuse_levels: image sizes differ");
        for (std::size_t i = 0; i < out.size(); ++i)
            out.data()[i] += weights[j] * images[j].data()[i];
    }
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] /= wsum;
    return out;
}

Image m1_inpaint(const MaskedImage& mi, const InpaintConfig& cfg, const FilterBank& fb) {
    RunContext rc = prepare(mi, cfg, fb);
    const Image& Y = rc.ext.y;
    const Image& th = rc.ext.theta;
    const std::size_t n1 = rc.ext.n1;

    Image X(n1, n1, 0.0);
    Image Xprev(n1, n1, 0.0);
    double lambda = rc.schedule.lambda_at(1);

    for (int k = 1;; ++k) {
        double delta = l2_diff(X, Xprev);
        if (cfg.delta_normalized) delta /= double(n1);
        StepDecision dec = select_stop(rc.state, delta, rc.schedule);
        if (dec.stop) break;
        lambda = dec.lambda;

        Image Yk(n1, n1);
        for (std::size_t i = 0; i < Yk.size(); ++i) {
            double t = th.data()[i];
            Yk.data()[i] = t * Y.data()[i] + (1.0 - t) * X.data()[i];
        }
        auto slices = qwp_forward_2d_slices(Yk, fb, rc.all_levels);

        std::map<int, Tree2D> shrunk;
        for (int m : rc.levels)
            shrunk.emplace(m, shrink_tree(slices.at(m), slices.at(m + 1), cfg.window_for(m), lambda));

        Xprev = X;
        X = fuse_trees(shrunk, rc.levels, cfg, fb);
        if (cfg.progress) cfg.progress(k, rc.state.nu, lambda, delta);
        if (cfg.checkpoint) cfg.checkpoint(k, X);
    }
    return crop(X, rc.ext.offset, mi.degraded.rows());
}

Image m2_inpaint(const MaskedImage& mi, const InpaintConfig& cfg, const FilterBank& fb) {
    RunContext rc = prepare(mi, cfg, fb);
    const Image& Y = rc.ext.y;
    const Image& th = rc.ext.theta;
    const std::size_t n1 = rc.ext.n1;

    std::map<int, Tree2D> d, b;
    for (int m : rc.all_levels) {
        d.emplace(m, Tree2D(n1, m));
        b.emplace(m, Tree2D(n1, m));
    }

    Image Xprev(n1, n1, 0.0);
    Image X(n1, n1, 0.0);
    double lambda = rc.schedule.lambda_at(1);

    Image xrec(n1, n1, 0.0);
    for (int k = 1;; ++k) {
        std::map<int, Tree2D> diff;
        for (int m : rc.levels) diff.emplace(m, tree_sub(d.at(m), b.at(m)));
        xrec = fuse_trees(diff, rc.levels, cfg, fb);

        X = solve_data_step(Y, th, cfg.mu, xrec);

        double delta = l2_diff(X, Xprev);
        if (cfg.delta_normalized) delta /= double(n1);
        StepDecision dec = select_stop(rc.state, delta, rc.schedule);
        if (dec.stop) break;
        lambda = dec.lambda;

        auto slices = qwp_forward_2d_slices(X, fb, rc.all_levels);
        std::map<int, Tree2D> zt;
        for (int m : rc.all_levels) zt.emplace(m, tree_add(slices.at(m), b.at(m)));
        for (int m : rc.levels)
            d.at(m) = shrink_tree(zt.at(m), zt.at(m + 1), cfg.window_for(m), lambda);
        d.at(rc.parent) = zt.at(rc.parent);
        // multiplier update b += Z - d, i.e. b = (Z + b_prev) - d
        for (int m : rc.all_levels) b.at(m) = tree_sub(zt.at(m), d.at(m));

        Xprev = X;
        if (cfg.progress) cfg.progress(k, rc.state.nu, lambda, delta);
        if (cfg.checkpoint) cfg.checkpoint(k, X);
    }
    return crop(X, rc.ext.offset, mi.degraded.rows());
}

}  // namespace qwp
