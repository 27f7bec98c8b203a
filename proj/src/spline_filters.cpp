#include "qwp/spline_filters.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <string>

namespace qwp {

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= double(i);
    return r;
}

}  // namespace

double bspline_value(int p, double t) {
    // b^p(t) = 1/(p-1)! sum_{k=0}^{p} (-1)^k C(p,k) (t + p/2 - k)_+^{p-1}
    double s = 0.0;
    for (int k = 0; k <= p; ++k) {
        double x = t + 0.5 * p - k;
        if (x > 0.0) {
            double term = binomial(p, k) * std::pow(x, p - 1);
            s += (k % 2 == 0) ? term : -term;
        }
    }
    return s / factorial(p - 1);
}

double SplineSpectra::v_at(long j) const {
    long two_n = long(2 * N);
    long r = j % two_n;
    if (r < 0) r += two_n;
    return (r < long(N)) ? v[std::size_t(r)] : -v[std::size_t(r - long(N))];
}

SplineSpectra sample_bspline(int p, std::size_t N) {
    require(p >= 2, "sample_bspline: spline order must be >= 2");
    require(is_pow2(N) && N >= 8, "sample_bspline: N must be a power of two, N >= 8");

    SplineSpectra s;
    s.p = p;
    s.N = N;
    s.u.assign(N, 0.0);
    s.v.assign(N, 0.0);

    // The spline is even and supported on |t| < p/2, so the sums collapse to
    // cosine series over the few nonzero samples.
    const double b0 = bspline_value(p, 0.0);
    for (std::size_t n = 0; n < N; ++n) {
        double un = b0;
        for (int k = 1; 2 * k < p; ++k)
            un += 2.0 * bspline_value(p, k) *
                  std::cos(2.0 * std::numbers::pi * double(k) * double(n) / double(N));
        double vn = 0.0;
        for (int k = 0; 2 * k + 1 < p; ++k)
            vn += 2.0 * bspline_value(p, k + 0.5) *
                  std::cos(2.0 * std::numbers::pi * (k + 0.5) * double(n) / double(N));
        s.u[n] = un;
        s.v[n] = vn;
    }
    return s;
}

FirstLevelFilters first_level_filters(const SplineSpectra& s) {
    const std::size_t N = s.N;
    FirstLevelFilters fl;
    fl.N = N;
    fl.beta.assign(N, cplx{});
    fl.alpha.assign(N, cplx{});

    for (std::size_t n = 0; n < N; ++n) {
        double uu = s.u[(2 * n) % N];
        double vv = s.v_at(long(2 * n));
        double den = std::sqrt(uu * uu + vv * vv);
        assert(den > 0.0 && "spline spectra vanish simultaneously");
        double ang = 2.0 * std::numbers::pi * double(n) / double(N);
        cplx wn(std::cos(ang), std::sin(ang));
        fl.beta[n] = cplx((uu + vv) / den, 0.0);
        fl.alpha[n] = wn * ((uu - vv) / den);
    }

    // Hilbert companions: -i on positive bins, +i on negative, pass-through at
    // DC and Nyquist. With this normalization beta[N/2] = 0 and alpha[0] = 0,
    // so the special bins carry the expected sqrt2 / -sqrt2 values.
    auto companion = [N](const std::vector<cplx>& h) {
        std::vector<cplx> f(N);
        f[0] = h[0];
        f[N / 2] = h[N / 2];
        for (std::size_t n = 1; n < N / 2; ++n) f[n] = cplx(0.0, -1.0) * h[n];
        for (std::size_t n = N / 2 + 1; n < N; ++n) f[n] = cplx(0.0, 1.0) * h[n];
        return f;
    };
    fl.f0 = companion(fl.beta);
    fl.f1 = companion(fl.alpha);

    auto combine = [N](const std::vector<cplx>& h, const std::vector<cplx>& f, double sgn) {
        std::vector<cplx> q(N);
        for (std::size_t n = 0; n < N; ++n) q[n] = h[n] + cplx(0.0, sgn) * f[n];
        return q;
    };
    fl.qplus0 = combine(fl.beta, fl.f0, +1.0);
    fl.qplus1 = combine(fl.alpha, fl.f1, +1.0);
    fl.qminus0 = combine(fl.beta, fl.f0, -1.0);
    fl.qminus1 = combine(fl.alpha, fl.f1, -1.0);
    return fl;
}

FilterBank::FilterBank(int p, std::size_t N, int M) : p_(p), N_(N), M_(M) {
    require(p >= 2 && p <= 9, "FilterBank: spline order must be in 2..9");
    require(is_pow2(N), "FilterBank: N must be a power of two");
    require(M >= 1, "FilterBank: depth must be >= 1");
    if ((std::size_t(1) << M) > N / 2)
        throw std::invalid_argument(
            "FilterBank: depth " + std::to_string(M) + " too deep for N = " +
            std::to_string(N) + " (need 2^M <= N/2)");
    first_ = first_level_filters(sample_bspline(p, N));
}

ModulationPair FilterBank::modulation_matrix(int m, std::size_t n) const {
    require(m >= 1 && m <= M_, "modulation_matrix: level out of range");
    require(n < (N_ >> m), "modulation_matrix: bin out of range");
    const std::size_t d = std::size_t(1) << (m - 1);
    const std::size_t a = (d * n) & (N_ - 1);
    const std::size_t b = (d * n + N_ / 2) & (N_ - 1);
    ModulationPair mp;
    mp.synthesis[0][0] = first_.beta[a];
    mp.synthesis[0][1] = first_.alpha[a];
    mp.synthesis[1][0] = first_.beta[b];
    mp.synthesis[1][1] = first_.alpha[b];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) mp.analysis[i][j] = mp.synthesis[j][i];
    return mp;
}

FilterBank build_filter_bank(int p, std::size_t N, int M) { return FilterBank(p, N, M); }

}  // namespace qwp
