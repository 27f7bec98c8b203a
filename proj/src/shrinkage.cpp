#include "qwp/shrinkage.hpp"

#include <algorithm>
#include <cmath>

namespace qwp {

double ThresholdSchedule::lambda_at(int nu) const {
    require(nu >= 1 && nu <= R1 + R2, "lambda_at: ladder position out of range");
    return nu <= R1 ? Lambda1[std::size_t(nu - 1)] : Lambda2[std::size_t(nu - R1 - 1)];
}

ThresholdSchedule make_schedule(double sigma, double rho, int R1, int R2) {
    ThresholdSchedule s;
    s.sigma = std::max(0.0, sigma);
    s.rho = std::clamp(rho, 0.0, 1.0);
    s.R1 = std::max(2, R1);
    s.R2 = std::max(2, R2);
    s.lambda_min = std::max(1.0, s.sigma * (1.0 - s.rho * s.rho / 2.0));
    s.lambda_mid = std::min(2.0 * s.lambda_min + 10.0, 20.0);
    s.r1 = s.lambda_mid / s.lambda_max;
    s.r2 = s.lambda_min / s.lambda_mid;
    const double sqrt2 = std::sqrt(2.0);
    s.Lambda1.resize(std::size_t(s.R1));
    for (int j = 1; j <= s.R1; ++j)
        s.Lambda1[std::size_t(j - 1)] =
            sqrt2 * std::pow(s.r1, double(j - s.R1) / double(s.R1 - 1)) * s.lambda_mid;
    s.Lambda2.resize(std::size_t(s.R2));
    for (int j = 1; j <= s.R2; ++j)
        s.Lambda2[std::size_t(j - 1)] =
            sqrt2 * std::pow(s.r2, double(j - s.R2) / double(s.R2)) * s.lambda_min;
    return s;
}

StepDecision select_stop(StopState& state, double delta, const ThresholdSchedule& sch) {
    state.last_delta = delta;
    const int R1 = sch.R1, R2 = sch.R2;
    if (state.nu < R1 && (state.K_nu > state.L1 || delta < state.tol1)) {
        ++state.nu;
        state.K_nu = 1;
        return {false, sch.Lambda1[std::size_t(state.nu - 1)]};
    }
    if (state.nu >= R1 && state.nu < R1 + R2 &&
        (state.K_nu > state.L2 || delta < state.tol2)) {
        ++state.nu;
        state.K_nu = 1;
        return {false, sch.Lambda2[std::size_t(state.nu - R1 - 1)]};
    }
    if (state.nu == R1 + R2 && (state.K_nu > state.L3 || delta < state.tol2)) {
        return {true, sch.lambda_at(state.nu)};
    }
    ++state.K_nu;
    return {false, sch.lambda_at(state.nu)};
}

Image averaged_variance(const CMat& C, int W) {
    require(W >= 1, "averaged_variance: window must be positive");
    const std::size_t R = C.rows(), N = C.cols();
    require(R >= std::size_t(2 * W) && N >= std::size_t(2 * W),
            "averaged_variance: window too large for block");

    Image p2(R, N);
    for (std::size_t k = 0; k < R; ++k)
        for (std::size_t n = 0; n < N; ++n) p2(k, n) = std::norm(C(k, n));

    // horizontal pass, then vertical, both with periodic wrap
    Image hsum(R, N, 0.0);
    for (std::size_t k = 0; k < R; ++k)
        for (std::size_t n = 0; n < N; ++n) {
            double s = 0.0;
            for (int d = -W; d < W; ++d) s += p2(k, std::size_t((long(n) + d + long(N)) % long(N)));
            hsum(k, n) = s;
        }
    Image out(R, N, 0.0);
    const double inv = 1.0 / double(4 * W * W);
    for (std::size_t k = 0; k < R; ++k)
        for (std::size_t n = 0; n < N; ++n) {
            double s = 0.0;
            for (int d = -W; d < W; ++d) s += hsum(std::size_t((long(k) + d + long(R)) % long(R)), n);
            out(k, n) = s * inv;
        }
    return out;
}

CMat bsa_apply(const CMat& C, const CMat& C_parent, int W, double lambda) {
    require(lambda > 0.0, "bsa_apply: threshold must be positive");
    require(C_parent.rows() * 2 == C.rows() && C_parent.cols() * 2 == C.cols(),
            "bsa_apply: parent block must be half the child side");

    Image avg = averaged_variance(C, W);
    const double lam2 = lambda * lambda;
    const double sqrt3 = std::sqrt(3.0);

    CMat out(C.rows(), C.cols());
    for (std::size_t k = 0; k < C.rows(); ++k)
        for (std::size_t n = 0; n < C.cols(); ++n) {
            const cplx c = C(k, n);
            const double ac = std::abs(c);
            const double var = avg(k, n) - lam2;
            if (ac == 0.0 || var <= 0.0) {
                out(k, n) = cplx{};
                continue;
            }
            const double sig = std::sqrt(var);
            const double ap = std::abs(C_parent(k / 2, n / 2));
            const double thr = sqrt3 * lam2 * ac / (sig * std::sqrt(ac * ac + ap * ap));
            out(k, n) = ac > thr ? c * ((ac - thr) / ac) : cplx{};
        }
    return out;
}

}  // namespace qwp
