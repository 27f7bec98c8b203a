#pragma once

#include <vector>

#include "qwp/core.hpp"

namespace qwp {

// Two-phase descending threshold ladder. Phase one sweeps lambda_max down to
// lambda_mid in R1 steps, phase two continues to lambda_min in R2 steps; both
// carry a sqrt(2) factor so the values apply to complex coefficient moduli.
struct ThresholdSchedule {
    double sigma = 0.0;
    double rho = 0.0;
    double lambda_max = 512.0;
    double lambda_min = 1.0;
    double lambda_mid = 12.0;
    double r1 = 0.0, r2 = 0.0;
    int R1 = 5, R2 = 8;
    std::vector<double> Lambda1;  // Lambda1[j-1] holds step j, j = 1..R1
    std::vector<double> Lambda2;  // Lambda2[j-1] holds step j, j = 1..R2

    // threshold in force at ladder position nu (1..R1+R2)
    double lambda_at(int nu) const;
};

ThresholdSchedule make_schedule(double sigma, double rho, int R1 = 5, int R2 = 8);

// Ladder position plus the per-position iteration counters and limits.
struct StopState {
    int nu = 1;
    int K_nu = 1;
    int L1 = 15, L2 = 10, L3 = 10;
    double tol1 = 0.05, tol2 = 0.01;
    double last_delta = 0.0;
};

struct StepDecision {
    bool stop = false;
    double lambda = 0.0;
};

// Three-branch rule: advance the ladder when the iteration budget at the
// current position is spent or the update delta has settled; stop once the
// final position settles. Otherwise keep the current threshold.
StepDecision select_stop(StopState& state, double delta, const ThresholdSchedule& schedule);

// Windowed mean of |c|^2 over a (2W)x(2W) neighbourhood with periodic wrap:
// out[k,n] = (1/(2W)^2) sum_{kap,nv=-W}^{W-1} |c[k+kap, n+nv]|^2.
Image averaged_variance(const CMat& C, int W);

// Bivariate shrinkage with the parent block taken from the next level; each
// coefficient of the parent covers a 2x2 patch of the child. Complex values
// shrink radially; a vanished marginal deviation or a zero coefficient kills
// the site outright.
CMat bsa_apply(const CMat& C, const CMat& C_parent, int W, double lambda);

// Neighbourhood half-width used for each decomposition level.
inline int default_window(int m) { return m <= 3 ? 3 : 2; }

}  // namespace qwp
