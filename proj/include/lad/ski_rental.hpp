#pragma once

#include "lad/numerics.hpp"

// Continuous ski rental with a horizon prediction. A threshold policy rents
// until time T and then buys; robustness r constrains T to
// [b/(r-1), b(r-1)]. Distance objectives compare against the best r-robust
// algorithm that knows the horizon.

namespace lad::ski {

struct SkiInstance {
    double buy_cost;    // b >= 1
    double robustness;  // r >= 2

    SkiInstance(double b, double r);
    // min{b*r/(r-1), b*(r-1)}: where the offline-aware curve levels off.
    double ideal_switch() const;
};

struct SkiPolicy {
    double threshold;
};

struct Interval {
    double lo;
    double hi;
    bool contains(double x) const { return x >= lo && x <= hi; }
};

// x if x < T, else T + b.
double cost(double threshold, double horizon, double buy_cost);

// [b/(r-1), b(r-1)]; r < 2 rejected.
Interval robust_range(const SkiInstance& inst);

// Performance ratio of the best r-robust algorithm on horizon x:
// 1 below b, x/b up to the switch point, r/(r-1) beyond. Discontinuous at
// b(r-1) for r below (3+sqrt(5))/2; the left limit there is (r-1).
double ideal_pr(const SkiInstance& inst, double x);
double ideal_pr_left(const SkiInstance& inst, double x);

struct SupOptions {
    int scan_points = 256;  // interior scan per smooth piece
};

// Weighted max distance to the ideal curve over the range. Unbounded ranges
// are accepted only with the uniform weight. Non-robust thresholds rejected.
double d_max(SkiPolicy policy, const SkiInstance& inst, const WeightFunction& w,
             const PredictionRange& range, SupOptions opts = {});

struct OptimizeOptions {
    int explore_grid = 192;  // coarse threshold grid across both classes
    int explore_scan = 64;   // sup resolution while exploring
    int final_scan = 256;    // sup resolution for candidate ranking
};

// Minimizes d_max via the critical threshold set of the two classes
// (buy before b / at b or later), with a coarse exploratory grid and local
// refinement on top. Ties prefer T = b.
SkiPolicy optimize_T_max(const SkiInstance& inst, const WeightFunction& w,
                         const PredictionRange& range, OptimizeOptions opts = {});

// Weighted average distance over a bounded range (mean over the range).
double d_avg(SkiPolicy policy, const SkiInstance& inst, const WeightFunction& w,
             const PredictionRange& range);

SkiPolicy optimize_T_avg(const SkiInstance& inst, const WeightFunction& w,
                         const PredictionRange& range, int grid_points = 4096);

// CVaR of the policy cost when the horizon follows mu; alpha in [0,1).
double cvar_cost(SkiPolicy policy, const DistributionalPrediction& mu, double alpha,
                 double buy_cost);

// alpha -> 1 limit: T + b when the buy event has positive mass, else the
// support's upper end.
double cvar_cost_limit(SkiPolicy policy, const DistributionalPrediction& mu, double buy_cost);

// Minimizes cvar_cost over the robust interval; ties prefer the largest T.
SkiPolicy optimize_T_cvar(const SkiInstance& inst, const DistributionalPrediction& mu,
                          double alpha, int grid_points = 4096);

// Prediction-gated baseline: buys at b/(r-1) when y >= b, else at rho.
// rho must lie in [b, b(r-1)].
SkiPolicy baseline_bp(double y, double rho, const SkiInstance& inst);

}  // namespace lad::ski
