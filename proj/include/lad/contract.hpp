#pragma once

#include <optional>

#include "lad/numerics.hpp"

// Contract scheduling with bi-infinite doubling schedules X_lambda =
// (lambda*2^i): contract i completes at lambda*2^(i+1). Every such schedule
// is 4-robust; the ideal 4-robust schedule has performance ratio 2, so
// distance objectives measure the ratio's excess over 2 across the
// prediction range of the interruption time.

namespace lad::contract {

struct Schedule {
    double lambda;  // in [1, 2)
};

// Length of the largest contract completing by time t; a contract finishing
// exactly at t counts. The integer contract index is guarded against
// floating-point log drift.
double largest_completed(double lambda, double t);

// t / largest_completed: in [2,4), approaching 4 just before a completion.
double perf_ratio(double lambda, double t);

// Left limits at completion times (the pre-completion reading of the sup).
double largest_completed_left(double lambda, double t);
double perf_ratio_left(double lambda, double t);

// Weighted max distance sup_{T in range} (pr - 2) w(T); completion times
// inside the range enter as left limits (ratio 4). Range must sit above 0.
double d_max(double lambda, const WeightFunction& w, const PredictionRange& range,
             int scan_points = 256);

struct OptimizeOptions {
    int grid_points = 4096;
    int explore_scan = 64;
    int final_scan = 256;
};

// Minimizes d_max over lambda in [1,2); the grid is augmented with every
// lambda placing a completion at the range endpoints or the prediction.
// Ties break to the smallest lambda.
Schedule optimize_lambda_max(const WeightFunction& w, const PredictionRange& range,
                             OptimizeOptions opts = {});

// Average weighted distance over the range.
double d_avg(double lambda, const WeightFunction& w, const PredictionRange& range);

Schedule optimize_lambda_avg(const WeightFunction& w, const PredictionRange& range,
                             int grid_points = 4096);

// Closed-form minimizer of the average distance for the linear symmetric
// weight (one completion inside the range, left of the prediction). Empty
// when no consistent completion index exists.
std::optional<Schedule> closed_form_lambda_avg_linear(double y, double delta);

// CVaR of the largest completed contract length when the interruption is
// drawn from mu supported inside [(1-delta)y, (1+delta)y]; requires
// delta <= 1/3 so the schedule completes at most one contract in the range.
double cvar_length(double lambda, const DistributionalPrediction& mu, double alpha, double y,
                   double delta);

// alpha -> 1 limit: the length guaranteed by time (1-delta)y.
double cvar_length_limit(double lambda, double y, double delta);

Schedule optimize_lambda_cvar(const DistributionalPrediction& mu, double alpha, double y,
                              double delta, int grid_points = 4096);

enum class BaselineKind { ParetoOptimal, DeltaTolerant };

// Schedule completing a contract exactly at y (ParetoOptimal) or at
// (1-delta)y (DeltaTolerant).
Schedule baseline_schedule(BaselineKind kind, double y, double delta);

}  // namespace lad::contract
