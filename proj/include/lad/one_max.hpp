#pragma once

#include <functional>
#include <vector>

#include "lad/numerics.hpp"

// One-max search with a prediction of the maximum price. Threshold policies
// accept the first price at or above T; robustness r requires
// T in [t1, t2] = [M/r, r]. Distances are measured against the best r-robust
// threshold chosen with knowledge of the maximum, on worst-case sequences of
// creeping prices. The adversary may always undercut a threshold (max price
// just below T, leaving the algorithm the fallback profit 1); the undercut is
// weighted at the closest admissible price in the range.

namespace lad::onemax {

struct OneMaxInstance {
    double price_bound;  // M > 1
    double robustness;   // r >= sqrt(M)

    OneMaxInstance(double M, double r);
    double t1() const { return price_bound / robustness; }
    double t2() const { return robustness; }
};

class PriceSeries {
  public:
    explicit PriceSeries(std::vector<double> prices);
    const std::vector<double>& prices() const { return prices_; }
    double max_price() const { return max_; }
    double min_price() const { return min_; }
    size_t size() const { return prices_.size(); }

  private:
    std::vector<double> prices_;
    double max_;
    double min_;
};

struct OneMaxPolicy {
    double threshold;
};

// Fallback when no price reaches the threshold: the worst-case model pays 1,
// real price data pays the lowest price in the sequence.
enum class SequenceModel { WorstCase, RealData };

double run_threshold(double threshold, const PriceSeries& prices,
                     SequenceModel mode = SequenceModel::WorstCase);

// Profit of a threshold on the worst-case sequence whose maximum is x.
inline double worst_case_profit(double threshold, double x) {
    return x >= threshold ? threshold : 1.0;
}

// Performance ratio of the best r-robust threshold on maximum price x:
// x below t1, 1 on [t1,t2], x/t2 above. x outside [1,M] rejected.
double ideal_pr(const OneMaxInstance& inst, double x);

// Adversary payoff against threshold T at maximum price x:
// (T-1)w(x) below T, (x/T-1)w(x) on [T,t2], (x/T-x/t2)w(x) above t2.
double game_payoff(double threshold, double x, const OneMaxInstance& inst,
                   const WeightFunction& w);

// Weighted max distance of a threshold over R_y = [(1-delta)y, (1+delta)y].
double d_max(OneMaxPolicy policy, const OneMaxInstance& inst, const WeightFunction& w, double y,
             double delta, int scan_points = 256);

// Closed form for uniform weights; delta outside [0,1] rejected.
OneMaxPolicy optimize_T_max_unweighted(const OneMaxInstance& inst, double y, double delta);

// Exact game solution for linear weights when the range sits inside [t1,t2];
// numeric minimax otherwise.
OneMaxPolicy optimize_T_max_weighted(const OneMaxInstance& inst, const WeightFunction& w, double y,
                                     double delta);

// Average weighted distance over the range (zero below t1, (x-1) up to T,
// then the above-threshold branches).
double d_avg(OneMaxPolicy policy, const OneMaxInstance& inst, const WeightFunction& w, double y,
             double delta);

OneMaxPolicy optimize_T_avg(const OneMaxInstance& inst, const WeightFunction& w, double y,
                            double delta, int grid_points = 4096);

// Distribution of the maximum price on worst-case sequences.
struct WorstCaseModel {
    DistributionalPrediction mu;
};

// CVaR of the policy profit under the worst-case model; alpha in [0,1).
double cvar_profit(OneMaxPolicy policy, const WorstCaseModel& model, double alpha, double y,
                   double delta);

// alpha -> 1 limit: the guaranteed floor (1-delta)y.
double cvar_profit_limit(OneMaxPolicy policy, const WorstCaseModel& model, double y, double delta);

OneMaxPolicy optimize_T_cvar(const OneMaxInstance& inst, const WorstCaseModel& model, double alpha,
                             double y, double delta, int grid_points = 4096);

double alpha_consistency(OneMaxPolicy policy, const WorstCaseModel& model, double alpha, double y,
                         double delta);
double alpha_consistency_limit(OneMaxPolicy policy, const WorstCaseModel& model, double y,
                               double delta);

// Externally defined threshold rule (used for the PO1 baseline slot).
using ThresholdRule = std::function<double(double y, const OneMaxInstance&, double delta)>;

struct Baselines {
    OneMaxPolicy delta_tol;  // (1-delta)y clamped to [t1,t2]
    OneMaxPolicy po2;        // min{t2, max{t1, y}}
    OneMaxPolicy po1;        // pluggable; defaults to the po2 rule with a warning
};

Baselines baselines(double y, const OneMaxInstance& inst, double delta,
                    const ThresholdRule& po1_rule = nullptr);

// Closed-form v1=v4 threshold for linear weights with the range inside
// [t1,t2]; empty when the balance equation has no root in [(1-delta)y, y].
std::optional<double> linear_game_threshold(double y, double delta);

}  // namespace lad::onemax
