#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lad/numerics.hpp"
#include "lad/rng.hpp"

// Experiment harness: synthetic samplers, real price-series ingestion,
// per-algorithm evaluation loops and report emission. All randomness is
// derived from (seed, repetition index) streams, so identical configurations
// produce byte-identical reports.

namespace lad::bench {

enum class Problem { Ski, OneMax, Contract };
enum class ReportFormat { Csv, Markdown };

struct ExperimentConfig {
    Problem problem = Problem::Ski;
    double b = 10.0;       // ski buy cost
    double r = 5.0;        // robustness (ski / one-max)
    double M = 1000.0;     // one-max price bound
    double z = 4.0;        // prediction spread: y ~ Unif[b/z, bz] or [z, M/z]
    double delta = 0.9;
    std::vector<double> alphas{0.1, 0.5, 0.9};
    WeightFamily weight = WeightFamily::LinearSymmetric;
    DistFamily mu = DistFamily::TruncatedGaussian;
    int repetitions = 1000;
    int inner_samples = 512;
    uint64_t seed = 1;
    std::string real_data_path;  // one-max real-price mode when nonempty
    double contract_y_lo = 0.8e6;
    double contract_y_hi = 1.2e6;
};

// Pinned configurations for the headline experiments.
ExperimentConfig ski_headline_config();       // b=10 r=5 z=4 delta=0.9
ExperimentConfig onemax_headline_config();    // M=1000 r=100 z=10 delta=0.9
ExperimentConfig contract_headline_config();  // gaussian weight, delta=1/3

struct ReportRow {
    std::string name;
    double avg_perf_ratio = 0.0;
    double ratio_ci_plus = 0.0;
    double ratio_ci_minus = 0.0;
    double expected_value = 0.0;  // cost, profit or contract length
    double ev_ci_plus = 0.0;
    double ev_ci_minus = 0.0;
};

struct ExperimentReport {
    std::string title;
    std::string value_label;  // "expected cost" / "expected profit" / "expected length"
    std::vector<ReportRow> rows;
};

// Draw of the prediction y for the configured problem.
double sample_prediction(const ExperimentConfig& config, SplitMix64& rng);

// Full benchmark for the configured problem (synthetic mode).
ExperimentReport run_experiment(const ExperimentConfig& config);

// Percentile-bootstrap CI of the mean: (upper - mean, mean - lower) at the
// given level, 1000 seeded resamples. Needs at least two samples.
std::pair<double, double> confidence_interval(const std::vector<double>& samples,
                                              double level = 0.95, uint64_t seed = 0x107);

// File problems raise this; the CLI maps it to its I/O exit code.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PriceDataset {
    std::string name;
    std::vector<double> prices;
    double max_price = 0.0;
    // spread of the eight-segment maxima (the paper's delta * x)
    double spread = 0.0;
    double delta() const { return max_price > 0.0 ? spread / max_price : 0.0; }
};

// CSV with one price per row, or timestamp,price (second column used).
// Header auto-detected; needs at least 8 rows of positive prices.
PriceDataset load_price_series(const std::string& path);

// y = x + spread * z with z ~ Normal(0, 1/2) truncated to [-1, 1].
double gen_real_prediction(double x, double spread, SplitMix64& rng);
// Deterministic core, exposed so tests can pin z.
double apply_real_prediction(double x, double spread, double z);

// One-max evaluation on a real price series (fallback = lowest price).
ExperimentReport run_real_experiment(const ExperimentConfig& config, const PriceDataset& data);

std::string emit_report(const ExperimentReport& report, ReportFormat format);

struct CurveConfig {
    Problem problem = Problem::Ski;
    double b = 10.0;
    double r = 5.0;
    double M = 1000.0;
    double lo = 0.0;
    double hi = 50.0;
    int points = 200;
    // named policy parameters: thresholds (ski / one-max) or lambdas (contract)
    std::vector<std::pair<std::string, double>> policies;
};

// CSV of x versus the policies' performance ratios and the ideal curve, with
// one-sided duplicated rows at discontinuities.
std::string emit_curves(const CurveConfig& config);

// 6-significant-digit formatting used for all emitted numbers.
std::string format_number(double v);

}  // namespace lad::bench
