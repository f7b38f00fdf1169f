#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

// Shared numerical substrate: prediction ranges, bitonic weight functions,
// bounded distributions, quadrature, root scanning and scalar minimization.

namespace lad {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Interval [lower, upper] guaranteed to contain the predicted quantity.
// An unbounded range is upper == +inf, never a large finite stand-in.
struct PredictionRange {
    double lower = 0.0;
    double upper = kInf;
    std::optional<double> prediction;  // y, when parameterized
    std::optional<double> delta;       // tolerance, when parameterized

    static PredictionRange bounds(double lo, double hi);
    // [(1-delta)*y, (1+delta)*y]
    static PredictionRange around(double y, double delta);
    static PredictionRange unbounded(double lo = 0.0);

    bool bounded() const { return upper < kInf; }
    double width() const { return upper - lower; }
    bool contains(double x) const { return x >= lower && x <= upper; }
};

enum class WeightFamily { Uniform, LinearSymmetric, GaussianTruncated };

// Importance weight over a prediction range: non-decreasing up to the peak,
// non-increasing after it, zero outside the range. The Gaussian family is the
// raw normal-density expression clipped to the range (its peak is 1/(sigma*sqrt(2pi)),
// not 1); Uniform and LinearSymmetric take values in [0,1].
class WeightFunction {
  public:
    static WeightFunction uniform(PredictionRange range);
    static WeightFunction linear(PredictionRange range, double peak);
    static WeightFunction linear(double y, double delta);
    static WeightFunction gaussian(PredictionRange range, double peak, double sigma);
    // sigma defaults to delta*y/4
    static WeightFunction gaussian(double y, double delta);

    double operator()(double x) const;

    struct Derivative {
        double left;
        double right;
    };
    // One-sided derivative pair; equal components away from kinks.
    Derivative derivative(double x) const;

    WeightFamily family() const { return family_; }
    const PredictionRange& range() const { return range_; }
    double peak() const { return peak_; }
    double sigma() const { return sigma_; }
    // Piece boundaries of the weight (range endpoints and the peak).
    std::vector<double> kinks() const;

  private:
    WeightFunction(WeightFamily f, PredictionRange r, double peak, double sigma);
    WeightFamily family_;
    PredictionRange range_;
    double peak_ = 0.0;
    double sigma_ = 0.0;
};

enum class DistFamily { UniformOnRange, TruncatedGaussian, LinearTriangular };

// Bounded distribution with bitonic density peaking at `center`. Degenerate
// support (lower == upper) is treated as a point mass at the center.
class DistributionalPrediction {
  public:
    static DistributionalPrediction uniform(PredictionRange support);
    static DistributionalPrediction truncated_gaussian(double center, double sigma,
                                                       PredictionRange support);
    static DistributionalPrediction triangular(PredictionRange support, double center);

    double pdf(double x) const;
    double cdf(double x) const;
    // alpha in (0,1); rejected otherwise.
    double quantile(double alpha) const;
    double expectation() const;
    // int_a^b z pdf(z) dz, clipped to the support.
    double partial_expectation(double a, double b) const;
    // P(X >= x); for a point mass this is 1 iff x <= center.
    double tail_mass(double x) const;
    // P(X < x); differs from cdf only for a point mass.
    double mass_below(double x) const;

    DistFamily family() const { return family_; }
    const PredictionRange& support() const { return support_; }
    double center() const { return center_; }
    double sigma() const { return sigma_; }
    bool is_point() const { return support_.lower == support_.upper; }

  private:
    DistributionalPrediction(DistFamily f, PredictionRange s, double center, double sigma);
    DistFamily family_;
    PredictionRange support_;
    double center_ = 0.0;
    double sigma_ = 0.0;
    // cached truncation constants for the gaussian family
    double norm_lo_ = 0.0, norm_hi_ = 1.0, norm_mass_ = 1.0;
};

namespace stats {
double normal_pdf(double z);
double normal_cdf(double z);
// Inverse standard normal CDF, p in (0,1).
double normal_quantile(double p);
double truncated_normal_quantile(double p, double mean, double sd, double lo, double hi);
}  // namespace stats

struct QuadratureOptions {
    double abs_tol = 1e-9;
    int max_depth = 48;
};

// Adaptive quadrature over [a,b], split at the supplied breakpoints so each
// piece is smooth. Non-finite integrand values abort with a diagnostic.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::vector<double> breakpoints = {}, QuadratureOptions opts = {});

struct RootScanOptions {
    int scan_points = 2048;  // per smooth piece
    double f_tol = 1e-10;
    double x_tol_rel = 1e-12;
};

// All sign-change roots of f on [a,b], bracketed per smooth piece and refined
// by bisection. An empty result means no sign change at the scan resolution.
std::vector<double> find_roots(const std::function<double(double)>& f, double a, double b,
                               std::vector<double> breakpoints = {}, RootScanOptions opts = {});

struct MinimizeOptions {
    int grid_points = 4096;
    double x_tol_rel = 1e-10;
};

struct ScalarMinimum {
    double argmin;
    double value;
};

// Dense grid scan followed by golden-section refinement of the best bracket.
// Ties break to the leftmost optimum.
ScalarMinimum minimize_scalar(const std::function<double(double)>& f, double a, double b,
                              MinimizeOptions opts = {});

}  // namespace lad
