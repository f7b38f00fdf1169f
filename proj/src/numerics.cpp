#include "lad/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lad {

// ---------------------------------------------------------------------------
// PredictionRange

PredictionRange PredictionRange::bounds(double lo, double hi) {
    if (!(lo >= 0.0) || std::isnan(hi)) throw std::invalid_argument("range: lower must be >= 0");
    if (hi < lo) throw std::invalid_argument("range: upper < lower");
    PredictionRange r;
    r.lower = lo;
    r.upper = hi;
    return r;
}

PredictionRange PredictionRange::around(double y, double delta) {
    if (!(y >= 0.0)) throw std::invalid_argument("range: prediction must be >= 0");
    if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("range: delta outside [0,1]");
    PredictionRange r;
    r.lower = (1.0 - delta) * y;
    r.upper = (1.0 + delta) * y;
    r.prediction = y;
    r.delta = delta;
    return r;
}

PredictionRange PredictionRange::unbounded(double lo) {
    if (!(lo >= 0.0)) throw std::invalid_argument("range: lower must be >= 0");
    PredictionRange r;
    r.lower = lo;
    r.upper = kInf;
    return r;
}

// ---------------------------------------------------------------------------
// WeightFunction

WeightFunction::WeightFunction(WeightFamily f, PredictionRange r, double peak, double sigma)
    : family_(f), range_(r), peak_(peak), sigma_(sigma) {}

WeightFunction WeightFunction::uniform(PredictionRange range) {
    double peak = range.prediction.value_or(
        range.bounded() ? 0.5 * (range.lower + range.upper) : range.lower);
    return WeightFunction(WeightFamily::Uniform, range, peak, 0.0);
}

WeightFunction WeightFunction::linear(PredictionRange range, double peak) {
    if (!range.bounded()) throw std::invalid_argument("linear weight: range must be bounded");
    if (!range.contains(peak)) throw std::invalid_argument("linear weight: peak outside range");
    return WeightFunction(WeightFamily::LinearSymmetric, range, peak, 0.0);
}

WeightFunction WeightFunction::linear(double y, double delta) {
    return linear(PredictionRange::around(y, delta), y);
}

WeightFunction WeightFunction::gaussian(PredictionRange range, double peak, double sigma) {
    if (!range.bounded()) throw std::invalid_argument("gaussian weight: range must be bounded");
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian weight: sigma must be > 0");
    if (!range.contains(peak)) throw std::invalid_argument("gaussian weight: peak outside range");
    return WeightFunction(WeightFamily::GaussianTruncated, range, peak, sigma);
}

WeightFunction WeightFunction::gaussian(double y, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("gaussian weight: delta must be > 0");
    return gaussian(PredictionRange::around(y, delta), y, delta * y / 4.0);
}

double WeightFunction::operator()(double x) const {
    if (x < range_.lower || x > range_.upper) return 0.0;
    switch (family_) {
        case WeightFamily::Uniform:
            return 1.0;
        case WeightFamily::LinearSymmetric: {
            if (range_.lower == range_.upper) return 1.0;
            if (x <= peak_) {
                double den = peak_ - range_.lower;
                return den > 0.0 ? (x - range_.lower) / den : 1.0;
            }
            double den = range_.upper - peak_;
            return den > 0.0 ? (range_.upper - x) / den : 1.0;
        }
        case WeightFamily::GaussianTruncated: {
            double z = (x - peak_) / sigma_;
            return std::exp(-0.5 * z * z) / (sigma_ * std::sqrt(2.0 * M_PI));
        }
    }
    return 0.0;
}

WeightFunction::Derivative WeightFunction::derivative(double x) const {
    // Slope of the branch covering x, with `ascending` choosing the side at the peak.
    auto branch = [&](bool ascending) -> double {
        switch (family_) {
            case WeightFamily::Uniform:
                return 0.0;
            case WeightFamily::LinearSymmetric: {
                if (ascending) {
                    double den = peak_ - range_.lower;
                    return den > 0.0 ? 1.0 / den : 0.0;
                }
                double den = range_.upper - peak_;
                return den > 0.0 ? -1.0 / den : 0.0;
            }
            case WeightFamily::GaussianTruncated:
                return -((x - peak_) / (sigma_ * sigma_)) * (*this)(x);
        }
        return 0.0;
    };
    if (x < range_.lower || x > range_.upper) return {0.0, 0.0};
    Derivative d;
    d.left = (x == range_.lower) ? 0.0 : branch(x <= peak_);
    d.right = (x == range_.upper) ? 0.0 : branch(x < peak_);
    return d;
}

std::vector<double> WeightFunction::kinks() const {
    std::vector<double> k{range_.lower};
    if (family_ != WeightFamily::Uniform) k.push_back(peak_);
    if (range_.bounded()) k.push_back(range_.upper);
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    return k;
}

// ---------------------------------------------------------------------------
// Normal distribution helpers

namespace stats {

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Acklam's rational approximation, polished with one Halley step.
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p outside (0,1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double e = normal_cdf(x) - p;
    double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

double truncated_normal_quantile(double p, double mean, double sd, double lo, double hi) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("truncated_normal_quantile: p outside (0,1)");
    if (!(sd > 0.0)) throw std::invalid_argument("truncated_normal_quantile: sd must be > 0");
    double flo = normal_cdf((lo - mean) / sd);
    double fhi = normal_cdf((hi - mean) / sd);
    double x = mean + sd * normal_quantile(flo + p * (fhi - flo));
    return std::clamp(x, lo, hi);
}

}  // namespace stats

// ---------------------------------------------------------------------------
// DistributionalPrediction

DistributionalPrediction::DistributionalPrediction(DistFamily f, PredictionRange s, double center,
                                                   double sigma)
    : family_(f), support_(s), center_(center), sigma_(sigma) {
    if (!s.bounded()) throw std::invalid_argument("distribution: support must be bounded");
    if (f == DistFamily::TruncatedGaussian && !is_point()) {
        if (!(sigma > 0.0)) throw std::invalid_argument("distribution: sigma must be > 0");
        norm_lo_ = stats::normal_cdf((s.lower - center) / sigma);
        norm_hi_ = stats::normal_cdf((s.upper - center) / sigma);
        norm_mass_ = norm_hi_ - norm_lo_;
        if (!(norm_mass_ > 0.0))
            throw std::invalid_argument("distribution: gaussian mass vanishes on support");
    }
}

DistributionalPrediction DistributionalPrediction::uniform(PredictionRange support) {
    double c = support.prediction.value_or(0.5 * (support.lower + support.upper));
    return DistributionalPrediction(DistFamily::UniformOnRange, support, c, 0.0);
}

DistributionalPrediction DistributionalPrediction::truncated_gaussian(double center, double sigma,
                                                                      PredictionRange support) {
    return DistributionalPrediction(DistFamily::TruncatedGaussian, support, center, sigma);
}

DistributionalPrediction DistributionalPrediction::triangular(PredictionRange support,
                                                              double center) {
    if (!support.contains(center))
        throw std::invalid_argument("distribution: triangular center outside support");
    return DistributionalPrediction(DistFamily::LinearTriangular, support, center, 0.0);
}

double DistributionalPrediction::pdf(double x) const {
    const double l = support_.lower, u = support_.upper;
    if (is_point()) return x == center_ ? kInf : 0.0;
    if (x < l || x > u) return 0.0;
    switch (family_) {
        case DistFamily::UniformOnRange:
            return 1.0 / (u - l);
        case DistFamily::TruncatedGaussian:
            return stats::normal_pdf((x - center_) / sigma_) / (sigma_ * norm_mass_);
        case DistFamily::LinearTriangular: {
            if (x <= center_) {
                double den = (u - l) * (center_ - l);
                return den > 0.0 ? 2.0 * (x - l) / den : 2.0 / (u - l);
            }
            double den = (u - l) * (u - center_);
            return den > 0.0 ? 2.0 * (u - x) / den : 2.0 / (u - l);
        }
    }
    return 0.0;
}

double DistributionalPrediction::cdf(double x) const {
    const double l = support_.lower, u = support_.upper;
    if (is_point()) return x >= center_ ? 1.0 : 0.0;
    if (x <= l) return 0.0;
    if (x >= u) return 1.0;
    switch (family_) {
        case DistFamily::UniformOnRange:
            return (x - l) / (u - l);
        case DistFamily::TruncatedGaussian:
            return (stats::normal_cdf((x - center_) / sigma_) - norm_lo_) / norm_mass_;
        case DistFamily::LinearTriangular: {
            if (x <= center_) {
                double den = (u - l) * (center_ - l);
                return den > 0.0 ? (x - l) * (x - l) / den : (x - l) / (u - l);
            }
            double den = (u - l) * (u - center_);
            return 1.0 - (den > 0.0 ? (u - x) * (u - x) / den : (u - x) / (u - l));
        }
    }
    return 0.0;
}

double DistributionalPrediction::quantile(double alpha) const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("quantile: alpha outside (0,1)");
    const double l = support_.lower, u = support_.upper;
    if (is_point()) return center_;
    switch (family_) {
        case DistFamily::UniformOnRange:
            return l + alpha * (u - l);
        case DistFamily::TruncatedGaussian:
            return stats::truncated_normal_quantile(alpha, center_, sigma_, l, u);
        case DistFamily::LinearTriangular: {
            double pc = cdf(center_);
            if (alpha <= pc) {
                double den = (u - l) * (center_ - l);
                return l + std::sqrt(alpha * den);
            }
            double den = (u - l) * (u - center_);
            return u - std::sqrt((1.0 - alpha) * den);
        }
    }
    return l;
}

double DistributionalPrediction::partial_expectation(double a, double b) const {
    const double l = support_.lower, u = support_.upper;
    if (is_point()) return (a <= center_ && center_ <= b) ? center_ : 0.0;
    a = std::max(a, l);
    b = std::min(b, u);
    if (b <= a) return 0.0;
    switch (family_) {
        case DistFamily::UniformOnRange:
            return (b * b - a * a) / (2.0 * (u - l));
        case DistFamily::TruncatedGaussian: {
            double za = (a - center_) / sigma_, zb = (b - center_) / sigma_;
            return (center_ * (stats::normal_cdf(zb) - stats::normal_cdf(za)) -
                    sigma_ * (stats::normal_pdf(zb) - stats::normal_pdf(za))) /
                   norm_mass_;
        }
        case DistFamily::LinearTriangular: {
            auto up_piece = [&](double s, double t) {  // int z*2(z-l)/den on rising side
                double den = (u - l) * (center_ - l);
                if (!(den > 0.0)) return 0.0;
                auto F = [&](double z) { return (2.0 * z * z * z / 3.0 - l * z * z) / den; };
                return F(t) - F(s);
            };
            auto down_piece = [&](double s, double t) {
                double den = (u - l) * (u - center_);
                if (!(den > 0.0)) return 0.0;
                auto F = [&](double z) { return (u * z * z - 2.0 * z * z * z / 3.0) / den; };
                return F(t) - F(s);
            };
            double lo1 = a, hi1 = std::min(b, center_);
            double lo2 = std::max(a, center_), hi2 = b;
            double s = 0.0;
            if (hi1 > lo1) s += up_piece(lo1, hi1);
            if (hi2 > lo2) s += down_piece(lo2, hi2);
            return s;
        }
    }
    return 0.0;
}

double DistributionalPrediction::expectation() const {
    if (is_point()) return center_;
    return partial_expectation(support_.lower, support_.upper);
}

double DistributionalPrediction::tail_mass(double x) const {
    if (is_point()) return x <= center_ ? 1.0 : 0.0;
    return 1.0 - cdf(x);
}

double DistributionalPrediction::mass_below(double x) const {
    if (is_point()) return x > center_ ? 1.0 : 0.0;
    return cdf(x);
}

// ---------------------------------------------------------------------------
// Quadrature

namespace {

double check_finite(double v, double x) {
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "integrate: non-finite integrand value at x=" << x;
        throw std::runtime_error(os.str());
    }
    return v;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double fa, double b,
                        double fb, double c, double fc, double whole, double tol, int depth) {
    double m1 = 0.5 * (a + c), m2 = 0.5 * (c + b);
    double f1 = check_finite(f(m1), m1), f2 = check_finite(f(m2), m2);
    double left = (c - a) / 6.0 * (fa + 4.0 * f1 + fc);
    double right = (b - c) / 6.0 * (fc + 4.0 * f2 + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, fa, c, fc, m1, f1, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, c, fc, b, fb, m2, f2, right, 0.5 * tol, depth - 1);
}

std::vector<double> clean_breakpoints(std::vector<double> bps, double a, double b) {
    std::vector<double> out{a, b};
    for (double p : bps)
        if (p > a && p < b && std::isfinite(p)) out.push_back(p);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 std::vector<double> breakpoints, QuadratureOptions opts) {
    if (!(a <= b)) throw std::invalid_argument("integrate: a > b");
    if (a == b) return 0.0;
    if (!std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("integrate: infinite bounds");
    auto cuts = clean_breakpoints(std::move(breakpoints), a, b);
    double total = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double lo = cuts[i], hi = cuts[i + 1];
        double mid = 0.5 * (lo + hi);
        double flo = check_finite(f(lo), lo);
        double fhi = check_finite(f(hi), hi);
        double fmid = check_finite(f(mid), mid);
        double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        double tol = opts.abs_tol * (hi - lo) / (b - a);
        total += adaptive_simpson(f, lo, flo, hi, fhi, mid, fmid, whole, tol, opts.max_depth);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Root finding

std::vector<double> find_roots(const std::function<double(double)>& f, double a, double b,
                               std::vector<double> breakpoints, RootScanOptions opts) {
    if (!(a <= b)) throw std::invalid_argument("find_roots: a > b");
    std::vector<double> roots;
    if (a == b) {
        if (std::abs(f(a)) <= opts.f_tol) roots.push_back(a);
        return roots;
    }
    auto cuts = clean_breakpoints(std::move(breakpoints), a, b);
    const double x_tol = opts.x_tol_rel * (b - a);
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double lo = cuts[i], hi = cuts[i + 1];
        int n = std::max(2, opts.scan_points);
        double prev_x = lo, prev_f = f(lo);
        if (prev_f == 0.0) roots.push_back(lo);
        for (int j = 1; j <= n; ++j) {
            double x = lo + (hi - lo) * j / n;
            double fx = f(x);
            if (fx == 0.0) {
                roots.push_back(x);
            } else if (std::isfinite(prev_f) && std::isfinite(fx) && prev_f * fx < 0.0) {
                double xa = prev_x, xb = x, fa = prev_f;
                while (xb - xa > x_tol) {
                    double xm = 0.5 * (xa + xb);
                    double fm = f(xm);
                    if (std::abs(fm) <= opts.f_tol) {
                        xa = xb = xm;
                        break;
                    }
                    if (fa * fm < 0.0) {
                        xb = xm;
                    } else {
                        xa = xm;
                        fa = fm;
                    }
                }
                roots.push_back(0.5 * (xa + xb));
            }
            prev_x = x;
            prev_f = fx;
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [&](double p, double q) { return std::abs(p - q) <= 2.0 * x_tol; }),
                roots.end());
    return roots;
}

// ---------------------------------------------------------------------------
// Scalar minimization

namespace {

ScalarMinimum golden_section(const std::function<double(double)>& f, double lo, double hi,
                             double x_tol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > x_tol) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = f(x2);
        }
    }
    double xm = 0.5 * (lo + hi);
    return {xm, f(xm)};
}

}  // namespace

ScalarMinimum minimize_scalar(const std::function<double(double)>& f, double a, double b,
                              MinimizeOptions opts) {
    if (a > b) throw std::invalid_argument("minimize_scalar: a > b");
    if (a == b) return {a, f(a)};
    int n = std::max(2, opts.grid_points);
    double best_x = a, best_f = f(a);
    int best_i = 0;
    for (int i = 1; i <= n; ++i) {
        double x = a + (b - a) * i / n;
        double fx = f(x);
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
            best_i = i;
        }
    }
    double lo = a + (b - a) * std::max(0, best_i - 1) / n;
    double hi = a + (b - a) * std::min(n, best_i + 1) / n;
    auto refined = golden_section(f, lo, hi, opts.x_tol_rel * (b - a));
    if (refined.value < best_f) return refined;
    return {best_x, best_f};
}

}  // namespace lad
