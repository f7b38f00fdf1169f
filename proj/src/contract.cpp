#include "lad/contract.hpp"

#include <algorithm>
#include <cmath>

#include "piecewise_sup.hpp"

namespace lad::contract {

namespace {

void require_lambda(double lambda) {
    if (!(lambda >= 1.0 && lambda < 2.0))
        throw std::invalid_argument("contract: lambda outside [1,2)");
}

// Index k with lambda*2^k <= t < lambda*2^(k+1), exact at completion times.
int completion_index(double lambda, double t) {
    int k = static_cast<int>(std::floor(std::log2(t / lambda)));
    while (std::ldexp(lambda, k) > t) --k;
    while (std::ldexp(lambda, k + 1) <= t) ++k;
    return k;
}

// All completion times lambda*2^j in (lo, hi].
std::vector<double> completions_between(double lambda, double lo, double hi) {
    std::vector<double> out;
    double c = std::ldexp(lambda, completion_index(lambda, lo));
    if (c <= lo) c *= 2.0;
    while (c <= hi) {
        out.push_back(c);
        c *= 2.0;
    }
    return out;
}

void require_positive_range(const PredictionRange& range) {
    if (!(range.lower > 0.0))
        throw std::invalid_argument("contract: range must start above 0");
    if (!range.bounded()) throw std::invalid_argument("contract: range must be bounded");
}

// lambda in [1,2) whose schedule completes a contract exactly at `target`.
double lambda_completing_at(double target) {
    if (!(target > 0.0)) throw std::invalid_argument("contract: completion target must be > 0");
    int k = static_cast<int>(std::floor(std::log2(target)));
    double lam = target / std::ldexp(1.0, k);
    while (lam >= 2.0) lam /= 2.0;
    while (lam < 1.0) lam *= 2.0;
    return lam;
}

}  // namespace

double largest_completed(double lambda, double t) {
    require_lambda(lambda);
    if (!(t > 0.0)) throw std::invalid_argument("contract: time must be > 0");
    return std::ldexp(lambda, completion_index(lambda, t) - 1);
}

double largest_completed_left(double lambda, double t) {
    require_lambda(lambda);
    if (!(t > 0.0)) throw std::invalid_argument("contract: time must be > 0");
    int k = completion_index(lambda, t);
    if (std::ldexp(lambda, k) == t) --k;  // a completion exactly at t has not finished yet
    return std::ldexp(lambda, k - 1);
}

double perf_ratio(double lambda, double t) { return t / largest_completed(lambda, t); }

double perf_ratio_left(double lambda, double t) { return t / largest_completed_left(lambda, t); }

double d_max(double lambda, const WeightFunction& w, const PredictionRange& range,
             int scan_points) {
    require_lambda(lambda);
    require_positive_range(range);
    const double lo = range.lower, hi = range.upper;
    std::vector<double> cuts = completions_between(lambda, lo, hi);
    for (double k : w.kinks()) cuts.push_back(k);
    auto edges = detail::cell_edges(lo, hi, cuts);
    std::vector<detail::Piece> pieces;
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
        double a = edges[i], b = edges[i + 1];
        double base = largest_completed(lambda, 0.5 * (a + b));
        pieces.push_back({a, b, [base, &w](double t) { return (t / base - 2.0) * w(t); }});
    }
    return std::max(0.0, detail::sup_pieces(pieces, {scan_points}));
}

Schedule optimize_lambda_max(const WeightFunction& w, const PredictionRange& range,
                             OptimizeOptions opts) {
    require_positive_range(range);
    auto f = [&](double lam, int scan) { return d_max(lam, w, range, scan); };

    std::vector<double> cands;
    int n = std::max(8, opts.grid_points);
    const double hi = 2.0 - 1e-12;
    for (int i = 0; i <= n; ++i) cands.push_back(1.0 + (hi - 1.0) * i / n);
    cands.push_back(lambda_completing_at(range.lower));
    cands.push_back(lambda_completing_at(range.upper));
    if (range.prediction) cands.push_back(lambda_completing_at(*range.prediction));
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

    size_t best_i = 0;
    double best_v = kInf;
    for (size_t i = 0; i < cands.size(); ++i) {
        double v = f(cands[i], opts.explore_scan);
        if (v < best_v - 1e-15 * std::max(1.0, std::abs(best_v))) {
            best_v = v;
            best_i = i;
        }
    }
    double lo_b = cands[best_i > 0 ? best_i - 1 : 0];
    double hi_b = cands[std::min(best_i + 1, cands.size() - 1)];
    if (hi_b > lo_b) {
        auto refined = minimize_scalar([&](double lam) { return f(lam, opts.explore_scan); },
                                       lo_b, hi_b, {128, 1e-11});
        cands.push_back(refined.argmin);
    }
    double best_lam = cands[best_i];
    best_v = f(best_lam, opts.final_scan);
    for (double lam : cands) {
        double v = f(lam, opts.final_scan);
        if (v < best_v - 1e-12 * std::max(1.0, std::abs(best_v))) {
            best_v = v;
            best_lam = lam;
        }
    }
    return {best_lam};
}

double d_avg(double lambda, const WeightFunction& w, const PredictionRange& range) {
    require_lambda(lambda);
    require_positive_range(range);
    const double lo = range.lower, hi = range.upper;
    auto dist = [&](double t) { return (perf_ratio(lambda, t) - 2.0) * w(t); };
    if (lo == hi) return dist(lo);
    std::vector<double> cuts = completions_between(lambda, lo, hi);
    for (double k : w.kinks()) cuts.push_back(k);
    return integrate(dist, lo, hi, cuts) / (hi - lo);
}

Schedule optimize_lambda_avg(const WeightFunction& w, const PredictionRange& range,
                             int grid_points) {
    require_positive_range(range);
    auto f = [&](double lam) { return d_avg(lam, w, range); };
    const double hi = 2.0 - 1e-12;
    // the objective jumps where a completion crosses a range endpoint
    std::vector<double> cuts{lambda_completing_at(range.lower),
                             lambda_completing_at(range.upper)};
    if (range.prediction) cuts.push_back(lambda_completing_at(*range.prediction));
    auto edges = detail::cell_edges(1.0, hi, cuts);
    ScalarMinimum best{1.0, f(1.0)};
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
        int pts = std::max(64, static_cast<int>(grid_points * (edges[i + 1] - edges[i])));
        auto m = minimize_scalar(f, edges[i], edges[i + 1], {pts, 1e-11});
        if (m.value < best.value - 1e-15) best = m;
    }
    // exact-crossing candidates
    for (double lam : cuts) {
        double v = f(lam);
        if (v < best.value - 1e-15) best = {lam, v};
    }
    return {best.argmin};
}

std::optional<Schedule> closed_form_lambda_avg_linear(double y, double delta) {
    if (!(delta > 0.0 && delta <= 1.0 / 3.0 + 1e-12)) return std::nullopt;
    const double yd = y * delta;
    const double A = 3.0 * yd * yd * yd - 25.0 * yd * yd * y + 9.0 * yd * y * y - 3.0 * y * y * y;
    const double B1 = 5.0 * yd * yd * yd - 39.0 * yd * yd * y + 15.0 * yd * y * y - 5.0 * y * y * y;
    const double B2 = yd * yd * yd - 9.0 * yd * yd * y + 3.0 * yd * y * y - y * y * y;
    const double l = (1.0 - delta) * y;
    int k0 = static_cast<int>(std::floor(std::log2(l)));
    for (int k = k0 - 2; k <= k0 + 2; ++k) {
        double p64 = std::ldexp(1.0, 6 * k);    // 64^k
        double p4096 = std::ldexp(1.0, 12 * k); // 4096^k
        double inner = p4096 * B1 * B2;
        if (!(inner >= 0.0)) continue;
        double C = std::cbrt(-3.0 * p64 * A + 4.0 * std::sqrt(inner));
        if (C == 0.0) continue;
        double lam = std::ldexp(1.0, -3 * (1 + k)) *
                     (std::ldexp(1.0, 2 * k) * y * (1.0 - delta) +
                      std::ldexp(1.0, 4 * k) * y * y * (delta - 1.0) * (delta - 1.0) / C + C);
        if (!(lam >= 1.0 && lam < 2.0)) continue;
        if (completion_index(lam, l) != k) continue;
        double next = std::ldexp(lam, k + 1);
        if (next < l || next > y) continue;  // derivation places one completion in [l, y]
        return Schedule{lam};
    }
    return std::nullopt;
}

double cvar_length(double lambda, const DistributionalPrediction& mu, double alpha, double y,
                   double delta) {
    require_lambda(lambda);
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw std::domain_error("contract cvar: alpha outside [0,1)");
    if (!(delta >= 0.0 && delta <= 1.0 / 3.0 + 1e-12))
        throw std::invalid_argument("contract cvar: delta must be <= 1/3");
    const double l = (1.0 - delta) * y;
    double base_half = largest_completed(lambda, l);
    double next = 4.0 * base_half;  // completion after the one at/below (1-delta)y
    double q = std::clamp(mu.cdf(next), 0.0, 1.0);
    double blended = base_half * (2.0 * (1.0 - alpha) - q) / (1.0 - alpha);
    return std::max(blended, base_half);
}

double cvar_length_limit(double lambda, double y, double delta) {
    require_lambda(lambda);
    return largest_completed(lambda, (1.0 - delta) * y);
}

Schedule optimize_lambda_cvar(const DistributionalPrediction& mu, double alpha, double y,
                              double delta, int grid_points) {
    if (!(delta >= 0.0 && delta <= 1.0 / 3.0 + 1e-12))
        throw std::invalid_argument("contract cvar: delta must be <= 1/3");
    auto F = [&](double lam) { return cvar_length(lam, mu, alpha, y, delta); };
    const double hi = 2.0 - 1e-12;
    std::vector<double> cands;
    int n = std::max(8, grid_points);
    for (int i = 0; i <= n; ++i) cands.push_back(1.0 + (hi - 1.0) * i / n);
    // jumps where a completion crosses the range ends or the support ends
    for (double target : {(1.0 - delta) * y, (1.0 + delta) * y, mu.support().lower,
                          mu.support().upper, y})
        if (target > 0.0) cands.push_back(lambda_completing_at(target));
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

    size_t best_i = 0;
    double best_v = -kInf;
    for (size_t i = 0; i < cands.size(); ++i) {
        double v = F(cands[i]);
        if (v > best_v + 1e-15 * std::max(1.0, std::abs(best_v))) {
            best_v = v;
            best_i = i;
        }
    }
    double lo_b = cands[best_i > 0 ? best_i - 1 : 0];
    double hi_b = cands[std::min(best_i + 1, cands.size() - 1)];
    double best_lam = cands[best_i];
    if (hi_b > lo_b) {
        auto refined = minimize_scalar([&](double lam) { return -F(lam); }, lo_b, hi_b,
                                       {128, 1e-12});
        if (-refined.value > best_v + 1e-12 * std::max(1.0, std::abs(best_v))) {
            best_lam = refined.argmin;
        }
    }
    return {best_lam};
}

Schedule baseline_schedule(BaselineKind kind, double y, double delta) {
    double target = kind == BaselineKind::ParetoOptimal ? y : (1.0 - delta) * y;
    return {lambda_completing_at(target)};
}

}  // namespace lad::contract
