#include "lad/ski_rental.hpp"

#include <algorithm>
#include <cmath>

#include "piecewise_sup.hpp"

namespace lad::ski {

namespace {
constexpr double kRelTol = 1e-9;
}

SkiInstance::SkiInstance(double b, double r) : buy_cost(b), robustness(r) {
    if (!(b >= 1.0)) throw std::invalid_argument("ski: buy cost must be >= 1");
    if (!(r >= 2.0)) throw std::invalid_argument("ski: robustness must be >= 2");
}

double SkiInstance::ideal_switch() const {
    return std::min(buy_cost * robustness / (robustness - 1.0), buy_cost * (robustness - 1.0));
}

double cost(double threshold, double horizon, double buy_cost) {
    if (threshold < 0.0 || horizon < 0.0 || buy_cost < 0.0)
        throw std::invalid_argument("ski cost: negative argument");
    return horizon < threshold ? horizon : threshold + buy_cost;
}

Interval robust_range(const SkiInstance& inst) {
    return {inst.buy_cost / (inst.robustness - 1.0), inst.buy_cost * (inst.robustness - 1.0)};
}

double ideal_pr(const SkiInstance& inst, double x) {
    if (x < 0.0) throw std::invalid_argument("ski ideal_pr: negative horizon");
    const double b = inst.buy_cost, r = inst.robustness, m = inst.ideal_switch();
    if (x < b) return 1.0;
    if (x < m) return x / b;
    return r / (r - 1.0);
}

double ideal_pr_left(const SkiInstance& inst, double x) {
    const double b = inst.buy_cost, m = inst.ideal_switch();
    if (x <= b) return 1.0;
    if (x <= m) return x / b;
    return inst.robustness / (inst.robustness - 1.0);
}

namespace {

void require_robust(const SkiInstance& inst, double T) {
    auto rr = robust_range(inst);
    double slack = kRelTol * std::max(1.0, rr.hi);
    if (T < rr.lo - slack || T > rr.hi + slack)
        throw std::invalid_argument("ski: threshold is not r-robust");
}

// Smooth cells of the distance function for threshold T, each cell carrying
// the branch valid on its interior (so endpoint evaluation = one-sided limit).
std::vector<detail::Piece> distance_pieces(double T, const SkiInstance& inst,
                                           const WeightFunction& w, double lo, double hi) {
    const double b = inst.buy_cost, r = inst.robustness, m = inst.ideal_switch();
    std::vector<double> cuts{T, b, m, b * (r - 1.0)};
    for (double k : w.kinks()) cuts.push_back(k);
    auto edges = detail::cell_edges(lo, hi, cuts);
    std::vector<detail::Piece> pieces;
    pieces.reserve(edges.size());
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
        double a = edges[i], c = edges[i + 1];
        double mid = 0.5 * (a + c);
        bool rent = mid < T;
        double ideal;
        if (mid < b) {
            ideal = 1.0;
        } else if (mid < m) {
            ideal = -1.0;  // marker: x/b branch
        } else {
            ideal = r / (r - 1.0);
        }
        auto f = [=, &w](double x) {
            double opt = std::min(x, b);
            double c_alg = rent ? x : T + b;
            double idl = (ideal == -1.0) ? x / b : ideal;
            return (c_alg / opt - idl) * w(x);
        };
        pieces.push_back({a, c, f});
    }
    return pieces;
}

}  // namespace

double d_max(SkiPolicy policy, const SkiInstance& inst, const WeightFunction& w,
             const PredictionRange& range, SupOptions opts) {
    require_robust(inst, policy.threshold);
    const double T = policy.threshold;
    const double b = inst.buy_cost, r = inst.robustness;
    double hi = range.upper;
    if (!range.bounded()) {
        if (w.family() != WeightFamily::Uniform)
            throw std::invalid_argument("ski d_max: unbounded range requires the uniform weight");
        // The distance is constant past every breakpoint; one extra cell
        // covers the tail limit exactly.
        hi = 2.0 * std::max({inst.ideal_switch(), b * (r - 1.0), T, b, range.lower}) + 1.0;
    }
    auto pieces = distance_pieces(T, inst, w, range.lower, hi);
    return detail::sup_pieces(pieces, {opts.scan_points});
}

namespace {

// Critical thresholds from the two jump objectives: the distance a policy
// suffers at its own buy time, as a function of that buy time.
std::vector<double> critical_thresholds(const SkiInstance& inst, const WeightFunction& w,
                                        const PredictionRange& range) {
    const double b = inst.buy_cost, r = inst.robustness, m = inst.ideal_switch();
    auto rr = robust_range(inst);
    double lo = std::max(rr.lo, 1e-9);
    double hi = rr.hi;

    std::vector<double> cuts{b, m, b * (r - 1.0)};
    for (double k : w.kinks()) cuts.push_back(k);

    // class below b: jump value (b/z) * w(z)
    auto j1 = [&](double z) {
        auto d = w.derivative(z);
        double wd = 0.5 * (d.left + d.right);
        return -b / (z * z) * w(z) + (b / z) * wd;
    };
    // class at/above b: jump value ((z+b)/b - ideal(z)) * w(z)
    auto j2 = [&](double z) {
        auto d = w.derivative(z);
        double wd = 0.5 * (d.left + d.right);
        double ideal_d = (z > b && z < m) ? 1.0 / b : 0.0;
        double ideal = ideal_pr(inst, z);
        return (1.0 / b - ideal_d) * w(z) + ((z + b) / b - ideal) * wd;
    };

    std::vector<double> cands{rr.lo, rr.hi, b, m, b * (r - 1.0)};
    if (range.prediction) cands.push_back(*range.prediction);
    cands.push_back(std::clamp(range.lower, lo, hi));
    if (range.bounded()) cands.push_back(std::clamp(range.upper, lo, hi));
    if (b > lo)
        for (double z : find_roots(j1, lo, std::min(b, hi), cuts)) cands.push_back(z);
    if (hi > b)
        for (double z : find_roots(j2, std::max(b, lo), hi, cuts)) cands.push_back(z);
    for (double& c : cands) c = std::clamp(c, rr.lo, rr.hi);
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    return cands;
}

}  // namespace

SkiPolicy optimize_T_max(const SkiInstance& inst, const WeightFunction& w,
                         const PredictionRange& range, OptimizeOptions opts) {
    auto rr = robust_range(inst);
    auto objective = [&](double T, int scan) {
        return d_max({T}, inst, w, range, {scan});
    };

    std::vector<double> cands = critical_thresholds(inst, w, range);
    int n = std::max(4, opts.explore_grid);
    for (int i = 0; i <= n; ++i) cands.push_back(rr.lo + (rr.hi - rr.lo) * i / n);
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

    // coarse pass
    size_t best_i = 0;
    double best_v = kInf;
    std::vector<double> coarse(cands.size());
    for (size_t i = 0; i < cands.size(); ++i) {
        coarse[i] = objective(cands[i], opts.explore_scan);
        if (coarse[i] < best_v) {
            best_v = coarse[i];
            best_i = i;
        }
    }
    // local refinement between the neighbors of the coarse winner
    double lo = cands[best_i > 0 ? best_i - 1 : 0];
    double hi = cands[std::min(best_i + 1, cands.size() - 1)];
    if (hi > lo) {
        auto refined = minimize_scalar([&](double T) { return objective(T, opts.explore_scan); },
                                       lo, hi, {256, 1e-10});
        cands.push_back(refined.argmin);
    }

    // final ranking at full resolution, keeping only the promising candidates
    double T_best = rr.lo;
    double v_best = kInf;
    for (double T : cands) {
        double v = objective(T, opts.final_scan);
        if (v < v_best - 1e-15) {
            v_best = v;
            T_best = T;
        }
    }
    // paper tie-break: prefer buying exactly at b when it is optimal
    double b = inst.buy_cost;
    if (rr.contains(b)) {
        double vb = objective(b, opts.final_scan);
        if (vb <= v_best + 1e-12 * std::max(1.0, std::abs(v_best))) return {b};
    }
    return {T_best};
}

double d_avg(SkiPolicy policy, const SkiInstance& inst, const WeightFunction& w,
             const PredictionRange& range) {
    require_robust(inst, policy.threshold);
    if (!range.bounded()) throw std::invalid_argument("ski d_avg: range must be bounded");
    const double T = policy.threshold;
    const double b = inst.buy_cost;
    auto dist = [&](double x) {
        double c_alg = x < T ? x : T + b;
        return (c_alg / std::min(x, b) - ideal_pr(inst, x)) * w(x);
    };
    if (range.lower == range.upper) return dist(range.lower);
    std::vector<double> cuts{T, b, inst.ideal_switch(), b * (inst.robustness - 1.0)};
    for (double k : w.kinks()) cuts.push_back(k);
    double integral = integrate(dist, range.lower, range.upper, cuts);
    return integral / (range.upper - range.lower);
}

SkiPolicy optimize_T_avg(const SkiInstance& inst, const WeightFunction& w,
                         const PredictionRange& range, int grid_points) {
    auto rr = robust_range(inst);
    auto f = [&](double T) { return d_avg({T}, inst, w, range); };
    // d_avg is smooth except where T crosses a breakpoint of the integrand
    std::vector<double> cuts{inst.buy_cost, inst.ideal_switch(), range.lower, range.upper};
    if (range.prediction) cuts.push_back(*range.prediction);
    auto edges = detail::cell_edges(rr.lo, rr.hi, cuts);
    double total = rr.hi - rr.lo;
    ScalarMinimum best{rr.lo, f(rr.lo)};
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
        int pts = total > 0.0
                      ? std::max(32, static_cast<int>(grid_points * (edges[i + 1] - edges[i]) / total))
                      : 32;
        auto m = minimize_scalar(f, edges[i], edges[i + 1], {pts, 1e-10});
        if (m.value < best.value) best = m;
    }
    double b = inst.buy_cost;
    if (rr.contains(b) && f(b) <= best.value + 1e-12 * std::max(1.0, std::abs(best.value)))
        return {b};
    return {best.argmin};
}

double cvar_cost(SkiPolicy policy, const DistributionalPrediction& mu, double alpha,
                 double buy_cost) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw std::domain_error("ski cvar: alpha outside [0,1)");
    const double T = policy.threshold, b = buy_cost;
    const double q = mu.tail_mass(T);
    double tail_avg = T + b * q / (1.0 - alpha);
    double worst = T + b;
    double t_star = alpha > 0.0 ? mu.quantile(alpha) : mu.support().lower;
    if (t_star <= T) {
        double rent_part = mu.partial_expectation(t_star, T);
        double blended = (rent_part + (T + b) * q) / (1.0 - alpha);
        return std::min({blended, tail_avg, worst});
    }
    return std::min(tail_avg, worst);
}

double cvar_cost_limit(SkiPolicy policy, const DistributionalPrediction& mu, double buy_cost) {
    return mu.tail_mass(policy.threshold) > 0.0 ? policy.threshold + buy_cost
                                                : mu.support().upper;
}

SkiPolicy optimize_T_cvar(const SkiInstance& inst, const DistributionalPrediction& mu,
                          double alpha, int grid_points) {
    auto rr = robust_range(inst);
    auto f = [&](double T) { return cvar_cost({T}, mu, alpha, inst.buy_cost); };
    int n = std::max(2, grid_points);
    double best = kInf;
    std::vector<double> vals(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        double T = rr.lo + (rr.hi - rr.lo) * i / n;
        vals[i] = f(T);
        best = std::min(best, vals[i]);
    }
    double tie = 1e-12 * std::max(1.0, std::abs(best));
    int right = n;
    while (right > 0 && vals[right] > best + tie) --right;
    double lo = rr.lo + (rr.hi - rr.lo) * std::max(0, right - 1) / n;
    double hi = rr.lo + (rr.hi - rr.lo) * std::min(n, right + 1) / n;
    auto refined = minimize_scalar(f, lo, hi, {64, 1e-12});
    if (refined.value < best - tie) return {refined.argmin};
    return {rr.lo + (rr.hi - rr.lo) * right / n};
}

SkiPolicy baseline_bp(double y, double rho, const SkiInstance& inst) {
    auto rr = robust_range(inst);
    double slack = kRelTol * std::max(1.0, rr.hi);
    if (rho < inst.buy_cost - slack || rho > rr.hi + slack)
        throw std::invalid_argument("ski baseline: rho outside [b, b(r-1)]");
    return {y >= inst.buy_cost ? rr.lo : rho};
}

}  // namespace lad::ski
