#include "lad/one_max.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "piecewise_sup.hpp"

namespace lad::onemax {

OneMaxInstance::OneMaxInstance(double M, double r) : price_bound(M), robustness(r) {
    if (!(M > 1.0)) throw std::invalid_argument("one-max: price bound must be > 1");
    if (!(r >= std::sqrt(M) * (1.0 - 1e-12)))
        throw std::invalid_argument("one-max: robustness must be >= sqrt(M)");
}

PriceSeries::PriceSeries(std::vector<double> prices) : prices_(std::move(prices)) {
    if (prices_.empty()) throw std::invalid_argument("price series: empty");
    max_ = prices_[0];
    min_ = prices_[0];
    for (double p : prices_) {
        if (!(p > 0.0) || !std::isfinite(p))
            throw std::invalid_argument("price series: prices must be positive and finite");
        max_ = std::max(max_, p);
        min_ = std::min(min_, p);
    }
}

double run_threshold(double threshold, const PriceSeries& prices, SequenceModel mode) {
    if (!(threshold > 0.0)) throw std::invalid_argument("run_threshold: threshold must be > 0");
    for (double p : prices.prices())
        if (p >= threshold) return p;
    return mode == SequenceModel::WorstCase ? 1.0 : prices.min_price();
}

double ideal_pr(const OneMaxInstance& inst, double x) {
    if (x < 1.0 || x > inst.price_bound)
        throw std::invalid_argument("one-max ideal_pr: price outside [1, M]");
    if (x < inst.t1()) return x;
    if (x <= inst.t2()) return 1.0;
    return x / inst.t2();
}

double game_payoff(double threshold, double x, const OneMaxInstance& inst,
                   const WeightFunction& w) {
    const double T = threshold, t2 = inst.t2();
    if (x < T) return (T - 1.0) * w(x);
    if (x <= t2) return (x / T - 1.0) * w(x);
    return (x / T - x / t2) * w(x);
}

namespace {

void require_robust(const OneMaxInstance& inst, double T) {
    double slack = 1e-9 * std::max(1.0, inst.t2());
    if (T < inst.t1() - slack || T > inst.t2() + slack)
        throw std::invalid_argument("one-max: threshold is not r-robust");
}

void require_delta(double delta) {
    if (!(delta >= 0.0 && delta <= 1.0))
        throw std::invalid_argument("one-max: delta outside [0,1]");
}

}  // namespace

double d_max(OneMaxPolicy policy, const OneMaxInstance& inst, const WeightFunction& w, double y,
             double delta, int scan_points) {
    require_robust(inst, policy.threshold);
    require_delta(delta);
    const double T = policy.threshold, t2 = inst.t2();
    const double lo = (1.0 - delta) * y, hi = (1.0 + delta) * y;
    // undercut: weighted at the closest admissible price below the threshold
    double best = (T - 1.0) * w(std::clamp(T, lo, std::min(y, hi)));
    std::vector<detail::Piece> pieces;
    double a1 = std::max(T, lo), b1 = std::min(t2, hi);
    if (b1 >= a1) {
        auto edges = detail::cell_edges(a1, b1, {y});
        for (size_t i = 0; i + 1 < edges.size(); ++i)
            pieces.push_back({edges[i], edges[i + 1], [=, &w](double x) {
                                  return (x / T - 1.0) * w(x);
                              }});
    }
    double a2 = std::max({T, t2, lo});
    if (hi > t2 && hi >= a2) {
        auto edges = detail::cell_edges(a2, hi, {y});
        for (size_t i = 0; i + 1 < edges.size(); ++i)
            pieces.push_back({edges[i], edges[i + 1], [=, &w](double x) {
                                  return (x / T - x / t2) * w(x);
                              }});
    }
    if (!pieces.empty()) best = std::max(best, detail::sup_pieces(pieces, {scan_points}));
    return std::max(best, 0.0);
}

OneMaxPolicy optimize_T_max_unweighted(const OneMaxInstance& inst, double y, double delta) {
    require_delta(delta);
    const double t1 = inst.t1(), t2 = inst.t2();
    const double lo = (1.0 - delta) * y, hi = (1.0 + delta) * y;
    if (hi <= t1) return {t1};
    if (lo >= t2) return {t2};
    if (hi <= t2) return {std::clamp(std::sqrt(hi), t1, t2)};
    // balance (hi/T - hi/t2) = T - 1, the positive root of the quadratic
    double disc = (hi - t2) * (hi - t2) + 4.0 * t2 * t2 * hi;
    double T = (t2 - hi + std::sqrt(disc)) / (2.0 * t2);
    return {std::clamp(T, t1, t2)};
}

std::optional<double> linear_game_threshold(double y, double delta) {
    if (!(delta > 0.0)) return std::nullopt;
    const double l = (1.0 - delta) * y;
    const double h = delta * y;
    // undercut value (T-1)(T-l)/h against the post-threshold peak value
    // ((1+delta)y - T)^2 / (4hT); the optimal threshold balances the two.
    auto f = [&](double T) {
        double v1 = (T - 1.0) * (T - l) / h;
        double v4 = ((1.0 + delta) * y - T) * ((1.0 + delta) * y - T) / (4.0 * h * T);
        return v1 - v4;
    };
    auto roots = find_roots(f, std::max(l, 1.0), y);
    if (roots.empty()) return std::nullopt;
    return roots.front();
}

OneMaxPolicy optimize_T_max_weighted(const OneMaxInstance& inst, const WeightFunction& w, double y,
                                     double delta) {
    require_delta(delta);
    const double t1 = inst.t1(), t2 = inst.t2();
    if (w.family() == WeightFamily::Uniform) return optimize_T_max_unweighted(inst, y, delta);
    if (delta == 0.0) return {std::clamp(y, t1, t2)};
    const double lo = (1.0 - delta) * y, hi = (1.0 + delta) * y;
    if (w.family() == WeightFamily::LinearSymmetric && lo >= t1 && hi <= t2) {
        if (auto root = linear_game_threshold(y, delta))
            return {std::clamp(*root, t1, t2)};
    }
    auto f = [&](double T) { return d_max({T}, inst, w, y, delta, 96); };
    auto m = minimize_scalar(f, t1, t2, {512, 1e-10});
    // candidate structural points
    double best_T = m.argmin, best_v = m.value;
    for (double T : {t1, t2, std::clamp(lo, t1, t2), std::clamp(y, t1, t2),
                     std::clamp(std::sqrt(hi), t1, t2)}) {
        double v = f(T);
        if (v < best_v - 1e-15) {
            best_v = v;
            best_T = T;
        }
    }
    return {best_T};
}

double d_avg(OneMaxPolicy policy, const OneMaxInstance& inst, const WeightFunction& w, double y,
             double delta) {
    require_robust(inst, policy.threshold);
    require_delta(delta);
    const double T = policy.threshold, t1 = inst.t1(), t2 = inst.t2();
    const double lo = (1.0 - delta) * y, hi = (1.0 + delta) * y;
    auto dist = [&](double x) {
        double d;
        if (x < T)
            d = x < t1 ? 0.0 : x - 1.0;
        else if (x <= t2)
            d = x / T - 1.0;
        else
            d = x / T - x / t2;
        return d * w(x);
    };
    if (lo == hi) return dist(y);
    double integral = integrate(dist, lo, hi, {T, t1, t2, y});
    return integral / (hi - lo);
}

OneMaxPolicy optimize_T_avg(const OneMaxInstance& inst, const WeightFunction& w, double y,
                            double delta, int grid_points) {
    require_delta(delta);
    const double t1 = inst.t1(), t2 = inst.t2();
    auto f = [&](double T) { return d_avg({T}, inst, w, y, delta); };
    auto edges = detail::cell_edges(t1, t2, {y, (1.0 - delta) * y, (1.0 + delta) * y});
    double total = t2 - t1;
    ScalarMinimum best{t1, f(t1)};
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
        int pts = total > 0.0
                      ? std::max(32, static_cast<int>(grid_points * (edges[i + 1] - edges[i]) / total))
                      : 32;
        auto m = minimize_scalar(f, edges[i], edges[i + 1], {pts, 1e-10});
        if (m.value < best.value) best = m;
    }
    return {best.argmin};
}

namespace {

double cvar_first_term(double T, const WorstCaseModel& model, double alpha) {
    double q = model.mu.mass_below(T);
    return (T * (1.0 - alpha - q) + q) / (1.0 - alpha);
}

}  // namespace

double cvar_profit(OneMaxPolicy policy, const WorstCaseModel& model, double alpha, double y,
                   double delta) {
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw std::domain_error("one-max cvar: alpha outside [0,1)");
    require_delta(delta);
    return std::max(cvar_first_term(policy.threshold, model, alpha), (1.0 - delta) * y);
}

double cvar_profit_limit(OneMaxPolicy, const WorstCaseModel&, double y, double delta) {
    require_delta(delta);
    return (1.0 - delta) * y;
}

OneMaxPolicy optimize_T_cvar(const OneMaxInstance& inst, const WorstCaseModel& model, double alpha,
                             double y, double delta, int grid_points) {
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw std::domain_error("one-max cvar: alpha outside [0,1)");
    require_delta(delta);
    const double t1 = inst.t1(), t2 = inst.t2();
    auto F = [&](double T) { return cvar_profit({T}, model, alpha, y, delta); };

    int n = std::max(2, grid_points);
    std::vector<double> xs;
    xs.reserve(static_cast<size_t>(n) + 4);
    for (int i = 0; i <= n; ++i) xs.push_back(t1 + (t2 - t1) * i / n);
    for (double c : {y, (1.0 - delta) * y, (1.0 + delta) * y})
        if (c >= t1 && c <= t2) xs.push_back(c);
    std::sort(xs.begin(), xs.end());

    double best = -kInf;
    for (double x : xs) best = std::max(best, F(x));
    double tie = 1e-12 * std::max(1.0, std::abs(best));

    // golden refinement around the best bracket
    size_t bi = 0;
    for (size_t i = 0; i < xs.size(); ++i)
        if (F(xs[i]) >= best - tie) {
            bi = i;
            break;
        }
    double lo = xs[bi > 0 ? bi - 1 : 0], hi = xs[std::min(bi + 1, xs.size() - 1)];
    if (hi > lo) {
        auto refined = minimize_scalar([&](double T) { return -F(T); }, lo, hi, {64, 1e-12});
        if (-refined.value > best + tie) return {refined.argmin};
    }
    // flat at the top: break the tie by the tail-average term, then leftmost
    double best_T = xs.front(), best_first = -kInf;
    for (double x : xs) {
        if (F(x) < best - tie) continue;
        double ft = cvar_first_term(x, model, alpha);
        if (ft > best_first + tie) {
            best_first = ft;
            best_T = x;
        }
    }
    return {best_T};
}

double alpha_consistency(OneMaxPolicy policy, const WorstCaseModel& model, double alpha, double y,
                         double delta) {
    return model.mu.expectation() / cvar_profit(policy, model, alpha, y, delta);
}

double alpha_consistency_limit(OneMaxPolicy policy, const WorstCaseModel& model, double y,
                               double delta) {
    return model.mu.expectation() / cvar_profit_limit(policy, model, y, delta);
}

Baselines baselines(double y, const OneMaxInstance& inst, double delta,
                    const ThresholdRule& po1_rule) {
    require_delta(delta);
    const double t1 = inst.t1(), t2 = inst.t2();
    Baselines out;
    out.delta_tol = {std::clamp((1.0 - delta) * y, t1, t2)};
    out.po2 = {std::min(t2, std::max(t1, y))};
    if (po1_rule) {
        out.po1 = {po1_rule(y, inst, delta)};
    } else {
        static bool warned = false;
        if (!warned) {
            std::fprintf(stderr,
                         "warning: no PO1 threshold rule configured; falling back to the PO2 "
                         "rule for the PO1 baseline\n");
            warned = true;
        }
        out.po1 = out.po2;
    }
    return out;
}

}  // namespace lad::onemax
