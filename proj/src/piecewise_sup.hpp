#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

// Supremum of a piecewise-smooth objective. Each piece carries its own smooth
// branch valid on the closed interval [lo, hi]; evaluating a branch at its
// endpoints yields the one-sided limit there, so discontinuities between
// pieces are handled without any finite epsilon.

namespace lad::detail {

struct Piece {
    double lo;
    double hi;
    std::function<double(double)> f;
};

struct SupOptions {
    int scan_points = 256;  // per piece
};

inline double golden_max(const std::function<double(double)>& f, double lo, double hi,
                         double x_tol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > x_tol) {
        if (f1 >= f2) {
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
    return f(0.5 * (lo + hi));
}

// Sup over one piece: endpoint limits, an interior scan, and golden-section
// refinement of every interior local maximum found by the scan.
inline double sup_piece(const Piece& p, const SupOptions& opts = {}) {
    double best = std::max(p.f(p.lo), p.f(p.hi));
    if (p.hi <= p.lo) return best;
    int n = std::max(4, opts.scan_points);
    std::vector<double> vals(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) vals[i] = p.f(p.lo + (p.hi - p.lo) * i / n);
    double x_tol = 1e-12 * (p.hi - p.lo) + 1e-300;
    for (int i = 1; i < n; ++i) {
        if (vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1]) {
            double lo = p.lo + (p.hi - p.lo) * (i - 1) / n;
            double hi = p.lo + (p.hi - p.lo) * (i + 1) / n;
            best = std::max(best, golden_max(p.f, lo, hi, x_tol));
        }
    }
    return best;
}

inline double sup_pieces(const std::vector<Piece>& pieces, const SupOptions& opts = {}) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : pieces) best = std::max(best, sup_piece(p, opts));
    return best;
}

// Splits [lo, hi] at the interior cut points and materializes one piece per
// cell, all sharing the same branch selector (which receives the cell
// midpoint to pick the branch, then evaluates at the requested x).
inline std::vector<double> cell_edges(double lo, double hi, std::vector<double> cuts) {
    std::vector<double> edges{lo, hi};
    for (double c : cuts)
        if (c > lo && c < hi && std::isfinite(c)) edges.push_back(c);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

}  // namespace lad::detail
