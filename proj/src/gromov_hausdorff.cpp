#include "hcstab/gromov_hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hcstab {

double distortion(const Correspondence& tau, const FiniteMetricSpace& x,
                  const FiniteMetricSpace& y) {
    std::vector<bool> covered_x(x.size(), false), covered_y(y.size(), false);
    for (auto [i, j] : tau.pairs) {
        if (i < 0 || i >= x.size() || j < 0 || j >= y.size())
            throw Error("NotACorrespondence", "pair index out of range");
        covered_x[i] = true;
        covered_y[j] = true;
    }
    for (bool c : covered_x)
        if (!c) throw Error("NotACorrespondence", "left side not covered");
    for (bool c : covered_y)
        if (!c) throw Error("NotACorrespondence", "right side not covered");

    double sup = 0.0;
    for (std::size_t a = 0; a < tau.pairs.size(); ++a)
        for (std::size_t b = a; b < tau.pairs.size(); ++b) {
            auto [i, j] = tau.pairs[a];
            auto [k, l] = tau.pairs[b];
            sup = std::max(sup, std::abs(x.d(i, k) - y.d(j, l)));
        }
    return sup;
}

double gh_upper_from(const Correspondence& tau, const FiniteMetricSpace& x,
                     const FiniteMetricSpace& y) {
    return distortion(tau, x, y) / 2.0;
}

Correspondence identity_correspondence(int n) {
    Correspondence tau;
    for (int i = 0; i < n; ++i) tau.pairs.emplace_back(i, i);
    return tau;
}

namespace {

std::vector<double> sorted_distances_desc(const FiniteMetricSpace& m) {
    std::vector<double> out;
    for (int i = 0; i < m.size(); ++i)
        for (int j = i + 1; j < m.size(); ++j) out.push_back(m.d(i, j));
    std::sort(out.rbegin(), out.rend());
    return out;
}

}  // namespace

double gh_lower_bound(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
    double bound = std::abs(x.diameter() - y.diameter()) / 2.0;
    auto dx = sorted_distances_desc(x);
    auto dy = sorted_distances_desc(y);
    std::size_t len = std::max(dx.size(), dy.size());
    dx.resize(len, 0.0);
    dy.resize(len, 0.0);
    for (std::size_t q = 0; q < len; ++q)
        bound = std::max(bound, std::abs(dx[q] - dy[q]) / 2.0);
    return bound;
}

namespace {

/// Branch and bound over pairs of maps (f: X->Y, g: Y->X); the union of
/// their graphs is a correspondence, and every correspondence contains one
/// of this shape with no larger distortion.
class GhSolver {
public:
    GhSolver(const FiniteMetricSpace& x, const FiniteMetricSpace& y, std::uint64_t budget)
        : x_(x), y_(y), n_(x.size()), m_(y.size()), budget_(budget) {
        f_.assign(n_, -1);
        g_.assign(m_, -1);
        x_order_ = eccentricity_order(x_);
        y_order_ = eccentricity_order(y_);
        floor_ = std::abs(x_.diameter() - y_.diameter());
        seed_incumbent();
    }

    GHResult solve() {
        if (incumbent_ > floor_) dfs(0, 0.0);
        GHResult result;
        result.value = incumbent_ / 2.0;
        result.witness = best_witness_;
        result.exact = !aborted_;
        result.nodes_explored = nodes_;
        result.lower = result.exact ? result.value : gh_lower_bound(x_, y_);
        return result;
    }

private:
    static std::vector<int> eccentricity_order(const FiniteMetricSpace& s) {
        std::vector<double> ecc(s.size(), 0.0);
        for (int i = 0; i < s.size(); ++i)
            for (int j = 0; j < s.size(); ++j) ecc[i] = std::max(ecc[i], s.d(i, j));
        std::vector<int> order(s.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return ecc[a] > ecc[b]; });
        return order;
    }

    Correspondence current_witness() const {
        Correspondence tau;
        for (int i = 0; i < n_; ++i) tau.pairs.emplace_back(i, f_[i]);
        for (int j = 0; j < m_; ++j)
            if (g_[j] >= 0) {
                auto p = std::make_pair(g_[j], j);
                if (std::find(tau.pairs.begin(), tau.pairs.end(), p) == tau.pairs.end())
                    tau.pairs.push_back(p);
            }
        std::sort(tau.pairs.begin(), tau.pairs.end());
        return tau;
    }

    void seed_incumbent() {
        // greedy diameter-aligned start: pair off by eccentricity rank
        for (int r = 0; r < n_; ++r) f_[x_order_[r]] = y_order_[r % m_];
        for (int r = 0; r < m_; ++r) g_[y_order_[r]] = x_order_[r % n_];
        Correspondence tau = current_witness();
        incumbent_ = distortion(tau, x_, y_);
        best_witness_ = tau;
        std::fill(f_.begin(), f_.end(), -1);
        std::fill(g_.begin(), g_.end(), -1);
    }

    double extend_f(int xi, int yv) const {
        double worst = 0.0;
        for (int xj = 0; xj < n_; ++xj)
            if (f_[xj] >= 0)
                worst = std::max(worst, std::abs(x_.d(xi, xj) - y_.d(yv, f_[xj])));
        for (int yj = 0; yj < m_; ++yj)
            if (g_[yj] >= 0)
                worst = std::max(worst, std::abs(x_.d(xi, g_[yj]) - y_.d(yv, yj)));
        return worst;
    }

    double extend_g(int yj, int xv) const {
        double worst = 0.0;
        for (int xi = 0; xi < n_; ++xi)
            if (f_[xi] >= 0)
                worst = std::max(worst, std::abs(x_.d(xi, xv) - y_.d(f_[xi], yj)));
        for (int yl = 0; yl < m_; ++yl)
            if (g_[yl] >= 0)
                worst = std::max(worst, std::abs(x_.d(xv, g_[yl]) - y_.d(yj, yl)));
        return worst;
    }

    void dfs(int step, double current) {
        if (aborted_ || incumbent_ <= floor_) return;
        if (step == n_ + m_) {
            if (current < incumbent_) {
                incumbent_ = current;
                best_witness_ = current_witness();
            }
            return;
        }
        if (step < n_) {
            int xi = x_order_[step];
            for (int yv = 0; yv < m_; ++yv) {
                if (++nodes_ > budget_) { aborted_ = true; return; }
                double next = std::max(current, extend_f(xi, yv));
                if (next < incumbent_) {
                    f_[xi] = yv;
                    dfs(step + 1, next);
                    f_[xi] = -1;
                    if (aborted_ || incumbent_ <= floor_) return;
                }
            }
        } else {
            int yj = y_order_[step - n_];
            for (int xv = 0; xv < n_; ++xv) {
                if (++nodes_ > budget_) { aborted_ = true; return; }
                double next = std::max(current, extend_g(yj, xv));
                if (next < incumbent_) {
                    g_[yj] = xv;
                    dfs(step + 1, next);
                    g_[yj] = -1;
                    if (aborted_ || incumbent_ <= floor_) return;
                }
            }
        }
    }

    const FiniteMetricSpace& x_;
    const FiniteMetricSpace& y_;
    int n_, m_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    bool aborted_ = false;
    std::vector<int> f_, g_, x_order_, y_order_;
    double incumbent_ = std::numeric_limits<double>::infinity();
    double floor_ = 0.0;  // no correspondence beats the diameter gap
    Correspondence best_witness_;
};

}  // namespace

GHResult gh_exact(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                  std::uint64_t budget) {
    GhSolver solver(x, y, budget);
    return solver.solve();
}

}  // namespace hcstab
