#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace lhv::detail {

/// Golden-section minimization of f on [a, b]. Assumes a bracketed minimum;
/// returns the midpoint of the final interval.
template <typename F>
double golden_section_min(F&& f, double a, double b, double x_tol = 1e-12, int max_iter = 200)
{
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int i = 0; i < max_iter && (b - a) > x_tol; ++i) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

struct NelderMeadResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int evaluations = 0;
};

/// Deterministic Nelder-Mead with a fixed evaluation budget. `scale` sets the
/// initial simplex edge length around `start`; stops early once the simplex
/// value spread falls below f_tol.
inline NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                                    const Eigen::VectorXd& start, double scale, int budget,
                                    double f_tol = 1e-6)
{
    const int n = static_cast<int>(start.size());
    int evals = 0;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++evals;
        return f(x);
    };

    std::vector<Eigen::VectorXd> pts(n + 1, start);
    std::vector<double> vals(n + 1);
    for (int i = 0; i < n; ++i) pts[i + 1](i) += scale;
    for (int i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

    auto order = [&]() {
        std::vector<int> idx(n + 1);
        for (int i = 0; i <= n; ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return vals[a] < vals[b]; });
        std::vector<Eigen::VectorXd> p2(n + 1);
        std::vector<double> v2(n + 1);
        for (int i = 0; i <= n; ++i) {
            p2[i] = pts[idx[i]];
            v2[i] = vals[idx[i]];
        }
        pts.swap(p2);
        vals.swap(v2);
    };

    while (evals < budget) {
        order();
        if (vals[n] - vals[0] < f_tol) break;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) centroid += pts[i];
        centroid /= n;

        const Eigen::VectorXd reflected = centroid + (centroid - pts[n]);
        const double fr = eval(reflected);
        if (fr < vals[0]) {
            const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - pts[n]);
            const double fe = eval(expanded);
            if (fe < fr) {
                pts[n] = expanded;
                vals[n] = fe;
            } else {
                pts[n] = reflected;
                vals[n] = fr;
            }
        } else if (fr < vals[n - 1]) {
            pts[n] = reflected;
            vals[n] = fr;
        } else {
            const Eigen::VectorXd contracted = centroid + 0.5 * (pts[n] - centroid);
            const double fc = eval(contracted);
            if (fc < vals[n]) {
                pts[n] = contracted;
                vals[n] = fc;
            } else {
                for (int i = 1; i <= n; ++i) {
                    pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
                    vals[i] = eval(pts[i]);
                    if (evals >= budget) break;
                }
            }
        }
    }
    order();
    return {pts[0], vals[0], evals};
}

} // namespace lhv::detail
