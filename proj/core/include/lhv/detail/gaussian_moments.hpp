#pragma once

#include <Eigen/Dense>

#include <array>
#include <span>
#include <stdexcept>

namespace lhv::detail {

/// Central moment E[g_{v0} g_{v1} ...] of a zero-mean Gaussian with covariance
/// `cov`, for up to four (repeatable) variable indices. Isserlis pairing.
inline double central_moment(const Eigen::MatrixXd& cov, std::span<const int> vars)
{
    switch (vars.size()) {
    case 0: return 1.0;
    case 2: return cov(vars[0], vars[1]);
    case 4:
        return cov(vars[0], vars[1]) * cov(vars[2], vars[3]) +
               cov(vars[0], vars[2]) * cov(vars[1], vars[3]) +
               cov(vars[0], vars[3]) * cov(vars[1], vars[2]);
    case 1:
    case 3: return 0.0;
    default: throw std::invalid_argument("central_moment: supported up to degree 4");
    }
}

/// E[prod_i z_{v_i}] for z ~ N(mean, cov), expanding around the mean.
inline double gaussian_moment(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                              std::span<const int> vars)
{
    const unsigned n = static_cast<unsigned>(vars.size());
    if (n > 4) throw std::invalid_argument("gaussian_moment: supported up to degree 4");
    double total = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        double mean_product = 1.0;
        std::array<int, 4> centered{};
        int k = 0;
        for (unsigned i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                centered[k++] = vars[i];
            } else {
                mean_product *= mean(vars[i]);
            }
        }
        total += mean_product * central_moment(cov, std::span<const int>(centered.data(), k));
    }
    return total;
}

} // namespace lhv::detail
