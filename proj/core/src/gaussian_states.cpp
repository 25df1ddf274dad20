#include "lhv/gaussian_states.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lhv {

GaussianStateDescriptor GaussianStateDescriptor::create(Vec mean, CovarianceMatrix covariance,
                                                        std::vector<int> mode_partition,
                                                        double tol)
{
    if (mean.size() != covariance.dim()) {
        throw std::invalid_argument("GaussianStateDescriptor: mean/covariance dimension mismatch");
    }
    const int total = std::accumulate(mode_partition.begin(), mode_partition.end(), 0);
    if (total != covariance.modes || mode_partition.empty()) {
        throw std::invalid_argument("GaussianStateDescriptor: mode partition does not sum to the mode count");
    }
    if (quantum_margin(covariance) < -tol) {
        throw std::invalid_argument("GaussianStateDescriptor: covariance violates the uncertainty principle");
    }
    return {std::move(mean), std::move(covariance), std::move(mode_partition)};
}

GaussianStateDescriptor make_tmss(double nu)
{
    if (nu < 1.0) {
        throw std::invalid_argument("make_tmss: nu must be >= 1");
    }
    const double s = std::sqrt(nu * nu - 1.0);
    Mat v = Mat::Zero(4, 4);
    v.topLeftCorner(2, 2) = nu * Mat::Identity(2, 2);
    v.bottomRightCorner(2, 2) = nu * Mat::Identity(2, 2);
    Mat z = Mat::Identity(2, 2);
    z(1, 1) = -1.0;
    v.topRightCorner(2, 2) = s * z;
    v.bottomLeftCorner(2, 2) = s * z;
    return GaussianStateDescriptor::create(Vec::Zero(4), CovarianceMatrix::from_matrix(v), {1, 1});
}

GaussianStateDescriptor apply_pure_loss(const GaussianStateDescriptor& state, double eta_a,
                                        double eta_b)
{
    if (eta_a < 0.0 || eta_a > 1.0 || eta_b < 0.0 || eta_b > 1.0) {
        throw std::invalid_argument("apply_pure_loss: eta must lie in [0, 1]");
    }
    if (state.mode_partition.size() != 2) {
        throw std::invalid_argument("apply_pure_loss: per-party loss requires a bipartite state");
    }
    const int dim = state.covariance.dim();
    const int dim_a = 2 * state.mode_partition[0];
    Vec scale(dim);
    scale.head(dim_a).setConstant(std::sqrt(eta_a));
    scale.tail(dim - dim_a).setConstant(std::sqrt(eta_b));

    // Beam-splitter action on moments: V -> X V X + (I - X^2), X = diag(sqrt(eta)).
    Mat v = scale.asDiagonal() * state.covariance.matrix * scale.asDiagonal();
    v.diagonal() += (Vec::Ones(dim) - scale.cwiseProduct(scale));
    Vec mean = scale.cwiseProduct(state.mean);
    return GaussianStateDescriptor::create(std::move(mean), CovarianceMatrix::from_matrix(v),
                                           state.mode_partition);
}

GaussianStateDescriptor apply_pure_loss(const GaussianStateDescriptor& state, double eta)
{
    return apply_pure_loss(state, eta, eta);
}

GaussianStateDescriptor make_lossy_tmss(double nu, double eta)
{
    return apply_pure_loss(make_tmss(nu), eta);
}

bool is_ppt_entangled(const GaussianStateDescriptor& state, double tol)
{
    if (!state.is_two_party_single_mode()) {
        throw std::invalid_argument("is_ppt_entangled: only 1x1-mode bipartitions are supported");
    }
    Vec lambda(4);
    lambda << 1.0, 1.0, 1.0, -1.0;
    const Mat v_pt = lambda.asDiagonal() * state.covariance.matrix * lambda.asDiagonal();
    return quantum_margin(CovarianceMatrix::from_matrix(v_pt)) < -tol;
}

double state_wigner(const GaussianStateDescriptor& state, const Vec& point)
{
    return gaussian_density({state.mean, state.covariance}, point);
}

} // namespace lhv
