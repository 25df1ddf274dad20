#pragma once

#include "lhv/symplectic.hpp"

#include <vector>

// Constructors and analyses for the Gaussian states used by the certifier:
// the two-mode squeezed state, the pure-loss channel, state Wigner evaluation,
// and the partial-transpose entanglement test.

namespace lhv {

/// Squeezing / loss parameters of the lossy two-mode squeezed state.
struct TmssParameters {
    double nu = 1.0;  // symplectic parameter, >= 1
    double eta = 1.0; // loss transmittance, in [0, 1]
};

/// A Gaussian state: mean vector, quantum-valid covariance, and a bipartition
/// of its modes into parties.
struct GaussianStateDescriptor {
    Vec mean;
    CovarianceMatrix covariance;
    std::vector<int> mode_partition; // per-party mode counts, e.g. {1, 1}

    int modes() const { return covariance.modes; }
    bool is_two_party_single_mode() const
    {
        return mode_partition.size() == 2 && mode_partition[0] == 1 && mode_partition[1] == 1;
    }

    /// Validates the uncertainty principle and the partition sum.
    static GaussianStateDescriptor create(Vec mean, CovarianceMatrix covariance,
                                          std::vector<int> mode_partition,
                                          double tol = kDefaultTol);
};

/// Two-mode squeezed state with zero mean and covariance
/// [[nu I2, s Z], [s Z, nu I2]], s = sqrt(nu^2 - 1), Z = diag(1, -1).
/// Throws std::invalid_argument for nu < 1.
GaussianStateDescriptor make_tmss(double nu);

/// Local pure-loss channel of transmittance eta applied to every mode of each
/// party: per party, V -> eta V + (1 - eta) I and mean -> sqrt(eta) mean.
GaussianStateDescriptor apply_pure_loss(const GaussianStateDescriptor& state, double eta);

/// Per-party transmittances (eta_a on the first party, eta_b on the second).
GaussianStateDescriptor apply_pure_loss(const GaussianStateDescriptor& state, double eta_a,
                                        double eta_b);

/// make_tmss followed by symmetric loss.
GaussianStateDescriptor make_lossy_tmss(double nu, double eta);

/// Partial-transpose entanglement test for 1x1-mode bipartitions, where it is
/// necessary and sufficient: true iff Lambda V Lambda violates the uncertainty
/// principle, with Lambda = diag(1, 1, 1, -1).
bool is_ppt_entangled(const GaussianStateDescriptor& state, double tol = kDefaultTol);

/// Wigner function of the state at a phase-space point (a Gaussian density).
double state_wigner(const GaussianStateDescriptor& state, const Vec& point);

} // namespace lhv
