#pragma once

#include "lhv/gaussian_states.hpp"
#include "lhv/wigner_forms.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

// Noise-transfer locality certification. A certificate consists of matrices
// gamma_A, gamma_B >= 0 with V >= gamma_A (+) gamma_B such that every
// measurement Wigner function convolved with the matching Gaussian noise is
// nonnegative; the correlations then admit a local-hidden-variable model
// executed by the sampler module.

namespace lhv {

/// Nonnegativity tolerance for closed-form (symbolic) minima.
inline constexpr double kClosedFormMinTol = 1e-10;
/// Nonnegativity tolerance for grid-based minima.
inline constexpr double kGridMinTol = 1e-8;

struct LocalityCertificate {
    CovarianceMatrix gamma_a;
    CovarianceMatrix gamma_b;
    CovarianceMatrix omega; // V - gamma_A (+) gamma_B
    double omega_min_eigenvalue = 0.0;

    /// Minimum of each convolved element, keyed "A<i>:<outcome>" / "B<i>:<outcome>".
    /// Empty for universal certificates.
    std::map<std::string, double> min_values;

    /// Smallest slack over all certificate checks.
    double margin = 0.0;

    /// Set when gamma_A, gamma_B are quantum-valid covariances: the model is
    /// then valid for every POVM, not just the families that were checked.
    bool universal = false;

    /// Isotropic noise level when gamma_A = gamma_B = t I2.
    std::optional<double> isotropic_t;
};

/// Theorem-style search restricted to gamma_A = gamma_B = t I2 for a
/// 1x1-mode state: takes the largest admissible t (the smallest eigenvalue of
/// V) and accepts iff every convolved element of every family is nonnegative
/// there. Heat-flow monotonicity makes testing only the largest t sufficient.
std::optional<LocalityCertificate> certify_isotropic(const GaussianStateDescriptor& state,
                                                     std::span<const PovmFamily> families_a,
                                                     std::span<const PovmFamily> families_b);

/// Separable states always admit an LHV model for arbitrary measurements.
/// Uses the partial-transpose test, then the isotropic split with t >= 1
/// (sufficient for symmetric families such as the lossy two-mode squeezed
/// state); returns absent for entangled states, and for separable states the
/// isotropic family cannot reach.
std::optional<LocalityCertificate> certify_separable(const GaussianStateDescriptor& state);

/// Direct check of user-supplied candidate (gamma_A, gamma_B) splittings; each
/// pair is tested individually via grid convolution (no monotonicity assumed).
/// Returns the first candidate whose checks all pass.
std::optional<LocalityCertificate> certify_with_candidates(
    const GaussianStateDescriptor& state, std::span<const PovmFamily> families_a,
    std::span<const PovmFamily> families_b,
    const std::vector<std::pair<CovarianceMatrix, CovarianceMatrix>>& candidates);

/// Closed-form locality condition for the lossy two-mode squeezed state with
/// displaced click detection: 1 + eta (nu - 1 - sqrt(nu^2-1)) >= sqrt(1-4 eps).
bool region_condition(double eta, double nu, double epsilon);

/// Loss transmittance at which the closed-form condition becomes an equality:
/// eta* = (1 - sqrt(1-4 eps)) / (sqrt(nu^2-1) - (nu-1)). Absent for nu <= 1
/// (the condition holds for every eta) and when the boundary exceeds 1.
std::optional<double> boundary_eta(double nu, double epsilon);

enum class RegionStatus { lhv_certified, chsh_violating, undetermined };

const char* to_string(RegionStatus status);

} // namespace lhv
