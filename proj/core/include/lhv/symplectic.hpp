#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

// Phase-space linear algebra for bosonic Gaussian states.
//
// Conventions (fixed throughout the library):
//   * hbar = 2, so the vacuum covariance matrix is the identity.
//   * Quadratures are ordered (q1, p1, ..., qN, pN).
//   * The symplectic form is the direct sum of [[0, 1], [-1, 0]] blocks.

namespace lhv {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Default absolute tolerance on eigenvalues and matrix asymmetry.
inline constexpr double kDefaultTol = 1e-9;

/// Covariance eigenvalues below this are treated as exactly zero
/// (deterministic directions of a degenerate Gaussian).
inline constexpr double kEigenvalueClamp = 1e-12;

struct SymplecticForm {
    int modes = 0;
    Mat matrix; // 2N x 2N, antisymmetric, squares to -identity
};

/// Block-diagonal symplectic form on `modes` modes. Throws std::invalid_argument
/// for modes < 1.
SymplecticForm make_symplectic_form(int modes);

/// Real symmetric 2N x 2N matrix in quadrature-variance units.
///
/// Two validity levels are used throughout: "classical" (positive semidefinite)
/// and "quantum" (V + i*Omega >= 0, the uncertainty principle). Boundary cases
/// are decided through the *_margin functions, which report the smallest
/// eigenvalue instead of a bare boolean.
struct CovarianceMatrix {
    int modes = 0;
    Mat matrix;

    int dim() const { return 2 * modes; }

    /// Validates squareness, even dimension, and symmetry within sym_tol.
    /// The stored matrix is symmetrized, (M + M^T)/2.
    static CovarianceMatrix from_matrix(const Mat& m, double sym_tol = kDefaultTol);

    /// t * identity on `modes` modes.
    static CovarianceMatrix isotropic(int modes, double t);

    static CovarianceMatrix zero(int modes) { return isotropic(modes, 0.0); }
};

/// A (+) B on the block diagonal.
CovarianceMatrix direct_sum(const CovarianceMatrix& a, const CovarianceMatrix& b);

/// Smallest eigenvalue of V.
double classical_margin(const CovarianceMatrix& v);

/// Smallest eigenvalue of the Hermitian matrix V + i*Omega.
double quantum_margin(const CovarianceMatrix& v);

/// Smallest eigenvalue of V - (A (+) B). Throws on dimension mismatch.
double psd_order_margin(const CovarianceMatrix& v, const CovarianceMatrix& a,
                        const CovarianceMatrix& b);

/// Uncertainty-principle test: true iff quantum_margin(v) >= -tol.
bool is_quantum_covariance(const CovarianceMatrix& v, double tol = kDefaultTol);

/// Matrix ordering test: true iff V - (A (+) B) has all eigenvalues >= -tol.
bool is_psd_ordered(const CovarianceMatrix& v, const CovarianceMatrix& a,
                    const CovarianceMatrix& b, double tol = kDefaultTol);

/// Classical Gaussian probability distribution over phase space. The covariance
/// may be singular; the density then lives on the affine support through the
/// mean and off-support points have density zero.
struct GaussianDistribution {
    Vec mean;
    CovarianceMatrix covariance;

    int dim() const { return covariance.dim(); }
};

/// Convolution of densities: means and covariances add. Throws on dimension
/// mismatch.
GaussianDistribution convolve_gaussians(const GaussianDistribution& g1,
                                        const GaussianDistribution& g2);

/// Multivariate normal density at `point`. Degenerate directions are handled
/// exactly: the value is the density on the support, or 0 off it.
double gaussian_density(const GaussianDistribution& g, const Vec& point);

namespace detail {
class NormalRng;
}

/// Eigendecomposition-based sampling factor, reusable across draws.
/// Eigenvalues below kEigenvalueClamp are pinned to the mean.
class GaussianFactor {
public:
    explicit GaussianFactor(const GaussianDistribution& g);

    int dim() const { return static_cast<int>(mean_.size()); }
    int active_directions() const { return static_cast<int>(scaled_axes_.cols()); }

    Vec draw(detail::NormalRng& rng) const;

private:
    Vec mean_;
    Mat scaled_axes_; // eigenvectors scaled by sqrt(eigenvalue), active columns only
};

/// Draws `count` samples, deterministic in `seed`.
/// Throws std::invalid_argument if the covariance is not PSD within tolerance.
std::vector<Vec> sample_gaussian(const GaussianDistribution& g, std::uint64_t seed,
                                 int count);

} // namespace lhv
