#include "lhv/symplectic.hpp"

#include "lhv/detail/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lhv {

SymplecticForm make_symplectic_form(int modes)
{
    if (modes < 1) {
        throw std::invalid_argument("make_symplectic_form: modes must be >= 1");
    }
    Mat omega = Mat::Zero(2 * modes, 2 * modes);
    for (int k = 0; k < modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return {modes, std::move(omega)};
}

CovarianceMatrix CovarianceMatrix::from_matrix(const Mat& m, double sym_tol)
{
    if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() == 0) {
        throw std::invalid_argument("CovarianceMatrix: matrix must be square with even dimension");
    }
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > sym_tol) {
        throw std::invalid_argument("CovarianceMatrix: matrix is not symmetric within tolerance");
    }
    CovarianceMatrix v;
    v.modes = static_cast<int>(m.rows()) / 2;
    v.matrix = 0.5 * (m + m.transpose());
    return v;
}

CovarianceMatrix CovarianceMatrix::isotropic(int modes, double t)
{
    if (modes < 1) {
        throw std::invalid_argument("CovarianceMatrix::isotropic: modes must be >= 1");
    }
    CovarianceMatrix v;
    v.modes = modes;
    v.matrix = t * Mat::Identity(2 * modes, 2 * modes);
    return v;
}

CovarianceMatrix direct_sum(const CovarianceMatrix& a, const CovarianceMatrix& b)
{
    CovarianceMatrix out;
    out.modes = a.modes + b.modes;
    out.matrix = Mat::Zero(out.dim(), out.dim());
    out.matrix.topLeftCorner(a.dim(), a.dim()) = a.matrix;
    out.matrix.bottomRightCorner(b.dim(), b.dim()) = b.matrix;
    return out;
}

double classical_margin(const CovarianceMatrix& v)
{
    Eigen::SelfAdjointEigenSolver<Mat> es(v.matrix, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double quantum_margin(const CovarianceMatrix& v)
{
    const SymplecticForm omega = make_symplectic_form(v.modes);
    Eigen::MatrixXcd h = v.matrix.cast<std::complex<double>>();
    h += std::complex<double>(0.0, 1.0) * omega.matrix.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double psd_order_margin(const CovarianceMatrix& v, const CovarianceMatrix& a,
                        const CovarianceMatrix& b)
{
    if (v.dim() != a.dim() + b.dim()) {
        throw std::invalid_argument("psd_order_margin: dim(V) != dim(A) + dim(B)");
    }
    const CovarianceMatrix ab = direct_sum(a, b);
    Eigen::SelfAdjointEigenSolver<Mat> es(v.matrix - ab.matrix, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

bool is_quantum_covariance(const CovarianceMatrix& v, double tol)
{
    const double asym = (v.matrix - v.matrix.transpose()).cwiseAbs().maxCoeff();
    if (asym > tol) {
        throw std::invalid_argument("is_quantum_covariance: matrix is not symmetric");
    }
    return quantum_margin(v) >= -tol;
}

bool is_psd_ordered(const CovarianceMatrix& v, const CovarianceMatrix& a,
                    const CovarianceMatrix& b, double tol)
{
    return psd_order_margin(v, a, b) >= -tol;
}

GaussianDistribution convolve_gaussians(const GaussianDistribution& g1,
                                        const GaussianDistribution& g2)
{
    if (g1.dim() != g2.dim() || g1.mean.size() != g2.mean.size()) {
        throw std::invalid_argument("convolve_gaussians: dimension mismatch");
    }
    GaussianDistribution out;
    out.mean = g1.mean + g2.mean;
    out.covariance = CovarianceMatrix::from_matrix(g1.covariance.matrix + g2.covariance.matrix);
    return out;
}

double gaussian_density(const GaussianDistribution& g, const Vec& point)
{
    if (point.size() != g.mean.size()) {
        throw std::invalid_argument("gaussian_density: dimension mismatch");
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(g.covariance.matrix);
    const Vec evals = es.eigenvalues();
    const Mat evecs = es.eigenvectors();
    const Vec d = point - g.mean;

    // Off-support tolerance for degenerate directions.
    const double support_tol = 1e-9 * (1.0 + d.cwiseAbs().maxCoeff());

    double quad = 0.0;
    double log_det = 0.0;
    int active = 0;
    for (int i = 0; i < evals.size(); ++i) {
        const double component = evecs.col(i).dot(d);
        if (evals(i) > kEigenvalueClamp) {
            quad += component * component / evals(i);
            log_det += std::log(evals(i));
            ++active;
        } else if (std::abs(component) > support_tol) {
            return 0.0;
        }
    }
    const double log_norm = -0.5 * (active * std::log(2.0 * std::numbers::pi) + log_det);
    return std::exp(log_norm - 0.5 * quad);
}

GaussianFactor::GaussianFactor(const GaussianDistribution& g) : mean_(g.mean)
{
    Eigen::SelfAdjointEigenSolver<Mat> es(g.covariance.matrix);
    const Vec evals = es.eigenvalues();
    if (evals.minCoeff() < -kDefaultTol) {
        throw std::invalid_argument("GaussianFactor: covariance is not positive semidefinite");
    }
    int active = 0;
    for (int i = 0; i < evals.size(); ++i) {
        if (evals(i) > kEigenvalueClamp) ++active;
    }
    scaled_axes_.resize(g.dim(), active);
    int col = 0;
    for (int i = 0; i < evals.size(); ++i) {
        if (evals(i) > kEigenvalueClamp) {
            scaled_axes_.col(col++) = es.eigenvectors().col(i) * std::sqrt(evals(i));
        }
    }
}

Vec GaussianFactor::draw(detail::NormalRng& rng) const
{
    Vec out = mean_;
    for (int i = 0; i < scaled_axes_.cols(); ++i) {
        out += rng.gauss() * scaled_axes_.col(i);
    }
    return out;
}

std::vector<Vec> sample_gaussian(const GaussianDistribution& g, std::uint64_t seed, int count)
{
    const GaussianFactor factor(g);
    detail::NormalRng rng(seed);
    std::vector<Vec> samples;
    samples.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        samples.push_back(factor.draw(rng));
    }
    return samples;
}

} // namespace lhv
