#include "lhv/certifier.hpp"

#include <cmath>
#include <stdexcept>

namespace lhv {

namespace {

void require_two_party_single_mode(const GaussianStateDescriptor& state, const char* who)
{
    if (!state.is_two_party_single_mode()) {
        throw std::invalid_argument(std::string(who) + ": only 1x1-mode bipartitions are supported");
    }
}

std::string element_key(char side, std::size_t family_index, const std::string& outcome)
{
    return std::string(1, side) + std::to_string(family_index) + ":" + outcome;
}

} // namespace

std::optional<LocalityCertificate> certify_isotropic(const GaussianStateDescriptor& state,
                                                     std::span<const PovmFamily> families_a,
                                                     std::span<const PovmFamily> families_b)
{
    require_two_party_single_mode(state, "certify_isotropic");

    // Largest t with V >= t I4: the smallest eigenvalue of V.
    const double t_max = std::max(0.0, classical_margin(state.covariance));

    std::map<std::string, double> minima;
    double worst = std::numeric_limits<double>::infinity();
    auto check_side = [&](char side, std::span<const PovmFamily> families) {
        for (std::size_t i = 0; i < families.size(); ++i) {
            for (const PovmElement& el : families[i].elements) {
                const double m = minimum_of_form(convolve_isotropic(el.form, t_max)).value;
                minima[element_key(side, i, el.outcome)] = m;
                worst = std::min(worst, m);
            }
        }
    };
    check_side('A', families_a);
    check_side('B', families_b);

    if (worst < -kClosedFormMinTol) return std::nullopt;

    LocalityCertificate cert;
    cert.gamma_a = CovarianceMatrix::isotropic(1, t_max);
    cert.gamma_b = CovarianceMatrix::isotropic(1, t_max);
    cert.omega = CovarianceMatrix::from_matrix(state.covariance.matrix -
                                               t_max * Mat::Identity(4, 4));
    cert.omega_min_eigenvalue = classical_margin(cert.omega);
    cert.min_values = std::move(minima);
    cert.margin = std::min(cert.omega_min_eigenvalue, worst);
    cert.isotropic_t = t_max;
    return cert;
}

std::optional<LocalityCertificate> certify_separable(const GaussianStateDescriptor& state)
{
    require_two_party_single_mode(state, "certify_separable");
    if (is_ppt_entangled(state)) return std::nullopt;

    // t I2 is a quantum-valid covariance iff t >= 1; for symmetric states the
    // isotropic split reaches t = lambda_min(V) >= 1 exactly when separable.
    const double t = classical_margin(state.covariance);
    if (t < 1.0 - kDefaultTol) return std::nullopt;

    LocalityCertificate cert;
    cert.gamma_a = CovarianceMatrix::isotropic(1, t);
    cert.gamma_b = CovarianceMatrix::isotropic(1, t);
    cert.omega =
        CovarianceMatrix::from_matrix(state.covariance.matrix - t * Mat::Identity(4, 4));
    cert.omega_min_eigenvalue = classical_margin(cert.omega);
    cert.margin = std::min(cert.omega_min_eigenvalue, quantum_margin(cert.gamma_a));
    cert.universal = true;
    cert.isotropic_t = t;
    return cert;
}

std::optional<LocalityCertificate> certify_with_candidates(
    const GaussianStateDescriptor& state, std::span<const PovmFamily> families_a,
    std::span<const PovmFamily> families_b,
    const std::vector<std::pair<CovarianceMatrix, CovarianceMatrix>>& candidates)
{
    require_two_party_single_mode(state, "certify_with_candidates");

    for (const auto& [gamma_a, gamma_b] : candidates) {
        if (gamma_a.dim() != 2 || gamma_b.dim() != 2) {
            throw std::invalid_argument("certify_with_candidates: gammas must be single-mode");
        }
        if (classical_margin(gamma_a) < -kDefaultTol || classical_margin(gamma_b) < -kDefaultTol) {
            continue;
        }
        const double order = psd_order_margin(state.covariance, gamma_a, gamma_b);
        if (order < -kDefaultTol) continue;

        std::map<std::string, double> minima;
        double worst = std::numeric_limits<double>::infinity();
        auto check_side = [&](char side, std::span<const PovmFamily> families,
                              const CovarianceMatrix& gamma) {
            for (std::size_t i = 0; i < families.size() && worst >= -kGridMinTol; ++i) {
                for (const PovmElement& el : families[i].elements) {
                    const GridSpec spec = GridSpec::for_convolution(el.form, gamma);
                    const GridValues grid = convolve_general(el.form, gamma, spec);
                    minima[element_key(side, i, el.outcome)] = grid.min_value;
                    worst = std::min(worst, grid.min_value);
                    if (worst < -kGridMinTol) break;
                }
            }
        };
        check_side('A', families_a, gamma_a);
        check_side('B', families_b, gamma_b);
        if (worst < -kGridMinTol) continue;

        LocalityCertificate cert;
        cert.gamma_a = gamma_a;
        cert.gamma_b = gamma_b;
        cert.omega = CovarianceMatrix::from_matrix(state.covariance.matrix -
                                                   direct_sum(gamma_a, gamma_b).matrix);
        cert.omega_min_eigenvalue = order;
        cert.min_values = std::move(minima);
        cert.margin = std::min(order, worst);
        return cert;
    }
    return std::nullopt;
}

bool region_condition(double eta, double nu, double epsilon)
{
    const double t_max = 1.0 + eta * (nu - 1.0 - std::sqrt(nu * nu - 1.0));
    const double t_star = epsilon < 0.25 ? std::sqrt(1.0 - 4.0 * epsilon) : 0.0;
    return t_max >= t_star;
}

std::optional<double> boundary_eta(double nu, double epsilon)
{
    if (nu <= 1.0) return std::nullopt;
    const double t_star = epsilon < 0.25 ? std::sqrt(1.0 - 4.0 * epsilon) : 0.0;
    const double denom = std::sqrt(nu * nu - 1.0) - (nu - 1.0);
    const double eta_star = (1.0 - t_star) / denom;
    if (eta_star > 1.0) return std::nullopt;
    return eta_star;
}

const char* to_string(RegionStatus status)
{
    switch (status) {
    case RegionStatus::lhv_certified: return "lhv_certified";
    case RegionStatus::chsh_violating: return "chsh_violating";
    case RegionStatus::undetermined: return "undetermined";
    }
    return "unknown";
}

} // namespace lhv
