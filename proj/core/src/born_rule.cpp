#include "lhv/born_rule.hpp"

#include "lhv/detail/gaussian_moments.hpp"
#include "lhv/detail/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lhv {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// Monomial exponents matching the Poly2 coefficient order.
constexpr std::array<std::array<int, 2>, 6> kMonomials = {
    {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}}};

// integral of N(mu,S)(u) * coeff * poly(u - c) * exp(-|u - c|^2 / (2w)) du
// over a single party's 2-D phase space.
double term_integral_2d(const Eigen::Vector2d& mu, const Eigen::Matrix2d& cov,
                        const WignerTerm& term)
{
    const double w = term.width;
    const Eigen::Vector2d d = mu - term.center;
    const Eigen::Matrix2d m = cov + w * Eigen::Matrix2d::Identity();
    const Eigen::LDLT<Eigen::Matrix2d> m_ldlt(m);

    const double det_scaled = (cov / w + Eigen::Matrix2d::Identity()).determinant();
    const double mass = std::exp(-0.5 * d.dot(m_ldlt.solve(d))) / std::sqrt(det_scaled);

    // Posterior of u after multiplying in the Gaussian factor (Kalman form).
    const Eigen::Matrix2d gain_t = m_ldlt.solve(cov); // (S + wI)^{-1} S
    const Eigen::Vector2d mean_u = mu - gain_t.transpose() * d;
    const Eigen::Matrix2d cov_u = cov - cov * gain_t;

    const Eigen::Vector2d delta = mean_u - term.center;
    const Poly2& p = term.poly;
    const double epoly = p.c[0] + p.c[1] * delta.x() + p.c[2] * delta.y() +
                         p.c[3] * (cov_u(0, 0) + delta.x() * delta.x()) +
                         p.c[4] * (cov_u(0, 1) + delta.x() * delta.y()) +
                         p.c[5] * (cov_u(1, 1) + delta.y() * delta.y());
    return term.coeff * mass * epoly;
}

// integral of N(mu,V)(r) * termA(r_A) * termB(r_B) dr over the joint 4-D
// phase space; the polynomial product has total degree <= 4.
double term_integral_4d(const Vec& mu, const Mat& v, const WignerTerm& term_a,
                        const WignerTerm& term_b)
{
    Eigen::Vector4d c;
    c << term_a.center, term_b.center;
    Eigen::Vector4d widths;
    widths << term_a.width, term_a.width, term_b.width, term_b.width;

    const Eigen::Vector4d d = mu - c;
    Eigen::Matrix4d m = v;
    m.diagonal() += widths;
    const Eigen::LDLT<Eigen::Matrix4d> m_ldlt(m);

    // det(P V + I) = det(V + P^{-1}) / prod(widths)
    const double det_scaled = m.determinant() / (widths.prod());
    const double mass = std::exp(-0.5 * d.dot(m_ldlt.solve(d))) / std::sqrt(det_scaled);

    const Eigen::Matrix4d gain_t = m_ldlt.solve(v);
    const Eigen::Vector4d mean_r = mu - gain_t.transpose() * d;
    const Eigen::Matrix4d cov_r = v - v * gain_t;
    const Eigen::Vector4d delta = mean_r - c;

    double epoly = 0.0;
    std::array<int, 4> vars{};
    for (int i = 0; i < 6; ++i) {
        if (term_a.poly.c[i] == 0.0) continue;
        for (int j = 0; j < 6; ++j) {
            if (term_b.poly.c[j] == 0.0) continue;
            int k = 0;
            for (int rep = 0; rep < kMonomials[i][0]; ++rep) vars[k++] = 0;
            for (int rep = 0; rep < kMonomials[i][1]; ++rep) vars[k++] = 1;
            for (int rep = 0; rep < kMonomials[j][0]; ++rep) vars[k++] = 2;
            for (int rep = 0; rep < kMonomials[j][1]; ++rep) vars[k++] = 3;
            epoly += term_a.poly.c[i] * term_b.poly.c[j] *
                     detail::gaussian_moment(delta, cov_r, std::span<const int>(vars.data(), k));
        }
    }
    return term_a.coeff * term_b.coeff * mass * epoly;
}

} // namespace

double probability_phase_space(const GaussianStateDescriptor& state,
                               const WignerForm& element_a, const WignerForm& element_b)
{
    if (!state.is_two_party_single_mode()) {
        throw std::invalid_argument("probability_phase_space: only 1x1-mode bipartitions are supported");
    }
    const Mat& v = state.covariance.matrix;
    const Vec& mu = state.mean;
    const Eigen::Vector2d mu_a = mu.head<2>();
    const Eigen::Vector2d mu_b = mu.tail<2>();
    const Eigen::Matrix2d v_a = v.topLeftCorner<2, 2>();
    const Eigen::Matrix2d v_b = v.bottomRightCorner<2, 2>();

    double total = element_a.constant * element_b.constant;
    for (const WignerTerm& tb : element_b.terms) {
        total += element_a.constant * term_integral_2d(mu_b, v_b, tb);
    }
    for (const WignerTerm& ta : element_a.terms) {
        total += element_b.constant * term_integral_2d(mu_a, v_a, ta);
    }
    for (const WignerTerm& ta : element_a.terms) {
        for (const WignerTerm& tb : element_b.terms) {
            total += term_integral_4d(mu, v, ta, tb);
        }
    }
    return kFourPi * kFourPi * total;
}

Eigen::MatrixXd probability_table(const GaussianStateDescriptor& state,
                                  const PovmFamily& family_a, const PovmFamily& family_b)
{
    Eigen::MatrixXd table(family_a.elements.size(), family_b.elements.size());
    for (Eigen::Index i = 0; i < table.rows(); ++i) {
        for (Eigen::Index j = 0; j < table.cols(); ++j) {
            table(i, j) = probability_phase_space(state, family_a.elements[i].form,
                                                  family_b.elements[j].form);
        }
    }
    return table;
}

std::vector<std::vector<Eigen::MatrixXd>> born_rule_targets(
    const GaussianStateDescriptor& state, std::span<const PovmFamily> families_a,
    std::span<const PovmFamily> families_b)
{
    std::vector<std::vector<Eigen::MatrixXd>> targets(families_a.size());
    for (std::size_t x = 0; x < families_a.size(); ++x) {
        targets[x].reserve(families_b.size());
        for (std::size_t y = 0; y < families_b.size(); ++y) {
            targets[x].push_back(probability_table(state, families_a[x], families_b[y]));
        }
    }
    return targets;
}

FockOracle::FockOracle(TmssParameters params, FockOracleConfig config) : config_(config)
{
    if (params.nu < 1.0 || params.eta < 0.0 || params.eta > 1.0) {
        throw std::invalid_argument("FockOracle: invalid state parameters");
    }
    if (config_.cutoff < 1) {
        throw std::invalid_argument("FockOracle: cutoff must be >= 1");
    }
    dim_ = config_.cutoff + 1;
    const double lambda2 = (params.nu - 1.0) / (params.nu + 1.0);
    tail_ = std::pow(lambda2, dim_);
    if (tail_ > 1e-6) {
        throw TruncationError("FockOracle: Schmidt tail " + std::to_string(tail_) +
                              " exceeds 1e-6; raise the cutoff");
    }

    // Normalized truncated Schmidt amplitudes of the pure TMSS.
    Vec amp(dim_);
    const double lambda = std::sqrt(lambda2);
    double norm2 = 0.0;
    for (int n = 0; n < dim_; ++n) {
        amp(n) = std::pow(lambda, n);
        norm2 += amp(n) * amp(n);
    }
    amp /= std::sqrt(norm2);

    // Beam-splitter Kraus amplitudes: K_k |n> = a(n,k) |n-k>.
    Mat loss(dim_, dim_);
    loss.setZero();
    const double eta = params.eta;
    for (int n = 0; n < dim_; ++n) {
        double binom = 1.0;
        for (int k = 0; k <= n; ++k) {
            if (k > 0) binom *= static_cast<double>(n - k + 1) / k;
            loss(n, k) = std::sqrt(binom * std::pow(eta, n - k) * std::pow(1.0 - eta, k));
        }
    }

    const int d2 = dim_ * dim_;
    rho_ = Mat::Zero(d2, d2);
    for (int n = 0; n < dim_; ++n) {
        for (int m = 0; m < dim_; ++m) {
            const double cc = amp(n) * amp(m);
            const int kl_max = std::min(n, m);
            for (int k = 0; k <= kl_max; ++k) {
                for (int l = 0; l <= kl_max; ++l) {
                    rho_((n - k) * dim_ + (n - l), (m - k) * dim_ + (m - l)) +=
                        cc * loss(n, k) * loss(m, k) * loss(n, l) * loss(m, l);
                }
            }
        }
    }

    rho_a_ = Mat::Zero(dim_, dim_);
    rho_b_ = Mat::Zero(dim_, dim_);
    for (int i = 0; i < dim_; ++i) {
        for (int i2 = 0; i2 < dim_; ++i2) {
            for (int j = 0; j < dim_; ++j) {
                rho_a_(i, i2) += rho_(i * dim_ + j, i2 * dim_ + j);
                rho_b_(i, i2) += rho_(j * dim_ + i, j * dim_ + i2);
            }
        }
    }
}

Eigen::MatrixXcd FockOracle::displaced_levels(std::complex<double> alpha) const
{
    // exp(alpha a^dag - conj(alpha) a) on a padded space, then cropped; the
    // padding keeps the cropped columns unitary to well below 1e-10.
    const int dp = dim_ + config_.padding;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dp, dp);
    const std::complex<double> i_unit(0.0, 1.0);
    for (int n = 0; n + 1 < dp; ++n) {
        const double root = std::sqrt(static_cast<double>(n + 1));
        h(n + 1, n) = -i_unit * alpha * root;           // from alpha a^dag
        h(n, n + 1) = i_unit * std::conj(alpha) * root; // from -conj(alpha) a
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    Eigen::VectorXcd phases(dp);
    for (int n = 0; n < dp; ++n) phases(n) = std::exp(i_unit * es.eigenvalues()(n));
    const Eigen::MatrixXcd d_full =
        es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    return d_full.topLeftCorner(dim_, 2);
}

Eigen::Matrix2d FockOracle::probability_table(double epsilon, std::complex<double> alpha,
                                              std::complex<double> beta) const
{
    if (epsilon < 0.0 || epsilon > 1.0) {
        throw std::invalid_argument("FockOracle: epsilon must lie in [0, 1]");
    }
    const Eigen::MatrixXcd da = displaced_levels(alpha);
    const Eigen::MatrixXcd db = displaced_levels(beta);
    const std::array<double, 2> weight = {1.0 - epsilon, epsilon};

    // p(+1, +1) = sum_{i,j} w_i w_j <d_i (x) e_j| rho |d_i (x) e_j>
    double p_pp = 0.0;
    Eigen::VectorXcd kron(dim_ * dim_);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int n = 0; n < dim_; ++n) {
                kron.segment(n * dim_, dim_) = da(n, i) * db.col(j);
            }
            p_pp += weight[i] * weight[j] * (kron.adjoint() * (rho_ * kron))(0).real();
        }
    }
    double pa = 0.0;
    double pb = 0.0;
    for (int i = 0; i < 2; ++i) {
        pa += weight[i] * (da.col(i).adjoint() * (rho_a_ * da.col(i)))(0).real();
        pb += weight[i] * (db.col(i).adjoint() * (rho_b_ * db.col(i)))(0).real();
    }

    Eigen::Matrix2d table;
    table(0, 0) = p_pp;
    table(0, 1) = pa - p_pp;
    table(1, 0) = pb - p_pp;
    table(1, 1) = 1.0 - pa - pb + p_pp;
    return table;
}

double FockOracle::probability(double epsilon, std::complex<double> alpha,
                               std::complex<double> beta, int outcome_a, int outcome_b) const
{
    if (std::abs(outcome_a) != 1 || std::abs(outcome_b) != 1) {
        throw std::invalid_argument("FockOracle: outcomes must be +1 or -1");
    }
    const Eigen::Matrix2d table = probability_table(epsilon, alpha, beta);
    return table(outcome_a > 0 ? 0 : 1, outcome_b > 0 ? 0 : 1);
}

double probability_fock(const TmssParameters& params, double epsilon,
                        std::complex<double> alpha, std::complex<double> beta, int outcome_a,
                        int outcome_b, FockOracleConfig config)
{
    return FockOracle(params, config).probability(epsilon, alpha, beta, outcome_a, outcome_b);
}

ChshEvaluation evaluate_chsh(const GaussianStateDescriptor& state, const ChshSetting& setting)
{
    std::array<PovmFamily, 2> fam_a = {make_click_povm(setting.epsilon, setting.alpha[0]),
                                       make_click_povm(setting.epsilon, setting.alpha[1])};
    std::array<PovmFamily, 2> fam_b = {make_click_povm(setting.epsilon, setting.beta[0]),
                                       make_click_povm(setting.epsilon, setting.beta[1])};
    ChshEvaluation out;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            const Eigen::MatrixXd table = probability_table(state, fam_a[x], fam_b[y]);
            out.probabilities[x][y] = table;
            out.correlators[x][y] = table(0, 0) - table(0, 1) - table(1, 0) + table(1, 1);
        }
    }
    out.S = out.correlators[0][0] + out.correlators[0][1] + out.correlators[1][0] -
            out.correlators[1][1];
    return out;
}

namespace {

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

} // namespace

ChshOptimum optimize_chsh(const GaussianStateDescriptor& state, double epsilon,
                          ChshConstraint constraint, int refine_budget)
{
    // Coarse scan of the constrained parametrization; ties resolve to the
    // first (lexicographically smallest) grid point.
    double best_s = -std::numeric_limits<double>::infinity();
    double best_a0 = 0.0;
    double best_a1 = 0.0;
    for (int i = 0; i <= 40; ++i) {
        const double a0 = (i - 20) * 0.05;
        for (int j = 0; j <= 40; ++j) {
            const double a1 = (j - 20) * 0.05;
            const double s = evaluate_chsh(state, ChshSetting::paper_symmetric(a0, a1, epsilon)).S;
            if (s > best_s) {
                best_s = s;
                best_a0 = a0;
                best_a1 = a1;
            }
        }
    }

    ChshSetting best_setting = ChshSetting::paper_symmetric(best_a0, best_a1, epsilon);
    if (constraint == ChshConstraint::paper_symmetric) {
        auto objective = [&](const Eigen::VectorXd& x) {
            return -evaluate_chsh(state, ChshSetting::paper_symmetric(clamp_unit(x(0)),
                                                                      clamp_unit(x(1)), epsilon))
                        .S;
        };
        Eigen::VectorXd start(2);
        start << best_a0, best_a1;
        const auto refined = detail::nelder_mead(objective, start, 0.05, refine_budget, 1e-6);
        if (-refined.value > best_s) {
            best_setting = ChshSetting::paper_symmetric(clamp_unit(refined.x(0)),
                                                        clamp_unit(refined.x(1)), epsilon);
        }
    } else {
        auto from_vec = [&](const Eigen::VectorXd& x) {
            ChshSetting s;
            s.alpha = {std::complex<double>(clamp_unit(x(0)), clamp_unit(x(1))),
                       std::complex<double>(clamp_unit(x(2)), clamp_unit(x(3)))};
            s.beta = {std::complex<double>(clamp_unit(x(4)), clamp_unit(x(5))),
                      std::complex<double>(clamp_unit(x(6)), clamp_unit(x(7)))};
            s.epsilon = epsilon;
            return s;
        };
        auto objective = [&](const Eigen::VectorXd& x) {
            return -evaluate_chsh(state, from_vec(x)).S;
        };
        Eigen::VectorXd start(8);
        start << best_a0, 0.0, best_a1, 0.0, -best_a0, 0.0, -best_a1, 0.0;
        const auto refined = detail::nelder_mead(objective, start, 0.05, refine_budget, 1e-6);
        if (-refined.value > best_s) {
            best_setting = from_vec(refined.x);
        }
    }

    return {best_setting, evaluate_chsh(state, best_setting)};
}

} // namespace lhv
