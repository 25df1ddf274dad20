#include "lhv/wigner_forms.hpp"

#include "lhv/detail/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lhv {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInv4Pi = 1.0 / (4.0 * kPi);
constexpr double kInv2Pi = 1.0 / (2.0 * kPi);

// Centers/widths closer than this are merged when summing coefficients.
constexpr double kCoeffMatchTol = 1e-12;

} // namespace

double WignerForm::eval(const Eigen::Vector2d& r) const
{
    double value = constant;
    for (const WignerTerm& term : terms) {
        const Eigen::Vector2d u = r - term.center;
        const double q = u.squaredNorm();
        value += term.coeff * term.poly.eval(u.x(), u.y()) * std::exp(-q / (2.0 * term.width));
    }
    return value;
}

double WignerForm::nonconstant_integral() const
{
    // Gaussian moments: E[u^2] = E[v^2] = w, odd moments vanish.
    double total = 0.0;
    for (const WignerTerm& term : terms) {
        const double w = term.width;
        total += term.coeff * 2.0 * kPi * w * (term.poly.c[0] + w * (term.poly.c[3] + term.poly.c[5]));
    }
    return total;
}

double PovmFamily::completeness_defect() const
{
    double const_sum = 0.0;
    struct Group {
        Eigen::Vector2d center;
        double width;
        std::array<double, 6> coeffs{};
    };
    std::vector<Group> groups;
    for (const PovmElement& el : elements) {
        const_sum += el.form.constant;
        for (const WignerTerm& term : el.form.terms) {
            Group* group = nullptr;
            for (Group& g : groups) {
                if ((g.center - term.center).cwiseAbs().maxCoeff() <= kCoeffMatchTol &&
                    std::abs(g.width - term.width) <= kCoeffMatchTol) {
                    group = &g;
                    break;
                }
            }
            if (group == nullptr) {
                groups.push_back({term.center, term.width, {}});
                group = &groups.back();
            }
            for (int j = 0; j < 6; ++j) group->coeffs[j] += term.coeff * term.poly.c[j];
        }
    }
    double defect = std::abs(const_sum - kInv4Pi);
    for (const Group& g : groups) {
        for (double c : g.coeffs) defect = std::max(defect, std::abs(c));
    }
    return defect;
}

WignerForm wigner_identity()
{
    WignerForm f;
    f.constant = kInv4Pi;
    return f;
}

WignerForm wigner_fock0()
{
    WignerForm f;
    f.terms.push_back({kInv2Pi, {0.0, 0.0}, 1.0, Poly2::constant(1.0)});
    return f;
}

WignerForm wigner_fock1()
{
    // -(1 - x^2 - p^2) e^{-(x^2+p^2)/2} / (2 pi)
    Poly2 poly;
    poly.c[0] = -1.0;
    poly.c[3] = 1.0;
    poly.c[5] = 1.0;
    WignerForm f;
    f.terms.push_back({kInv2Pi, {0.0, 0.0}, 1.0, poly});
    return f;
}

PovmFamily make_click_povm(double epsilon, std::complex<double> alpha)
{
    if (epsilon < 0.0 || epsilon > 1.0) {
        throw std::invalid_argument("make_click_povm: epsilon must lie in [0, 1]");
    }
    const Eigen::Vector2d center(2.0 * alpha.real(), 2.0 * alpha.imag());

    // (1-eps) W_|0><0| + eps W_|1><1| collapses to a single Gaussian term.
    Poly2 poly;
    poly.c[0] = 1.0 - 2.0 * epsilon;
    poly.c[3] = epsilon;
    poly.c[5] = epsilon;

    WignerForm no_click;
    no_click.terms.push_back({kInv2Pi, center, 1.0, poly});

    WignerForm click;
    click.constant = kInv4Pi;
    click.terms.push_back({-kInv2Pi, center, 1.0, poly});

    PovmFamily family;
    family.setting_label = "click(eps=" + std::to_string(epsilon) + ",alpha=(" +
                           std::to_string(alpha.real()) + "," + std::to_string(alpha.imag()) + "))";
    family.elements.push_back({"+1", std::move(no_click)});
    family.elements.push_back({"-1", std::move(click)});
    return family;
}

WignerForm convolve_isotropic(const WignerForm& form, double t)
{
    if (t < 0.0) {
        throw std::invalid_argument("convolve_isotropic: t must be >= 0");
    }
    if (t == 0.0) return form;
    WignerForm out;
    out.constant = form.constant; // constants are fixed points of the convolution
    out.terms.reserve(form.terms.size());
    for (const WignerTerm& term : form.terms) {
        const double w = term.width;
        const double wt = w + t;
        const double m = w / wt;      // mean contraction
        const double s = w * t / wt;  // posterior variance
        Poly2 p;
        p.c[0] = term.poly.c[0] + s * (term.poly.c[3] + term.poly.c[5]);
        p.c[1] = m * term.poly.c[1];
        p.c[2] = m * term.poly.c[2];
        p.c[3] = m * m * term.poly.c[3];
        p.c[4] = m * m * term.poly.c[4];
        p.c[5] = m * m * term.poly.c[5];
        out.terms.push_back({term.coeff * m, term.center, wt, p});
    }
    return out;
}

GridSpec GridSpec::for_convolution(const WignerForm& form, const CovarianceMatrix& gamma)
{
    double gamma_scale = 0.0;
    if (gamma.dim() > 0) {
        Eigen::SelfAdjointEigenSolver<Mat> es(gamma.matrix, Eigen::EigenvaluesOnly);
        gamma_scale = std::max(0.0, es.eigenvalues().maxCoeff());
    }
    double w_max = 1.0;
    Eigen::Vector2d center{0.0, 0.0};
    double spread = 0.0;
    if (!form.terms.empty()) {
        w_max = 0.0;
        for (const WignerTerm& term : form.terms) {
            w_max = std::max(w_max, term.width);
            center += term.center;
        }
        center /= static_cast<double>(form.terms.size());
        for (const WignerTerm& term : form.terms) {
            spread = std::max(spread, (term.center - center).norm());
        }
    }
    const double scale = std::sqrt(w_max + gamma_scale);
    GridSpec spec;
    spec.center = center;
    spec.half_width = std::max(6.0, 6.0 * scale) + spread;
    spec.step = 0.02 * scale;
    return spec;
}

GridValues convolve_general(const WignerForm& form, const CovarianceMatrix& gamma,
                            const GridSpec& grid)
{
    if (gamma.dim() != 2) {
        throw std::invalid_argument("convolve_general: gamma must be a single-mode (2x2) matrix");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(gamma.matrix);
    if (es.eigenvalues().minCoeff() < -kDefaultTol) {
        throw std::invalid_argument("convolve_general: gamma is not positive semidefinite");
    }

    // Active (non-degenerate) noise directions; rank-deficient ones contribute
    // no smoothing and keep the original Gaussian decay in the residual.
    std::vector<int> active;
    for (int i = 0; i < 2; ++i) {
        if (es.eigenvalues()(i) > kEigenvalueClamp) active.push_back(i);
    }
    const int k = static_cast<int>(active.size());
    Eigen::Matrix<double, 2, Eigen::Dynamic> axes(2, k);
    Eigen::VectorXd g(k);
    for (int i = 0; i < k; ++i) {
        axes.col(i) = es.eigenvectors().col(active[i]);
        g(i) = es.eigenvalues()(active[i]);
    }

    GridValues out;
    out.spec = grid;
    out.n = grid.points_per_axis();
    out.values.resize(static_cast<std::size_t>(out.n) * out.n);
    out.min_value = std::numeric_limits<double>::infinity();

    const int half = (out.n - 1) / 2;
    for (int ix = 0; ix < out.n; ++ix) {
        const double x = grid.center.x() + (ix - half) * grid.step;
        for (int iy = 0; iy < out.n; ++iy) {
            const double y = grid.center.y() + (iy - half) * grid.step;
            const Eigen::Vector2d r(x, y);

            double value = form.constant;
            for (const WignerTerm& term : form.terms) {
                const Eigen::Vector2d v = r - term.center;
                const double w = term.width;
                if (k == 0) {
                    value += term.coeff * term.poly.eval(v.x(), v.y()) *
                             std::exp(-v.squaredNorm() / (2.0 * w));
                    continue;
                }
                const Eigen::VectorXd cz = axes.transpose() * v;
                const double resid2 = v.squaredNorm() - cz.squaredNorm();

                double log_mass = -resid2 / (2.0 * w);
                Eigen::VectorXd post_var(k), post_mean(k);
                for (int i = 0; i < k; ++i) {
                    log_mass += -0.5 * std::log1p(g(i) / w) - cz(i) * cz(i) / (2.0 * (g(i) + w));
                    post_var(i) = g(i) * w / (g(i) + w);
                    post_mean(i) = g(i) * cz(i) / (g(i) + w);
                }
                const Eigen::Vector2d eu = v - axes * post_mean;
                const Eigen::Matrix2d cov_u =
                    axes * post_var.asDiagonal() * axes.transpose();

                const Poly2& p = term.poly;
                const double epoly = p.c[0] + p.c[1] * eu.x() + p.c[2] * eu.y() +
                                     p.c[3] * (cov_u(0, 0) + eu.x() * eu.x()) +
                                     p.c[4] * (cov_u(0, 1) + eu.x() * eu.y()) +
                                     p.c[5] * (cov_u(1, 1) + eu.y() * eu.y());
                value += term.coeff * std::exp(log_mass) * epoly;
            }

            out.values[static_cast<std::size_t>(ix) * out.n + iy] = value;
            if (value < out.min_value) {
                out.min_value = value;
                out.min_point = r;
            }
        }
    }
    return out;
}

namespace {

bool shares_radial_center(const WignerForm& form, Eigen::Vector2d& center_out)
{
    if (form.terms.empty()) return false;
    center_out = form.terms.front().center;
    for (const WignerTerm& term : form.terms) {
        if ((term.center - center_out).cwiseAbs().maxCoeff() > kCoeffMatchTol) return false;
        if (!term.poly.is_radial()) return false;
    }
    return true;
}

FormMinimum radial_minimum(const WignerForm& form, const Eigen::Vector2d& center)
{
    double w_max = 0.0;
    for (const WignerTerm& term : form.terms) w_max = std::max(w_max, term.width);
    const double radius = std::max(6.0, 6.0 * std::sqrt(w_max));

    auto value_at = [&](double rho) {
        const double rho2 = rho * rho;
        double value = form.constant;
        for (const WignerTerm& term : form.terms) {
            value += term.coeff * (term.poly.c[0] + term.poly.c[3] * rho2) *
                     std::exp(-rho2 / (2.0 * term.width));
        }
        return value;
    };

    const int n = 1600;
    double best_rho = 0.0;
    double best = value_at(0.0);
    for (int i = 1; i <= n; ++i) {
        const double rho = radius * i / n;
        const double v = value_at(rho);
        if (v < best) {
            best = v;
            best_rho = rho;
        }
    }
    const double h = radius / n;
    const double lo = std::max(0.0, best_rho - h);
    const double hi = std::min(radius, best_rho + h);
    const double refined = detail::golden_section_min(value_at, lo, hi);
    if (value_at(refined) < best) {
        best = value_at(refined);
        best_rho = refined;
    }

    FormMinimum out;
    // All terms decay, so the value tends to the constant; report that infimum
    // if it undercuts everything sampled.
    if (form.constant < best) {
        out.value = form.constant;
        out.point = center + Eigen::Vector2d(radius, 0.0);
        return out;
    }
    out.value = best;
    out.point = center + Eigen::Vector2d(best_rho, 0.0);
    return out;
}

} // namespace

FormMinimum minimum_of_form(const WignerForm& form)
{
    if (form.terms.empty()) {
        return {Eigen::Vector2d(0.0, 0.0), form.constant};
    }
    Eigen::Vector2d center;
    if (shares_radial_center(form, center)) {
        return radial_minimum(form, center);
    }

    // Fallback: grid scan plus simplex refinement.
    const GridSpec spec = GridSpec::for_convolution(form, CovarianceMatrix::zero(1));
    const int n = spec.points_per_axis();
    const int half = (n - 1) / 2;
    double best = std::numeric_limits<double>::infinity();
    Eigen::Vector2d best_point = spec.center;
    for (int ix = 0; ix < n; ++ix) {
        for (int iy = 0; iy < n; ++iy) {
            const Eigen::Vector2d r =
                spec.center + Eigen::Vector2d((ix - half) * spec.step, (iy - half) * spec.step);
            const double v = form.eval(r);
            if (v < best) {
                best = v;
                best_point = r;
            }
        }
    }
    auto objective = [&form](const Eigen::VectorXd& x) {
        return form.eval(Eigen::Vector2d(x(0), x(1)));
    };
    const auto refined = detail::nelder_mead(objective, best_point, spec.step, 120, 1e-14);
    if (refined.value < best) {
        best = refined.value;
        best_point = Eigen::Vector2d(refined.x(0), refined.x(1));
    }
    if (form.constant < best) {
        return {spec.center + Eigen::Vector2d(spec.half_width, spec.half_width), form.constant};
    }
    return {best_point, best};
}

NoiseThreshold noise_threshold(double epsilon)
{
    if (epsilon < 0.0 || epsilon > 1.0) {
        throw std::invalid_argument("noise_threshold: epsilon must lie in [0, 1]");
    }
    NoiseThreshold out;
    out.epsilon = epsilon;
    out.t_star = epsilon < 0.25 ? std::sqrt(1.0 - 4.0 * epsilon) : 0.0;
    return out;
}

} // namespace lhv
