#pragma once

#include "lhv/symplectic.hpp"

#include <array>
#include <complex>
#include <string>
#include <vector>

// Closed-form single-mode Wigner functions of the measurement operators, as
// constant + Gaussian-polynomial terms. The family is closed under convolution
// with isotropic Gaussians, so certification works on exact coefficients
// instead of quadrature grids.
//
// hbar = 2: the identity Wigner function is the constant 1/(4 pi), the vacuum
// projector is exp(-(x^2+p^2)/2)/(2 pi), and a displacement alpha shifts
// centers by (2 Re alpha, 2 Im alpha).

namespace lhv {

/// Bivariate polynomial of total degree <= 2 in local coordinates (u, v).
/// Coefficient order: 1, u, v, u^2, u*v, v^2.
struct Poly2 {
    std::array<double, 6> c{};

    static Poly2 constant(double a)
    {
        Poly2 p;
        p.c[0] = a;
        return p;
    }

    double eval(double u, double v) const
    {
        return c[0] + c[1] * u + c[2] * v + c[3] * u * u + c[4] * u * v + c[5] * v * v;
    }

    /// No linear or cross terms and equal quadratic coefficients.
    bool is_radial(double tol = 1e-14) const
    {
        return std::abs(c[1]) <= tol && std::abs(c[2]) <= tol && std::abs(c[4]) <= tol &&
               std::abs(c[3] - c[5]) <= tol;
    }
};

/// coeff * poly(r - center) * exp(-|r - center|^2 / (2 width)).
struct WignerTerm {
    double coeff = 0.0;
    Eigen::Vector2d center{0.0, 0.0};
    double width = 1.0;
    Poly2 poly;
};

/// constant + sum of Gaussian-polynomial terms.
struct WignerForm {
    double constant = 0.0;
    std::vector<WignerTerm> terms;

    double eval(const Eigen::Vector2d& r) const;
    double eval(double x, double p) const { return eval(Eigen::Vector2d(x, p)); }

    /// Integral over phase space of the non-constant part; equals the operator
    /// trace whenever the constant part vanishes.
    double nonconstant_integral() const;
};

/// One labeled POVM element.
struct PovmElement {
    std::string outcome;
    WignerForm form;
};

/// Wigner functions of a complete measurement: the elements sum to the
/// identity form 1/(4 pi) coefficient-by-coefficient.
struct PovmFamily {
    std::string setting_label;
    std::vector<PovmElement> elements;

    /// Largest absolute residual coefficient of (sum of elements) - identity.
    /// Zero (to rounding) for a complete family.
    double completeness_defect() const;
};

WignerForm wigner_identity();
WignerForm wigner_fock0();
WignerForm wigner_fock1();

/// Displaced noisy photodetection POVM. Outcome "+1" (no click) is the Wigner
/// function of D_alpha [(1-epsilon)|0><0| + epsilon|1><1|] D_alpha^dagger;
/// outcome "-1" is identity minus that. Throws for epsilon outside [0, 1].
PovmFamily make_click_povm(double epsilon, std::complex<double> alpha);

/// Exact convolution with the isotropic Gaussian of covariance t*I2. Constants
/// are fixed points; each term keeps its center, widens to width + t, and its
/// polynomial degree does not grow. Throws for t < 0.
WignerForm convolve_isotropic(const WignerForm& form, double t);

/// Square evaluation grid centered at `center`.
struct GridSpec {
    Eigen::Vector2d center{0.0, 0.0};
    double half_width = 6.0;
    double step = 0.02;

    int points_per_axis() const { return 2 * static_cast<int>(std::ceil(half_width / step)) + 1; }

    /// Grid sized for `form` convolved with `gamma`: half-width
    /// max(6, 6 sqrt(w)), step 0.02 sqrt(w), where w is the largest combined
    /// Gaussian width. Tails beyond the box are below 1e-14.
    static GridSpec for_convolution(const WignerForm& form, const CovarianceMatrix& gamma);
};

struct GridValues {
    GridSpec spec;
    int n = 0;                  // points per axis
    std::vector<double> values; // row-major over (ix, iy)
    double min_value = 0.0;
    Eigen::Vector2d min_point{0.0, 0.0};
};

/// Convolution with a general 2x2 PSD Gaussian, evaluated pointwise on the
/// grid. gamma may be singular (rank-deficient directions stay unsmoothed).
/// Throws if gamma is not PSD within tolerance.
GridValues convolve_general(const WignerForm& form, const CovarianceMatrix& gamma,
                            const GridSpec& grid);

struct FormMinimum {
    Eigen::Vector2d point{0.0, 0.0};
    double value = 0.0;
};

/// Global minimum of the form. Terms sharing one center with radial
/// polynomials reduce to a 1-D radial search; anything else falls back to a
/// grid scan with local refinement.
FormMinimum minimum_of_form(const WignerForm& form);

struct NoiseThreshold {
    double epsilon = 0.0;
    double t_star = 0.0;
};

/// Smallest isotropic noise rendering the click element nonnegative:
/// t* = sqrt(1 - 4 epsilon), clamped to 0 for epsilon >= 1/4.
NoiseThreshold noise_threshold(double epsilon);

} // namespace lhv
