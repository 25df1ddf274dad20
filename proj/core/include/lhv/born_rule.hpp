#pragma once

#include "lhv/gaussian_states.hpp"
#include "lhv/wigner_forms.hpp"

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <vector>

// Quantum probabilities p(ab|xy) = Tr[rho X_a (x) X_b] through two independent
// routes: exact Gaussian-polynomial phase-space integrals (fast, used by the
// optimizer) and a truncated-Fock brute-force oracle (slow, used to verify the
// fast route). Plus CHSH assembly and displacement optimization.

namespace lhv {

/// Displacement settings of the two-input, two-outcome click experiment.
struct ChshSetting {
    std::array<std::complex<double>, 2> alpha{}; // party A inputs x = 0, 1
    std::array<std::complex<double>, 2> beta{};  // party B inputs y = 0, 1
    double epsilon = 0.0;

    /// Real displacements with beta_y = -alpha_x for y = x.
    static ChshSetting paper_symmetric(double alpha0, double alpha1, double epsilon)
    {
        ChshSetting s;
        s.alpha = {alpha0, alpha1};
        s.beta = {-alpha0, -alpha1};
        s.epsilon = epsilon;
        return s;
    }
};

/// Full 2x2x2x2 probability table with correlators and the CHSH value
/// S = <a0 b0> + <a0 b1> + <a1 b0> - <a1 b1>.
struct ChshEvaluation {
    // probabilities[x][y](ia, ib) with index 0 -> outcome +1, 1 -> outcome -1
    std::array<std::array<Eigen::Matrix2d, 2>, 2> probabilities;
    std::array<std::array<double, 2>, 2> correlators{};
    double S = 0.0;
};

/// Tr[rho X_A (x) X_B] for a 1x1-mode Gaussian state and closed-form POVM
/// element Wigner functions, via exact Gaussian moment expansion (polynomial
/// degree <= 2 per side).
double probability_phase_space(const GaussianStateDescriptor& state,
                               const WignerForm& element_a, const WignerForm& element_b);

/// Outcome table (rows: elements of family_a, cols: family_b).
Eigen::MatrixXd probability_table(const GaussianStateDescriptor& state,
                                  const PovmFamily& family_a, const PovmFamily& family_b);

/// Target tables for every (x, y) setting pair; targets[x][y] matches the
/// element order of the families.
std::vector<std::vector<Eigen::MatrixXd>> born_rule_targets(
    const GaussianStateDescriptor& state, std::span<const PovmFamily> families_a,
    std::span<const PovmFamily> families_b);

struct FockOracleConfig {
    int cutoff = 25;  // Fock truncation per mode
    int padding = 10; // extra levels while exponentiating the displacement generator
};

/// Raised when the Schmidt-weight tail beyond the cutoff exceeds 1e-6.
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Brute-force oracle: lossy two-mode squeezed state assembled in the
/// truncated Fock basis (Schmidt form + beam-splitter Kraus loss), displaced
/// projectors from the exponentiated truncated generator.
class FockOracle {
public:
    explicit FockOracle(TmssParameters params, FockOracleConfig config = {});

    /// Schmidt-weight mass beyond the cutoff, (lambda^2)^(cutoff+1).
    double tail_bound() const { return tail_; }

    /// 2x2 joint outcome table (rows a = +1, -1; cols b = +1, -1).
    Eigen::Matrix2d probability_table(double epsilon, std::complex<double> alpha,
                                      std::complex<double> beta) const;

    /// Single outcome; a, b in {+1, -1}.
    double probability(double epsilon, std::complex<double> alpha, std::complex<double> beta,
                       int outcome_a, int outcome_b) const;

private:
    FockOracleConfig config_;
    int dim_ = 0; // cutoff + 1
    double tail_ = 0.0;
    Mat rho_;    // two-mode density matrix, real symmetric, (dim^2)^2
    Mat rho_a_;  // partial traces
    Mat rho_b_;

    Eigen::MatrixXcd displaced_levels(std::complex<double> alpha) const; // columns D|0>, D|1>
};

/// One-call wrapper over FockOracle.
double probability_fock(const TmssParameters& params, double epsilon,
                        std::complex<double> alpha, std::complex<double> beta, int outcome_a,
                        int outcome_b, FockOracleConfig config = {});

/// 16 probabilities via the phase-space route, assembled into correlators and S.
ChshEvaluation evaluate_chsh(const GaussianStateDescriptor& state, const ChshSetting& setting);

enum class ChshConstraint {
    paper_symmetric, // real alpha_x in [-1,1], beta_y = -alpha_x for y = x
    free             // four independent complex displacements
};

struct ChshOptimum {
    ChshSetting setting;
    ChshEvaluation evaluation;
};

/// Deterministic maximization of S: coarse grid (step 0.05 over [-1,1]^2 in
/// the constrained parametrization), then simplex refinement with a fixed
/// evaluation budget. Under `free`, refinement runs over all eight real
/// parameters seeded from the constrained optimum.
ChshOptimum optimize_chsh(const GaussianStateDescriptor& state, double epsilon,
                          ChshConstraint constraint = ChshConstraint::paper_symmetric,
                          int refine_budget = 200);

} // namespace lhv
