#ifndef GKP_STATES_HPP
#define GKP_STATES_HPP

#include <vector>

#include "gkp/numerics.hpp"

namespace gkp {

/// Width parameters of an approximate codeword: Gaussian peaks of width
/// delta under a Gaussian envelope of width 1/kappa (quadrature units).
struct StateParams {
    double delta = 0.25;
    double kappa = 0.25;

    void validate() const;
};

enum class LogicalLabel : int { zero = 0, one = 1 };

SeriesTruncation truncation_for(const StateParams& params);

/// Normalized amplitude <x|label~>. Real and nonnegative everywhere.
double wavefunction(const StateParams& params, LogicalLabel label, double x);

/// d/dx of wavefunction(), in closed form term by term.
double wavefunction_derivative(const StateParams& params, LogicalLabel label,
                               double x);

/// The constant N such that N * (comb sum) has unit L2 norm. Evaluated from
/// the pairwise Gaussian overlap sums, exact at finite delta and kappa.
double normalization(const StateParams& params, LogicalLabel label);

/// Probability that a homodyne x readout of the given codeword lands in a
/// wrong-parity bin of the sqrt(pi) lattice (exact bin-sum quadrature).
double misid_probability_exact(const StateParams& params, LogicalLabel label,
                               const QuadratureSpec& spec = {});

/// Small-delta approximation erfc(sqrt(pi)/(2*delta)); independent of kappa.
double misid_probability_approx(const StateParams& params);

/// 1/(4 delta^2) + 1/(4 kappa^2).
double mean_photons_crude(const StateParams& params);

/// (<x^2> + <p^2>)/2 - 1/2 with <p^2> = Integral |dpsi/dx|^2 dx.
double mean_photons_exact(const StateParams& params, LogicalLabel label,
                          const QuadratureSpec& spec = {});

/// <0~|1~>, in [0, 1).
double overlap(const StateParams& params, const QuadratureSpec& spec = {});

/// Comb peak positions (units of sqrt(pi)) retained by the truncation, for
/// the given label. Exposed for peak-aware quadrature segmentation.
std::vector<int> peak_indices(const StateParams& params, LogicalLabel label);

}  // namespace gkp

#endif
