#ifndef GKP_ERROR_MODEL_HPP
#define GKP_ERROR_MODEL_HPP

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gkp/shift_algebra.hpp"
#include "gkp/states.hpp"

namespace gkp {

/// Shift-basis amplitude f(u,v) = <u,v|psi~> over the fundamental cell,
/// with shifts measured relative to the intended codeword (basis offset
/// sqrt(pi) for label 1).
std::complex<double> shift_wavefunction(const StateParams& params,
                                        LogicalLabel label, double u, double v);

/// P(u,v) = |f(u,v)|^2 sampled on a cell-centered grid over the fundamental
/// cell u in [-sqrt(pi), sqrt(pi)), v in [-sqrt(pi)/2, sqrt(pi)/2).
struct ShiftDistribution {
    StateParams params;
    LogicalLabel reference_label = LogicalLabel::zero;
    int nu = 0;
    int nv = 0;
    std::vector<double> density;  // row-major, density[i*nv + j]

    double du() const { return 2.0 * kSqrtPi / nu; }
    double dv() const { return kSqrtPi / nv; }
    double u_at(int i) const { return -kSqrtPi + (i + 0.5) * du(); }
    double v_at(int j) const { return -0.5 * kSqrtPi + (j + 0.5) * dv(); }
    double riemann_sum() const;
};

ShiftDistribution shift_distribution(const StateParams& params,
                                     LogicalLabel label, int nu, int nv);

/// Probability that both shifts lie inside the threshold square, by direct
/// 2-D adaptive quadrature of |f|^2 (independent of any visualization grid).
double p_no_error(const StateParams& params,
                  LogicalLabel label = LogicalLabel::zero,
                  double threshold = kSqrtPi / 6.0, double abs_tol = 1e-7);

/// Inverts the monotone delta = kappa -> p_no_error curve by bisection.
double find_delta(double target, double threshold = kSqrtPi / 6.0,
                  double tol = 1e-4);

/// Inverse-CDF sampler over the flattened grid; draws are deterministic per
/// (master_seed, trial_index) and jittered uniformly inside a cell-element.
struct SamplerState {
    std::vector<double> cdf;  // monotone, final entry 1
    std::uint64_t master_seed = 0;
};

SamplerState make_sampler(const ShiftDistribution& dist, std::uint64_t master_seed);

ShiftPair sample_shift(const ShiftDistribution& dist, const SamplerState& sampler,
                       std::uint64_t trial_index);

/// CSV rows (u, v, density) with a header line.
void write_csv(const ShiftDistribution& dist, std::ostream& os);

/// JSON round-trips bit-exactly.
std::string to_json(const ShiftDistribution& dist);
ShiftDistribution distribution_from_json(const std::string& text);

}  // namespace gkp

#endif
