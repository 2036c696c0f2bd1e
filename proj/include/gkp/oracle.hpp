#ifndef GKP_ORACLE_HPP
#define GKP_ORACLE_HPP

#include <cstdint>
#include <random>

#include "gkp/numerics.hpp"
#include "gkp/shift_algebra.hpp"
#include "gkp/states.hpp"

namespace gkp {

/// Two oscillator modes on a shared centered axis; amp[i*n + j] is
/// psi(x1 = x_at(i), x2 = x_at(j)).
struct TwoModeGrid {
    double x_min = 0.0;
    double dx = 1.0;
    std::size_t n = 0;
    std::vector<std::complex<double>> amp;

    double x_at(std::size_t i) const { return x_min + dx * static_cast<double>(i); }
    double norm() const;
    void normalize();
};

/// Samples an approximate codeword on a centered grid. The axis must span at
/// least +-(4/kappa + 4*delta).
WaveGrid make_state(const StateParams& params, LogicalLabel label,
                    std::size_t n, double dx);

/// (|0~> + |1~>)/norm and (|0~> - |1~>)/norm.
WaveGrid make_plus_state(const StateParams& params, std::size_t n, double dx);
WaveGrid make_minus_state(const StateParams& params, std::size_t n, double dx);

/// e^{-i u p}: band-limited translation by u (phase ramp in momentum).
WaveGrid displace_x(const WaveGrid& state, double u);
/// e^{-i v x}: multiplication by the position phase.
WaveGrid displace_p(const WaveGrid& state, double v);

/// S(q): y -> sqrt(q) psi(q y), norm-preserving; features scale by 1/q.
/// Band-limited (sinc) resampling. Throws if the rescaled support would
/// leave the axis.
WaveGrid squeeze(const WaveGrid& state, double q);

TwoModeGrid product(const WaveGrid& mode1, const WaveGrid& mode2);

/// 50:50 beamsplitter: psi'(x1,x2) = psi((x1-x2)/sqrt(2), (x1+x2)/sqrt(2)),
/// a 45-degree rotation of the joint wavefunction, implemented as three
/// FFT shears (exact band-limited translations, unitary to machine
/// precision up to wrap-around of the envelope tails).
TwoModeGrid beamsplitter(const TwoModeGrid& state);

struct HomodyneResult {
    double outcome = 0.0;
    WaveGrid collapsed;  // surviving mode 1, normalized
};

/// Measures the x- (or p-) quadrature of mode 2 by inverse-CDF sampling of
/// the marginal; collapses mode 1 to the normalized slice at the outcome.
HomodyneResult homodyne_x(const TwoModeGrid& state, std::mt19937_64& rng);
HomodyneResult homodyne_p(const TwoModeGrid& state, std::mt19937_64& rng);

struct ResidualFit {
    int label = 0;  // index into the reference set used for the fit
    double u = 0.0;
    double v = 0.0;
    double overlap = 0.0;
};

/// Maximizes |<D(u,v) ref_label | psi>| over labels and a (u,v) window
/// (coarse grid, then golden-section refinement).
ResidualFit estimate_residual(const WaveGrid& psi,
                              const std::vector<WaveGrid>& references);

struct CircuitResult {
    double measured = 0.0;
    ShiftPair residual_estimate;
    bool flip_detected = false;
    WaveGrid final_state;
};

/// Full correction circuit on approximate states: |0~> qubit and |+~> ancilla
/// with the given shift errors, beamsplitter, squeeze, homodyne x on mode 2,
/// correcting displacement s(outcome) on mode 1.
CircuitResult run_x_correction_circuit(const StateParams& params,
                                       const ShiftPair& qubit_shift,
                                       const ShiftPair& ancilla_shift,
                                       std::uint64_t seed, std::size_t n,
                                       double dx);

/// Mirror circuit for p shifts: |+~> qubit, |0~> ancilla, homodyne p.
CircuitResult run_p_correction_circuit(const StateParams& params,
                                       const ShiftPair& qubit_shift,
                                       const ShiftPair& ancilla_shift,
                                       std::uint64_t seed, std::size_t n,
                                       double dx);

}  // namespace gkp

#endif
