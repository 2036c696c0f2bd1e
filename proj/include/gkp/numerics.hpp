#ifndef GKP_NUMERICS_HPP
#define GKP_NUMERICS_HPP

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace gkp {

inline constexpr double kSqrtPi = 1.7724538509055160273;

/// Tolerance and recursion budget for adaptive quadrature.
struct QuadratureSpec {
    double abs_tol = 1e-12;
    int max_depth = 40;
};

/// Adaptive quadrature ran out of depth; carries the best estimate so far.
class NonConvergenceError : public std::runtime_error {
  public:
    NonConvergenceError(const std::string& what, double best)
        : std::runtime_error(what), best_estimate(best) {}
    double best_estimate;
};

/// bisect() was called without a sign change on the bracket.
class BracketError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adaptive Simpson integration of f over [a, b] to spec.abs_tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

/// Integrates over [breaks[0], breaks.back()] piecewise, splitting at the
/// interior breakpoints. Used for comb-shaped integrands whose narrow peaks
/// the top-level Simpson stencil would otherwise step over.
double integrate_segmented(const std::function<double(double)>& f,
                           const std::vector<double>& breaks,
                           const QuadratureSpec& spec = {});

/// Symmetric cutoff for the Gaussian-comb lattice sums. Peaks with index
/// |s| > s_max carry squared-envelope weight exp(-(2 s k sqrt(pi))^2) below
/// 1e-16 and are dropped.
struct SeriesTruncation {
    int s_max = 1;
};

/// Smallest s_max (>= 1) whose dropped weight is <= 1e-16 for envelope
/// parameter kappa.
SeriesTruncation truncation_for(double kappa);

/// Bisection root finding on a bracketing interval [lo, hi].
double bisect(const std::function<double(double)>& g, double lo, double hi,
              double tol);

/// Uniformly sampled complex wavefunction on x_j = x_min + j*dx.
///
/// The Fourier conventions used throughout live in to_momentum():
/// grids handed to the transforms must be centered, x_min = -(n/2)*dx.
struct WaveGrid {
    double x_min = 0.0;
    double dx = 1.0;
    std::vector<std::complex<double>> amp;

    std::size_t size() const { return amp.size(); }
    double x_at(std::size_t j) const { return x_min + dx * static_cast<double>(j); }
    double norm() const;
    void normalize();
};

/// Centered grid of n points with spacing dx (all amplitudes zero).
WaveGrid make_centered_grid(std::size_t n, double dx);

/// In-place radix-2 FFT; sign = +1 applies exp(+2*pi*i*j*k/N), unscaled.
void fft(std::vector<std::complex<double>>& a, int sign);

/// Position -> momentum representation.
///
/// Convention (fixed here, imported by every module):
///   phi(p) = (2*pi)^{-1/2} * Integral psi(x) e^{+i p x} dx,
/// so a state multiplied by e^{-i v x} appears shifted by +v on the momentum
/// grid, and psi(x - u) picks up the phase e^{+i p u}. Unitary; requires a
/// centered power-of-two grid.
WaveGrid to_momentum(const WaveGrid& g);

/// Inverse of to_momentum().
WaveGrid to_position(const WaveGrid& g);

/// <x> and <x^2> of a (normalized) grid state.
double expectation_x(const WaveGrid& g);
double expectation_x2(const WaveGrid& g);

/// |<a|b>| dx-weighted inner product; grids must share the axis.
std::complex<double> inner_product(const WaveGrid& a, const WaveGrid& b);

}  // namespace gkp

#endif
