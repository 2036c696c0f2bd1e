#include "gkp/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace gkp {

void StateParams::validate() const {
    if (!(delta > 0.0 && delta <= 1.0))
        throw std::invalid_argument("StateParams: delta must be in (0, 1]");
    if (!(kappa > 0.0 && kappa <= 1.0))
        throw std::invalid_argument("StateParams: kappa must be in (0, 1]");
}

SeriesTruncation truncation_for(const StateParams& params) {
    params.validate();
    return truncation_for(params.kappa);
}

namespace {

inline int bit_of(LogicalLabel label) { return static_cast<int>(label); }

// Envelope amplitude of the peak at m*sqrt(pi).
inline double envelope_weight(double kappa, int m) {
    const double a = static_cast<double>(m) * kappa * kSqrtPi;
    return std::exp(-0.5 * a * a);
}

// Precomputed comb data for one (params, label). Cached per thread so the
// normalization sum is not redone inside quadrature loops.
struct Comb {
    double delta = 0.0, kappa = 0.0;
    int bit = -1;
    int m_max = 0;     // peaks at m*sqrt(pi), |m| <= m_max, m parity == bit
    double norm = 0.0; // normalization constant N
};

Comb build_comb(const StateParams& params, LogicalLabel label) {
    Comb c;
    c.delta = params.delta;
    c.kappa = params.kappa;
    c.bit = bit_of(label);
    c.m_max = 2 * truncation_for(params.kappa).s_max + 1;
    // Integral of (sum of Gaussians)^2 from pairwise overlaps in closed form:
    //   Int exp(-((x-a)^2+(x-b)^2)/(2 d^2)) dx = d*sqrt(pi)*exp(-(a-b)^2/(4 d^2)).
    const double d = params.delta;
    double total = 0.0;
    for (int m = -c.m_max; m <= c.m_max; ++m) {
        if (((m % 2) + 2) % 2 != c.bit) continue;
        const double wm = envelope_weight(params.kappa, m);
        for (int mp = m; mp <= c.m_max; ++mp) {
            if (((mp % 2) + 2) % 2 != c.bit) continue;
            const double gap = (mp - m) * kSqrtPi;
            const double cross = std::exp(-gap * gap / (4.0 * d * d));
            if (cross < 1e-20 && mp != m) break;
            const double term = wm * envelope_weight(params.kappa, mp) * cross;
            total += (mp == m) ? term : 2.0 * term;
        }
    }
    total *= d * kSqrtPi;
    c.norm = 1.0 / std::sqrt(total);
    return c;
}

const Comb& comb_for(const StateParams& params, LogicalLabel label) {
    params.validate();
    thread_local std::vector<Comb> cache;
    const int bit = bit_of(label);
    for (const Comb& c : cache)
        if (c.delta == params.delta && c.kappa == params.kappa && c.bit == bit)
            return c;
    if (cache.size() >= 16) cache.erase(cache.begin());
    cache.push_back(build_comb(params, label));
    return cache.back();
}

inline double comb_sum(const Comb& c, double x) {
    double sum = 0.0;
    const int start = -c.m_max + ((((-c.m_max % 2) + 2) % 2 == c.bit) ? 0 : 1);
    for (int m = start; m <= c.m_max; m += 2) {
        const double t = (x - m * kSqrtPi) / c.delta;
        if (std::abs(t) > 40.0) continue;
        sum += envelope_weight(c.kappa, m) * std::exp(-0.5 * t * t);
    }
    return sum;
}

}  // namespace

std::vector<int> peak_indices(const StateParams& params, LogicalLabel label) {
    const Comb& c = comb_for(params, label);
    std::vector<int> out;
    for (int m = -c.m_max; m <= c.m_max; ++m)
        if (((m % 2) + 2) % 2 == c.bit) out.push_back(m);
    return out;
}

double wavefunction(const StateParams& params, LogicalLabel label, double x) {
    const Comb& c = comb_for(params, label);
    return c.norm * comb_sum(c, x);
}

double wavefunction_derivative(const StateParams& params, LogicalLabel label,
                               double x) {
    const Comb& c = comb_for(params, label);
    double sum = 0.0;
    const int start = -c.m_max + ((((-c.m_max % 2) + 2) % 2 == c.bit) ? 0 : 1);
    for (int m = start; m <= c.m_max; m += 2) {
        const double d = x - m * kSqrtPi;
        const double t = d / c.delta;
        if (std::abs(t) > 40.0) continue;
        sum += envelope_weight(c.kappa, m) * (-d / (c.delta * c.delta)) *
               std::exp(-0.5 * t * t);
    }
    return c.norm * sum;
}

double normalization(const StateParams& params, LogicalLabel label) {
    return comb_for(params, label).norm;
}

double misid_probability_exact(const StateParams& params, LogicalLabel label,
                               const QuadratureSpec& spec) {
    params.validate();
    // Wrong-parity bins are centered on the opposite label's peaks. The bin
    // sum is truncated with the comb: bins beyond the last retained peak
    // collect squared-envelope weight below 1e-16.
    const LogicalLabel other =
        label == LogicalLabel::zero ? LogicalLabel::one : LogicalLabel::zero;
    const auto f = [&](double x) {
        const double psi = wavefunction(params, label, x);
        return psi * psi;
    };
    QuadratureSpec per = spec;
    per.abs_tol = spec.abs_tol / 8.0;
    double total = 0.0;
    for (int m : peak_indices(params, other)) {
        const double center = m * kSqrtPi;
        total += integrate_segmented(
            f, {center - 0.5 * kSqrtPi, center, center + 0.5 * kSqrtPi}, per);
    }
    return total;
}

double misid_probability_approx(const StateParams& params) {
    params.validate();
    return std::erfc(kSqrtPi / (2.0 * params.delta));
}

double mean_photons_crude(const StateParams& params) {
    params.validate();
    return 0.25 / (params.delta * params.delta) +
           0.25 / (params.kappa * params.kappa);
}

namespace {

// With wide peaks (6*delta beyond the half gap) neighboring windows overlap;
// sorting keeps the segment list monotone over the same total range.
std::vector<double> tidy_breaks(std::vector<double> breaks) {
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> out;
    for (double b : breaks)
        if (out.empty() || b - out.back() > 1e-12) out.push_back(b);
    return out;
}

// Breakpoints bracketing every retained peak, for comb-aware quadrature.
std::vector<double> comb_breaks(const StateParams& params, LogicalLabel label) {
    std::vector<double> breaks;
    const auto peaks = peak_indices(params, label);
    breaks.push_back((peaks.front() - 1) * kSqrtPi);
    for (int m : peaks) {
        breaks.push_back(m * kSqrtPi - 6.0 * params.delta);
        breaks.push_back(m * kSqrtPi);
        breaks.push_back(m * kSqrtPi + 6.0 * params.delta);
    }
    breaks.push_back((peaks.back() + 1) * kSqrtPi);
    return tidy_breaks(std::move(breaks));
}

}  // namespace

double mean_photons_exact(const StateParams& params, LogicalLabel label,
                          const QuadratureSpec& spec) {
    params.validate();
    const auto breaks = comb_breaks(params, label);
    // The x^2 weight keeps the integrand O(10^2) tens of units out, so
    // tolerances near round-off are unreachable; floor them.
    QuadratureSpec eff = spec;
    eff.abs_tol = std::max(spec.abs_tol, 1e-9);
    const double x2 = integrate_segmented(
        [&](double x) {
            const double psi = wavefunction(params, label, x);
            return x * x * psi * psi;
        },
        breaks, eff);
    const double p2 = integrate_segmented(
        [&](double x) {
            const double dpsi = wavefunction_derivative(params, label, x);
            return dpsi * dpsi;
        },
        breaks, eff);
    return 0.5 * (x2 + p2) - 0.5;
}

double overlap(const StateParams& params, const QuadratureSpec& spec) {
    params.validate();
    // Peaks of the two labels interleave on the sqrt(pi) lattice.
    const int m_max = 2 * truncation_for(params.kappa).s_max + 2;
    std::vector<double> breaks;
    for (int m = -m_max; m <= m_max; ++m) {
        breaks.push_back(m * kSqrtPi - 6.0 * params.delta);
        breaks.push_back(m * kSqrtPi);
        breaks.push_back(m * kSqrtPi + 6.0 * params.delta);
    }
    breaks = tidy_breaks(std::move(breaks));
    return integrate_segmented(
        [&](double x) {
            return wavefunction(params, LogicalLabel::zero, x) *
                   wavefunction(params, LogicalLabel::one, x);
        },
        breaks, spec);
}

}  // namespace gkp
