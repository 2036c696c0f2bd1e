#include "gkp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gkp {

double TwoModeGrid::norm() const {
    double s = 0.0;
    for (const auto& a : amp) s += std::norm(a);
    return std::sqrt(s) * dx;
}

void TwoModeGrid::normalize() {
    const double nrm = norm();
    if (nrm <= 0.0) throw std::domain_error("TwoModeGrid::normalize: zero state");
    for (auto& a : amp) a /= nrm;
}

namespace {

void require_axis(const StateParams& params, std::size_t n, double dx) {
    params.validate();
    const double half_span = 0.5 * static_cast<double>(n) * dx;
    if (half_span < 4.0 / params.kappa + 4.0 * params.delta)
        throw std::domain_error("make_state: axis too small for the envelope");
    if (dx > params.delta / 6.0)
        throw std::domain_error("make_state: dx too coarse for the peak width");
}

}  // namespace

WaveGrid make_state(const StateParams& params, LogicalLabel label,
                    std::size_t n, double dx) {
    require_axis(params, n, dx);
    WaveGrid g = make_centered_grid(n, dx);
    for (std::size_t j = 0; j < n; ++j)
        g.amp[j] = wavefunction(params, label, g.x_at(j));
    g.normalize();  // discretization correction at the 1e-10 level
    return g;
}

WaveGrid make_plus_state(const StateParams& params, std::size_t n, double dx) {
    WaveGrid g = make_state(params, LogicalLabel::zero, n, dx);
    const WaveGrid one = make_state(params, LogicalLabel::one, n, dx);
    for (std::size_t j = 0; j < n; ++j) g.amp[j] += one.amp[j];
    g.normalize();
    return g;
}

WaveGrid make_minus_state(const StateParams& params, std::size_t n, double dx) {
    WaveGrid g = make_state(params, LogicalLabel::zero, n, dx);
    const WaveGrid one = make_state(params, LogicalLabel::one, n, dx);
    for (std::size_t j = 0; j < n; ++j) g.amp[j] -= one.amp[j];
    g.normalize();
    return g;
}

WaveGrid displace_x(const WaveGrid& state, double u) {
    const double span = state.dx * static_cast<double>(state.size());
    if (std::abs(u) > 0.1 * span)
        throw std::domain_error("displace_x: |u| exceeds 10% of the axis span");
    WaveGrid mom = to_momentum(state);
    for (std::size_t k = 0; k < mom.size(); ++k) {
        const double p = mom.x_at(k);
        mom.amp[k] *= std::complex<double>(std::cos(p * u), std::sin(p * u));
    }
    return to_position(mom);
}

WaveGrid displace_p(const WaveGrid& state, double v) {
    WaveGrid out = state;
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double x = out.x_at(j);
        out.amp[j] *= std::complex<double>(std::cos(v * x), -std::sin(v * x));
    }
    return out;
}

WaveGrid squeeze(const WaveGrid& state, double q) {
    if (!(q > 0.0)) throw std::invalid_argument("squeeze: q must be positive");
    const std::size_t n = state.size();
    // support bounds, for the axis guard
    double max_abs = 0.0;
    for (const auto& a : state.amp) max_abs = std::max(max_abs, std::abs(a));
    double support = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        if (std::abs(state.amp[j]) > 1e-7 * max_abs)
            support = std::max(support, std::abs(state.x_at(j)));
    const double half_span = -state.x_min;
    if (support / q > half_span)
        throw std::domain_error("squeeze: rescaled support exceeds the axis");

    // y -> sqrt(q) psi(q y) via sinc interpolation. With x fixed, the sinc
    // factors alternate sign down the grid, so one sine evaluation per output
    // point suffices.
    WaveGrid out = state;
    const double sq = std::sqrt(q);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = q * out.x_at(j);
        const double tfrac = (x - state.x_min) / state.dx;
        const auto nearest = static_cast<long long>(std::llround(tfrac));
        if (std::abs(tfrac - static_cast<double>(nearest)) < 1e-12) {
            out.amp[j] = (nearest >= 0 && nearest < static_cast<long long>(n))
                             ? sq * state.amp[static_cast<std::size_t>(nearest)]
                             : std::complex<double>{0.0, 0.0};
            continue;
        }
        const double s0 = std::sin(std::numbers::pi * tfrac);
        std::complex<double> acc{0.0, 0.0};
        double sign = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            acc += state.amp[k] * (sign / (tfrac - static_cast<double>(k)));
            sign = -sign;
        }
        out.amp[j] = sq * acc * (s0 / std::numbers::pi);
    }
    return out;
}

TwoModeGrid product(const WaveGrid& mode1, const WaveGrid& mode2) {
    if (mode1.size() != mode2.size() || mode1.dx != mode2.dx ||
        mode1.x_min != mode2.x_min)
        throw std::invalid_argument("product: modes must share the axis");
    TwoModeGrid g;
    g.x_min = mode1.x_min;
    g.dx = mode1.dx;
    g.n = mode1.size();
    g.amp.resize(g.n * g.n);
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = 0; j < g.n; ++j)
            g.amp[i * g.n + j] = mode1.amp[i] * mode2.amp[j];
    return g;
}

namespace {

// psi'(x1,x2) = psi(x1 + c*x2, x2): translate each mode-1 line by -c*x2.
void shear_mode1(TwoModeGrid& g, double c) {
    const std::size_t n = g.n;
    WaveGrid line = make_centered_grid(n, g.dx);
    for (std::size_t j = 0; j < n; ++j) {
        const double d = -c * g.x_at(j);
        for (std::size_t i = 0; i < n; ++i) line.amp[i] = g.amp[i * n + j];
        WaveGrid mom = to_momentum(line);
        for (std::size_t k = 0; k < n; ++k) {
            const double p = mom.x_at(k);
            mom.amp[k] *= std::complex<double>(std::cos(p * d), std::sin(p * d));
        }
        const WaveGrid back = to_position(mom);
        for (std::size_t i = 0; i < n; ++i) g.amp[i * n + j] = back.amp[i];
    }
}

// psi'(x1,x2) = psi(x1, x2 + c*x1): translate each mode-2 line by -c*x1.
void shear_mode2(TwoModeGrid& g, double c) {
    const std::size_t n = g.n;
    WaveGrid line = make_centered_grid(n, g.dx);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = -c * g.x_at(i);
        std::copy_n(&g.amp[i * n], n, line.amp.begin());
        WaveGrid mom = to_momentum(line);
        for (std::size_t k = 0; k < n; ++k) {
            const double p = mom.x_at(k);
            mom.amp[k] *= std::complex<double>(std::cos(p * d), std::sin(p * d));
        }
        const WaveGrid back = to_position(mom);
        std::copy_n(back.amp.begin(), n, &g.amp[i * n]);
    }
}

}  // namespace

TwoModeGrid beamsplitter(const TwoModeGrid& state) {
    // R(45deg) = Sx(-tan 22.5) * Sy(sin 45) * Sx(-tan 22.5); the function is
    // composed with the shears left to right.
    const double t = std::tan(std::numbers::pi / 8.0);
    const double s = std::sin(std::numbers::pi / 4.0);
    TwoModeGrid out = state;
    shear_mode1(out, -t);
    shear_mode2(out, s);
    shear_mode1(out, -t);
    return out;
}

namespace {

HomodyneResult homodyne_mode2(const TwoModeGrid& state, std::mt19937_64& rng,
                              bool momentum_basis) {
    const std::size_t n = state.n;
    // mode-2 axis, possibly transformed to its momentum representation
    std::vector<std::complex<double>> amp;
    double axis_min = state.x_min;
    double axis_dx = state.dx;
    if (!momentum_basis) {
        amp = state.amp;
    } else {
        amp.resize(n * n);
        WaveGrid line = make_centered_grid(n, state.dx);
        for (std::size_t i = 0; i < n; ++i) {
            std::copy_n(&state.amp[i * n], n, line.amp.begin());
            const WaveGrid mom = to_momentum(line);
            std::copy_n(mom.amp.begin(), n, &amp[i * n]);
            if (i == 0) {
                axis_min = mom.x_min;
                axis_dx = mom.dx;
            }
        }
    }

    std::vector<double> marginal(n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            marginal[j] += std::norm(amp[i * n + j]);
            total += std::norm(amp[i * n + j]);
        }
    if (total <= 0.0) throw std::domain_error("homodyne: zero state");

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t pick = 0;
    for (int attempt = 0; attempt < 100; ++attempt) {
        const double r = unit(rng) * total;
        double acc = 0.0;
        pick = n - 1;
        for (std::size_t j = 0; j < n; ++j) {
            acc += marginal[j];
            if (acc >= r) {
                pick = j;
                break;
            }
        }
        if (marginal[pick] > 1e-15 * total) break;
        if (attempt == 99)
            throw std::runtime_error("homodyne: degenerate marginal, retries exhausted");
    }

    HomodyneResult res;
    res.outcome = axis_min + axis_dx * static_cast<double>(pick);
    res.collapsed = make_centered_grid(n, state.dx);
    for (std::size_t i = 0; i < n; ++i) res.collapsed.amp[i] = amp[i * n + pick];
    res.collapsed.normalize();
    return res;
}

}  // namespace

HomodyneResult homodyne_x(const TwoModeGrid& state, std::mt19937_64& rng) {
    return homodyne_mode2(state, rng, false);
}

HomodyneResult homodyne_p(const TwoModeGrid& state, std::mt19937_64& rng) {
    return homodyne_mode2(state, rng, true);
}

namespace {

double overlap_at(const WaveGrid& ref, const WaveGrid& psi, double u, double v) {
    const WaveGrid shifted = displace_x(ref, u);
    std::complex<double> s{0.0, 0.0};
    for (std::size_t j = 0; j < psi.size(); ++j) {
        const double x = psi.x_at(j);
        s += std::conj(shifted.amp[j]) *
             std::complex<double>(std::cos(v * x), std::sin(v * x)) * psi.amp[j];
    }
    return std::abs(s) * psi.dx;
}

// golden-section maximization on [a, b]
template <typename F>
double golden_max(F&& f, double a, double b, int iters) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

ResidualFit estimate_residual(const WaveGrid& psi,
                              const std::vector<WaveGrid>& references) {
    if (references.empty())
        throw std::invalid_argument("estimate_residual: need references");

    const double u_half = 0.55 * kSqrtPi;  // covers [-sqrt(pi)/2, sqrt(pi)/2)
    const double v_half = 0.55 * kSqrtPi;
    const int nu_coarse = 49;
    const double du = 2.0 * u_half / (nu_coarse - 1);

    ResidualFit best;
    best.overlap = -1.0;
    for (std::size_t li = 0; li < references.size(); ++li) {
        const WaveGrid& ref = references[li];
        for (int iu = 0; iu < nu_coarse; ++iu) {
            const double u = -u_half + iu * du;
            const WaveGrid shifted = displace_x(ref, u);
            // one FFT gives the overlap against every v at once:
            // <ref_{u,v}|psi> = sqrt(2 pi) * FT[conj(ref_u) psi](p = v)
            WaveGrid g = psi;
            for (std::size_t j = 0; j < g.size(); ++j)
                g.amp[j] *= std::conj(shifted.amp[j]);
            const WaveGrid G = to_momentum(g);
            for (std::size_t k = 0; k < G.size(); ++k) {
                const double v = G.x_at(k);
                if (std::abs(v) > v_half) continue;
                const double ov =
                    std::sqrt(2.0 * std::numbers::pi) * std::abs(G.amp[k]);
                if (ov > best.overlap) {
                    best.overlap = ov;
                    best.label = static_cast<int>(li);
                    best.u = u;
                    best.v = v;
                }
            }
        }
    }

    // local refinement, alternating golden sections in u and v
    const WaveGrid& ref = references[static_cast<std::size_t>(best.label)];
    const double dv = to_momentum(psi).dx;
    double u = best.u, v = best.v;
    for (int cycle = 0; cycle < 3; ++cycle) {
        u = golden_max([&](double uu) { return overlap_at(ref, psi, uu, v); },
                       u - du, u + du, 24);
        v = golden_max([&](double vv) { return overlap_at(ref, psi, u, vv); },
                       v - dv, v + dv, 24);
    }
    best.u = u;
    best.v = v;
    best.overlap = overlap_at(ref, psi, u, v);
    return best;
}

namespace {

WaveGrid apply_errors(WaveGrid state, const ShiftPair& shift) {
    // error order e^{-i u p} e^{-i v x}: the p shift acts first
    return displace_x(displace_p(std::move(state), shift.v), shift.u);
}

}  // namespace

CircuitResult run_x_correction_circuit(const StateParams& params,
                                       const ShiftPair& qubit_shift,
                                       const ShiftPair& ancilla_shift,
                                       std::uint64_t seed, std::size_t n,
                                       double dx) {
    const WaveGrid qubit =
        apply_errors(make_state(params, LogicalLabel::zero, n, dx), qubit_shift);
    // The ancilla error enters the rotation with its sign flipped; applying
    // the inverse displacement reproduces the correction algebra exactly.
    const WaveGrid ancilla =
        apply_errors(make_plus_state(params, n, dx),
                     ShiftPair{-ancilla_shift.u, -ancilla_shift.v});

    TwoModeGrid two = beamsplitter(product(qubit, ancilla));
    std::mt19937_64 rng(seed);
    HomodyneResult hom = homodyne_x(two, rng);

    WaveGrid mode1 = squeeze(hom.collapsed, std::sqrt(2.0));
    // reduced mod the 2 sqrt(pi) stabilizer period so the envelope stays
    // centered on the grid; the codeword content is unchanged
    mode1 = displace_x(mode1, centered_mod(correction_shift(hom.outcome)));
    mode1.normalize();

    const std::vector<WaveGrid> refs = {make_state(params, LogicalLabel::zero, n, dx),
                                        make_state(params, LogicalLabel::one, n, dx)};
    const ResidualFit fit = estimate_residual(mode1, refs);

    CircuitResult res;
    res.measured = hom.outcome;
    res.residual_estimate = ShiftPair{fit.u, fit.v};
    res.flip_detected = fit.label == 1;
    res.final_state = std::move(mode1);
    return res;
}

CircuitResult run_p_correction_circuit(const StateParams& params,
                                       const ShiftPair& qubit_shift,
                                       const ShiftPair& ancilla_shift,
                                       std::uint64_t seed, std::size_t n,
                                       double dx) {
    // squeeze(1/sqrt(2)) stretches the envelope, so this circuit needs the
    // extra sqrt(2) of axis margin up front
    if (0.5 * static_cast<double>(n) * dx <
        std::sqrt(2.0) * (4.0 / params.kappa + 4.0 * params.delta))
        throw std::domain_error(
            "run_p_correction_circuit: axis too small for the squeeze");
    const WaveGrid qubit =
        apply_errors(make_plus_state(params, n, dx), qubit_shift);
    const WaveGrid ancilla =
        apply_errors(make_state(params, LogicalLabel::zero, n, dx),
                     ShiftPair{-ancilla_shift.u, -ancilla_shift.v});

    TwoModeGrid two = beamsplitter(product(qubit, ancilla));
    std::mt19937_64 rng(seed);
    HomodyneResult hom = homodyne_p(two, rng);

    WaveGrid mode1 = squeeze(hom.collapsed, 1.0 / std::sqrt(2.0));
    mode1 = displace_p(mode1, centered_mod(correction_shift(hom.outcome)));
    mode1.normalize();

    const std::vector<WaveGrid> refs = {make_plus_state(params, n, dx),
                                        make_minus_state(params, n, dx)};
    const ResidualFit fit = estimate_residual(mode1, refs);

    CircuitResult res;
    res.measured = hom.outcome;
    res.residual_estimate = ShiftPair{fit.u, fit.v};
    res.flip_detected = fit.label == 1;
    res.final_state = std::move(mode1);
    return res;
}

}  // namespace gkp
