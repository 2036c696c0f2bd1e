#include "gkp/numerics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>

namespace gkp {

namespace {

struct SimpsonState {
    const std::function<double(double)>& f;
    double abs_tol;
    int max_depth;
    bool converged = true;

    double recurse(double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = f(lm);
        const double frm = f(rm);
        const double h = b - a;
        const double left = (h / 12.0) * (fa + 4.0 * flm + fm);
        const double right = (h / 12.0) * (fm + 4.0 * frm + fb);
        const double err = (left + right - whole) / 15.0;
        if (std::abs(err) <= tol || h <= std::abs(a) * 1e-15) {
            return left + right + err;
        }
        if (depth >= max_depth) {
            converged = false;
            return left + right + err;
        }
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
               recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }
};

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
    if (!(a <= b)) throw std::invalid_argument("integrate: requires a <= b");
    if (!(spec.abs_tol > 0.0) || spec.max_depth < 1)
        throw std::invalid_argument("integrate: bad QuadratureSpec");
    if (a == b) return 0.0;
    SimpsonState st{f, spec.abs_tol, spec.max_depth};
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = ((b - a) / 6.0) * (fa + 4.0 * fm + fb);
    const double result = st.recurse(a, b, fa, fm, fb, whole, spec.abs_tol, 0);
    if (!st.converged)
        throw NonConvergenceError("integrate: max_depth exceeded", result);
    return result;
}

double integrate_segmented(const std::function<double(double)>& f,
                           const std::vector<double>& breaks,
                           const QuadratureSpec& spec) {
    if (breaks.size() < 2)
        throw std::invalid_argument("integrate_segmented: need >= 2 breakpoints");
    QuadratureSpec per = spec;
    per.abs_tol = spec.abs_tol / static_cast<double>(breaks.size() - 1);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        total += integrate(f, breaks[i], breaks[i + 1], per);
    return total;
}

SeriesTruncation truncation_for(double kappa) {
    if (!(kappa > 0.0)) throw std::invalid_argument("truncation_for: kappa <= 0");
    // exp(-(2 s kappa sqrt(pi))^2) <= 1e-16, never below s = 1.
    const double s = std::sqrt(std::log(1e16)) / (2.0 * kappa * kSqrtPi);
    return SeriesTruncation{std::max(1, static_cast<int>(std::ceil(s)))};
}

double bisect(const std::function<double(double)>& g, double lo, double hi,
              double tol) {
    if (!(lo < hi)) throw std::invalid_argument("bisect: empty interval");
    double glo = g(lo);
    double ghi = g(hi);
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    if ((glo < 0.0) == (ghi < 0.0))
        throw BracketError("bisect: no sign change on bracket");
    for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double WaveGrid::norm() const {
    double s = 0.0;
    for (const auto& a : amp) s += std::norm(a);
    return std::sqrt(s * dx);
}

void WaveGrid::normalize() {
    const double n = norm();
    if (n <= 0.0) throw std::domain_error("WaveGrid::normalize: zero state");
    for (auto& a : amp) a /= n;
}

WaveGrid make_centered_grid(std::size_t n, double dx) {
    WaveGrid g;
    g.dx = dx;
    g.x_min = -0.5 * static_cast<double>(n) * dx;
    g.amp.assign(n, {0.0, 0.0});
    return g;
}

void fft(std::vector<std::complex<double>>& a, int sign) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft: length must be a power of two");
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

namespace {

void require_centered_pow2(const WaveGrid& g, const char* who) {
    const std::size_t n = g.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument(std::string(who) + ": length must be a power of two");
    const double expect = -0.5 * static_cast<double>(n) * g.dx;
    if (std::abs(g.x_min - expect) > 1e-9 * static_cast<double>(n) * g.dx)
        throw std::invalid_argument(std::string(who) + ": grid must be centered");
}

}  // namespace

WaveGrid to_momentum(const WaveGrid& g) {
    require_centered_pow2(g, "to_momentum");
    const std::size_t n = g.size();
    const double dp = 2.0 * std::numbers::pi / (static_cast<double>(n) * g.dx);
    WaveGrid out = make_centered_grid(n, dp);
    out.amp = g.amp;
    // phi_k = dx/sqrt(2 pi) * e^{i p_k x_min} * sum_j [(-1)^j psi_j] e^{+2 pi i jk/N}
    for (std::size_t j = 1; j < n; j += 2) out.amp[j] = -out.amp[j];
    fft(out.amp, +1);
    const double scale = g.dx / std::sqrt(2.0 * std::numbers::pi);
    for (std::size_t k = 0; k < n; ++k) {
        const double pk = out.x_at(k);
        out.amp[k] *= scale * std::complex<double>(std::cos(pk * g.x_min),
                                                   std::sin(pk * g.x_min));
    }
    return out;
}

WaveGrid to_position(const WaveGrid& g) {
    require_centered_pow2(g, "to_position");
    const std::size_t n = g.size();
    const double dx = 2.0 * std::numbers::pi / (static_cast<double>(n) * g.dx);
    WaveGrid out = make_centered_grid(n, dx);
    out.amp = g.amp;
    for (std::size_t k = 0; k < n; ++k) {
        const double pk = g.x_at(k);
        out.amp[k] *= std::complex<double>(std::cos(pk * out.x_min),
                                           -std::sin(pk * out.x_min));
    }
    fft(out.amp, -1);
    const double scale = g.dx / std::sqrt(2.0 * std::numbers::pi);
    for (std::size_t j = 0; j < n; ++j) {
        if (j & 1) out.amp[j] = -out.amp[j];
        out.amp[j] *= scale;
    }
    return out;
}

double expectation_x(const WaveGrid& g) {
    double s = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) s += g.x_at(j) * std::norm(g.amp[j]);
    return s * g.dx;
}

double expectation_x2(const WaveGrid& g) {
    double s = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.x_at(j);
        s += x * x * std::norm(g.amp[j]);
    }
    return s * g.dx;
}

std::complex<double> inner_product(const WaveGrid& a, const WaveGrid& b) {
    if (a.size() != b.size()) throw std::invalid_argument("inner_product: size mismatch");
    std::complex<double> s{0.0, 0.0};
    for (std::size_t j = 0; j < a.size(); ++j) s += std::conj(a.amp[j]) * b.amp[j];
    return s * a.dx;
}

}  // namespace gkp
