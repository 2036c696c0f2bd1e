#include "gkp/shift_algebra.hpp"

#include <cmath>
#include <stdexcept>

#include "gkp/numerics.hpp"

namespace gkp {

double centered_mod(double q) {
    if (!std::isfinite(q)) throw std::invalid_argument("centered_mod: non-finite input");
    const double period = 2.0 * kSqrtPi;
    double r = q - period * std::floor((q + kSqrtPi) / period);
    // floor rounding can leave r on the excluded right edge
    if (r >= kSqrtPi) r -= period;
    if (r < -kSqrtPi) r += period;
    return r;
}

double correction_shift(double q) {
    return -q / std::sqrt(2.0) + 0.5 * centered_mod(2.0 * std::sqrt(2.0) * q);
}

namespace {

std::pair<QubitErrorState, CorrectionRecord> step(const QubitErrorState& qubit,
                                                  const ShiftPair& ancilla,
                                                  Quadrature quad) {
    const bool is_x = quad == Quadrature::x;
    const double e1 = is_x ? qubit.shift.u : qubit.shift.v;
    const double e2 = is_x ? ancilla.u : ancilla.v;
    const double o1 = is_x ? qubit.shift.v : qubit.shift.u;
    const double o2 = is_x ? ancilla.v : ancilla.u;

    const double sum = e1 + e2;
    const double corrected = e1 - 0.5 * centered_mod(2.0 * sum);
    const double m_real = (corrected + e2) / kSqrtPi;
    if (std::abs(m_real - std::round(m_real)) > 1e-9)
        throw std::logic_error("correction step: residual + ancilla shift is "
                               "not an integer multiple of sqrt(pi)");
    // fold into the canonical window [-sqrt(pi)/2, sqrt(pi)/2); each full
    // sqrt(pi) of displacement is a logical flip, absorbed into the frame
    const double j = std::round(corrected / kSqrtPi);
    const double residual = corrected - j * kSqrtPi;
    const int flip = static_cast<int>(std::llround(j)) & 1;

    QubitErrorState out = qubit;
    if (is_x) {
        out.shift.u = residual;
        out.shift.v = o1 - o2;
        out.frame.x_flips ^= flip;
    } else {
        out.shift.v = residual;
        out.shift.u = o1 - o2;
        out.frame.z_flips ^= flip;
    }

    CorrectionRecord rec;
    rec.quadrature = quad;
    rec.raw_sum = sum;
    rec.measurement_outcome = -sum / std::sqrt(2.0);  // comb integer n = 0
    rec.applied_shift = correction_shift(rec.measurement_outcome);
    rec.residual_before_next = residual;
    rec.flip_applied = flip;
    return {out, rec};
}

}  // namespace

std::pair<QubitErrorState, CorrectionRecord> x_correction_step(
    const QubitErrorState& qubit, const ShiftPair& ancilla) {
    return step(qubit, ancilla, Quadrature::x);
}

std::pair<QubitErrorState, CorrectionRecord> p_correction_step(
    const QubitErrorState& qubit, const ShiftPair& ancilla) {
    return step(qubit, ancilla, Quadrature::p);
}

std::pair<QubitErrorState, std::array<CorrectionRecord, 2>> correction_round(
    const QubitErrorState& qubit, const ShiftPair& ancilla_x,
    const ShiftPair& ancilla_p) {
    auto [afterx, recx] = x_correction_step(qubit, ancilla_x);
    auto [afterp, recp] = p_correction_step(afterx, ancilla_p);
    return {afterp, {recx, recp}};
}

namespace {

struct Branch {
    ShiftPair residual;
    std::vector<ShiftPair> history;  // initial qubit shift, then ancillas
};

}  // namespace

WorstCaseResult worst_case_check(double t, int rounds, std::uint64_t budget) {
    if (!(t >= 0.0)) throw std::invalid_argument("worst_case_check: t < 0");
    if (rounds < 1) throw std::invalid_argument("worst_case_check: rounds < 1");

    std::uint64_t used = 0;
    const auto count = [&](std::uint64_t n) {
        used += n;
        if (used > budget)
            throw std::runtime_error("worst_case_check: enumeration budget exceeded");
    };

    // Residuals after a clean step depend only on the last two ancillas, so
    // the frontier of distinct (u, v) residuals stays small after dedup.
    std::vector<Branch> frontier;
    const double signs[2] = {-t, +t};
    for (double su : signs)
        for (double sv : signs) {
            count(1);
            frontier.push_back({{su, sv}, {{su, sv}}});
        }

    const auto dedup = [](std::vector<Branch>& v) {
        std::vector<Branch> out;
        for (auto& b : v) {
            bool seen = false;
            for (const auto& o : out)
                if (std::abs(o.residual.u - b.residual.u) < 1e-12 &&
                    std::abs(o.residual.v - b.residual.v) < 1e-12) {
                    seen = true;
                    break;
                }
            if (!seen) out.push_back(std::move(b));
        }
        v = std::move(out);
    };

    for (int r = 0; r < rounds; ++r) {
        for (Quadrature quad : {Quadrature::x, Quadrature::p}) {
            std::vector<Branch> next;
            for (const Branch& b : frontier) {
                for (double su : signs)
                    for (double sv : signs) {
                        count(1);
                        const ShiftPair anc{su, sv};
                        QubitErrorState q{b.residual, {}};
                        auto [after, rec] = step(q, anc, quad);
                        Branch nb;
                        nb.residual = after.shift;
                        nb.history = b.history;
                        nb.history.push_back(anc);
                        if (rec.flip_applied != 0 ||
                            std::abs(rec.raw_sum) >= kSqrtPi / 2.0) {
                            return {false, std::move(nb.history)};
                        }
                        next.push_back(std::move(nb));
                    }
            }
            dedup(next);
            frontier = std::move(next);
        }
    }
    return {true, std::nullopt};
}

}  // namespace gkp
