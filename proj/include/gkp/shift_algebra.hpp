#ifndef GKP_SHIFT_ALGEBRA_HPP
#define GKP_SHIFT_ALGEBRA_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace gkp {

/// A position/momentum displacement (quadrature units). Unbounded here;
/// restriction to the fundamental cell belongs to the error model.
struct ShiftPair {
    double u = 0.0;
    double v = 0.0;
};

/// Accumulated logical flips, tracked classically.
struct PauliFrame {
    int x_flips = 0;  // parity bit
    int z_flips = 0;

    bool operator==(const PauliFrame&) const = default;
};

struct QubitErrorState {
    ShiftPair shift;
    PauliFrame frame;
};

enum class Quadrature { x, p };

/// Bookkeeping for one correction step.
struct CorrectionRecord {
    Quadrature quadrature = Quadrature::x;
    double raw_sum = 0.0;              // u1+u2 or v1+v2
    double measurement_outcome = 0.0;  // (n*sqrt(pi) - raw_sum)/sqrt(2), n = 0
    double applied_shift = 0.0;        // s(measurement_outcome)
    double residual_before_next = 0.0;
    int flip_applied = 0;
};

/// Mod_{2 sqrt(pi)} with range [-sqrt(pi), sqrt(pi)).
double centered_mod(double q);

/// s(q) = -q/sqrt(2) + (1/2) Mod_{2 sqrt(pi)}(2 sqrt(2) q).
double correction_shift(double q);

/// One x-quadrature correction: u1 - Mod(2u1+2u2)/2 folded into
/// [-sqrt(pi)/2, sqrt(pi)/2) becomes the new u, each sqrt(pi) of folding is
/// an X flip, and the new v is v1 - v2.
std::pair<QubitErrorState, CorrectionRecord> x_correction_step(
    const QubitErrorState& qubit, const ShiftPair& ancilla);

/// Mirror of x_correction_step with the quadrature roles swapped (Z flips).
std::pair<QubitErrorState, CorrectionRecord> p_correction_step(
    const QubitErrorState& qubit, const ShiftPair& ancilla);

/// x step with ancilla_x, then p step with ancilla_p.
std::pair<QubitErrorState, std::array<CorrectionRecord, 2>> correction_round(
    const QubitErrorState& qubit, const ShiftPair& ancilla_x,
    const ShiftPair& ancilla_p);

struct WorstCaseResult {
    bool safe = true;
    /// When unsafe: the initial qubit shift followed by the per-step ancilla
    /// shifts that reproduce a flip.
    std::optional<std::vector<ShiftPair>> witness;
};

/// Exhaustively checks whether `rounds` alternating corrections stay
/// flip-free when every state-preparation shift takes an extremal value in
/// {-t, +t}. Each step's success condition is a signed sum of at most three
/// such terms and is monotone in each, so extremal values decide safety;
/// reachable residuals are deduplicated, keeping the enumeration windowed.
WorstCaseResult worst_case_check(double t, int rounds,
                                 std::uint64_t budget = std::uint64_t{1} << 24);

}  // namespace gkp

#endif
