#ifndef GKP_MONTECARLO_HPP
#define GKP_MONTECARLO_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gkp/error_model.hpp"

namespace gkp {

enum class ThresholdMode { track_only, abort_on_flip };

struct RunConfig {
    StateParams params;
    int rounds = 1;
    int trials = 1;
    std::uint64_t master_seed = 0;
    ThresholdMode threshold_mode = ThresholdMode::track_only;

    void validate() const;
};

struct BinomialEstimate {
    double rate = 0.0;
    double ci_low = 0.0;   // 95% normal-approximation bounds, clamped to [0,1]
    double ci_high = 0.0;
};

struct RunStats {
    std::uint64_t trials = 0;
    std::uint64_t x_flip_trials = 0;    // trials with >= 1 X flip event
    std::uint64_t z_flip_trials = 0;
    std::uint64_t any_flip_trials = 0;
    BinomialEstimate x_flip_rate;
    BinomialEstimate z_flip_rate;
    BinomialEstimate any_flip_rate;
    /// Histogram of max(|u|,|v|) residual magnitude after each round,
    /// uniform bins over [0, sqrt(pi)].
    std::array<std::uint64_t, 32> residual_histogram{};

    std::string to_json() const;
    std::string histogram_csv() const;
};

/// Runs `trials` independent histories. Per trial: initial qubit shift drawn
/// from dist0, then each round draws a fresh x-ancilla from the |+~> role
/// distribution (dist_plus) and a fresh p-ancilla from the |0~> role (dist0)
/// and applies a correction round. Deterministic for a fixed master_seed.
///
/// The |+~> shift distribution is dist0 with (u, v) swapped: the comb duality
/// rotates the |0_L> lattice into the |+_L> one under x <-> p.
RunStats simulate(const RunConfig& config, const ShiftDistribution& dist0,
                  const ShiftDistribution& dist_plus);

/// p_no_error(params)^parts: the all-states-inside-threshold guarantee bound.
double lower_bound_success(const StateParams& params, int parts);

}  // namespace gkp

#endif
