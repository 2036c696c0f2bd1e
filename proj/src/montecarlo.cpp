#include "gkp/montecarlo.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gkp {

void RunConfig::validate() const {
    params.validate();
    if (rounds < 1) throw std::invalid_argument("RunConfig: rounds must be >= 1");
    if (trials < 1) throw std::invalid_argument("RunConfig: trials must be >= 1");
}

namespace {

BinomialEstimate estimate(std::uint64_t hits, std::uint64_t n) {
    BinomialEstimate e;
    if (n == 0) return e;
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    const double half = 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    e.rate = p;
    e.ci_low = std::max(0.0, p - half);
    e.ci_high = std::min(1.0, p + half);
    return e;
}

}  // namespace

RunStats simulate(const RunConfig& config, const ShiftDistribution& dist0,
                  const ShiftDistribution& dist_plus) {
    config.validate();
    if (dist0.params.delta != config.params.delta ||
        dist0.params.kappa != config.params.kappa)
        throw std::invalid_argument("simulate: dist0 was built from other params");

    const SamplerState sampler0 = make_sampler(dist0, config.master_seed);
    const SamplerState sampler_plus = make_sampler(dist_plus, config.master_seed);

    RunStats stats;
    stats.trials = static_cast<std::uint64_t>(config.trials);
    const double bin_width = kSqrtPi / stats.residual_histogram.size();

    for (int trial = 0; trial < config.trials; ++trial) {
        // Draw indices are a stable function of (trial, position in trial) so
        // results do not depend on execution order.
        const std::uint64_t base =
            static_cast<std::uint64_t>(trial) * (2ULL * config.rounds + 1ULL);
        std::uint64_t draw = base;

        QubitErrorState qubit;
        qubit.shift = sample_shift(dist0, sampler0, draw++);
        bool x_flipped = false, z_flipped = false;

        for (int r = 0; r < config.rounds; ++r) {
            // |+~> ancilla: dist0 with (u, v) swapped.
            ShiftPair ax = sample_shift(dist_plus, sampler_plus, draw++);
            ax = ShiftPair{ax.v, ax.u};
            const ShiftPair ap = sample_shift(dist0, sampler0, draw++);

            auto [after, recs] = correction_round(qubit, ax, ap);
            qubit = after;
            x_flipped = x_flipped || recs[0].flip_applied != 0;
            z_flipped = z_flipped || recs[1].flip_applied != 0;

            const double mag =
                std::max(std::abs(qubit.shift.u), std::abs(qubit.shift.v));
            auto bin = static_cast<std::size_t>(mag / bin_width);
            bin = std::min(bin, stats.residual_histogram.size() - 1);
            ++stats.residual_histogram[bin];

            if (config.threshold_mode == ThresholdMode::abort_on_flip &&
                (x_flipped || z_flipped))
                break;
        }
        if (x_flipped) ++stats.x_flip_trials;
        if (z_flipped) ++stats.z_flip_trials;
        if (x_flipped || z_flipped) ++stats.any_flip_trials;
    }

    stats.x_flip_rate = estimate(stats.x_flip_trials, stats.trials);
    stats.z_flip_rate = estimate(stats.z_flip_trials, stats.trials);
    stats.any_flip_rate = estimate(stats.any_flip_trials, stats.trials);
    return stats;
}

double lower_bound_success(const StateParams& params, int parts) {
    if (parts < 1) throw std::invalid_argument("lower_bound_success: parts < 1");
    return std::pow(p_no_error(params), parts);
}

std::string RunStats::to_json() const {
    nlohmann::json j;
    j["trials"] = trials;
    j["x_flip_trials"] = x_flip_trials;
    j["z_flip_trials"] = z_flip_trials;
    j["any_flip_trials"] = any_flip_trials;
    const auto dump = [](const BinomialEstimate& e) {
        return nlohmann::json{{"rate", e.rate}, {"ci_low", e.ci_low}, {"ci_high", e.ci_high}};
    };
    j["x_flip_rate"] = dump(x_flip_rate);
    j["z_flip_rate"] = dump(z_flip_rate);
    j["any_flip_rate"] = dump(any_flip_rate);
    j["residual_histogram"] = residual_histogram;
    return j.dump();
}

std::string RunStats::histogram_csv() const {
    std::ostringstream os;
    os.precision(17);
    const double bin_width = kSqrtPi / residual_histogram.size();
    os << "residual_magnitude_bin_low_quadrature,count\n";
    for (std::size_t i = 0; i < residual_histogram.size(); ++i)
        os << i * bin_width << ',' << residual_histogram[i] << '\n';
    return os.str();
}

}  // namespace gkp
