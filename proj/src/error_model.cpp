#include "gkp/error_model.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace gkp {

std::complex<double> shift_wavefunction(const StateParams& params,
                                        LogicalLabel label, double u, double v) {
    params.validate();
    const double offset = label == LogicalLabel::zero ? 0.0 : kSqrtPi;
    const int s_max = truncation_for(params.kappa).s_max + 1;
    std::complex<double> sum{0.0, 0.0};
    for (int s = -s_max; s <= s_max; ++s) {
        const double x = 2.0 * s * kSqrtPi + u + offset;
        const double psi = wavefunction(params, label, x);
        if (psi == 0.0) continue;
        const double phase = v * 2.0 * s * kSqrtPi;
        sum += psi * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return std::pow(M_PI, -0.25) * sum;
}

double ShiftDistribution::riemann_sum() const {
    double s = 0.0;
    for (double d : density) s += d;
    return s * du() * dv();
}

ShiftDistribution shift_distribution(const StateParams& params,
                                     LogicalLabel label, int nu, int nv) {
    params.validate();
    if (nu < 16 || nv < 16)
        throw std::invalid_argument("shift_distribution: nu, nv must be >= 16");
    ShiftDistribution dist;
    dist.params = params;
    dist.reference_label = label;
    dist.nu = nu;
    dist.nv = nv;
    dist.density.resize(static_cast<std::size_t>(nu) * nv);
    for (int i = 0; i < nu; ++i) {
        const double u = dist.u_at(i);
        for (int j = 0; j < nv; ++j) {
            const double f = std::abs(shift_wavefunction(params, label, u, dist.v_at(j)));
            dist.density[static_cast<std::size_t>(i) * nv + j] = f * f;
        }
    }
    return dist;
}

double p_no_error(const StateParams& params, LogicalLabel label,
                  double threshold, double abs_tol) {
    params.validate();
    if (!(threshold > 0.0 && threshold <= kSqrtPi / 2.0))
        throw std::invalid_argument("p_no_error: threshold out of (0, sqrt(pi)/2]");
    QuadratureSpec inner{abs_tol * 1e-2 / (2.0 * threshold), 40};
    QuadratureSpec outer{abs_tol, 40};
    const auto row = [&](double u) {
        return integrate(
            [&](double v) {
                const auto f = shift_wavefunction(params, label, u, v);
                return std::norm(f);
            },
            -threshold, threshold, inner);
    };
    return integrate(row, -threshold, threshold, outer);
}

double find_delta(double target, double threshold, double tol) {
    if (!(target > 0.0 && target < 1.0))
        throw BracketError("find_delta: target must be in (0, 1)");
    const double lo = 0.05, hi = 0.6;
    const auto g = [&](double d) {
        return p_no_error(StateParams{d, d}, LogicalLabel::zero, threshold) - target;
    };
    return bisect(g, lo, hi, tol);
}

namespace {

// splitmix64; stable across platforms, used to derive per-trial seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

SamplerState make_sampler(const ShiftDistribution& dist, std::uint64_t master_seed) {
    SamplerState s;
    s.master_seed = master_seed;
    s.cdf.resize(dist.density.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < dist.density.size(); ++i) {
        if (dist.density[i] < 0.0)
            throw std::invalid_argument("make_sampler: negative density");
        acc += dist.density[i];
        s.cdf[i] = acc;
    }
    if (acc <= 0.0) throw std::invalid_argument("make_sampler: empty distribution");
    for (double& c : s.cdf) c /= acc;
    s.cdf.back() = 1.0;
    return s;
}

ShiftPair sample_shift(const ShiftDistribution& dist, const SamplerState& sampler,
                       std::uint64_t trial_index) {
    std::mt19937_64 rng(mix_seed(sampler.master_seed, trial_index));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = unit(rng);
    const auto it = std::lower_bound(sampler.cdf.begin(), sampler.cdf.end(), r);
    const std::size_t flat = std::min<std::size_t>(
        static_cast<std::size_t>(it - sampler.cdf.begin()), sampler.cdf.size() - 1);
    const int i = static_cast<int>(flat / dist.nv);
    const int j = static_cast<int>(flat % dist.nv);
    const double ju = unit(rng) - 0.5;
    const double jv = unit(rng) - 0.5;
    return ShiftPair{dist.u_at(i) + ju * dist.du(), dist.v_at(j) + jv * dist.dv()};
}

void write_csv(const ShiftDistribution& dist, std::ostream& os) {
    os << "u_quadrature,v_quadrature,density_per_area\n";
    os.precision(17);
    for (int i = 0; i < dist.nu; ++i)
        for (int j = 0; j < dist.nv; ++j)
            os << dist.u_at(i) << ',' << dist.v_at(j) << ','
               << dist.density[static_cast<std::size_t>(i) * dist.nv + j] << '\n';
}

std::string to_json(const ShiftDistribution& dist) {
    nlohmann::json j;
    j["delta"] = dist.params.delta;
    j["kappa"] = dist.params.kappa;
    j["reference_label"] = static_cast<int>(dist.reference_label);
    j["nu"] = dist.nu;
    j["nv"] = dist.nv;
    j["density"] = dist.density;
    return j.dump();
}

ShiftDistribution distribution_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ShiftDistribution dist;
    dist.params.delta = j.at("delta").get<double>();
    dist.params.kappa = j.at("kappa").get<double>();
    dist.reference_label = static_cast<LogicalLabel>(j.at("reference_label").get<int>());
    dist.nu = j.at("nu").get<int>();
    dist.nv = j.at("nv").get<int>();
    dist.density = j.at("density").get<std::vector<double>>();
    if (dist.density.size() != static_cast<std::size_t>(dist.nu) * dist.nv)
        throw std::invalid_argument("distribution_from_json: size mismatch");
    return dist;
}

}  // namespace gkp
