#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gkp/error_model.hpp"
#include "gkp/grid_io.hpp"
#include "gkp/montecarlo.hpp"
#include "gkp/numerics.hpp"
#include "gkp/oracle.hpp"
#include "gkp/shift_algebra.hpp"
#include "gkp/states.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

using nlohmann::json;

void emit(const json& inputs, const json& outputs) {
    json envelope;
    envelope["version"] = kVersion;
    envelope["inputs"] = inputs;
    envelope["outputs"] = outputs;
    std::cout << envelope.dump(2) << '\n';
}

bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

struct Options {
    double tolerance = 1e-12;
    std::uint64_t seed = 12345;

    double delta = 0.25;
    double kappa = 0.25;
    int label = 0;
    double xmin = -10.0;
    double xmax = 10.0;
    int points = 1001;
    bool approx_only = false;
    int nu = 64;
    int nv = 32;
    std::vector<double> delta_range = {0.1, 0.5};
    std::vector<double> pnoerror_range = {0.9, 0.99};
    int steps = 10;
    double threshold = gkp::kSqrtPi / 6.0;
    double target = 0.9;
    double t_over_threshold = 1.0;
    int rounds = 1;
    int trials = 100;
    std::size_t grid_n = 1024;
    std::string dump_state;
};

gkp::LogicalLabel label_of(int bit) {
    return bit == 0 ? gkp::LogicalLabel::zero : gkp::LogicalLabel::one;
}

int cmd_wavefunction(const Options& opt) {
    if (opt.points <= 0)
        throw CLI::ValidationError("--points", "must be positive");
    if (!(opt.xmax > opt.xmin))
        throw CLI::ValidationError("--xmax", "must exceed --xmin");
    const gkp::StateParams params{opt.delta, opt.kappa};
    params.validate();
    const auto label = label_of(opt.label);

    const double dx = (opt.xmax - opt.xmin) / opt.points;
    std::cout << "x,amplitude (dimensionless quadrature units)\n";
    gkp::WaveGrid grid;
    grid.x_min = opt.xmin;
    grid.dx = dx;
    grid.amp.resize(static_cast<std::size_t>(opt.points));
    for (int j = 0; j < opt.points; ++j) {
        const double x = opt.xmin + j * dx;
        const double a = gkp::wavefunction(params, label, x);
        grid.amp[static_cast<std::size_t>(j)] = a;
        std::cout << x << ',' << a << '\n';
    }
    if (!opt.dump_state.empty()) gkp::write_grid(grid, opt.dump_state);
    return 0;
}

int cmd_misid(const Options& opt) {
    const gkp::StateParams params{opt.delta, opt.kappa};
    params.validate();
    gkp::QuadratureSpec spec;
    spec.abs_tol = opt.tolerance;

    json inputs{{"delta", opt.delta}, {"kappa", opt.kappa},
                {"approx", opt.approx_only}};
    json outputs;
    outputs["approx"] = gkp::misid_probability_approx(params);
    if (!opt.approx_only)
        outputs["exact"] =
            gkp::misid_probability_exact(params, gkp::LogicalLabel::zero, spec);
    emit(inputs, outputs);
    return 0;
}

int cmd_puv(const Options& opt) {
    const gkp::StateParams params{opt.delta, opt.kappa};
    params.validate();
    const auto dist =
        gkp::shift_distribution(params, label_of(opt.label), opt.nu, opt.nv);
    gkp::write_csv(dist, std::cout);
    return 0;
}

int cmd_pnoerror(const Options& opt) {
    if (opt.delta_range.size() != 2 || !(opt.delta_range[0] < opt.delta_range[1]))
        throw CLI::ValidationError("--delta-range", "expects min max with min < max");
    if (opt.steps < 2) throw CLI::ValidationError("--steps", "needs at least 2");
    std::cout << "delta (peak width),p_no_error (probability)\n";
    for (int i = 0; i < opt.steps; ++i) {
        const double d = opt.delta_range[0] +
                         (opt.delta_range[1] - opt.delta_range[0]) * i /
                             (opt.steps - 1);
        const gkp::StateParams params{d, d};
        std::cout << d << ','
                  << gkp::p_no_error(params, gkp::LogicalLabel::zero,
                                     opt.threshold)
                  << '\n';
    }
    return 0;
}

int cmd_find_delta(const Options& opt) {
    const double d = gkp::find_delta(opt.target, opt.threshold);
    emit(json{{"target", opt.target}, {"threshold", opt.threshold}},
         json{{"delta", d}});
    return 0;
}

int cmd_photons(const Options& opt) {
    if (opt.pnoerror_range.size() != 2 ||
        !(opt.pnoerror_range[0] < opt.pnoerror_range[1]))
        throw CLI::ValidationError("--pnoerror-range",
                                   "expects min max with min < max");
    if (opt.steps < 2) throw CLI::ValidationError("--steps", "needs at least 2");
    std::cout << "p_error (probability),mean_photons_exact (photons),"
                 "mean_photons_crude (photons)\n";
    for (int i = 0; i < opt.steps; ++i) {
        const double pne = opt.pnoerror_range[0] +
                           (opt.pnoerror_range[1] - opt.pnoerror_range[0]) * i /
                               (opt.steps - 1);
        const double d = gkp::find_delta(pne, opt.threshold);
        const gkp::StateParams params{d, d};
        std::cout << (1.0 - pne) << ','
                  << gkp::mean_photons_exact(params, gkp::LogicalLabel::zero)
                  << ',' << gkp::mean_photons_crude(params) << '\n';
    }
    return 0;
}

int cmd_verify_bound(const Options& opt) {
    if (opt.t_over_threshold < 0.0)
        throw CLI::ValidationError("--t-over-threshold", "must be nonnegative");
    if (opt.rounds < 1)
        throw CLI::ValidationError("--rounds", "must be positive");
    const double t = opt.t_over_threshold * gkp::kSqrtPi / 6.0;
    const auto result = gkp::worst_case_check(t, opt.rounds);
    json outputs{{"safe", result.safe}};
    if (result.witness) {
        json w = json::array();
        for (const auto& s : *result.witness)
            w.push_back(json{{"u", s.u}, {"v", s.v}});
        outputs["witness"] = w;
    } else {
        outputs["witness"] = nullptr;
    }
    emit(json{{"t_over_threshold", opt.t_over_threshold},
              {"rounds", opt.rounds}},
         outputs);
    return 0;
}

int cmd_simulate(const Options& opt) {
    gkp::RunConfig config;
    config.params = gkp::StateParams{opt.delta, opt.kappa};
    config.rounds = opt.rounds;
    config.trials = opt.trials;
    config.master_seed = opt.seed;
    config.validate();

    const auto dist0 = gkp::shift_distribution(
        config.params, gkp::LogicalLabel::zero, 256, 128);
    const auto stats = gkp::simulate(config, dist0, dist0);
    emit(json{{"delta", opt.delta},
              {"kappa", opt.kappa},
              {"rounds", opt.rounds},
              {"trials", opt.trials},
              {"seed", opt.seed}},
         json::parse(stats.to_json()));
    return 0;
}

int cmd_oracle_check(const Options& opt) {
    if (!is_pow2(opt.grid_n))
        throw CLI::ValidationError("--grid-n", "must be a power of two");
    if (opt.trials < 1)
        throw CLI::ValidationError("--trials", "must be positive");
    const gkp::StateParams params{opt.delta, opt.kappa};
    params.validate();

    const std::size_t n = opt.grid_n;
    const double half_span = 4.0 / params.kappa + 4.0 * params.delta + 0.2;
    const double dx = 2.0 * half_span / static_cast<double>(n);

    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double boundary = 0.5 * gkp::kSqrtPi;

    double max_du = 0.0, max_dv = 0.0;
    int flip_agreements = 0, skipped = 0;
    gkp::WaveGrid last_state;
    for (int trial = 0; trial < opt.trials; ++trial) {
        gkp::ShiftPair qs{0.45 * boundary * unit(rng), 0.45 * boundary * unit(rng)};
        gkp::ShiftPair as{0.45 * boundary * unit(rng), 0.45 * boundary * unit(rng)};
        if (std::abs(std::abs(qs.u + as.u) - boundary) < 2.0 * dx) {
            ++skipped;
            continue;
        }
        const auto circuit = gkp::run_x_correction_circuit(
            params, qs, as, opt.seed + 977 * static_cast<std::uint64_t>(trial),
            n, dx);
        const auto [algebra, record] =
            gkp::x_correction_step(gkp::QubitErrorState{qs, {}}, as);
        // The algebra abstracts the homodyne readout to exact tooth centers.
        // A finite-width state measures off-center by d, and the correcting
        // shift s(m) carries that back into the result: the corrected tooth
        // lands at e1 - d/2 + mod(2d - 2(e1+e2))/2, so both the residual and
        // the flip must be conditioned on the actual outcome.
        const double w = gkp::kSqrtPi;
        const double scaled = std::sqrt(2.0) * circuit.measured + qs.u + as.u;
        const double delta_meas = scaled - w * std::round(scaled / w);
        const double tooth =
            qs.u - 0.5 * delta_meas +
            0.5 * gkp::centered_mod(2.0 * delta_meas - 2.0 * (qs.u + as.u));
        const double jfold = std::round(tooth / w);
        const double predicted_u = tooth - jfold * w;
        const bool predicted_flip = (static_cast<long long>(jfold) & 1) != 0;
        if (std::abs(predicted_u) > boundary - 2.0 * dx) {
            // measurement noise pushed the residual within grid resolution
            // of the decision boundary; unresolvable at this dx
            ++skipped;
            continue;
        }
        max_du = std::max(max_du,
                          std::abs(circuit.residual_estimate.u - predicted_u));
        max_dv = std::max(max_dv,
                          std::abs(circuit.residual_estimate.v - algebra.shift.v));
        if (circuit.flip_detected == predicted_flip) ++flip_agreements;
        last_state = circuit.final_state;
    }
    if (!opt.dump_state.empty() && !last_state.amp.empty())
        gkp::write_grid(last_state, opt.dump_state);

    emit(json{{"delta", opt.delta},
              {"kappa", opt.kappa},
              {"grid_n", opt.grid_n},
              {"trials", opt.trials},
              {"seed", opt.seed}},
         json{{"grid_dx", dx},
              {"max_residual_discrepancy_u", max_du},
              {"max_residual_discrepancy_v", max_dv},
              {"flip_agreements", flip_agreements},
              {"compared_trials", opt.trials - skipped},
              {"skipped_boundary_trials", skipped}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"GKP shift-error analysis toolkit"};
    app.require_subcommand(1);
    app.add_option("--tolerance", opt.tolerance,
                   "absolute quadrature tolerance")
        ->capture_default_str();
    app.add_option("--seed", opt.seed, "default RNG seed")
        ->capture_default_str();

    auto add_params = [&](CLI::App* sub) {
        sub->add_option("--delta", opt.delta, "peak width")
            ->capture_default_str();
        sub->add_option("--kappa", opt.kappa, "envelope inverse width")
            ->capture_default_str();
    };

    auto* wf = app.add_subcommand("wavefunction",
                                  "sample a codeword amplitude as CSV");
    add_params(wf);
    wf->add_option("--label", opt.label, "logical label (0 or 1)")
        ->check(CLI::Range(0, 1))
        ->capture_default_str();
    wf->add_option("--xmin", opt.xmin)->capture_default_str();
    wf->add_option("--xmax", opt.xmax)->capture_default_str();
    wf->add_option("--points", opt.points)->capture_default_str();
    wf->add_option("--dump-state", opt.dump_state, "binary grid output path");

    auto* mi = app.add_subcommand("misid",
                                  "misidentification probability as JSON");
    add_params(mi);
    mi->add_flag("--approx", opt.approx_only, "skip the exact quadrature");

    auto* pu = app.add_subcommand("puv", "shift density P(u,v) as CSV");
    add_params(pu);
    pu->add_option("--label", opt.label)->check(CLI::Range(0, 1))
        ->capture_default_str();
    pu->add_option("--nu", opt.nu)->check(CLI::Range(16, 4096))
        ->capture_default_str();
    pu->add_option("--nv", opt.nv)->check(CLI::Range(16, 4096))
        ->capture_default_str();

    auto* pn = app.add_subcommand("pnoerror",
                                  "P_no-error versus delta (= kappa) as CSV");
    pn->add_option("--delta-range", opt.delta_range, "min max")
        ->expected(2);
    pn->add_option("--steps", opt.steps)->capture_default_str();
    pn->add_option("--threshold", opt.threshold)->capture_default_str();

    auto* fd = app.add_subcommand("find-delta",
                                  "invert P_no-error for delta as JSON");
    fd->add_option("--target", opt.target)->required();
    fd->add_option("--threshold", opt.threshold)->capture_default_str();

    auto* ph = app.add_subcommand("photons",
                                  "photon budget versus error probability as CSV");
    ph->add_option("--pnoerror-range", opt.pnoerror_range, "min max")
        ->expected(2);
    ph->add_option("--steps", opt.steps)->capture_default_str();

    auto* vb = app.add_subcommand("verify-bound",
                                  "worst-case threshold check as JSON");
    vb->add_option("--t-over-threshold", opt.t_over_threshold)
        ->capture_default_str();
    vb->add_option("--rounds", opt.rounds)->capture_default_str();

    auto* si = app.add_subcommand("simulate",
                                  "Monte Carlo correction rounds as JSON");
    add_params(si);
    si->add_option("--rounds", opt.rounds)->capture_default_str();
    si->add_option("--trials", opt.trials)->capture_default_str();
    si->add_option("--seed", opt.seed)->capture_default_str();

    auto* oc = app.add_subcommand("oracle-check",
                                  "grid circuit versus shift algebra as JSON");
    add_params(oc);
    oc->add_option("--grid-n", opt.grid_n)->capture_default_str();
    oc->add_option("--trials", opt.trials)->capture_default_str();
    oc->add_option("--seed", opt.seed)->capture_default_str();
    oc->add_option("--dump-state", opt.dump_state, "binary grid output path");

    try {
        app.parse(argc, argv);
        if (wf->parsed()) return cmd_wavefunction(opt);
        if (mi->parsed()) return cmd_misid(opt);
        if (pu->parsed()) return cmd_puv(opt);
        if (pn->parsed()) return cmd_pnoerror(opt);
        if (fd->parsed()) return cmd_find_delta(opt);
        if (ph->parsed()) return cmd_photons(opt);
        if (vb->parsed()) return cmd_verify_bound(opt);
        if (si->parsed()) return cmd_simulate(opt);
        if (oc->parsed()) return cmd_oracle_check(opt);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 1;
    }
}
