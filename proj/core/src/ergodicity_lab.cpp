#include "scbf/ergodicity_lab.hpp"

#include <cmath>

#include "scbf/errors.hpp"
#include "scbf/spectral_ops.hpp"
#include "scbf/stability_lab.hpp"

namespace scbf {

std::string Observable::name() const {
    switch (kind) {
        case Kind::norm_h_sq: return "norm_H_sq";
        case Kind::norm_v_sq: return "norm_V_sq";
        case Kind::norm_lr1: return "norm_Lr1";
        case Kind::mode_energy:
            return "mode_energy(" + std::to_string(mode[0]) + "," + std::to_string(mode[1]) +
                   "," + std::to_string(mode[2]) + ")";
    }
    return "unknown";
}

double Observable::operator()(const SpectralField& u, double r) const {
    switch (kind) {
        case Kind::norm_h_sq: {
            const double n = norm_h(u);
            return n * n;
        }
        case Kind::norm_v_sq: {
            const double n = norm_v(u);
            return n * n;
        }
        case Kind::norm_lr1:
            return norm_lp(u, r + 1.0);
        case Kind::mode_energy: {
            // energy carried by the +/- k pair
            const auto v = u.mode(mode);
            double acc = 0.0;
            for (const auto& c : v) acc += std::norm(c);
            return 2.0 * domain_volume(u.domain()) * acc;
        }
    }
    return 0.0;
}

namespace {

void finalize_series(ObservableSeries& s, double burn_in, double stabilization_eps = 1e-12) {
    const std::size_t n = s.times.size();
    s.running_avg.assign(n, 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = s.times[i + 1] - s.times[i];
        acc += s.values[i] * h;
        s.running_avg[i + 1] = acc / s.times[i + 1];
    }
    if (n > 0) s.running_avg[0] = s.values[0];

    s.burn_in = burn_in;
    // averages over [burn_in, t]
    double acc_b = 0.0;
    double final_avg = 0.0;
    std::vector<double> post_t, post_avg;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (s.times[i] < burn_in) continue;
        const double h = s.times[i + 1] - s.times[i];
        acc_b += s.values[i] * h;
        const double span = s.times[i + 1] - burn_in;
        if (span > 0.0) {
            post_t.push_back(s.times[i + 1]);
            post_avg.push_back(acc_b / span);
        }
    }
    if (!post_avg.empty()) final_avg = post_avg.back();
    s.average_after_burn_in = final_avg;

    double worst = 0.0;
    if (!post_t.empty()) {
        const double t_half = 0.5 * (post_t.front() + post_t.back());
        const double denom = std::max(std::abs(final_avg), stabilization_eps);
        for (std::size_t i = 0; i < post_t.size(); ++i) {
            if (post_t[i] < t_half) continue;
            worst = std::max(worst, std::abs(post_avg[i] - final_avg) / denom);
        }
    }
    s.stabilization_rel_change = worst;
}

}  // namespace

TimeAverageReport time_average_experiment(SimulationConfig cfg, const JumpModel& model,
                                          const std::vector<Observable>& observables,
                                          double T_long, double burn_in_fraction,
                                          double stabilization_tol) {
    if (!cfg.forcing.empty())
        throw AdmissibilityError("time-average experiment is stated for f = 0");
    const double growth_k = model.derive_constants().growth_k;
    if (!(cfg.params.mu > 0.5 * growth_k))
        throw AdmissibilityError("invariant-measure regime needs mu > K/(2 lambda_1), K = " +
                                 std::to_string(growth_k));

    cfg.noise = model;
    cfg.T = T_long;
    cfg.record_lp = false;

    TimeAverageReport rep;
    rep.series.resize(observables.size());
    for (std::size_t i = 0; i < observables.size(); ++i)
        rep.series[i].id = observables[i].name();

    const double r = cfg.params.r;
    const auto observer = [&](double t, const SpectralField& u, bool is_jump) {
        if (is_jump) return;
        for (std::size_t i = 0; i < observables.size(); ++i) {
            rep.series[i].times.push_back(t);
            rep.series[i].values.push_back(observables[i](u, r));
        }
    };
    simulate_path(cfg, 0, observer);

    rep.stabilized = true;
    for (auto& s : rep.series) {
        finalize_series(s, burn_in_fraction * T_long);
        if (s.stabilization_rel_change > stabilization_tol) rep.stabilized = false;
    }
    return rep;
}

TightnessReport tightness_diagnostic(SimulationConfig cfg, const JumpModel& model, double T,
                                     int paths, double slack, int threads) {
    if (!cfg.forcing.empty())
        throw AdmissibilityError("tightness diagnostic is stated for f = 0");
    const double growth_k = model.derive_constants().growth_k;
    if (!(cfg.params.mu > 0.5 * growth_k))
        throw AdmissibilityError("tightness diagnostic needs mu > K/(2 lambda_1)");

    cfg.noise = model;
    cfg.T = T;
    cfg.record_lp = false;

    std::vector<double> v_integral(static_cast<std::size_t>(paths), 0.0);
    parallel_paths(paths, threads, [&](int p) {
        const auto [traj, ledger] = simulate_path(cfg, p);
        v_integral[static_cast<std::size_t>(p)] = ledger.viscous / (2.0 * cfg.params.mu);
    });

    TightnessReport rep;
    rep.paths = paths;
    rep.growth_k = growth_k;
    double mean = 0.0;
    for (const double v : v_integral) mean += v;
    mean /= static_cast<double>(paths);

    const double e_u0 = cfg.initial.empty() ? 0.0 : norm_h(cfg.initial) * norm_h(cfg.initial);
    rep.lhs = (2.0 * cfg.params.mu - growth_k) * mean / T;
    rep.bound = e_u0 / T + growth_k;
    rep.ratio = rep.bound > 0.0 ? rep.lhs / rep.bound : 0.0;
    rep.pass = rep.ratio <= 1.0 + slack;
    return rep;
}

CrossCheckReport ergodicity_cross_check(SimulationConfig cfg, const JumpModel& model,
                                        const std::vector<SpectralField>& u0_list,
                                        double T_long, double burn_in_fraction) {
    const StabilityConstants c = stability_constants(cfg.params, model);
    if (!c.theta_admissible)
        throw AdmissibilityError("unique-ergodicity regime needs mu > (2 eta + L)/lambda_1");

    CrossCheckReport rep;
    const Observable obs{Observable::Kind::norm_h_sq, {0, 0, 0}};
    for (const auto& u0 : u0_list) {
        SimulationConfig local = cfg;
        local.initial = u0;
        const TimeAverageReport run = time_average_experiment(
            local, model, {obs}, T_long, burn_in_fraction, 1.0);
        const auto& s = run.series.front();
        rep.averages.push_back(s.average_after_burn_in);
        rep.self_consistency.push_back(s.stabilization_rel_change *
                                       std::abs(s.average_after_burn_in));
    }

    rep.pass = true;
    double max_avg = 0.0;
    for (const double a : rep.averages) max_avg = std::max(max_avg, std::abs(a));
    for (std::size_t i = 0; i < rep.averages.size(); ++i)
        for (std::size_t j = i + 1; j < rep.averages.size(); ++j) {
            const double gap = std::abs(rep.averages[i] - rep.averages[j]);
            rep.max_pairwise_gap = std::max(rep.max_pairwise_gap, gap);
            if (max_avg > 0.0)
                rep.max_relative_gap = std::max(rep.max_relative_gap, gap / max_avg);
            const double combined = rep.self_consistency[i] + rep.self_consistency[j];
            if (gap > 2.0 * combined + 1e-12) rep.pass = false;
        }
    return rep;
}

MixingReport mixing_rate_experiment(SimulationConfig cfg, const JumpModel& model,
                                    const SpectralField& u0, const SpectralField& v0,
                                    int paths, double lipschitz_cap, double tol,
                                    int threads) {
    const StabilityConstants c = stability_constants(cfg.params, model);
    if (!c.theta_admissible)
        throw AdmissibilityError("mixing-rate experiment needs mu > (2 eta + L)/lambda_1");

    cfg.noise = model;
    cfg.initial = u0;
    cfg.record_lp = false;

    MixingReport rep;
    rep.rate = c.theta;
    rep.tol = tol;
    rep.paths = paths;
    rep.lipschitz_cap = lipschitz_cap;
    const double d0 = norm_h(u0 - v0);

    const auto phi = [&](const SpectralField& u) {
        return std::min(norm_h(u), lipschitz_cap);
    };

    std::vector<std::vector<double>> diff_rows(static_cast<std::size_t>(paths));
    std::vector<std::vector<double>> dist_rows(static_cast<std::size_t>(paths));
    std::vector<std::vector<double>> times(static_cast<std::size_t>(paths));
    std::vector<double> jensen(static_cast<std::size_t>(paths), 0.0);
    parallel_paths(paths, threads, [&](int p) {
        auto& drow = diff_rows[static_cast<std::size_t>(p)];
        auto& crow = dist_rows[static_cast<std::size_t>(p)];
        auto& trow = times[static_cast<std::size_t>(p)];
        double& jv = jensen[static_cast<std::size_t>(p)];
        const auto observer = [&](double t, const SpectralField& u, const SpectralField& v,
                                  bool is_jump) {
            if (is_jump) return;
            const double pd = phi(u) - phi(v);
            const double cd = norm_h(u - v);
            jv = std::max(jv, std::abs(pd) - cd);
            drow.push_back(pd);
            crow.push_back(cd);
            trow.push_back(t);
        };
        simulate_coupled_pair(cfg, v0, p, observer);
    });

    const std::size_t nt = times.front().size();
    rep.times = times.front();
    rep.gap.assign(nt, 0.0);
    rep.stderr_mc.assign(nt, 0.0);
    rep.coupling_distance.assign(nt, 0.0);
    for (int p = 0; p < paths; ++p) {
        for (std::size_t i = 0; i < nt; ++i) {
            rep.gap[i] += diff_rows[static_cast<std::size_t>(p)][i];
            rep.coupling_distance[i] += dist_rows[static_cast<std::size_t>(p)][i];
        }
        rep.max_jensen_violation = std::max(rep.max_jensen_violation,
                                            jensen[static_cast<std::size_t>(p)]);
    }
    for (std::size_t i = 0; i < nt; ++i) {
        rep.gap[i] /= static_cast<double>(paths);
        rep.coupling_distance[i] /= static_cast<double>(paths);
    }
    if (paths > 1) {
        for (int p = 0; p < paths; ++p)
            for (std::size_t i = 0; i < nt; ++i) {
                const double d = diff_rows[static_cast<std::size_t>(p)][i] - rep.gap[i];
                rep.stderr_mc[i] += d * d;
            }
        for (auto& s : rep.stderr_mc)
            s = std::sqrt(s / static_cast<double>(paths - 1) / static_cast<double>(paths));
    }
    for (auto& g : rep.gap) g = std::abs(g);

    rep.envelope.assign(nt, 0.0);
    rep.pass = true;
    for (std::size_t i = 0; i < nt; ++i) {
        rep.envelope[i] = d0 * std::exp(-0.5 * rep.rate * rep.times[i]) * (1.0 + tol);
        if (rep.gap[i] > rep.envelope[i] + 3.0 * rep.stderr_mc[i] + 1e-15 && rep.pass) {
            rep.pass = false;
            rep.first_violation_time = rep.times[i];
        }
    }

    // fitted decay rate of the gap over informative samples
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < nt; ++i) {
        if (rep.gap[i] <= 3.0 * rep.stderr_mc[i] || rep.gap[i] <= 0.0) continue;
        sx += rep.times[i];
        sy += std::log(rep.gap[i]);
        sxx += rep.times[i] * rep.times[i];
        sxy += rep.times[i] * std::log(rep.gap[i]);
        ++count;
    }
    if (count >= 2 && sxx * count - sx * sx > 0.0)
        rep.fitted_rate = -(sxy * count - sx * sy) / (sxx * count - sx * sx);
    return rep;
}

}  // namespace scbf
