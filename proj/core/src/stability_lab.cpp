#include "scbf/stability_lab.hpp"

#include <cmath>
#include <limits>

#include "scbf/errors.hpp"
#include "scbf/spectral_ops.hpp"

namespace scbf {

StabilityConstants stability_constants(const CBFParameters& p,
                                       const std::optional<JumpModel>& model) {
    StabilityConstants c;
    c.eta = eta_constant(p);
    if (model) {
        const NoiseConstants nc = model->derive_constants();
        c.lipschitz_l = nc.lipschitz_l;
        c.rho = nc.rho.value_or(0.0);
    }
    const double mu = p.mu;  // lambda_1 = 1
    c.kappa = mu - 2.0 * c.eta;
    c.theta = mu - (2.0 * c.eta + c.lipschitz_l);
    c.theta_strict = mu - (2.0 * c.eta + 6.0 * c.lipschitz_l);
    c.zeta = mu - c.eta + c.rho;
    c.kappa_admissible = p.r > 3.0 ? c.kappa > 0.0 : p.mu >= 1.0 / (2.0 * p.beta);
    c.theta_admissible = c.theta > 0.0;
    c.pathwise_admissible = c.theta_strict > 0.0;
    c.zeta_admissible = c.rho > 0.0 && c.zeta > 0.0;
    return c;
}

namespace {

// Ensemble of squared distances to a target at the shared recording grid.
// Rows are indexed by path; jump records are skipped so rows align.
struct EnsembleDistances {
    std::vector<double> times;
    std::vector<std::vector<double>> rows;
};

EnsembleDistances run_distance_ensemble(const SimulationConfig& cfg,
                                        const SpectralField& target, int paths,
                                        int threads) {
    EnsembleDistances out;
    out.rows.resize(static_cast<std::size_t>(paths));
    std::vector<std::vector<double>> times(static_cast<std::size_t>(paths));
    parallel_paths(paths, threads, [&](int p) {
        auto& row = out.rows[static_cast<std::size_t>(p)];
        auto& trow = times[static_cast<std::size_t>(p)];
        const auto observer = [&](double t, const SpectralField& u, bool is_jump) {
            if (is_jump) return;
            const double d = target.empty() ? norm_h(u) : norm_h(u - target);
            row.push_back(d * d);
            trow.push_back(t);
        };
        simulate_path(cfg, p, observer);
    });
    out.times = times.front();
    return out;
}

void reduce_mean_stderr(const EnsembleDistances& ens, DecayReport& rep) {
    const std::size_t nt = ens.times.size();
    const std::size_t np = ens.rows.size();
    rep.times = ens.times;
    rep.mean_sq.assign(nt, 0.0);
    rep.stderr_mc.assign(nt, 0.0);
    for (const auto& row : ens.rows)
        for (std::size_t i = 0; i < nt; ++i) rep.mean_sq[i] += row[i];
    for (auto& m : rep.mean_sq) m /= static_cast<double>(np);
    if (np > 1) {
        for (const auto& row : ens.rows)
            for (std::size_t i = 0; i < nt; ++i) {
                const double d = row[i] - rep.mean_sq[i];
                rep.stderr_mc[i] += d * d;
            }
        for (auto& s : rep.stderr_mc)
            s = std::sqrt(s / static_cast<double>(np - 1) / static_cast<double>(np));
    }
}

void check_envelope(DecayReport& rep) {
    const std::size_t nt = rep.times.size();
    rep.envelope.resize(nt);
    rep.pass = true;
    const double floor_abs = 1e-16 * (1.0 + rep.initial_sq);
    for (std::size_t i = 0; i < nt; ++i) {
        rep.envelope[i] =
            rep.initial_sq * std::exp(-rep.rate * rep.times[i]) * (1.0 + rep.tol);
        const double allowed = rep.envelope[i] + 3.0 * rep.stderr_mc[i] + floor_abs;
        if (rep.mean_sq[i] > allowed && rep.pass) {
            rep.pass = false;
            rep.first_violation_time = rep.times[i];
        }
    }
    // least-squares slope of log mean-square over informative samples
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < nt; ++i) {
        if (rep.mean_sq[i] <= rep.initial_sq * 1e-24 || rep.mean_sq[i] <= 0.0) continue;
        const double x = rep.times[i];
        const double y = std::log(rep.mean_sq[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++count;
    }
    if (count >= 2 && sxx * count - sx * sx > 0.0)
        rep.fitted_slope = (sxy * count - sx * sy) / (sxx * count - sx * sx);
}

}  // namespace

DecayReport meansquare_decay_experiment(SimulationConfig cfg, const JumpModel& model,
                                        int paths, double tol, int threads) {
    if (model.family() != NoiseFamily::stabilizing)
        throw AdmissibilityError(
            "mean-square decay experiment needs a stabilizing noise family "
            "(the coefficient must vanish at the stationary state)");
    const StabilityConstants c = stability_constants(cfg.params, model);
    if (!c.theta_admissible)
        throw AdmissibilityError("condition mu > (2 eta + L)/lambda_1 violated: theta = " +
                                 std::to_string(c.theta));

    cfg.noise = model;
    cfg.record_lp = false;
    const SpectralField& target = model.anchor();

    DecayReport rep;
    rep.rate = c.theta;
    rep.tol = tol;
    rep.paths = paths;
    {
        const SpectralField w = cfg.initial.empty()
                                    ? (target.empty() ? SpectralField(cfg.domain)
                                                      : SpectralField(target))
                                    : (target.empty() ? cfg.initial : cfg.initial - target);
        const double d0 = w.empty() ? 0.0 : norm_h(w);
        rep.initial_sq = d0 * d0;
    }

    const EnsembleDistances ens = run_distance_ensemble(cfg, target, paths, threads);
    reduce_mean_stderr(ens, rep);
    check_envelope(rep);
    return rep;
}

PathwiseReport pathwise_decay_experiment(SimulationConfig cfg, const JumpModel& model,
                                         int paths, double window, double eps,
                                         int threads) {
    if (model.family() != NoiseFamily::stabilizing)
        throw AdmissibilityError(
            "pathwise decay experiment needs a stabilizing noise family");
    const StabilityConstants c = stability_constants(cfg.params, model);
    if (!c.pathwise_admissible)
        throw AdmissibilityError(
            "pathwise experiment uses the strict gate mu > (2 eta + 6 L)/lambda_1");
    if (!(eps > 0.0 && eps < c.theta))
        throw AdmissibilityError("epsilon must lie in (0, theta)");
    if (window <= 0.0 || window > cfg.T)
        throw ConfigurationError("window must lie in (0, T]");

    cfg.noise = model;
    cfg.record_lp = false;
    const SpectralField& target = model.anchor();

    PathwiseReport rep;
    rep.theta = c.theta;
    rep.eps = eps;
    rep.window = window;
    rep.paths = paths;
    rep.windows = static_cast<int>(std::floor(cfg.T / window + 1e-9));
    rep.n0_per_path.assign(static_cast<std::size_t>(paths), -1);
    rep.window_sup.assign(static_cast<std::size_t>(paths) *
                              static_cast<std::size_t>(rep.windows),
                          0.0);

    parallel_paths(paths, threads, [&](int p) {
        auto* sup = rep.window_sup.data() +
                    static_cast<std::size_t>(p) * static_cast<std::size_t>(rep.windows);
        const auto observer = [&](double t, const SpectralField& u, bool) {
            const double d = target.empty() ? norm_h(u) : norm_h(u - target);
            // closed windows [nh, (n+1)h]: boundary samples belong to both
            const double x = t / window;
            const int hi = static_cast<int>(std::floor(x + 1e-9));
            const int lo = static_cast<int>(std::ceil(x - 1e-9)) - 1;
            for (int n = std::max(0, lo); n <= hi && n < rep.windows; ++n) {
                double& s = sup[n];
                if (d > s) s = d;
            }
        };
        simulate_path(cfg, p, observer);

        int n0 = -1;
        for (int n = rep.windows - 1; n >= 0; --n) {
            const double bound =
                std::exp(-0.5 * (rep.theta - eps) * static_cast<double>(n) * window);
            if (sup[n] <= bound) n0 = n;
            else break;
        }
        rep.n0_per_path[static_cast<std::size_t>(p)] = n0;
    });

    int satisfied = 0;
    for (const int n0 : rep.n0_per_path)
        if (n0 >= 0) ++satisfied;
    rep.satisfied_fraction = static_cast<double>(satisfied) / static_cast<double>(paths);
    return rep;
}

StabilizationReport stabilization_experiment(SimulationConfig cfg, const JumpModel& model,
                                             int paths, double slack, int threads) {
    if (model.family() != NoiseFamily::stabilizing)
        throw AdmissibilityError("stabilization experiment needs a stabilizing noise family");
    const StabilityConstants c = stability_constants(cfg.params, model);
    if (!c.zeta_admissible)
        throw AdmissibilityError("stabilization requires rho > 0 and zeta > 0 (zeta = " +
                                 std::to_string(c.zeta) + ", rho = " + std::to_string(c.rho) +
                                 ")");

    cfg.noise = model;
    cfg.record_lp = false;
    const SpectralField& target = model.anchor();
    const double log_comp =
        model.marks().integrate([&](double z) { return std::log1p(model.coefficient_fn()(z)); });

    StabilizationReport rep;
    rep.zeta = c.zeta;
    rep.rho = c.rho;
    rep.slack = slack;
    rep.paths = paths;
    rep.final_quarter_slope.assign(static_cast<std::size_t>(paths), 0.0);
    rep.martingale_ratio_early.assign(static_cast<std::size_t>(paths), 0.0);
    rep.martingale_ratio_final.assign(static_cast<std::size_t>(paths), 0.0);
    std::vector<int> blowup_flags(static_cast<std::size_t>(paths), 0);

    parallel_paths(paths, threads, [&](int p) {
        double worst = -std::numeric_limits<double>::infinity();
        const double t_quarter = 0.75 * cfg.T;
        const auto observer = [&](double t, const SpectralField& u, bool) {
            if (t < t_quarter) return;
            const double d = target.empty() ? norm_h(u) : norm_h(u - target);
            const double ell = std::log(std::max(d * d, 1e-300)) / t;
            if (ell > worst) worst = ell;
        };
        try {
            const auto [traj, ledger] = simulate_path(cfg, p, observer);
            const auto m_at = [&](double t) {
                double sum = 0.0;
                for (const auto& j : traj.jumps) {
                    if (j.time > t) break;
                    sum += std::log1p(model.coefficient_fn()(j.mark));
                }
                return std::abs(sum - t * log_comp) / t;
            };
            rep.martingale_ratio_early[static_cast<std::size_t>(p)] = m_at(cfg.T / 10.0);
            rep.martingale_ratio_final[static_cast<std::size_t>(p)] = m_at(cfg.T);
            rep.final_quarter_slope[static_cast<std::size_t>(p)] = worst;
        } catch (const BlowUpError&) {
            blowup_flags[static_cast<std::size_t>(p)] = 1;
            rep.final_quarter_slope[static_cast<std::size_t>(p)] =
                std::numeric_limits<double>::infinity();
        }
    });

    int satisfied = 0;
    for (int p = 0; p < paths; ++p) {
        rep.blowups += blowup_flags[static_cast<std::size_t>(p)];
        if (rep.final_quarter_slope[static_cast<std::size_t>(p)] <= -rep.zeta + slack)
            ++satisfied;
    }
    rep.satisfied_fraction = static_cast<double>(satisfied) / static_cast<double>(paths);
    return rep;
}

CouplingReport coupling_decay_experiment(SimulationConfig cfg, const JumpModel& model,
                                         const SpectralField& u0, const SpectralField& v0,
                                         int paths, double tol, int threads) {
    const StabilityConstants c = stability_constants(cfg.params, model);
    if (!c.theta_admissible)
        throw AdmissibilityError("coupling contraction needs mu > (2 eta + L)/lambda_1");

    cfg.noise = model;
    cfg.initial = u0;
    cfg.record_lp = false;

    CouplingReport out;
    out.decay.rate = c.theta;
    out.decay.tol = tol;
    out.decay.paths = paths;
    {
        const double d0 = norm_h(u0 - v0);
        out.decay.initial_sq = d0 * d0;
    }

    std::vector<std::vector<double>> rows(static_cast<std::size_t>(paths));
    std::vector<std::vector<double>> times(static_cast<std::size_t>(paths));
    std::vector<double> jump_diag(static_cast<std::size_t>(paths), 0.0);
    parallel_paths(paths, threads, [&](int p) {
        auto& row = rows[static_cast<std::size_t>(p)];
        auto& trow = times[static_cast<std::size_t>(p)];
        const auto observer = [&](double t, const SpectralField& u, const SpectralField& v,
                                  bool is_jump) {
            if (is_jump) return;
            const double d = norm_h(u - v);
            row.push_back(d * d);
            trow.push_back(t);
        };
        const CoupledDiagnostics diag = simulate_coupled_pair(cfg, v0, p, observer);
        jump_diag[static_cast<std::size_t>(p)] = diag.max_jump_difference_change;
    });

    EnsembleDistances ens;
    ens.times = times.front();
    ens.rows = std::move(rows);
    reduce_mean_stderr(ens, out.decay);
    check_envelope(out.decay);
    for (const double d : jump_diag)
        out.max_jump_difference_change = std::max(out.max_jump_difference_change, d);
    return out;
}

}  // namespace scbf
