#include "scbf/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>
#include <thread>

#include "scbf/errors.hpp"
#include "scbf/spectral_ops.hpp"

namespace scbf {

void SimulationConfig::validate() const {
    if (!domain) throw ConfigurationError("simulation config needs a domain");
    params.validate();
    if (dt <= 0.0) throw ConfigurationError("time step dt must be positive");
    if (T <= 0.0 || dt > T) throw ConfigurationError("horizon must satisfy 0 < dt <= T");
    if (record_every < 1) throw ConfigurationError("record_every must be >= 1");
    if (galerkin_modes != -1 &&
        (galerkin_modes < 1 || galerkin_modes > domain->resolution() / 2))
        throw ConfigurationError("galerkin_modes must lie in [1, N/2]");
    if (!forcing.empty()) forcing.require_same_domain(SpectralField(domain));
    if (!initial.empty()) initial.require_same_domain(SpectralField(domain));
}

int SimulationConfig::effective_kmax() const {
    return galerkin_modes == -1 ? domain->resolution() / 2 : galerkin_modes;
}

namespace {

double phi1(double x) { return x == 0.0 ? 1.0 : std::expm1(x) / x; }

// Nonlinear assembly at the left endpoint of a substep, plus the scalar
// pairings the energy ledger needs at the same state.
struct RhsEval {
    SpectralField rhs;
    double norm_v_sq = 0.0;
    double damping_pairing = 0.0;  // <C(u),u> = ||u||_{L^{r+1}}^{r+1}
    double forcing_inner = 0.0;    // <f,u>
    double drift_inner = 0.0;      // (int gamma lambda(dz), u)
};

RhsEval evaluate_rhs(const SpectralField& u, const SimulationConfig& cfg) {
    RhsEval ev;
    const int kmax = cfg.effective_kmax();
    const bool truncate = kmax < cfg.domain->resolution() / 2;

    SpectralField c = nonlinear_c(u, cfg.params.r);
    if (truncate) c = galerkin_truncate(c, kmax);
    ev.damping_pairing = inner_h(c, u);

    SpectralField b = bilinear_b(u);
    if (truncate) b = galerkin_truncate(b, kmax);

    ev.rhs = std::move(b);
    ev.rhs *= -1.0;
    ev.rhs.axpy(-cfg.params.beta, c);
    if (!cfg.forcing.empty()) {
        ev.forcing_inner = inner_h(cfg.forcing, u);
        ev.rhs += cfg.forcing;
    }
    if (cfg.noise) {
        SpectralField drift = cfg.noise->compensator_drift(u);
        if (truncate) drift = galerkin_truncate(drift, kmax);
        ev.drift_inner = inner_h(drift, u);
        ev.rhs -= drift;
    }
    const double nv = norm_v(u);
    ev.norm_v_sq = nv * nv;
    return ev;
}

SpectralField advance_linear(const SpectralField& u, const SpectralField& rhs, double dt,
                             double mu) {
    const auto& dom = u.domain();
    SpectralField out = u;
    const std::size_t nm = dom.num_modes();
    for (int c = 0; c < dom.dim(); ++c) {
        Complex* o = out.component(c);
        const Complex* r = rhs.component(c);
        for (std::size_t i = 0; i < nm; ++i) {
            const double x = -mu * dom.eigenvalue(i) * dt;
            o[i] = std::exp(x) * o[i] + dt * phi1(x) * r[i];
        }
    }
    return out;
}

}  // namespace

SpectralField deterministic_step(const SpectralField& u, double dt,
                                 const SimulationConfig& cfg) {
    if (dt <= 0.0) throw ConfigurationError("step size must be positive");
    const RhsEval ev = evaluate_rhs(u, cfg);
    return advance_linear(u, ev.rhs, dt, cfg.params.mu);
}

SpectralField apply_jump(const SpectralField& u, const JumpModel& model, double z) {
    SpectralField out = u;
    out += model.coefficient(u, z);
    return out;
}

std::pair<Trajectory, EnergyLedger> simulate_path(const SimulationConfig& cfg,
                                                  int trajectory_index,
                                                  const SampleObserver& observer) {
    cfg.validate();
    const int kmax = cfg.effective_kmax();

    SpectralField u = cfg.initial.empty() ? SpectralField(cfg.domain)
                                          : galerkin_truncate(leray_project(cfg.initial), kmax);

    std::vector<JumpEvent> events;
    if (cfg.noise && cfg.noise->marks().total_rate() > 0.0) {
        RngStream rng(cfg.seed, static_cast<std::uint64_t>(trajectory_index), 0);
        events = sample_jump_events(cfg.noise->marks(), cfg.T, rng);
    }

    Trajectory traj;
    EnergyLedger ledger;
    const double h0 = norm_h(u);
    ledger.initial_energy = h0 * h0;
    const double blowup_threshold = cfg.blowup_factor * std::max(1.0, h0);

    const auto record = [&](double t, bool is_jump) {
        TrajectorySample s;
        s.t = t;
        s.norm_h = norm_h(u);
        s.norm_v = norm_v(u);
        s.norm_lr1 = cfg.record_lp ? norm_lp(u, cfg.params.r + 1.0) : 0.0;
        s.is_jump = is_jump;
        traj.samples.push_back(s);
        if (observer) observer(t, u, is_jump);
    };
    record(0.0, false);

    const long n_steps = static_cast<long>(std::ceil(cfg.T / cfg.dt - 1e-12));
    std::size_t next_event = 0;
    double t = 0.0;

    for (long step = 0; step < n_steps; ++step) {
        const double t_end = std::min(cfg.T, (static_cast<double>(step) + 1.0) * cfg.dt);
        // advance to t_end, splitting at any jump inside (t, t_end]
        while (t < t_end) {
            double t_next = t_end;
            bool jump_here = false;
            if (next_event < events.size() && events[next_event].time <= t_end) {
                t_next = events[next_event].time;
                jump_here = true;
            }
            const double h = t_next - t;
            if (h > 0.0) {
                const RhsEval ev = evaluate_rhs(u, cfg);
                ledger.viscous += 2.0 * cfg.params.mu * ev.norm_v_sq * h;
                ledger.damping += 2.0 * cfg.params.beta * ev.damping_pairing * h;
                ledger.forcing_work += 2.0 * ev.forcing_inner * h;
                ledger.martingale_term -= 2.0 * ev.drift_inner * h;
                u = advance_linear(u, ev.rhs, h, cfg.params.mu);
            }
            t = t_next;
            if (jump_here) {
                const JumpEvent& ev = events[next_event];
                SpectralField gamma = cfg.noise->coefficient(u, ev.mark);
                if (kmax < cfg.domain->resolution() / 2)
                    gamma = galerkin_truncate(gamma, kmax);
                const double gn = norm_h(gamma);
                ledger.jump_qv += gn * gn;
                ledger.martingale_term += 2.0 * inner_h(gamma, u);
                u += gamma;
                traj.jumps.push_back(JumpLogEntry{ev.time, ev.mark, gn});
                ++next_event;
                record(t, true);
            }
            const double nh = norm_h(u);
            if (!std::isfinite(nh) || nh > blowup_threshold)
                throw BlowUpError(t, nh, norm_v(u),
                                  "trajectory exceeded the blow-up guard at t = " +
                                      std::to_string(t));
        }
        if ((step + 1) % cfg.record_every == 0 || step + 1 == n_steps)
            record(t, false);
    }

    const double hT = norm_h(u);
    ledger.kinetic_delta = hT * hT - ledger.initial_energy;
    ledger.residual = ledger.kinetic_delta + ledger.viscous + ledger.damping -
                      ledger.forcing_work - ledger.jump_qv - ledger.martingale_term;
    return {std::move(traj), ledger};
}

CoupledDiagnostics simulate_coupled_pair(const SimulationConfig& cfg, const SpectralField& v0,
                                         int trajectory_index, const CoupledObserver& observer) {
    cfg.validate();
    const int kmax = cfg.effective_kmax();

    SpectralField u = cfg.initial.empty() ? SpectralField(cfg.domain)
                                          : galerkin_truncate(leray_project(cfg.initial), kmax);
    SpectralField v = v0.empty() ? SpectralField(cfg.domain)
                                 : galerkin_truncate(leray_project(v0), kmax);

    std::vector<JumpEvent> events;
    if (cfg.noise && cfg.noise->marks().total_rate() > 0.0) {
        RngStream rng(cfg.seed, static_cast<std::uint64_t>(trajectory_index), 0);
        events = sample_jump_events(cfg.noise->marks(), cfg.T, rng);
    }

    CoupledDiagnostics diag;
    const double scale_u = std::max(1.0, norm_h(u));
    const double scale_v = std::max(1.0, norm_h(v));
    const double blowup_u = cfg.blowup_factor * scale_u;
    const double blowup_v = cfg.blowup_factor * scale_v;

    if (observer) observer(0.0, u, v, false);

    const long n_steps = static_cast<long>(std::ceil(cfg.T / cfg.dt - 1e-12));
    std::size_t next_event = 0;
    double t = 0.0;

    for (long step = 0; step < n_steps; ++step) {
        const double t_end = std::min(cfg.T, (static_cast<double>(step) + 1.0) * cfg.dt);
        while (t < t_end) {
            double t_next = t_end;
            bool jump_here = false;
            if (next_event < events.size() && events[next_event].time <= t_end) {
                t_next = events[next_event].time;
                jump_here = true;
            }
            const double h = t_next - t;
            if (h > 0.0) {
                const RhsEval eu = evaluate_rhs(u, cfg);
                const RhsEval ev = evaluate_rhs(v, cfg);
                u = advance_linear(u, eu.rhs, h, cfg.params.mu);
                v = advance_linear(v, ev.rhs, h, cfg.params.mu);
            }
            t = t_next;
            if (jump_here) {
                const double z = events[next_event].mark;
                const double before = norm_h(u - v);
                SpectralField gu = cfg.noise->coefficient(u, z);
                SpectralField gv = cfg.noise->coefficient(v, z);
                if (kmax < cfg.domain->resolution() / 2) {
                    gu = galerkin_truncate(gu, kmax);
                    gv = galerkin_truncate(gv, kmax);
                }
                u += gu;
                v += gv;
                const double after = norm_h(u - v);
                diag.max_jump_difference_change =
                    std::max(diag.max_jump_difference_change, std::abs(after - before));
                ++diag.jumps;
                ++next_event;
                if (observer) observer(t, u, v, true);
            }
            const double nu = norm_h(u);
            const double nv = norm_h(v);
            if (!std::isfinite(nu) || nu > blowup_u || !std::isfinite(nv) || nv > blowup_v)
                throw BlowUpError(t, std::max(nu, nv), 0.0,
                                  "coupled pair exceeded the blow-up guard at t = " +
                                      std::to_string(t));
        }
        if (observer && ((step + 1) % cfg.record_every == 0 || step + 1 == n_steps))
            observer(t, u, v, false);
    }
    return diag;
}

void parallel_paths(int count, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (int i = w; i < count; i += threads) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

EnergyEstimateReport energy_estimate_check(const SimulationConfig& cfg, int paths,
                                           int threads) {
    if (!cfg.forcing.empty())
        throw ConfigurationError("the a-priori energy estimate is stated for f = 0");
    double growth_k = 0.0;
    if (cfg.noise) growth_k = cfg.noise->derive_constants().growth_k;

    std::vector<double> per_path(static_cast<std::size_t>(paths), 0.0);
    SimulationConfig dense = cfg;
    dense.record_lp = false;
    dense.record_every = 1;  // sup over every grid point
    parallel_paths(paths, threads, [&](int p) {
        double sup_h2 = 0.0;
        const auto observer = [&](double, const SpectralField& u, bool) {
            const double nh = norm_h(u);
            sup_h2 = std::max(sup_h2, nh * nh);
        };
        const auto [traj, ledger] = simulate_path(dense, p, observer);
        // ledger stores 2mu int ||u||_V^2 and 2beta int ||u||^{r+1}
        per_path[static_cast<std::size_t>(p)] =
            sup_h2 + 2.0 * ledger.viscous + 2.0 * ledger.damping;
    });

    EnergyEstimateReport rep;
    rep.paths = paths;
    rep.growth_k = growth_k;
    double mean = 0.0;
    for (const double v : per_path) mean += v;
    rep.mc_estimate = mean / static_cast<double>(paths);
    const double e_u0 = cfg.initial.empty() ? 0.0 : norm_h(cfg.initial) * norm_h(cfg.initial);
    rep.bound = (2.0 * e_u0 + 14.0 * growth_k * cfg.T) * std::exp(28.0 * growth_k * cfg.T);
    rep.passed = rep.mc_estimate <= rep.bound;
    return rep;
}

}  // namespace scbf
