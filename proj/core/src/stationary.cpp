#include "scbf/stationary.hpp"

#include <cmath>

#include "scbf/errors.hpp"
#include "scbf/integrator.hpp"
#include "scbf/spectral_ops.hpp"

namespace scbf {

namespace {

SpectralField residual_field(const CBFParameters& p, const SpectralField& u,
                             const SpectralField& f) {
    return full_g(u, p, f);
}

double dual_norm(const SpectralField& res) { return norm_h(stokes_inv_sqrt(res)); }

// fixed-point map u -> (mu A)^{-1} (f - B(u) - beta C(u))
SpectralField fixed_point_image(const CBFParameters& p, const SpectralField& u,
                                const SpectralField& f) {
    SpectralField rhs = f.empty() ? SpectralField(u.domain_ptr()) : f;
    rhs -= bilinear_b(u);
    rhs.axpy(-p.beta, nonlinear_c(u, p.r));
    return stokes_inverse(rhs, p.mu);
}

}  // namespace

StationaryState solve_stationary(const CBFParameters& p, const SpectralField& f,
                                 const SpectralField& init,
                                 const StationarySolveOptions& opts) {
    p.validate();
    if (opts.tolerance <= 0.0) throw ConfigurationError("solver tolerance must be positive");

    const DomainPtr dom = f.empty() ? init.domain_ptr() : f.domain_ptr();
    if (!dom) throw ConfigurationError("stationary solve needs a forcing or an initial field");

    SpectralField fp = f.empty() ? SpectralField{} : leray_project(f);
    SpectralField u = init.empty() ? SpectralField(dom) : leray_project(init);

    StationaryState st;
    double omega = opts.relaxation;
    double res = dual_norm(residual_field(p, u, fp));
    st.residual_history.push_back(res);

    int it = 0;
    for (; it < opts.max_iterations && res > opts.tolerance; ++it) {
        SpectralField candidate = u;
        candidate *= 1.0 - omega;
        candidate.axpy(omega, fixed_point_image(p, u, fp));
        const double cres = dual_norm(residual_field(p, candidate, fp));
        if (cres <= res || omega <= opts.relaxation_floor) {
            u = std::move(candidate);
            res = cres;
            st.residual_history.push_back(res);
        } else {
            omega = std::max(opts.relaxation_floor, 0.5 * omega);
        }
    }

    if (opts.newton_polish && res > opts.tolerance) {
        // matrix-free Newton with finite-difference directional derivatives;
        // the correction equation is solved by Stokes-preconditioned
        // Richardson iterations (contractive in the uniqueness regime).
        for (int nit = 0; nit < opts.newton_max_iterations && res > opts.tolerance; ++nit) {
            const SpectralField r0 = residual_field(p, u, fp);
            SpectralField d(u.domain_ptr());
            const double scale = std::max(norm_h(u), 1.0);
            for (int inner = 0; inner < 30; ++inner) {
                const double eps = 1e-7 * scale / std::max(norm_h(d), 1e-30);
                SpectralField up = u;
                up.axpy(eps, d);
                SpectralField jd = residual_field(p, up, fp) - r0;
                jd *= 1.0 / eps;
                // d <- d - (mu A)^{-1} (J d + r0)
                SpectralField corr = jd + r0;
                d.axpy(-1.0, stokes_inverse(corr, p.mu));
            }
            SpectralField candidate = u + d;
            const double cres = dual_norm(residual_field(p, candidate, fp));
            if (cres >= res) break;
            u = std::move(candidate);
            res = cres;
            ++it;
        }
    }

    st.u_inf = std::move(u);
    st.residual_norm = res;
    st.iterations = it;
    st.converged = res <= opts.tolerance;
    return st;
}

UniquenessProbeResult uniqueness_probe(const CBFParameters& p, const SpectralField& f,
                                       int n_inits, std::uint64_t seed,
                                       const StationarySolveOptions& opts) {
    p.validate();
    if (p.r > 3.0) {
        const double eta = eta_constant(p);
        if (!(p.mu > 2.0 * eta))
            throw AdmissibilityError("uniqueness requires mu > 2 eta / lambda_1");
    } else if (p.r == 3.0) {
        if (!(p.mu >= 1.0 / (2.0 * p.beta)))
            throw AdmissibilityError("uniqueness at r = 3 requires mu >= 1/(2 beta)");
    } else {
        throw AdmissibilityError("uniqueness probe defined for r >= 3");
    }

    const DomainPtr dom = f.empty() ? DomainPtr{} : f.domain_ptr();
    if (!dom) throw ConfigurationError("uniqueness probe needs a forcing field domain");

    UniquenessProbeResult out;
    out.total = n_inits;
    std::vector<SpectralField> states;
    for (int i = 0; i < n_inits; ++i) {
        const SpectralField init =
            random_divfree_field(dom, 2.0 + 0.5 * dom->dim(), 1.0,
                                 seed + static_cast<std::uint64_t>(i));
        const StationaryState st = solve_stationary(p, f, init, opts);
        if (st.converged) {
            states.push_back(st.u_inf);
            ++out.converged_count;
        }
    }
    out.conclusive = out.converged_count == n_inits;
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = i + 1; j < states.size(); ++j)
            out.max_pairwise_distance =
                std::max(out.max_pairwise_distance, norm_h(states[i] - states[j]));
    return out;
}

DecayExperimentReport deterministic_decay_experiment(const CBFParameters& p,
                                                     const SpectralField& f,
                                                     const SpectralField& u_inf,
                                                     const SpectralField& u0, double T,
                                                     double dt, double tol,
                                                     int record_every) {
    DecayExperimentReport rep;
    rep.kappa = p.mu - 2.0 * eta_constant(p);  // lambda_1 = 1 on the 2pi torus
    if (rep.kappa <= 0.0)
        throw AdmissibilityError("decay experiment requires mu > 2 eta / lambda_1");

    SimulationConfig cfg;
    cfg.domain = u_inf.domain_ptr() ? u_inf.domain_ptr() : u0.domain_ptr();
    cfg.params = p;
    cfg.forcing = f;
    cfg.initial = u0;
    cfg.T = T;
    cfg.dt = dt;
    cfg.record_every = record_every;
    cfg.record_lp = false;

    const auto observer = [&](double t, const SpectralField& u, bool) {
        const double d = norm_h(u - u_inf);
        rep.times.push_back(t);
        rep.distance_sq.push_back(d * d);
    };
    simulate_path(cfg, 0, observer);

    const double s0 = rep.distance_sq.front();
    // absolute floor so a start exactly at the stationary state is not failed
    // by round-off drift of the discrete fixed point
    const double floor_abs = 1e-16 * (1.0 + s0);
    rep.envelope_ok = true;
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        const double envelope = s0 * std::exp(-rep.kappa * rep.times[i]) * (1.0 + tol);
        if (rep.distance_sq[i] > envelope + floor_abs) {
            rep.envelope_ok = false;
            rep.first_violation_time = rep.times[i];
            break;
        }
    }

    // least-squares slope of log s over samples that are still meaningfully
    // above round-off relative to s(0)
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        if (rep.distance_sq[i] <= s0 * 1e-24 || rep.distance_sq[i] <= 0.0) continue;
        const double x = rep.times[i];
        const double y = std::log(rep.distance_sq[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++count;
    }
    if (count >= 2 && sxx * count - sx * sx > 0.0)
        rep.fitted_slope = (sxy * count - sx * sy) / (sxx * count - sx * sx);
    return rep;
}

}  // namespace scbf
