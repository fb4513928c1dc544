#pragma once

#include <cstdint>
#include <vector>

#include "scbf/cbf_operators.hpp"
#include "scbf/field.hpp"

namespace scbf {

struct StationaryState {
    SpectralField u_inf;
    double residual_norm = 0.0;  // ||mu A u + B(u) + beta C(u) - f|| in the discrete V' norm
    int iterations = 0;
    bool converged = false;
    std::vector<double> residual_history;  // dual-norm residual per accepted iterate
};

struct StationarySolveOptions {
    double tolerance = 1e-10;
    int max_iterations = 10000;
    double relaxation = 0.5;       // damped fixed point, halved on residual increase
    double relaxation_floor = 1.0 / 64.0;
    bool newton_polish = false;    // optional matrix-free Newton refinement
    int newton_max_iterations = 20;
};

/// Solves mu A u + B(u) + beta C(u) = f by damped fixed-point iteration
/// preconditioned with the exact Stokes inverse; the residual is measured in
/// the discrete dual norm ||A^{-1/2} res||_H.
StationaryState solve_stationary(const CBFParameters& p, const SpectralField& f,
                                 const SpectralField& init,
                                 const StationarySolveOptions& opts = {});

struct UniquenessProbeResult {
    double max_pairwise_distance = 0.0;
    int converged_count = 0;
    int total = 0;
    bool conclusive = false;  // all starts converged
};

/// Solves from n_inits random initializations under the uniqueness condition
/// mu > 2 eta / lambda_1 (mu >= 1/(2 beta) at r = 3) and reports the largest
/// pairwise H distance between the converged states.
UniquenessProbeResult uniqueness_probe(const CBFParameters& p, const SpectralField& f,
                                       int n_inits, std::uint64_t seed,
                                       const StationarySolveOptions& opts = {});

struct DecayExperimentReport {
    std::vector<double> times;
    std::vector<double> distance_sq;  // s(t) = ||u(t) - u_inf||_H^2
    double kappa = 0.0;               // lambda_1 mu - 2 eta
    double fitted_slope = 0.0;        // least-squares slope of log s
    bool envelope_ok = false;         // s(t) <= s(0) e^{-kappa t} (1 + tol) everywhere
    double first_violation_time = -1.0;
};

/// Noiseless decay toward the stationary state checked against the
/// exp(-kappa t) envelope. `tol` is the multiplicative slack.
DecayExperimentReport deterministic_decay_experiment(const CBFParameters& p,
                                                     const SpectralField& f,
                                                     const SpectralField& u_inf,
                                                     const SpectralField& u0, double T,
                                                     double dt, double tol = 0.01,
                                                     int record_every = 10);

}  // namespace scbf
