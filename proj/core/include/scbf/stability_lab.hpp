#pragma once

#include <optional>
#include <vector>

#include "scbf/integrator.hpp"
#include "scbf/jump_noise.hpp"

namespace scbf {

/// Derived exponential rates and their admissibility gates (lambda_1 = 1 on
/// the 2pi torus). theta_strict is the stricter pathwise gate; the pathwise
/// experiment uses it.
struct StabilityConstants {
    double eta = 0.0;
    double lipschitz_l = 0.0;
    double rho = 0.0;
    double kappa = 0.0;         // mu - 2 eta
    double theta = 0.0;         // mu - (2 eta + L)
    double theta_strict = 0.0;  // mu - (2 eta + 6 L)
    double zeta = 0.0;          // mu - eta + rho

    bool kappa_admissible = false;
    bool theta_admissible = false;
    bool pathwise_admissible = false;
    bool zeta_admissible = false;
};

StabilityConstants stability_constants(const CBFParameters& p,
                                       const std::optional<JumpModel>& model);

struct DecayReport {
    std::vector<double> times;
    std::vector<double> mean_sq;    // ensemble E||u - target||_H^2
    std::vector<double> envelope;   // initial_sq * e^{-rate t} * (1 + tol)
    std::vector<double> stderr_mc;
    double rate = 0.0;
    double initial_sq = 0.0;
    double fitted_slope = 0.0;
    double tol = 0.0;
    int paths = 0;
    bool pass = false;
    double first_violation_time = -1.0;
};

/// Mean-square decay toward the stationary anchor of a stabilizing noise
/// model at rate theta = mu lambda_1 - (2 eta + L). cfg.initial is the
/// deterministic start; the model's anchor is the target.
DecayReport meansquare_decay_experiment(SimulationConfig cfg, const JumpModel& model,
                                        int paths, double tol = 0.1, int threads = 1);

struct PathwiseReport {
    double theta = 0.0;
    double eps = 0.0;
    double window = 0.0;
    int windows = 0;
    std::vector<int> n0_per_path;       // -1 when the bound never locks in
    std::vector<double> window_sup;     // per (path, window), row-major
    double satisfied_fraction = 0.0;
    int paths = 0;
};

/// Windowed sup envelope sup_{nh<=t<=(n+1)h} ||u - u_inf|| <= e^{-(theta-eps)nh/2}
/// for n >= n0; reports the per-path n0 distribution. Uses the strict gate
/// mu lambda_1 > 2 eta + 6 L.
PathwiseReport pathwise_decay_experiment(SimulationConfig cfg, const JumpModel& model,
                                         int paths, double window, double eps,
                                         int threads = 1);

struct StabilizationReport {
    double zeta = 0.0;
    double rho = 0.0;
    double slack = 0.0;
    std::vector<double> final_quarter_slope;   // worst (1/t) log ||u-u_inf||^2 in [3T/4, T]
    std::vector<double> martingale_ratio_early;  // |M(t)/t| at t = T/10
    std::vector<double> martingale_ratio_final;  // |M(T)/T|
    double satisfied_fraction = 0.0;
    int paths = 0;
    int blowups = 0;
};

/// Noise-induced decay at rate zeta = mu lambda_1 - eta + rho for parameter
/// ranges where the noiseless rate kappa may be negative. Requires rho > 0
/// and zeta > 0.
StabilizationReport stabilization_experiment(SimulationConfig cfg, const JumpModel& model,
                                             int paths, double slack = 0.1,
                                             int threads = 1);

struct CouplingReport {
    DecayReport decay;
    double max_jump_difference_change = 0.0;
};

/// Synchronous-coupling contraction E||u - v||^2 at rate
/// mu lambda_1 - (2 eta + L); both trajectories see identical events.
CouplingReport coupling_decay_experiment(SimulationConfig cfg, const JumpModel& model,
                                         const SpectralField& u0, const SpectralField& v0,
                                         int paths, double tol = 0.1, int threads = 1);

}  // namespace scbf
