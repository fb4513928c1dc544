#pragma once

#include <array>
#include <string>
#include <vector>

#include "scbf/integrator.hpp"

namespace scbf {

/// Scalar functional of the state sampled along a trajectory.
struct Observable {
    enum class Kind { norm_h_sq, norm_v_sq, mode_energy, norm_lr1 };
    Kind kind = Kind::norm_h_sq;
    std::array<int, 3> mode{0, 0, 0};  // for mode_energy

    std::string name() const;
    double operator()(const SpectralField& u, double r) const;
};

struct ObservableSeries {
    std::string id;
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> running_avg;  // left-endpoint time average over [0, t]
    double burn_in = 0.0;
    double average_after_burn_in = 0.0;
    /// max over the last half of the post-burn-in window of
    /// |A(t) - A(T)| / max(|A(T)|, eps) where A averages over [burn_in, t]
    double stabilization_rel_change = 0.0;
};

struct TimeAverageReport {
    std::vector<ObservableSeries> series;
    bool stabilized = false;  // all series within the 5% stabilization band
};

/// Krylov-Bogoliubov style time averages along one long trajectory.
/// Requires mu > K/(2 lambda_1) and f = 0; burn-in is a fraction of T.
TimeAverageReport time_average_experiment(SimulationConfig cfg, const JumpModel& model,
                                          const std::vector<Observable>& observables,
                                          double T_long, double burn_in_fraction = 0.2,
                                          double stabilization_tol = 0.05);

struct TightnessReport {
    double lhs = 0.0;    // (2 mu - K/lambda_1) E[(1/T) int ||u||_V^2]
    double bound = 0.0;  // E||u0||^2 / T + K
    double ratio = 0.0;
    double growth_k = 0.0;
    int paths = 0;
    bool pass = false;  // ratio <= 1 + slack
};

/// Time-averaged V-norm bound behind the invariant-measure tightness
/// argument; the ratio should stay at or below one up to MC error.
TightnessReport tightness_diagnostic(SimulationConfig cfg, const JumpModel& model, double T,
                                     int paths, double slack = 0.1, int threads = 1);

struct CrossCheckReport {
    std::vector<double> averages;          // per initial condition
    std::vector<double> self_consistency;  // per-run |first half - second half|
    double max_pairwise_gap = 0.0;
    double max_relative_gap = 0.0;
    bool pass = false;  // gap <= 2 * combined self-consistency error per pair
};

/// Long-run averages of ||u||_H^2 from several starts must agree when the
/// invariant measure is unique.
CrossCheckReport ergodicity_cross_check(SimulationConfig cfg, const JumpModel& model,
                                        const std::vector<SpectralField>& u0_list,
                                        double T_long, double burn_in_fraction = 0.2);

struct MixingReport {
    std::vector<double> times;
    std::vector<double> gap;          // |E phi(u) - E phi(v)|
    std::vector<double> envelope;     // ||u0-v0|| e^{-rate t / 2} (1 + tol)
    std::vector<double> stderr_mc;
    std::vector<double> coupling_distance;  // E ||u - v||_H
    double rate = 0.0;                // mu lambda_1 - (2 eta + L)
    double fitted_rate = 0.0;         // decay rate of the gap curve
    double lipschitz_cap = 1.0;       // phi(u) = min(||u||_H, cap)
    double max_jensen_violation = 0.0;  // pathwise |phi(u)-phi(v)| - ||u-v||
    int paths = 0;
    double tol = 0.0;
    bool pass = false;
    double first_violation_time = -1.0;
};

/// Exponential mixing of a 1-Lipschitz observable via synchronous coupling:
/// |E phi(u(t,u0)) - E phi(u(t,v0))| <= ||u0-v0|| e^{-(mu-(2eta+L)) t/2}.
MixingReport mixing_rate_experiment(SimulationConfig cfg, const JumpModel& model,
                                    const SpectralField& u0, const SpectralField& v0,
                                    int paths, double lipschitz_cap, double tol = 0.1,
                                    int threads = 1);

}  // namespace scbf
