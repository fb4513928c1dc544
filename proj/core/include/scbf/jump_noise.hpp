#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scbf/field.hpp"
#include "scbf/rng.hpp"

namespace scbf {

/// Finite-activity mark law: a weighted atom list or a uniform interval.
/// The intensity measure is lambda(dz) = total_rate * probability(dz), so
/// lambda(Z) = total_rate < infinity.
class MarkDistribution {
public:
    enum class Kind { two_point, uniform, discrete_list };

    static MarkDistribution two_point(double z_minus, double z_plus, double w_minus,
                                      double w_plus, double total_rate);
    static MarkDistribution uniform(double lo, double hi, double total_rate);
    static MarkDistribution discrete(std::vector<double> atoms, std::vector<double> weights,
                                     double total_rate);

    Kind kind() const { return kind_; }
    double total_rate() const { return rate_; }
    const std::vector<double>& atoms() const { return atoms_; }
    const std::vector<double>& weights() const { return weights_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }

    /// int f(z) lambda(dz); exact over atoms, fixed Gauss-Legendre over an
    /// interval.
    double integrate(const std::function<double(double)>& f) const;

    double sample(RngStream& rng) const;

private:
    Kind kind_ = Kind::discrete_list;
    double rate_ = 0.0;
    std::vector<double> atoms_;
    std::vector<double> weights_;  // normalized to sum 1
    std::vector<double> cumw_;
    double lo_ = 0.0;
    double hi_ = 0.0;
};

/// Scalar function of the mark used by the coefficient families:
/// either constant in z or proportional to z.
struct ScalarMarkFn {
    enum class Mode { constant, proportional };
    Mode mode = Mode::constant;
    double value = 0.0;

    double operator()(double z) const { return mode == Mode::constant ? value : value * z; }
};

enum class NoiseFamily { linear_multiplicative, stabilizing, additive };

/// Growth/Lipschitz constants of a coefficient family; rho is the Levy
/// exponent contribution of a stabilizing family.
struct NoiseConstants {
    double growth_k = 0.0;
    double lipschitz_l = 0.0;
    std::optional<double> rho;
};

/// gamma(u,z) for one of the three coefficient families:
///   linear_multiplicative: sigma(z) * u
///   stabilizing:           g(z) * (u - anchor)
///   additive:              h(z) * shape
class JumpModel {
public:
    JumpModel() = default;
    JumpModel(NoiseFamily family, MarkDistribution marks, ScalarMarkFn coeff,
              SpectralField anchor_or_shape = SpectralField{});

    NoiseFamily family() const { return family_; }
    const MarkDistribution& marks() const { return marks_; }
    const ScalarMarkFn& coefficient_fn() const { return coeff_; }
    const SpectralField& anchor() const { return field_; }
    const SpectralField& shape() const { return field_; }

    /// Leray-projected coefficient field gamma(u,z).
    SpectralField coefficient(const SpectralField& u, double z) const;

    /// int_Z gamma(u,z) lambda(dz), exact over the mark law.
    SpectralField compensator_drift(const SpectralField& u) const;

    /// int_Z ||gamma(u,z)||_H^2 lambda(dz), exact over the mark law.
    double coefficient_second_moment(const SpectralField& u) const;

    /// Closed-form (K, L, rho); throws AdmissibilityError when a stabilizing
    /// family has an atom with g(z) <= -1 or rho <= 0.
    NoiseConstants derive_constants() const;

private:
    NoiseFamily family_ = NoiseFamily::additive;
    MarkDistribution marks_;
    ScalarMarkFn coeff_;
    SpectralField field_;  // anchor (stabilizing) or shape (additive)
};

struct JumpEvent {
    double time = 0.0;
    double mark = 0.0;
};

/// Compound-Poisson event list on (0,T]: exponential inter-arrivals at the
/// total rate, i.i.d. marks. Deterministic given the stream.
std::vector<JumpEvent> sample_jump_events(const MarkDistribution& marks, double T,
                                          RngStream& rng);

struct ItoIsometryResult {
    double mc_mean = 0.0;
    double analytic = 0.0;
    double stderr_mc = 0.0;
};

/// Monte Carlo check of E||int int gamma dpi_tilde||_H^2 against
/// T * int ||gamma(u,z)||^2 lambda(dz) for a frozen integrand.
ItoIsometryResult ito_isometry_estimate(const JumpModel& model, const SpectralField& u_frozen,
                                        double T, int paths, std::uint64_t seed);

}  // namespace scbf
