#pragma once

#include <vector>

#include "scbf/field.hpp"
#include "scbf/spectral_ops.hpp"

namespace scbf {

/// Coefficients of the convective Brinkman-Forchheimer system. The Darcy
/// coefficient is fixed at zero.
struct CBFParameters {
    double mu = 1.0;
    double beta = 1.0;
    double r = 3.0;

    void validate() const;
    /// True when the monotonicity theory applies: r > 3 for any mu, beta > 0,
    /// or r = 3 with 2*beta*mu >= 1.
    bool monotone_admissible() const;
};

/// Shift constant eta making G + eta*I monotone for r > 3; zero in the
/// critical regime r = 3 (which additionally requires 2*beta*mu >= 1).
double eta_constant(const CBFParameters& p);

/// Convective term P_H((u . grad) v), dealiased by zero padding.
SpectralField bilinear_b(const SpectralField& u, const SpectralField& v);

inline SpectralField bilinear_b(const SpectralField& u) { return bilinear_b(u, u); }

/// Damping term P_H(|u|^{r-1} u), evaluated on a grid oversampled by
/// max(domain oversample, ceil((r+1)/2)); exact for odd integer r.
SpectralField nonlinear_c(const SpectralField& u, double r);

/// G(u) = mu*A*u + B(u) + beta*C(u) - f. Pass an empty field for f = 0.
SpectralField full_g(const SpectralField& u, const CBFParameters& p, const SpectralField& f);

struct MonotonicityReport {
    double lhs = 0.0;        // <G(u)-G(v), u-v>
    double eta_term = 0.0;   // eta ||u-v||_H^2
    double rhs_bound = 0.0;  // guaranteed lower bound for this regime
    double gap = 0.0;        // lhs + eta_term - rhs_bound
    double tolerance = 0.0;
    bool passed = false;
};

/// Checks the monotonicity lower bound: for r > 3,
///   <G(u)-G(v),u-v> + eta||u-v||_H^2 >= (mu/2)||u-v||_V^2;
/// for r = 3 with 2*beta*mu >= 1,
///   <G(u)-G(v),u-v> >= (1/2)(beta - 1/(2*mu)) * int |v|^2 |u-v|^2 dx.
MonotonicityReport monotonicity_gap(const SpectralField& u, const SpectralField& v,
                                    const CBFParameters& p);

/// Slack in the damping-operator monotonicity bound:
/// <C(u)-C(v),u-v> - (1/2)[int |u|^{r-1}|u-v|^2 + int |v|^{r-1}|u-v|^2].
double c_monotonicity_gap(const SpectralField& u, const SpectralField& v, double r);

/// |<G(u + lambda v) - G(u), w>| for each lambda; decreasing sequences
/// witness hemicontinuity.
std::vector<double> hemicontinuity_probe(const SpectralField& u, const SpectralField& v,
                                         const SpectralField& w, const CBFParameters& p,
                                         const std::vector<double>& lambdas);

struct PeriodicInequalityReport {
    double grad_weighted = 0.0;   // int |grad u|^2 |u|^{r-1} dx
    double damping_stokes = 0.0;  // int |u|^{r-1} u . Au dx
    double gap_lower = 0.0;       // damping_stokes - grad_weighted
    double gap_upper = 0.0;       // r * grad_weighted - damping_stokes
    double ratio_l3r1 = 0.0;      // ||u||^{r+1}_{L^{3(r+1)}} / grad_weighted
    bool ratio_defined = false;
};

/// Sandwich inequality between the weighted gradient integral and the
/// damping/Stokes pairing on the torus, plus the empirical constant of the
/// L^{3(r+1)} embedding.
PeriodicInequalityReport check_periodic_inequalities(const SpectralField& u, double r);

/// Tolerance scale used by the inequality checkers:
/// 1e-9 * (1 + ||u||_V^2 + ||v||_V^2).
double inequality_tolerance(const SpectralField& u, const SpectralField& v);

}  // namespace scbf
