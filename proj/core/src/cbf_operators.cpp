#include "scbf/cbf_operators.hpp"

#include <cmath>
#include <string>

#include "scbf/errors.hpp"
#include "scbf/fft.hpp"

namespace scbf {

void CBFParameters::validate() const {
    if (mu <= 0.0) throw ConfigurationError("viscosity mu must be positive");
    if (beta <= 0.0) throw ConfigurationError("Forchheimer coefficient beta must be positive");
    if (r < 1.0) throw ConfigurationError("absorption exponent r must be >= 1");
}

bool CBFParameters::monotone_admissible() const {
    if (r > 3.0) return true;
    return r == 3.0 && 2.0 * beta * mu >= 1.0;
}

double eta_constant(const CBFParameters& p) {
    p.validate();
    if (p.r < 3.0)
        throw AdmissibilityError("monotonicity constant defined for r >= 3 only");
    if (p.r == 3.0) {
        if (2.0 * p.beta * p.mu < 1.0)
            throw AdmissibilityError(
                "critical exponent r = 3 requires 2*beta*mu >= 1 for monotonicity");
        return 0.0;
    }
    const double r = p.r;
    return (r - 3.0) / (2.0 * p.mu * (r - 1.0)) *
           std::pow(2.0 / (p.beta * p.mu * (r - 1.0)), 2.0 / (r - 3.0));
}

namespace {

// smallest even grid size >= x
int even_ceil(double x) {
    int m = static_cast<int>(std::ceil(x));
    if (m % 2 != 0) ++m;
    return m;
}

int dealias_grid_quadratic(const TorusDomain& dom) {
    return even_ceil(1.5 * dom.resolution());
}

int dealias_grid_power(const TorusDomain& dom, double r) {
    const int factor = std::max(dom.oversample(),
                                static_cast<int>(std::ceil(0.5 * (r + 1.0))));
    return factor * dom.resolution();
}

}  // namespace

SpectralField bilinear_b(const SpectralField& u, const SpectralField& v) {
    u.require_same_domain(v);
    const auto& dom = u.domain();
    const int dim = dom.dim();
    const int m = dealias_grid_quadratic(dom);
    const std::size_t nm = dom.num_modes();

    // grad v in spectral space: (d_i v_j)_k = i k_i v_j,k
    std::vector<std::vector<Complex>> gradv_phys;  // [i*dim+j]
    gradv_phys.reserve(static_cast<std::size_t>(dim * dim));
    std::vector<Complex> work(nm);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            const Complex* vj = v.component(j);
            for (std::size_t f = 0; f < nm; ++f) {
                const auto k = dom.wavevector(f);
                work[f] = Complex(0.0, static_cast<double>(k[static_cast<std::size_t>(i)])) * vj[f];
            }
            gradv_phys.push_back(fft::to_physical(dom, work.data(), m));
        }
    }
    const auto u_phys = to_physical_components(u, m);

    std::size_t mtotal = 1;
    for (int d = 0; d < dim; ++d) mtotal *= static_cast<std::size_t>(m);

    SpectralField out(u.domain_ptr());
    std::vector<Complex> prod(mtotal);
    for (int j = 0; j < dim; ++j) {
        for (std::size_t g = 0; g < mtotal; ++g) {
            double acc = 0.0;
            for (int i = 0; i < dim; ++i)
                acc += u_phys[static_cast<std::size_t>(i)][g].real() *
                       gradv_phys[static_cast<std::size_t>(i * dim + j)][g].real();
            prod[g] = Complex(acc, 0.0);
        }
        fft::from_physical(dom, prod, m, out.component(j));
    }
    return leray_project(out);
}

SpectralField nonlinear_c(const SpectralField& u, double r) {
    if (r < 1.0) throw ConfigurationError("damping exponent r must be >= 1");
    const auto& dom = u.domain();
    const int dim = dom.dim();
    const int m = dealias_grid_power(dom, r);
    const auto u_phys = to_physical_components(u, m);

    std::size_t mtotal = 1;
    for (int d = 0; d < dim; ++d) mtotal *= static_cast<std::size_t>(m);

    SpectralField out(u.domain_ptr());
    std::vector<Complex> prod(mtotal);
    for (int j = 0; j < dim; ++j) {
        for (std::size_t g = 0; g < mtotal; ++g) {
            double mag2 = 0.0;
            for (int i = 0; i < dim; ++i) {
                const double re = u_phys[static_cast<std::size_t>(i)][g].real();
                mag2 += re * re;
            }
            const double w = mag2 > 0.0 ? std::pow(mag2, 0.5 * (r - 1.0)) : 0.0;
            prod[g] = Complex(w * u_phys[static_cast<std::size_t>(j)][g].real(), 0.0);
        }
        fft::from_physical(dom, prod, m, out.component(j));
    }
    return leray_project(out);
}

SpectralField full_g(const SpectralField& u, const CBFParameters& p, const SpectralField& f) {
    p.validate();
    SpectralField out = stokes_apply(u);
    out *= p.mu;
    out += bilinear_b(u);
    out.axpy(p.beta, nonlinear_c(u, p.r));
    if (!f.empty()) out -= f;
    return out;
}

double inequality_tolerance(const SpectralField& u, const SpectralField& v) {
    const double su = norm_v(u);
    const double sv = norm_v(v);
    return 1e-9 * (1.0 + su * su + sv * sv);
}

MonotonicityReport monotonicity_gap(const SpectralField& u, const SpectralField& v,
                                    const CBFParameters& p) {
    const double eta = eta_constant(p);
    const SpectralField gu = full_g(u, p, SpectralField{});
    const SpectralField gv = full_g(v, p, SpectralField{});
    const SpectralField w = u - v;

    MonotonicityReport rep;
    rep.lhs = inner_h(gu - gv, w);
    const double wh = norm_h(w);
    rep.eta_term = eta * wh * wh;
    if (p.r > 3.0) {
        const double wv = norm_v(w);
        rep.rhs_bound = 0.5 * p.mu * wv * wv;
    } else {
        rep.rhs_bound = 0.5 * (p.beta - 1.0 / (2.0 * p.mu)) * weighted_h_norm_sq(w, v, 3.0);
    }
    rep.gap = rep.lhs + rep.eta_term - rep.rhs_bound;
    rep.tolerance = inequality_tolerance(u, v);
    rep.passed = rep.gap >= -rep.tolerance;
    return rep;
}

double c_monotonicity_gap(const SpectralField& u, const SpectralField& v, double r) {
    const SpectralField w = u - v;
    const double lhs = inner_h(nonlinear_c(u, r) - nonlinear_c(v, r), w);
    const double bound =
        0.5 * (weighted_h_norm_sq(w, u, r) + weighted_h_norm_sq(w, v, r));
    return lhs - bound;
}

std::vector<double> hemicontinuity_probe(const SpectralField& u, const SpectralField& v,
                                         const SpectralField& w, const CBFParameters& p,
                                         const std::vector<double>& lambdas) {
    if (lambdas.empty()) throw ConfigurationError("hemicontinuity probe needs lambdas");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (lambdas[i] <= 0.0)
            throw ConfigurationError("hemicontinuity lambdas must be positive");
        if (i > 0 && lambdas[i] >= lambdas[i - 1])
            throw ConfigurationError("hemicontinuity lambdas must decrease");
    }
    const SpectralField gu = full_g(u, p, SpectralField{});
    std::vector<double> out;
    out.reserve(lambdas.size());
    for (const double lam : lambdas) {
        SpectralField ul = u;
        ul.axpy(lam, v);
        out.push_back(std::abs(inner_h(full_g(ul, p, SpectralField{}) - gu, w)));
    }
    return out;
}

PeriodicInequalityReport check_periodic_inequalities(const SpectralField& u, double r) {
    if (r < 1.0) throw ConfigurationError("exponent r must be >= 1");
    const auto& dom = u.domain();
    const int dim = dom.dim();
    const int m = dealias_grid_power(dom, r);
    const std::size_t nm = dom.num_modes();

    const auto u_phys = to_physical_components(u, m);
    // all partial derivatives and Au on the same grid
    std::vector<std::vector<Complex>> grad_phys;
    grad_phys.reserve(static_cast<std::size_t>(dim * dim));
    std::vector<Complex> work(nm);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            const Complex* uj = u.component(j);
            for (std::size_t f = 0; f < nm; ++f) {
                const auto k = dom.wavevector(f);
                work[f] = Complex(0.0, static_cast<double>(k[static_cast<std::size_t>(i)])) * uj[f];
            }
            grad_phys.push_back(fft::to_physical(dom, work.data(), m));
        }
    const auto au = stokes_apply(u);
    const auto au_phys = to_physical_components(au, m);

    std::size_t mtotal = 1;
    for (int d = 0; d < dim; ++d) mtotal *= static_cast<std::size_t>(m);
    double cell = 1.0;
    for (int d = 0; d < dim; ++d) cell *= kTwoPi / static_cast<double>(m);

    double grad_weighted = 0.0;
    double damping_stokes = 0.0;
    double l3r1 = 0.0;
    for (std::size_t g = 0; g < mtotal; ++g) {
        double mag2 = 0.0;
        double grad2 = 0.0;
        double u_dot_au = 0.0;
        for (int c = 0; c < dim; ++c) {
            const double re = u_phys[static_cast<std::size_t>(c)][g].real();
            mag2 += re * re;
            u_dot_au += re * au_phys[static_cast<std::size_t>(c)][g].real();
        }
        for (int i = 0; i < dim * dim; ++i) {
            const double re = grad_phys[static_cast<std::size_t>(i)][g].real();
            grad2 += re * re;
        }
        const double w = mag2 > 0.0 ? std::pow(mag2, 0.5 * (r - 1.0)) : 0.0;
        grad_weighted += w * grad2;
        damping_stokes += w * u_dot_au;
        l3r1 += std::pow(mag2, 0.5 * 3.0 * (r + 1.0));
    }
    grad_weighted *= cell;
    damping_stokes *= cell;
    l3r1 = std::pow(l3r1 * cell, 1.0 / 3.0);  // ||u||^{r+1}_{L^{3(r+1)}}

    PeriodicInequalityReport rep;
    rep.grad_weighted = grad_weighted;
    rep.damping_stokes = damping_stokes;
    rep.gap_lower = damping_stokes - grad_weighted;
    rep.gap_upper = r * grad_weighted - damping_stokes;
    if (grad_weighted > 0.0) {
        rep.ratio_l3r1 = l3r1 / grad_weighted;
        rep.ratio_defined = true;
    }
    return rep;
}

}  // namespace scbf
