#include "scbf/spectral_ops.hpp"

#include <cmath>
#include <string>

#include "scbf/fft.hpp"
#include "scbf/rng.hpp"

namespace scbf {

double domain_volume(const TorusDomain& dom) {
    double v = 1.0;
    for (int d = 0; d < dom.dim(); ++d) v *= kTwoPi;
    return v;
}

double inner_h(const SpectralField& u, const SpectralField& v) {
    u.require_same_domain(v);
    const auto& dom = u.domain();
    const std::size_t nm = dom.num_modes();
    double acc = 0.0;
    for (int c = 0; c < dom.dim(); ++c) {
        const Complex* a = u.component(c);
        const Complex* b = v.component(c);
        for (std::size_t i = 0; i < nm; ++i)
            acc += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    }
    return domain_volume(dom) * acc;
}

double norm_h(const SpectralField& u) { return std::sqrt(inner_h(u, u)); }

double norm_v(const SpectralField& u) {
    const auto& dom = u.domain();
    const std::size_t nm = dom.num_modes();
    double acc = 0.0;
    for (int c = 0; c < dom.dim(); ++c) {
        const Complex* a = u.component(c);
        for (std::size_t i = 0; i < nm; ++i) acc += dom.eigenvalue(i) * std::norm(a[i]);
    }
    return std::sqrt(domain_volume(dom) * acc);
}

std::vector<std::vector<Complex>> to_physical_components(const SpectralField& u, int m) {
    const auto& dom = u.domain();
    std::vector<std::vector<Complex>> comps;
    comps.reserve(static_cast<std::size_t>(dom.dim()));
    for (int c = 0; c < dom.dim(); ++c)
        comps.push_back(fft::to_physical(dom, u.component(c), m));
    return comps;
}

namespace {

std::size_t grid_total(const TorusDomain& dom, int m) {
    std::size_t t = 1;
    for (int d = 0; d < dom.dim(); ++d) t *= static_cast<std::size_t>(m);
    return t;
}

double cell_volume(const TorusDomain& dom, int m) {
    double v = 1.0;
    for (int d = 0; d < dom.dim(); ++d) v *= kTwoPi / static_cast<double>(m);
    return v;
}

}  // namespace

double norm_lp(const SpectralField& u, double p) {
    if (p < 1.0)
        throw ConfigurationError("L^p norm needs p >= 1, got " + std::to_string(p));
    const auto& dom = u.domain();
    const int m = dom.oversample() * dom.resolution();
    const auto comps = to_physical_components(u, m);
    const std::size_t total = grid_total(dom, m);

    double acc = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        double mag2 = 0.0;
        for (const auto& comp : comps) {
            const double re = comp[i].real();
            mag2 += re * re;
        }
        acc += std::pow(mag2, 0.5 * p);
    }
    return std::pow(acc * cell_volume(dom, m), 1.0 / p);
}

double weighted_h_norm_sq(const SpectralField& w, const SpectralField& v, double r) {
    w.require_same_domain(v);
    if (r < 1.0)
        throw ConfigurationError("weight exponent needs r >= 1, got " + std::to_string(r));
    const auto& dom = w.domain();
    const int m = dom.oversample() * dom.resolution();
    const auto wc = to_physical_components(w, m);
    const auto vc = to_physical_components(v, m);
    const std::size_t total = grid_total(dom, m);

    double acc = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        double w2 = 0.0;
        double v2 = 0.0;
        for (int c = 0; c < dom.dim(); ++c) {
            const double wre = wc[static_cast<std::size_t>(c)][i].real();
            const double vre = vc[static_cast<std::size_t>(c)][i].real();
            w2 += wre * wre;
            v2 += vre * vre;
        }
        acc += std::pow(v2, 0.5 * (r - 1.0)) * w2;
    }
    return acc * cell_volume(dom, m);
}

SpectralField leray_project(const SpectralField& u) {
    const auto& dom = u.domain();
    SpectralField out = u;
    const std::size_t nm = dom.num_modes();
    const int dim = dom.dim();
    for (std::size_t i = 0; i < nm; ++i) {
        const auto k = dom.wavevector(i);
        const double k2 = dom.eigenvalue(i);
        if (k2 == 0.0) {
            for (int c = 0; c < dim; ++c) out.at(c, i) = Complex(0.0, 0.0);
            continue;
        }
        Complex kdotu(0.0, 0.0);
        for (int c = 0; c < dim; ++c)
            kdotu += static_cast<double>(k[static_cast<std::size_t>(c)]) * out.at(c, i);
        const Complex s = kdotu / k2;
        for (int c = 0; c < dim; ++c)
            out.at(c, i) -= static_cast<double>(k[static_cast<std::size_t>(c)]) * s;
    }
    return out;
}

SpectralField stokes_apply(const SpectralField& u) {
    const auto& dom = u.domain();
    SpectralField out = u;
    const std::size_t nm = dom.num_modes();
    for (int c = 0; c < dom.dim(); ++c)
        for (std::size_t i = 0; i < nm; ++i) out.at(c, i) *= dom.eigenvalue(i);
    return out;
}

SpectralField stokes_inverse(const SpectralField& u, double c0) {
    const auto& dom = u.domain();
    SpectralField out = u;
    const std::size_t nm = dom.num_modes();
    for (int c = 0; c < dom.dim(); ++c)
        for (std::size_t i = 0; i < nm; ++i) {
            const double k2 = dom.eigenvalue(i);
            out.at(c, i) = k2 == 0.0 ? Complex(0.0, 0.0) : out.at(c, i) / (c0 * k2);
        }
    return out;
}

SpectralField stokes_inv_sqrt(const SpectralField& u) {
    const auto& dom = u.domain();
    SpectralField out = u;
    const std::size_t nm = dom.num_modes();
    for (int c = 0; c < dom.dim(); ++c)
        for (std::size_t i = 0; i < nm; ++i) {
            const double k2 = dom.eigenvalue(i);
            out.at(c, i) = k2 == 0.0 ? Complex(0.0, 0.0) : out.at(c, i) / std::sqrt(k2);
        }
    return out;
}

SpectralField smoothing_projection(const SpectralField& u, int n) {
    if (n < 1) throw ConfigurationError("smoothing projection needs n >= 1");
    const auto& dom = u.domain();
    SpectralField out = u;
    const std::size_t nm = dom.num_modes();
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    for (int c = 0; c < dom.dim(); ++c)
        for (std::size_t i = 0; i < nm; ++i) {
            const double lam = dom.eigenvalue(i);
            out.at(c, i) *= lam < n2 ? std::exp(-lam / static_cast<double>(n)) : 0.0;
        }
    return out;
}

SpectralField galerkin_truncate(const SpectralField& u, int kmax) {
    if (kmax < 0) throw ConfigurationError("galerkin truncation needs kmax >= 0");
    const auto& dom = u.domain();
    SpectralField out = u;
    const std::size_t nm = dom.num_modes();
    for (std::size_t i = 0; i < nm; ++i) {
        const auto k = dom.wavevector(i);
        bool keep = true;
        for (int d = 0; d < dom.dim(); ++d)
            if (std::abs(k[static_cast<std::size_t>(d)]) > kmax) keep = false;
        if (!keep)
            for (int c = 0; c < dom.dim(); ++c) out.at(c, i) = Complex(0.0, 0.0);
    }
    return out;
}

SpectralField random_divfree_field(const DomainPtr& dom, double decay, double amplitude,
                                   std::uint64_t seed) {
    if (decay <= 0.5 * dom->dim())
        throw ConfigurationError("spectral decay must exceed dim/2 for a smooth field");
    SpectralField out(dom);
    if (amplitude == 0.0) return out;

    RngStream rng(seed, 0, 0);
    const int dim = dom->dim();
    const int n = dom->resolution();
    const std::size_t nm = dom->num_modes();

    for (std::size_t flat = 0; flat < nm; ++flat) {
        const auto k = dom->wavevector(flat);
        const double k2 = dom->eigenvalue(flat);
        if (k2 == 0.0) continue;
        bool skip = false;
        for (int d = 0; d < dim; ++d)
            if (k[static_cast<std::size_t>(d)] == n / 2) skip = true;  // Nyquist kept zero
        if (skip) continue;
        // one draw per +/- pair: canonical representative has positive leading entry
        bool canonical = false;
        for (int d = 0; d < dim; ++d) {
            const int kd = k[static_cast<std::size_t>(d)];
            if (kd > 0) { canonical = true; break; }
            if (kd < 0) break;
        }
        if (!canonical) continue;

        std::vector<Complex> g(static_cast<std::size_t>(dim));
        for (auto& gc : g) gc = Complex(rng.normal(), rng.normal());
        // project orthogonal to k
        Complex kdotg(0.0, 0.0);
        for (int d = 0; d < dim; ++d)
            kdotg += static_cast<double>(k[static_cast<std::size_t>(d)]) * g[static_cast<std::size_t>(d)];
        double mag2 = 0.0;
        for (int d = 0; d < dim; ++d) {
            g[static_cast<std::size_t>(d)] -=
                static_cast<double>(k[static_cast<std::size_t>(d)]) * kdotg / k2;
            mag2 += std::norm(g[static_cast<std::size_t>(d)]);
        }
        if (mag2 < 1e-28) {
            // degenerate draw: fall back to a deterministic vector orthogonal to k
            std::array<double, 3> e{0.0, 0.0, 0.0};
            if (k[1] != 0 || k[0] != 0) { e[0] = -static_cast<double>(k[1]); e[1] = static_cast<double>(k[0]); }
            else e[0] = 1.0;
            mag2 = 0.0;
            for (int d = 0; d < dim; ++d) {
                g[static_cast<std::size_t>(d)] = Complex(e[static_cast<std::size_t>(d)], 0.0);
                mag2 += std::norm(g[static_cast<std::size_t>(d)]);
            }
        }
        const double scale = amplitude * std::pow(k2, -0.5 * decay) / std::sqrt(mag2);
        for (auto& gc : g) gc *= scale;
        out.set_mode_pair(k, g);
    }
    return out;
}

double check_interpolation(const SpectralField& u, double s, double r, double t) {
    if (!(1.0 <= s && s <= r && r <= t))
        throw ConfigurationError("interpolation exponents must satisfy 1 <= s <= r <= t");
    double theta = 0.5;
    if (s != t) theta = (1.0 / r - 1.0 / t) / (1.0 / s - 1.0 / t);
    const double ns = norm_lp(u, s);
    const double nt = norm_lp(u, t);
    const double nr = norm_lp(u, r);
    return std::pow(ns, theta) * std::pow(nt, 1.0 - theta) - nr;
}

double hermitian_defect(const SpectralField& u) {
    const auto& dom = u.domain();
    const std::size_t nm = dom.num_modes();
    double worst = 0.0;
    for (std::size_t i = 0; i < nm; ++i) {
        auto k = dom.wavevector(i);
        bool has_nyquist = false;
        for (int d = 0; d < dom.dim(); ++d)
            if (k[static_cast<std::size_t>(d)] == dom.resolution() / 2) has_nyquist = true;
        if (has_nyquist) continue;
        std::array<int, 3> mk{-k[0], -k[1], -k[2]};
        const std::size_t j = u.flat_index(mk);
        for (int c = 0; c < dom.dim(); ++c)
            worst = std::max(worst, std::abs(u.at(c, i) - std::conj(u.at(c, j))));
    }
    return worst;
}

double divergence_defect(const SpectralField& u) {
    const auto& dom = u.domain();
    const std::size_t nm = dom.num_modes();
    double worst = 0.0;
    for (std::size_t i = 0; i < nm; ++i) {
        const auto k = dom.wavevector(i);
        Complex kd(0.0, 0.0);
        for (int c = 0; c < dom.dim(); ++c)
            kd += static_cast<double>(k[static_cast<std::size_t>(c)]) * u.at(c, i);
        worst = std::max(worst, std::abs(kd));
    }
    return worst;
}

}  // namespace scbf
